#include "periodfn/quadrature.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>

#include "periodfn/error.hpp"

namespace periodfn {

namespace {

GaussRule build_gauss_legendre(int n)
{
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Tricomi's initial guess, then Newton on P_n.
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
        rule.nodes[n / 2] = 0.0;
    }
    return rule;
}

double apply_rule(const GaussRule& rule, const std::function<double(double)>& f, double a, double b)
{
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    return sum * half;
}

struct Panel {
    double a;
    double b;
    double whole;
    int depth;
};

PeriodSample expansion_sample(const PotentialSystem& sys, double h)
{
    const auto asym = center_asymptotics(sys);
    const double T0 = asym.period.value();
    const double dT0 = asym.slope.value();
    PeriodSample s;
    s.h = h;
    s.xi = energy_to_amplitude(sys, h);
    s.T = T0 + dT0 * h;
    s.err_est = std::abs(dT0) * h * h;
    s.method = PeriodMethod::Expansion;
    return s;
}

} // namespace

void QuadratureConfig::validate() const
{
    if (!(rel_tol > 1e-15 && rel_tol < 1e-2)) {
        throw Error(ErrorKind::InvalidParameter, "rel_tol must lie in (1e-15, 1e-2), got " + std::to_string(rel_tol));
    }
    if (max_depth < 4) {
        throw Error(ErrorKind::InvalidParameter, "max_depth must be >= 4");
    }
    if (base_nodes < 2) {
        throw Error(ErrorKind::InvalidParameter, "base_nodes must be >= 2");
    }
}

std::string_view to_string(PeriodMethod m) noexcept
{
    switch (m) {
    case PeriodMethod::Quadrature: return "quadrature";
    case PeriodMethod::OdeOracle: return "ode-oracle";
    case PeriodMethod::Expansion: return "expansion";
    }
    return "unknown";
}

const GaussRule& gauss_legendre(int n)
{
    static std::mutex mutex;
    static std::map<int, GaussRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, build_gauss_legendre(n)).first;
    }
    return it->second;
}

IntegralEstimate adaptive_gauss(const std::function<double(double)>& f, double a, double b, int initial_panels,
                                const QuadratureConfig& cfg)
{
    cfg.validate();
    const GaussRule& rule = gauss_legendre(cfg.base_nodes);
    const int n0 = std::max(1, initial_panels);
    const double width = b - a;

    std::vector<Panel> stack;
    stack.reserve(64);
    double coarse = 0.0;
    for (int i = n0 - 1; i >= 0; --i) {
        const double pa = a + width * i / n0;
        const double pb = (i + 1 == n0) ? b : a + width * (i + 1) / n0;
        const double w = apply_rule(rule, f, pa, pb);
        coarse += w;
        stack.push_back({pa, pb, w, 0});
    }
    const double tol = cfg.rel_tol * std::abs(coarse);
    constexpr double eps = std::numeric_limits<double>::epsilon();

    double value = 0.0;
    double err = 0.0;
    bool exhausted = false;
    while (!stack.empty()) {
        const Panel p = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (p.a + p.b);
        const double left = apply_rule(rule, f, p.a, mid);
        const double right = apply_rule(rule, f, mid, p.b);
        const double diff = std::abs(left + right - p.whole);
        const double share = tol * (p.b - p.a) / width;
        if (diff <= share || diff <= 50.0 * eps * std::abs(left + right)) {
            value += left + right;
            err += diff;
        } else if (p.depth + 1 >= cfg.max_depth) {
            value += left + right;
            err += diff;
            exhausted = true;
        } else {
            stack.push_back({mid, p.b, right, p.depth + 1});
            stack.push_back({p.a, mid, left, p.depth + 1});
        }
    }
    if (exhausted) {
        throw NoConvergenceError("adaptive quadrature reached max_depth = " + std::to_string(cfg.max_depth), value,
                                 err);
    }
    return {value, err};
}

namespace {

PeriodSample integrate_period(const PotentialSystem& sys, double xi, double h, const QuadratureConfig& cfg)
{
    // x = xi*cos(t): dx = -xi*sin(t) dt and h - G(x) = G(xi) - G(xi - 2 xi sin^2(t/2)),
    // which vanishes like t^2 at the turning point, so the integrand is bounded.
    const auto integrand = [&](double t) {
        const double s = std::sin(0.5 * t);
        const double gap = 2.0 * xi * s * s;
        return xi * std::sin(t) / std::sqrt(sys.energy_gap(xi, gap));
    };
    const int panels = 2 + static_cast<int>(std::ceil(xi / pi));
    const IntegralEstimate est = adaptive_gauss(integrand, 0.0, 0.5 * pi, panels, cfg);

    constexpr double scale = 2.0 * 1.41421356237309504880;
    PeriodSample s;
    s.xi = xi;
    s.h = h;
    s.T = scale * est.value;
    s.err_est = scale * est.err_est;
    s.method = PeriodMethod::Quadrature;
    return s;
}

} // namespace

PeriodSample period_at_energy(const PotentialSystem& sys, double h, const QuadratureConfig& cfg)
{
    cfg.validate();
    if (!sys.is_nilpotent() && h > 0.0 && h < near_origin_energy) {
        return expansion_sample(sys, h);
    }
    return integrate_period(sys, energy_to_amplitude(sys, h), h, cfg);
}

PeriodSample period_at_amplitude(const PotentialSystem& sys, double xi, const QuadratureConfig& cfg)
{
    cfg.validate();
    if (!(xi > 0.0) || !std::isfinite(xi)) {
        throw Error(ErrorKind::InvalidParameter, "amplitude must be positive and finite");
    }
    if (const auto limit = sys.monotone_limit(); limit && xi >= *limit) {
        throw Error(ErrorKind::NonMonotoneEnergy,
                    "amplitude " + std::to_string(xi) + " passes the first zero of g at " + std::to_string(*limit));
    }
    const double h = sys.G(xi);
    if (!sys.is_nilpotent() && h < near_origin_energy) {
        PeriodSample s = expansion_sample(sys, h);
        s.xi = xi;
        return s;
    }
    return integrate_period(sys, xi, h, cfg);
}

PeriodDerivative period_derivative(const PotentialSystem& sys, double h, const QuadratureConfig& cfg)
{
    if (h < 1e-12) {
        throw Error(ErrorKind::StepUnderflow, "energy " + std::to_string(h) + " is below the finite-difference floor");
    }
    const auto central = [&](double step) {
        const PeriodSample plus = period_at_energy(sys, h + step, cfg);
        const PeriodSample minus = period_at_energy(sys, h - step, cfg);
        return (plus.T - minus.T) / (2.0 * step);
    };
    const double step = h * 1e-3;
    const double coarse = central(step);
    const double fine = central(0.5 * step);
    return {(4.0 * fine - coarse) / 3.0, std::abs(fine - coarse) / 3.0};
}

} // namespace periodfn
