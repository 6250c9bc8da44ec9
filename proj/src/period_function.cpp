#include "periodfn/period_function.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "periodfn/error.hpp"

namespace periodfn {

namespace {

constexpr double two_pi_level_tol = 1e-9;
constexpr double critical_rel_width = 1e-8;

void require_valid_window(const PotentialSystem& sys, double x_max)
{
    const CenterValidity v = validate_center(sys, x_max);
    if (!v.is_global) {
        throw Error(ErrorKind::NonMonotoneEnergy, "lambda = " + std::to_string(sys.lambda()) +
                                                      " fails x*g(x) > 0 at x = " +
                                                      std::to_string(*v.first_sign_failure) + " within [0, " +
                                                      std::to_string(x_max) + "]");
    }
}

int sign_with_band(double v, double band)
{
    if (v > band) {
        return 1;
    }
    if (v < -band) {
        return -1;
    }
    return 0;
}

// x sin x - 2 + 2 cos x, by its Taylor series near 0 where the terms cancel.
double opial_numerator(double x)
{
    if (std::abs(x) >= 0.5) {
        return x * std::sin(x) - 2.0 + 2.0 * std::cos(x);
    }
    // sum_{n>=2} (-1)^n (2 - 2n) x^(2n) / (2n)!
    const double x2 = x * x;
    double power = x2 * x2; // x^(2n), n = 2
    double factorial = 24.0;
    double sum = 0.0;
    for (int n = 2; n <= 10; ++n) {
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        sum += sign * (2.0 - 2.0 * n) * power / factorial;
        power *= x2;
        factorial *= (2.0 * n + 1.0) * (2.0 * n + 2.0);
    }
    return sum;
}

struct DerivativeSign {
    double value;
    double err;
};

DerivativeSign derivative_at_amplitude(const PotentialSystem& sys, double xi, const QuadratureConfig& cfg)
{
    const PeriodDerivative d = period_derivative(sys, sys.G(xi), cfg);
    return {d.value, d.err_est};
}

} // namespace

std::string_view to_string(ExtremumKind k) noexcept
{
    return k == ExtremumKind::Max ? "max" : "min";
}

std::vector<ScanPoint> scan_period(const PotentialSystem& sys, double xi_min, double xi_max, int n,
                                  const QuadratureConfig& cfg)
{
    if (!(xi_min > 0.0) || !(xi_max > xi_min) || n < 2) {
        throw Error(ErrorKind::InvalidParameter, "scan needs 0 < xi_min < xi_max and n >= 2");
    }
    require_valid_window(sys, xi_max);
    std::vector<ScanPoint> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double xi = (i + 1 == n) ? xi_max : xi_min + (xi_max - xi_min) * i / (n - 1);
        try {
            out.push_back({period_at_amplitude(sys, xi, cfg), true});
        } catch (const NoConvergenceError& e) {
            PeriodSample s;
            s.xi = xi;
            s.h = sys.G(xi);
            s.T = e.best_estimate() * 2.0 * std::sqrt(2.0);
            s.err_est = e.err_est() * 2.0 * std::sqrt(2.0);
            out.push_back({s, false});
        }
    }
    return out;
}

CriticalScan find_critical_periods(const PotentialSystem& sys, double xi_max, const QuadratureConfig& cfg)
{
    if (!(xi_max > 0.0)) {
        throw Error(ErrorKind::InvalidParameter, "xi_max must be positive");
    }
    CriticalScan out;
    if (sys.lambda() == 0.0) {
        return out;
    }
    require_valid_window(sys, xi_max);

    std::vector<double> grid;
    for (int i = 1; i * scan_step <= xi_max; ++i) {
        grid.push_back(i * scan_step);
    }
    if (grid.empty() || grid.back() < xi_max) {
        grid.push_back(xi_max);
    }
    if (grid.size() < 2) {
        return out;
    }

    std::vector<DerivativeSign> slopes;
    slopes.reserve(grid.size());
    for (double xi : grid) {
        slopes.push_back(derivative_at_amplitude(sys, xi, cfg));
    }

    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const DerivativeSign a = slopes[i];
        const DerivativeSign b = slopes[i + 1];
        if ((a.value > 0.0) == (b.value > 0.0)) {
            continue;
        }
        if (std::abs(a.value) <= a.err && std::abs(b.value) <= b.err) {
            out.ambiguous.push_back({grid[i], grid[i + 1]});
            continue;
        }
        double lo = grid[i];
        double hi = grid[i + 1];
        const bool rising_at_lo = a.value > 0.0;
        while (hi - lo > critical_rel_width * 0.5 * (lo + hi)) {
            const double mid = 0.5 * (lo + hi);
            const bool rising = derivative_at_amplitude(sys, mid, cfg).value > 0.0;
            if (rising == rising_at_lo) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        CriticalPeriod cp;
        cp.xi_star = 0.5 * (lo + hi);
        cp.h_star = sys.G(cp.xi_star);
        cp.T_star = period_at_amplitude(sys, cp.xi_star, cfg).T;
        cp.kind = rising_at_lo ? ExtremumKind::Max : ExtremumKind::Min;
        cp.refine_err = hi - lo;
        out.periods.push_back(cp);
    }
    return out;
}

std::vector<TwoPiBracket> two_pi_brackets(const PotentialSystem& sys, int k_max, const QuadratureConfig& cfg)
{
    if (k_max < 1) {
        throw Error(ErrorKind::InvalidParameter, "k_max must be >= 1");
    }
    require_valid_window(sys, (2.0 * k_max + 1.0) * pi);
    const double lambda = sys.lambda();

    std::vector<TwoPiBracket> out;
    out.reserve(k_max);
    for (int k = 1; k <= k_max; ++k) {
        TwoPiBracket b;
        b.k = k;
        // G(2k pi) = 2 (k pi)^2 and G((2k+1) pi) = (2k+1)^2 pi^2 / 2 + 2 lambda.
        const double xi_even = 2.0 * k * pi;
        const double xi_odd = (2.0 * k + 1.0) * pi;
        const double h_even = 2.0 * (k * pi) * (k * pi);
        const double h_odd = (2.0 * k + 1.0) * (2.0 * k + 1.0) * pi * pi / 2.0 + 2.0 * lambda;
        const PeriodSample even = period_at_amplitude(sys, xi_even, cfg);
        const PeriodSample odd = period_at_amplitude(sys, xi_odd, cfg);

        const bool even_first = h_even <= h_odd;
        const PeriodSample& lo = even_first ? even : odd;
        const PeriodSample& hi = even_first ? odd : even;
        b.lower_is_even = even_first;
        b.h_lo = even_first ? h_even : h_odd;
        b.h_hi = even_first ? h_odd : h_even;
        b.xi_lo = lo.xi;
        b.xi_hi = hi.xi;
        b.T_lo = lo.T;
        b.T_hi = hi.T;
        b.err_lo = lo.err_est;
        b.err_hi = hi.err_est;

        const double floor = cfg.rel_tol * two_pi;
        const double band_lo = 10.0 * std::max(lo.err_est, floor);
        const double band_hi = 10.0 * std::max(hi.err_est, floor);
        b.sign_lo = sign_with_band(lo.T - two_pi, band_lo);
        b.sign_hi = sign_with_band(hi.T - two_pi, band_hi);

        if (lambda == 0.0) {
            b.degenerate = true;
        } else {
            // lambda > 0: T(2k pi) >= 2pi >= T((2k+1) pi); reversed for lambda < 0.
            const int expect_even = lambda > 0.0 ? 1 : -1;
            const int sign_even = even_first ? b.sign_lo : b.sign_hi;
            const int sign_odd = even_first ? b.sign_hi : b.sign_lo;
            if (sign_even == -expect_even || sign_odd == expect_even) {
                throw Error(ErrorKind::SignViolation,
                            "bracket k = " + std::to_string(k) + " has T(2k pi) - 2pi = " +
                                std::to_string(even.T - two_pi) + " and T((2k+1) pi) - 2pi = " +
                                std::to_string(odd.T - two_pi) + " for lambda = " + std::to_string(lambda));
            }
        }
        out.push_back(b);
    }
    return out;
}

std::vector<double> find_two_pi_levels(const PotentialSystem& sys, int k_max, const QuadratureConfig& cfg)
{
    if (sys.lambda() == 0.0) {
        throw Error(ErrorKind::DegenerateIsochronous, "lambda = 0: every energy level has period 2pi");
    }
    const std::vector<TwoPiBracket> brackets = two_pi_brackets(sys, k_max, cfg);
    const auto excess = [&](double xi) { return period_at_amplitude(sys, xi, cfg).T - two_pi; };

    std::vector<double> levels;
    for (const TwoPiBracket& b : brackets) {
        // The amplitude map is increasing, so crossings in h and xi coincide.
        constexpr int cells = 8; // pi / 8 over a bracket of width pi
        const double x0 = std::min(b.xi_lo, b.xi_hi);
        const double x1 = std::max(b.xi_lo, b.xi_hi);
        double prev_x = x0;
        double prev_f = excess(x0);
        for (int c = 1; c <= cells; ++c) {
            const double x = (c == cells) ? x1 : x0 + (x1 - x0) * c / cells;
            const double f = excess(x);
            if (prev_f == 0.0) {
                levels.push_back(sys.G(prev_x));
            } else if ((prev_f > 0.0) != (f > 0.0) && f != 0.0) {
                double lo = prev_x;
                double hi = x;
                double f_lo = prev_f;
                double root = 0.5 * (lo + hi);
                while (true) {
                    root = 0.5 * (lo + hi);
                    const double f_mid = excess(root);
                    if (std::abs(f_mid) <= 0.1 * two_pi_level_tol || root <= lo || root >= hi) {
                        break;
                    }
                    if ((f_mid > 0.0) == (f_lo > 0.0)) {
                        lo = root;
                        f_lo = f_mid;
                    } else {
                        hi = root;
                    }
                }
                levels.push_back(sys.G(root));
            }
            prev_x = x;
            prev_f = f;
        }
        if (prev_f == 0.0) {
            levels.push_back(sys.G(prev_x));
        }
    }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    return levels;
}

SmallHReport small_h_check(const PotentialSystem& sys, const std::vector<double>& h_list, const QuadratureConfig& cfg)
{
    if (sys.is_nilpotent()) {
        throw Error(ErrorKind::InvalidParameter, "the small-energy expansion needs lambda > -1");
    }
    const CenterAsymptotics asym = center_asymptotics(sys);
    const double T0 = asym.period.value();
    const double dT0 = asym.slope.value();

    SmallHReport report;
    for (double h : h_list) {
        if (!(h > 0.0) || h > 0.1) {
            throw Error(ErrorKind::InvalidParameter, "small-energy check needs 0 < h <= 0.1");
        }
        const double T = period_at_energy(sys, h, cfg).T;
        report.entries.push_back({h, T, T - T0 - dT0 * h});
    }
    for (std::size_t i = 0; i + 1 < report.entries.size(); ++i) {
        const auto& a = report.entries[i];
        const auto& b = report.entries[i + 1];
        report.orders.push_back(std::log(std::abs(a.residual) / std::abs(b.residual)) / std::log(a.h / b.h));
    }
    return report;
}

double opial_indicator(const PotentialSystem& sys, double x)
{
    if (!(x > 0.0)) {
        throw Error(ErrorKind::InvalidParameter, "Opial indicator needs x > 0");
    }
    if (x < 1e-4) {
        return -sys.lambda() * x / 12.0;
    }
    return sys.lambda() * opial_numerator(x) / (x * x * x);
}

std::vector<double> opial_sign_changes(const PotentialSystem& /*sys*/, double x_max)
{
    if (!(x_max > 0.0)) {
        throw Error(ErrorKind::InvalidParameter, "x_max must be positive");
    }
    // lambda only scales the indicator, so the zero set is that of the numerator.
    constexpr double dx = 1e-2;
    std::vector<double> zeros;
    double prev_x = dx;
    double prev_f = opial_numerator(prev_x);
    const int steps = static_cast<int>(std::ceil(x_max / dx));
    for (int i = 2; i <= steps; ++i) {
        const double x = std::min(i * dx, x_max);
        const double f = opial_numerator(x);
        if (f == 0.0) {
            zeros.push_back(x);
        } else if (prev_f != 0.0 && (prev_f > 0.0) != (f > 0.0)) {
            double lo = prev_x;
            double hi = x;
            double f_lo = prev_f;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) {
                    break;
                }
                const double f_mid = opial_numerator(mid);
                if ((f_mid > 0.0) == (f_lo > 0.0)) {
                    lo = mid;
                    f_lo = f_mid;
                } else {
                    hi = mid;
                }
            }
            zeros.push_back(0.5 * (lo + hi));
        }
        prev_x = x;
        prev_f = f;
    }
    return zeros;
}

LambdaDerivative lambda_derivative_at_zero(double xi, double eps, const QuadratureConfig& cfg)
{
    if (!(xi > 0.0)) {
        throw Error(ErrorKind::InvalidParameter, "amplitude must be positive");
    }
    if (!(eps >= 1e-8 && eps <= 1e-4)) {
        throw Error(ErrorKind::InvalidParameter, "eps must lie in [1e-8, 1e-4]");
    }
    const PeriodSample plus = period_at_amplitude(PotentialSystem(eps), xi, cfg);
    const PeriodSample minus = period_at_amplitude(PotentialSystem(-eps), xi, cfg);
    const double value = (plus.T - minus.T) / (2.0 * eps);
    // Quadrature noise amplified by 1/eps plus an O(eps^2) truncation scale.
    const double noise = (plus.err_est + minus.err_est + 4.0 * 2.2e-16 * plus.T) / (2.0 * eps);
    return {value, noise + eps * eps * two_pi};
}

} // namespace periodfn
