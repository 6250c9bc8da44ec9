#include "periodfn/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "periodfn/core_model.hpp"
#include "periodfn/error.hpp"

namespace periodfn::bessel {

namespace {

constexpr double integral_agreement = 1e-13;
constexpr int integral_max_nodes = 1 << 20;

// Mean of sin(xi cos s) cos s over n equispaced nodes on [0, 2pi).
double periodic_mean(double xi, int n)
{
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        const double c = std::cos(two_pi * k / n);
        sum += std::sin(xi * c) * c;
    }
    return sum / n;
}

struct TrapezoidResult {
    double mean;
    double last_diff;
};

TrapezoidResult periodic_trapezoid(double xi, int n)
{
    if (!(xi >= 0.0) || !std::isfinite(xi)) {
        throw Error(ErrorKind::InvalidParameter, "Bessel argument must be finite and >= 0");
    }
    if (n < 16) {
        throw Error(ErrorKind::InvalidParameter, "trapezoidal node count must be >= 16");
    }
    double prev = periodic_mean(xi, n);
    while (true) {
        n *= 2;
        if (n > integral_max_nodes) {
            throw Error(ErrorKind::NoConvergence,
                        "periodic trapezoid did not settle below 2^20 nodes at xi = " + std::to_string(xi));
        }
        const double next = periodic_mean(xi, n);
        const double diff = std::abs(next - prev);
        if (diff <= integral_agreement) {
            return {next, diff};
        }
        prev = next;
    }
}

} // namespace

std::string_view to_string(Method m) noexcept
{
    switch (m) {
    case Method::Series: return "series";
    case Method::Integral: return "integral";
    case Method::Asymptotic: return "asymptotic";
    }
    return "unknown";
}

BesselEval j1_series(double xi, double tol)
{
    if (!(xi >= 0.0)) {
        throw Error(ErrorKind::InvalidParameter, "Bessel argument must be >= 0");
    }
    if (xi > series_max_argument) {
        throw Error(ErrorKind::RangeExceeded,
                    "series evaluation is limited to xi <= 14, got " + std::to_string(xi));
    }
    BesselEval out{xi, 0.0, Method::Series, 0.0};
    if (xi == 0.0) {
        return out;
    }
    // Extended precision for the terms and a Neumaier-compensated sum; the
    // largest term near xi = 12 is ~4e3, so double terms would cost 3-4 digits.
    using ld = long double;
    const ld quarter_sq = static_cast<ld>(xi) * xi / 4.0L;
    ld term = static_cast<ld>(xi) / 2.0L;
    ld sum = 0.0L;
    ld comp = 0.0L;
    ld largest = 0.0L;
    for (int m = 0; m < 200; ++m) {
        const ld t = sum + term;
        if (std::abs(sum) >= std::abs(term)) {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        largest = std::max(largest, std::abs(term));
        term *= -quarter_sq / ((m + 1.0L) * (m + 2.0L));
        if (std::abs(term) < tol * std::abs(sum + comp)) {
            break;
        }
    }
    const ld total = sum + comp;
    out.value = static_cast<double>(total);
    out.err_bound = static_cast<double>(std::abs(term) + largest * std::numeric_limits<ld>::epsilon() * 8.0L);
    return out;
}

BesselEval j1_integral(double xi, int n)
{
    const TrapezoidResult r = periodic_trapezoid(xi, n);
    return {xi, r.mean, Method::Integral, r.last_diff};
}

BesselEval j1(double xi)
{
    if (xi <= series_switch_argument) {
        return j1_series(xi);
    }
    return j1_integral(xi);
}

double asymptotic_remainder_constant()
{
    static const double constant = [] {
        double c = 0.0;
        constexpr int samples = 9001;
        for (int i = 0; i < samples; ++i) {
            const double xi = 10.0 + 90.0 * i / (samples - 1);
            const double lead = std::sqrt(2.0 / (pi * xi)) * std::cos(xi - 0.75 * pi);
            c = std::max(c, std::abs(lead - j1(xi).value) * std::pow(xi, 1.5));
        }
        // Grid maxima undershoot the continuous one slightly.
        return 1.05 * c;
    }();
    return constant;
}

BesselEval j1_asymptotic(double xi)
{
    if (!(xi >= 1.0)) {
        throw Error(ErrorKind::InvalidParameter, "asymptotic form requires xi >= 1");
    }
    const double value = std::sqrt(2.0 / (pi * xi)) * std::cos(xi - 0.75 * pi);
    return {xi, value, Method::Asymptotic, asymptotic_remainder_constant() * std::pow(xi, -1.5)};
}

std::vector<double> j1_zeros(int n)
{
    if (n < 1) {
        throw Error(ErrorKind::InvalidParameter, "zero count must be positive");
    }
    const auto f = [](double x) { return j1(x).value; };
    std::vector<double> zeros;
    zeros.reserve(n);
    for (int k = 1; k <= n; ++k) {
        // Zeros of cos(xi - 3pi/4) sit at (k + 1/4) pi.
        const double guess = (k + 0.25) * pi;
        double lo = guess - 0.5 * pi;
        double hi = guess + 0.5 * pi;
        double f_lo = f(lo);
        double f_hi = f(hi);
        if ((f_lo > 0.0) == (f_hi > 0.0)) {
            lo -= 0.5 * pi;
            hi += 0.5 * pi;
            f_lo = f(lo);
            f_hi = f(hi);
            if ((f_lo > 0.0) == (f_hi > 0.0)) {
                throw Error(ErrorKind::BracketFailure, "no sign change of J1 around " + std::to_string(guess));
            }
        }
        while (hi - lo > 1e-12) {
            const double mid = 0.5 * (lo + hi);
            const double f_mid = f(mid);
            if ((f_mid > 0.0) == (f_lo > 0.0)) {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
            }
        }
        zeros.push_back(0.5 * (lo + hi));
    }
    return zeros;
}

VariationalIntegral variational_integral(double xi)
{
    const TrapezoidResult r = periodic_trapezoid(xi, 16);
    return {two_pi * r.mean, two_pi * r.last_diff};
}

double bessel_ode_residual(double xi)
{
    if (!(xi >= 0.5)) {
        throw Error(ErrorKind::InvalidParameter, "ODE residual requires xi >= 0.5");
    }
    constexpr double step = 1e-3;
    const double fm2 = j1(xi - 2.0 * step).value;
    const double fm1 = j1(xi - step).value;
    const double f0 = j1(xi).value;
    const double fp1 = j1(xi + step).value;
    const double fp2 = j1(xi + 2.0 * step).value;
    const double d1 = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * step);
    const double d2 = (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * step * step);
    return xi * xi * d2 + xi * d1 + (xi * xi - 1.0) * f0;
}

} // namespace periodfn::bessel
