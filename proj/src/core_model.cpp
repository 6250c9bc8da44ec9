#include "periodfn/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "periodfn/error.hpp"

namespace periodfn {

namespace {

// p - sin(p), accurate for small |p| where the subtraction would cancel.
double sine_remainder(double p) noexcept
{
    if (std::abs(p) >= 0.5) {
        return p - std::sin(p);
    }
    const double p2 = p * p;
    // p^3/3! - p^5/5! + ... ; 8 terms reach 1e-19 relative at |p| = 0.5.
    double term = p * p2 / 6.0;
    double sum = 0.0;
    for (int k = 1; k <= 8; ++k) {
        sum += term;
        term *= -p2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
    }
    return sum;
}

template <class F>
double bisect_root(F&& f, double lo, double hi)
{
    double f_lo = f(lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        const double f_mid = f(mid);
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

double ExtendedReal::value() const
{
    if (kind_ != Kind::Finite) {
        throw Error(ErrorKind::InvalidParameter, "value() called on an infinite sentinel");
    }
    return value_;
}

PotentialSystem::PotentialSystem(double lambda) : lambda_(lambda)
{
    if (!std::isfinite(lambda) || lambda < -1.0) {
        throw Error(ErrorKind::InvalidParameter, "lambda must be finite and >= -1, got " + std::to_string(lambda));
    }
    // The deepest dip of g relative to x is its first local minimum in
    // (pi, 3pi/2), at cos(x) = -1/lambda; later minima sit 2*pi*n higher.
    if (lambda_ > 1.0) {
        const double x_min = two_pi - std::acos(-1.0 / lambda_);
        if (g(x_min) <= 0.0) {
            monotone_limit_ = bisect_root([this](double x) { return g(x); }, pi, x_min);
        }
    }
}

double PotentialSystem::g(double x) const noexcept
{
    if (std::abs(x) < 0.5) {
        return (1.0 + lambda_) * x - lambda_ * sine_remainder(x);
    }
    return x + lambda_ * std::sin(x);
}

double PotentialSystem::dg(double x) const noexcept
{
    return 1.0 + lambda_ * std::cos(x);
}

double PotentialSystem::G(double x) const noexcept
{
    const double a = std::abs(x);
    return energy_gap(a, a);
}

double PotentialSystem::energy_gap(double upper, double gap) const noexcept
{
    // With p = (a+b)/2, q = (a-b)/2:
    //   G(a) - G(b) = 2pq + 2*lambda*sin(p)*sin(q).
    const double q = 0.5 * gap;
    const double p = upper - q;
    if (std::abs(p) >= 0.5) {
        return 2.0 * p * q + 2.0 * lambda_ * std::sin(p) * std::sin(q);
    }
    // Small arguments: expand sin = id - remainder so the (1 + lambda) part
    // is exact, which keeps the nilpotent case lambda = -1 accurate.
    const double rp = sine_remainder(p);
    const double rq = sine_remainder(q);
    return 2.0 * (1.0 + lambda_) * p * q - 2.0 * lambda_ * (p * rq + q * rp - rp * rq);
}

GDerivatives g_derivatives_at_zero(const PotentialSystem& sys) noexcept
{
    const double lambda = sys.lambda();
    return {1.0 + lambda, 0.0, -lambda};
}

CenterAsymptotics center_asymptotics(const PotentialSystem& sys) noexcept
{
    if (sys.is_nilpotent()) {
        return {ExtendedReal::plus_infinity(), ExtendedReal::minus_infinity()};
    }
    const auto [g1, g2, g3] = g_derivatives_at_zero(sys);
    const double period = two_pi / std::sqrt(g1);
    const double slope = pi * (5.0 * g2 * g2 - 3.0 * g1 * g3) / (12.0 * std::pow(g1, 3.5));
    return {ExtendedReal::finite(period), ExtendedReal::finite(slope)};
}

double energy_to_amplitude(const PotentialSystem& sys, double h)
{
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw Error(ErrorKind::InvalidParameter, "energy must be positive and finite, got " + std::to_string(h));
    }
    const auto limit = sys.monotone_limit();
    const auto check_limit = [&](double x) {
        if (limit && x >= *limit && sys.G(*limit) < h) {
            throw Error(ErrorKind::NonMonotoneEnergy,
                        "g(x) <= 0 at x = " + std::to_string(*limit) + " inside the amplitude bracket for h = " +
                            std::to_string(h));
        }
    };

    // G(x) <= (1 + max(lambda, 0)) x^2 / 2, so this start is a lower bound.
    double lo = std::sqrt(2.0 * h / (1.0 + std::max(sys.lambda(), 0.0)));
    double hi = lo;
    while (sys.G(hi) < h) {
        check_limit(hi);
        lo = hi;
        hi *= 2.0;
    }
    if (limit && hi > *limit) {
        hi = *limit;
        check_limit(hi);
    }
    if (sys.G(lo) >= h) {
        return lo;
    }
    return bisect_root([&](double x) { return sys.G(x) - h; }, lo, hi);
}

TurningPair turning_points(const PotentialSystem& sys, double h)
{
    const double xi = energy_to_amplitude(sys, h);
    return {-xi, xi};
}

CenterValidity validate_center(const PotentialSystem& sys, double x_probe)
{
    if (!(x_probe > 0.0) || !std::isfinite(x_probe)) {
        throw Error(ErrorKind::InvalidParameter, "x_probe must be positive");
    }
    constexpr int grid_points = 10000;
    const double dx = x_probe / grid_points;

    CenterValidity out;
    out.center_kind = sys.is_nilpotent() ? CenterKind::Nilpotent : CenterKind::Elementary;
    out.c_low = std::numeric_limits<double>::infinity();
    out.c_high = -std::numeric_limits<double>::infinity();

    const auto g = [&](double x) { return sys.g(x); };
    const auto dg = [&](double x) { return sys.dg(x); };

    double x_prev = dx;
    double dg_prev = dg(x_prev);
    if (g(x_prev) <= 0.0) {
        out.first_sign_failure = x_prev;
    }
    for (int i = 2; i <= grid_points && !out.first_sign_failure; ++i) {
        const double x = i * dx;
        const double gx = g(x);
        const double dgx = dg(x);
        if (gx <= 0.0) {
            out.first_sign_failure = bisect_root(g, x_prev, x);
            break;
        }
        // A dip of g between two positive grid values shows up as a - to +
        // change of g'; check the minimum itself.
        if (dg_prev < 0.0 && dgx >= 0.0) {
            const double x_min = bisect_root(dg, x_prev, x);
            if (g(x_min) <= 0.0) {
                out.first_sign_failure = bisect_root(g, x_prev, x_min);
                break;
            }
        }
        x_prev = x;
        dg_prev = dgx;
    }
    out.is_global = !out.first_sign_failure.has_value();

    for (int i = grid_points / 2; i <= grid_points; ++i) {
        const double x = i * dx;
        const double ratio = g(x) / x;
        out.c_low = std::min(out.c_low, ratio);
        out.c_high = std::max(out.c_high, ratio);
    }
    return out;
}

} // namespace periodfn
