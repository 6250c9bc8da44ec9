#pragma once

// Bessel function of the first kind of order one, J1, by three independent
// routes: power series, periodic trapezoidal integral, and the large-argument
// cosine asymptotic.

#include <string_view>
#include <vector>

namespace periodfn::bessel {

enum class Method { Series, Integral, Asymptotic };

std::string_view to_string(Method m) noexcept;

struct BesselEval {
    double xi = 0.0;
    double value = 0.0;
    Method method = Method::Series;
    double err_bound = 0.0;
};

inline constexpr double series_max_argument = 14.0;
inline constexpr double series_switch_argument = 12.0;

// Sum of (-1)^m/(m!(m+1)!) (xi/2)^(2m+1); valid for 0 <= xi <= 14.
BesselEval j1_series(double xi, double tol = 1e-17);

// (1/2pi) * int_0^{2pi} sin(xi cos s) cos s ds by the equispaced rule,
// doubling from n nodes until successive values agree to 1e-13.
BesselEval j1_integral(double xi, int n = 16);

// Series for xi <= 12, integral beyond.
BesselEval j1(double xi);

// sqrt(2/(pi xi)) cos(xi - 3pi/4) with err_bound = C xi^(-3/2).
BesselEval j1_asymptotic(double xi);

// The constant C above, calibrated once against j1 on [10, 100].
double asymptotic_remainder_constant();

// First n positive zeros of J1, refined by bisection to 1e-12.
std::vector<double> j1_zeros(int n);

// int_0^{2pi} sin(xi cos s) cos s ds, which equals 2pi J1(xi).
struct VariationalIntegral {
    double value;
    double err_bound;
};

VariationalIntegral variational_integral(double xi);

// xi^2 J1'' + xi J1' + (xi^2 - 1) J1 with 5-point central differences (step 1e-3).
double bessel_ode_residual(double xi);

} // namespace periodfn::bessel
