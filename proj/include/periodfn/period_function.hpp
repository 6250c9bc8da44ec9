#pragma once

// Global analysis of the period function along the annulus: scans, critical
// periods, 2pi-levels, the small-energy expansion, the Opial indicator and the
// first-order sensitivity in lambda at lambda = 0.

#include <string_view>
#include <vector>

#include "periodfn/core_model.hpp"
#include "periodfn/quadrature.hpp"

namespace periodfn {

inline constexpr double scan_step = pi / 8.0;

// Uniform amplitude grid of n >= 2 points. Points where the quadrature hits its
// depth cap keep the best estimate and converged = false.
struct ScanPoint {
    PeriodSample sample;
    bool converged = true;
};

std::vector<ScanPoint> scan_period(const PotentialSystem& sys, double xi_min, double xi_max, int n,
                                  const QuadratureConfig& cfg = {});

enum class ExtremumKind { Max, Min };

std::string_view to_string(ExtremumKind k) noexcept;

struct CriticalPeriod {
    double xi_star = 0.0;
    double h_star = 0.0;
    double T_star = 0.0;
    ExtremumKind kind = ExtremumKind::Max;
    double refine_err = 0.0; // width of the final amplitude bracket
};

// Grid cell where T' was below its own error estimate at both ends.
struct AmbiguousBracket {
    double xi_lo;
    double xi_hi;
};

struct CriticalScan {
    std::vector<CriticalPeriod> periods;
    std::vector<AmbiguousBracket> ambiguous;
};

// Sign changes of T' on the grid k*pi/8 in (0, xi_max], refined by bisection
// on sign(T') to a bracket of width <= 1e-8 * xi. lambda = 0 gives no extrema.
CriticalScan find_critical_periods(const PotentialSystem& sys, double xi_max, const QuadratureConfig& cfg = {});

struct TwoPiBracket {
    int k = 0;
    double h_lo = 0.0;
    double h_hi = 0.0;
    double xi_lo = 0.0;
    double xi_hi = 0.0;
    double T_lo = 0.0;
    double T_hi = 0.0;
    double err_lo = 0.0;
    double err_hi = 0.0;
    int sign_lo = 0; // sign of T - 2pi, 0 inside the error band
    int sign_hi = 0;
    bool degenerate = false; // lambda = 0: T == 2pi at both ends
    bool lower_is_even = true; // h_lo belongs to the amplitude 2k pi
};

// Energies h_k = 2(k pi)^2 and (2k+1)^2 pi^2/2 + 2 lambda (amplitudes 2k pi and
// (2k+1) pi) for k = 1..k_max. Throws SignViolation when a measured end
// contradicts the expected ordering by more than 10x its error.
std::vector<TwoPiBracket> two_pi_brackets(const PotentialSystem& sys, int k_max, const QuadratureConfig& cfg = {});

// Energies with |T(h) - 2pi| <= 1e-9, at least one per bracket, strictly
// increasing. Throws DegenerateIsochronous for lambda = 0.
std::vector<double> find_two_pi_levels(const PotentialSystem& sys, int k_max, const QuadratureConfig& cfg = {});

struct SmallHEntry {
    double h;
    double T;
    double residual; // T - T0 - T0' h
};

struct SmallHReport {
    std::vector<SmallHEntry> entries;
    std::vector<double> orders; // log(R_i / R_{i+1}) / log(h_i / h_{i+1})
};

SmallHReport small_h_check(const PotentialSystem& sys, const std::vector<double>& h_list,
                           const QuadratureConfig& cfg = {});

// d/dx [G(x)/x^2] = lambda (x sin x - 2 + 2 cos x) / x^3.
double opial_indicator(const PotentialSystem& sys, double x);

// Zeros of x sin x - 2 + 2 cos x in (0, x_max]; includes every 2k pi.
std::vector<double> opial_sign_changes(const PotentialSystem& sys, double x_max);

struct LambdaDerivative {
    double value;
    double err_est;
};

// (T(xi, +eps) - T(xi, -eps)) / (2 eps), eps in [1e-8, 1e-4].
LambdaDerivative lambda_derivative_at_zero(double xi, double eps = 1e-5, const QuadratureConfig& cfg = {});

} // namespace periodfn
