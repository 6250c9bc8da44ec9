#pragma once

// Period T(h) = 2*sqrt(2) * int_0^xi dx / sqrt(h - G(x)) for the even
// potential, with the inverse-square-root endpoint singularity removed by
// the substitution x = xi*cos(t).

#include <functional>
#include <string_view>
#include <vector>

#include "periodfn/core_model.hpp"

namespace periodfn {

struct QuadratureConfig {
    double rel_tol = 1e-10;
    int max_depth = 40;
    int base_nodes = 15;

    // Throws InvalidParameter outside rel_tol in (1e-15, 1e-2), max_depth >= 4.
    void validate() const;
};

enum class PeriodMethod { Quadrature, OdeOracle, Expansion };

std::string_view to_string(PeriodMethod m) noexcept;

struct PeriodSample {
    double xi = 0.0;
    double h = 0.0;
    double T = 0.0;
    double err_est = 0.0;
    PeriodMethod method = PeriodMethod::Quadrature;
};

// Energies below this use the small-h expansion for lambda > -1.
inline constexpr double near_origin_energy = 1e-10;

PeriodSample period_at_energy(const PotentialSystem& sys, double h, const QuadratureConfig& cfg = {});
PeriodSample period_at_amplitude(const PotentialSystem& sys, double xi, const QuadratureConfig& cfg = {});

struct PeriodDerivative {
    double value;
    double err_est;
};

// dT/dh by central differences at steps h*1e-3 and h*5e-4, Richardson-extrapolated.
PeriodDerivative period_derivative(const PotentialSystem& sys, double h, const QuadratureConfig& cfg = {});

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussRule& gauss_legendre(int n);

struct IntegralEstimate {
    double value;
    double err_est;
};

// Globally adaptive panel bisection of a smooth integrand on [a, b], starting
// from `initial_panels` equal panels. Panels are accepted when a rule on the
// panel and on its two halves agree to within the panel's share of
// rel_tol * |integral|. Throws NoConvergenceError on hitting max_depth.
IntegralEstimate adaptive_gauss(const std::function<double(double)>& f, double a, double b, int initial_panels,
                                const QuadratureConfig& cfg);

} // namespace periodfn
