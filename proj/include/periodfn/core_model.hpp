#pragma once

// The potential family x'' + x + lambda*sin(x) = 0 written as the planar
// system x' = -y, y' = g(x) with Hamiltonian H = y^2/2 + G(x).

#include <optional>
#include <utility>

namespace periodfn {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// A real number or a signed infinity, kept as an explicit tag so that the
// nilpotent limits never enter arithmetic as raw IEEE infinities.
class ExtendedReal {
public:
    enum class Kind { Finite, PlusInfinity, MinusInfinity };

    static constexpr ExtendedReal finite(double v) noexcept { return ExtendedReal(Kind::Finite, v); }
    static constexpr ExtendedReal plus_infinity() noexcept { return ExtendedReal(Kind::PlusInfinity, 0.0); }
    static constexpr ExtendedReal minus_infinity() noexcept { return ExtendedReal(Kind::MinusInfinity, 0.0); }

    constexpr Kind kind() const noexcept { return kind_; }
    constexpr bool is_finite() const noexcept { return kind_ == Kind::Finite; }

    // Throws InvalidParameter for an infinite value.
    double value() const;

private:
    constexpr ExtendedReal(Kind k, double v) noexcept : kind_(k), value_(v) {}

    Kind kind_;
    double value_;
};

struct GDerivatives {
    double g1; // g'(0)
    double g2; // g''(0)
    double g3; // g'''(0)
};

class PotentialSystem {
public:
    // lambda must be finite and >= -1.
    explicit PotentialSystem(double lambda);

    double lambda() const noexcept { return lambda_; }

    double g(double x) const noexcept;
    double dg(double x) const noexcept;
    double G(double x) const noexcept;

    // G(upper) - G(upper - gap) for 0 <= gap <= 2*upper, evaluated without
    // subtracting two nearly equal energies. `gap` must be computed by the
    // caller without cancellation.
    double energy_gap(double upper, double gap) const noexcept;

    // Smallest x > 0 with g(x) <= 0, if any. G is strictly increasing on
    // [0, monotone_limit()).
    std::optional<double> monotone_limit() const noexcept { return monotone_limit_; }

    bool is_nilpotent() const noexcept { return lambda_ == -1.0; }

private:
    double lambda_;
    std::optional<double> monotone_limit_;
};

inline double eval_g(const PotentialSystem& sys, double x) noexcept { return sys.g(x); }
inline double eval_G(const PotentialSystem& sys, double x) noexcept { return sys.G(x); }

GDerivatives g_derivatives_at_zero(const PotentialSystem& sys) noexcept;

struct CenterAsymptotics {
    ExtendedReal period; // T(0+)
    ExtendedReal slope;  // T'(0+) with respect to h
};

CenterAsymptotics center_asymptotics(const PotentialSystem& sys) noexcept;

// Inverse of G on [0, inf): returns xi > 0 with |G(xi) - h| <= 1e-13 * max(1, h).
double energy_to_amplitude(const PotentialSystem& sys, double h);

struct OrbitCoordinate {
    double xi;
    double h;
};

struct TurningPair {
    double x_left;
    double x_right;
};

TurningPair turning_points(const PotentialSystem& sys, double h);

enum class CenterKind { Elementary, Nilpotent };

struct CenterValidity {
    bool is_global = true;
    std::optional<double> first_sign_failure;
    double c_low = 0.0;
    double c_high = 0.0;
    CenterKind center_kind = CenterKind::Elementary;
};

// Dense-grid scan of x*g(x) > 0 on (0, x_probe] with refinement at sign
// changes and at local minima of g.
CenterValidity validate_center(const PotentialSystem& sys, double x_probe);

} // namespace periodfn
