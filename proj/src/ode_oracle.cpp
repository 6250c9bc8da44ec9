#include "periodfn/ode_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "periodfn/error.hpp"
#include "periodfn/io_util.hpp"

namespace periodfn {

namespace {

using State = std::array<double, 2>; // (x, y)

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0,
                 b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

// PI step-size control constants (Hairer, Norsett & Wanner II.4).
constexpr double safety = 0.9;
constexpr double beta_pi = 0.04;
constexpr double alpha_pi = 0.2 - 0.75 * beta_pi;
constexpr double min_factor = 0.2;
constexpr double max_factor = 10.0;

constexpr int event_polish_iterations = 3;

struct StepResult {
    State next;
    State deriv_next;
    double err_norm;
};

class Stepper {
public:
    Stepper(const PotentialSystem& sys, double tol) : sys_(sys), tol_(tol) {}

    State rhs(const State& s) const { return {-s[1], sys_.g(s[0])}; }

    StepResult step(const State& s, const State& k1, double h) const
    {
        const auto at = [&](std::initializer_list<std::pair<double, const State*>> terms) {
            State out = s;
            for (const auto& [coef, k] : terms) {
                out[0] += h * coef * (*k)[0];
                out[1] += h * coef * (*k)[1];
            }
            return out;
        };
        const State k2 = rhs(at({{a21, &k1}}));
        const State k3 = rhs(at({{a31, &k1}, {a32, &k2}}));
        const State k4 = rhs(at({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const State k5 = rhs(at({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const State k6 = rhs(at({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const State next = at({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        const State k7 = rhs(next);

        double norm = 0.0;
        for (int i = 0; i < 2; ++i) {
            const double err =
                h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double scale = tol_ + tol_ * std::max(std::abs(s[i]), std::abs(next[i]));
            norm += (err / scale) * (err / scale);
        }
        return {next, k7, std::sqrt(norm / 2.0)};
    }

private:
    const PotentialSystem& sys_;
    double tol_;
};

// Cubic Hermite interpolant of component i on a step of length h.
double hermite(double theta, double h, double y0, double d0, double y1, double d1)
{
    const double t2 = theta * theta;
    const double t3 = t2 * theta;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + theta) * h * d0 + (-2 * t3 + 3 * t2) * y1 +
           (t3 - t2) * h * d1;
}

// Locates the zero of component `comp` inside the step [t0, t0 + h]: bisection
// on the Hermite interpolant, then Newton polishing with exact sub-steps.
double locate_event(const Stepper& stepper, const State& s0, const State& d0, const State& s1, const State& d1,
                    double t0, double h, int comp)
{
    double lo = 0.0;
    double hi = 1.0;
    const double f_lo = s0[comp];
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = hermite(mid, h, s0[comp], d0[comp], s1[comp], d1[comp]);
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    double tau = 0.5 * (lo + hi) * h;
    for (int it = 0; it < event_polish_iterations; ++it) {
        const StepResult r = stepper.step(s0, d0, tau);
        const double slope = r.deriv_next[comp];
        if (slope == 0.0) {
            break;
        }
        tau -= r.next[comp] / slope;
        tau = std::clamp(tau, 0.0, h);
    }
    return t0 + tau;
}

} // namespace

OrbitResult integrate_orbit(const PotentialSystem& sys, double xi, double tol, const OracleOptions& opts)
{
    if (!(xi > 0.0) || !std::isfinite(xi)) {
        throw Error(ErrorKind::InvalidParameter, "amplitude must be positive and finite");
    }
    if (!(tol >= 1e-12 && tol <= 1e-6)) {
        throw Error(ErrorKind::InvalidParameter, "oracle tolerance must lie in [1e-12, 1e-6]");
    }
    if (const auto limit = sys.monotone_limit(); limit && xi >= *limit) {
        throw Error(ErrorKind::NonMonotoneEnergy, "amplitude passes the first zero of g");
    }

    const Stepper stepper(sys, tol);
    const double h0 = sys.G(xi);
    const auto energy = [&](const State& s) { return 0.5 * s[1] * s[1] + sys.G(s[0]); };

    OrbitResult out;
    out.trace.h0 = h0;
    State s{xi, 0.0};
    State d = stepper.rhs(s);
    double t = 0.0;
    double h = 0.1 * std::pow(tol, 0.2) / std::sqrt(1.0 + std::abs(sys.dg(xi)));
    double prev_err = 1.0;
    if (opts.keep_trace) {
        out.trace.samples.push_back({0.0, s[0], s[1]});
    }

    bool have_quarter = false;
    bool have_half = false;
    // Zero-crossings of y are counted only after y has left the section.
    bool y_left_section = false;
    while (true) {
        if (t > opts.max_time) {
            throw Error(ErrorKind::EventMissed,
                        "no return to the section y = 0 before t = " + std::to_string(opts.max_time));
        }
        if (h < 1e-14 * (1.0 + t) || out.accepted_steps + out.rejected_steps > 10'000'000) {
            throw Error(ErrorKind::ToleranceUnmet, "step control stalled at t = " + std::to_string(t));
        }
        const StepResult r = stepper.step(s, d, h);
        if (r.err_norm > 1.0) {
            ++out.rejected_steps;
            h *= std::max(min_factor, safety * std::pow(r.err_norm, -alpha_pi));
            continue;
        }
        ++out.accepted_steps;

        if (!have_quarter && s[0] > 0.0 && r.next[0] <= 0.0) {
            out.quarter_time = locate_event(stepper, s, d, r.next, r.deriv_next, t, h, 0);
            have_quarter = true;
        }
        bool finished = false;
        if (y_left_section) {
            if (!have_half && s[1] > 0.0 && r.next[1] <= 0.0) {
                out.half_time = locate_event(stepper, s, d, r.next, r.deriv_next, t, h, 1);
                have_half = true;
            } else if (have_half && s[1] < 0.0 && r.next[1] >= 0.0) {
                out.full_time = locate_event(stepper, s, d, r.next, r.deriv_next, t, h, 1);
                finished = true;
            }
        }
        if (!finished) {
            out.max_drift = std::max(out.max_drift, std::abs(energy(r.next) - h0));
        }
        if (r.next[1] != 0.0) {
            y_left_section = true;
        }

        t += h;
        s = r.next;
        d = r.deriv_next;
        if (opts.keep_trace) {
            out.trace.samples.push_back({t, s[0], s[1]});
        }
        if (finished) {
            break;
        }

        const double err = std::max(r.err_norm, 1e-10);
        double factor = safety * std::pow(err, -alpha_pi) * std::pow(prev_err, beta_pi);
        factor = std::clamp(factor, min_factor, max_factor);
        prev_err = err;
        h *= factor;
    }
    out.trace.max_drift = out.max_drift;
    return out;
}

PeriodSample orbit_period(const PotentialSystem& sys, double xi, double tol)
{
    const OrbitResult r = integrate_orbit(sys, xi, tol);
    PeriodSample s;
    s.xi = xi;
    s.h = sys.G(xi);
    s.T = 2.0 * r.half_time;
    // Half-period and full-return timings are independent event solves.
    s.err_est = std::max(std::abs(r.full_time - s.T), tol * s.T);
    s.method = PeriodMethod::OdeOracle;
    return s;
}

double energy_drift(const PotentialSystem& sys, double xi, double tol)
{
    return integrate_orbit(sys, xi, tol).max_drift;
}

void write_trace_csv(const PotentialSystem& sys, const OrbitTrace& trace, const std::filesystem::path& path)
{
    std::string body = "t,x,y,H\n";
    for (const auto& p : trace.samples) {
        body += format_double(p.t) + ',' + format_double(p.x) + ',' + format_double(p.y) + ',' +
                format_double(0.5 * p.y * p.y + sys.G(p.x)) + '\n';
    }
    write_file_atomic(path, body);
}

} // namespace periodfn
