#pragma once

// Brute-force period measurement: integrate x' = -y, y' = g(x) from (xi, 0)
// with an embedded Dormand-Prince 5(4) pair and time the crossings of the
// Poincare section y = 0.

#include <filesystem>
#include <vector>

#include "periodfn/core_model.hpp"
#include "periodfn/quadrature.hpp"

namespace periodfn {

struct TracePoint {
    double t;
    double x;
    double y;
};

struct OrbitTrace {
    std::vector<TracePoint> samples;
    double h0 = 0.0;
    double max_drift = 0.0;
};

struct OrbitResult {
    double quarter_time = 0.0; // first crossing of x = 0
    double half_time = 0.0;    // crossing of y = 0 at x = -xi
    double full_time = 0.0;    // return to y = 0 at x = +xi
    double max_drift = 0.0;    // over [0, full_time]
    int accepted_steps = 0;
    int rejected_steps = 0;
    OrbitTrace trace;          // filled only when requested
};

struct OracleOptions {
    bool keep_trace = false;
    double max_time = 1e4;
};

// tol in [1e-12, 1e-6] is used as both absolute and relative tolerance.
OrbitResult integrate_orbit(const PotentialSystem& sys, double xi, double tol, const OracleOptions& opts = {});

// T = 2 * half_time.
PeriodSample orbit_period(const PotentialSystem& sys, double xi, double tol);

// max |H(x, y) - H(xi, 0)| along one full period.
double energy_drift(const PotentialSystem& sys, double xi, double tol);

// CSV with header t,x,y,H.
void write_trace_csv(const PotentialSystem& sys, const OrbitTrace& trace, const std::filesystem::path& path);

} // namespace periodfn
