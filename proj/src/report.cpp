#include "periodfn/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "periodfn/bessel.hpp"
#include "periodfn/error.hpp"
#include "periodfn/io_util.hpp"
#include "periodfn/ode_oracle.hpp"

namespace periodfn {

namespace {

using json = nlohmann::ordered_json;

CheckResult upper_bound_check(double measured, double threshold, std::string detail)
{
    CheckResult c;
    c.measured = measured;
    c.threshold = threshold;
    c.margin = threshold - measured;
    c.status = measured <= threshold ? CheckStatus::Pass : CheckStatus::Fail;
    c.detail = std::move(detail);
    return c;
}

CheckResult lower_bound_check(double measured, double threshold, std::string detail)
{
    CheckResult c;
    c.measured = measured;
    c.threshold = threshold;
    c.margin = measured - threshold;
    c.status = measured >= threshold ? CheckStatus::Pass : CheckStatus::Fail;
    c.detail = std::move(detail);
    return c;
}

CheckResult isochrony_baseline(const QuadratureConfig& cfg)
{
    const PotentialSystem linear(0.0);
    double worst = 0.0;
    constexpr int n = 50;
    for (int i = 0; i < n; ++i) {
        const double h = std::pow(10.0, -6.0 + 12.0 * i / (n - 1));
        worst = std::max(worst, std::abs(period_at_energy(linear, h, cfg).T - two_pi));
    }
    return upper_bound_check(worst, 1e-9, "lambda = 0, 50 log-spaced h in [1e-6, 1e6]: max |T - 2pi|");
}

CheckResult small_h(const PotentialSystem& sys, const QuadratureConfig& cfg)
{
    if (sys.is_nilpotent()) {
        CheckResult c;
        c.status = CheckStatus::Skip;
        c.detail = "nilpotent center: T(0+) is infinite, no expansion";
        return c;
    }
    const SmallHReport r = small_h_check(sys, {1e-2, 1e-3}, cfg);
    const double ratio = std::abs(r.entries[0].residual / r.entries[1].residual);
    CheckResult c;
    c.measured = ratio;
    c.threshold = 50.0;
    c.margin = std::min(ratio - 50.0, 200.0 - ratio);
    c.status = (ratio >= 50.0 && ratio <= 200.0) ? CheckStatus::Pass : CheckStatus::Fail;
    c.detail = "|R(1e-2)/R(1e-3)| in [50, 200] for the O(h^2) remainder";
    return c;
}

CheckResult opial(const PotentialSystem& sys)
{
    // For lambda > 0 the indicator is negative on (0, 2pi), positive for lambda < 0.
    const double orient = sys.lambda() > 0.0 ? -1.0 : 1.0;
    double worst = std::numeric_limits<double>::infinity();
    constexpr int n = 500;
    for (int i = 1; i <= n; ++i) {
        const double x = two_pi * i / (n + 1);
        worst = std::min(worst, orient * opial_indicator(sys, x));
    }
    const std::vector<double> zeros = opial_sign_changes(sys, 20.0);
    const auto distance_to = [&](double target) {
        double best = std::numeric_limits<double>::infinity();
        for (double z : zeros) {
            best = std::min(best, std::abs(z - target));
        }
        return best;
    };
    const double miss = std::max(distance_to(two_pi), distance_to(2.0 * two_pi));
    CheckResult c;
    c.measured = miss;
    c.threshold = 1e-10;
    c.margin = std::min(1e-10 - miss, worst);
    c.status = (worst > 0.0 && miss <= 1e-10) ? CheckStatus::Pass : CheckStatus::Fail;
    c.detail = "indicator keeps one sign on (0, 2pi) and vanishes at 2pi and 4pi";
    return c;
}

CheckResult bessel_identity()
{
    double identity = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double xi = 20.0 * i / 199.0;
        identity = std::max(identity, std::abs(bessel::variational_integral(xi).value - two_pi * bessel::j1(xi).value));
    }
    double cross = 0.0;
    for (int i = 0; i <= 500; ++i) {
        const double xi = 12.0 * i / 500.0;
        cross = std::max(cross, std::abs(bessel::j1_series(xi).value - bessel::j1_integral(xi).value));
    }
    CheckResult c;
    c.measured = identity;
    c.threshold = 1e-10;
    c.margin = std::min(1e-10 - identity, 1e-12 - cross);
    c.status = (identity <= 1e-10 && cross <= 1e-12) ? CheckStatus::Pass : CheckStatus::Fail;
    c.detail = "max |int sin(xi cos s) cos s ds - 2pi J1| on [0, 20]; series vs integral on [0, 12] = " +
               format_double(cross);
    return c;
}

CheckResult oracle_agreement(const PotentialSystem& sys, double xi_max, const AnalysisConfig& cfg)
{
    double worst_rel = 0.0;
    double worst_drift = 0.0;
    constexpr int n = 10;
    for (int i = 0; i < n; ++i) {
        const double xi = 0.5 + (xi_max - 0.5) * i / (n - 1);
        const PeriodSample quad = period_at_amplitude(sys, xi, cfg.quadrature);
        const OrbitResult orbit = integrate_orbit(sys, xi, cfg.oracle_tol);
        worst_rel = std::max(worst_rel, std::abs(2.0 * orbit.half_time - quad.T) / quad.T);
        worst_drift = std::max(worst_drift, orbit.max_drift / (1.0 + quad.h));
    }
    CheckResult c;
    c.measured = worst_rel;
    c.threshold = 1e-7;
    c.margin = std::min(1e-7 - worst_rel, 1e-8 - worst_drift);
    c.status = (worst_rel <= 1e-7 && worst_drift <= 1e-8) ? CheckStatus::Pass : CheckStatus::Fail;
    c.detail = "10 amplitudes: max |T_quad - T_ode| / T; max drift / (1 + h) = " + format_double(worst_drift);
    return c;
}

CheckResult alternation(const std::vector<CriticalPeriod>& cps)
{
    int breaks = 0;
    for (std::size_t i = 0; i + 1 < cps.size(); ++i) {
        const auto& a = cps[i];
        const auto& b = cps[i + 1];
        if (a.kind == b.kind) {
            ++breaks;
            continue;
        }
        const double t_max = a.kind == ExtremumKind::Max ? a.T_star : b.T_star;
        const double t_min = a.kind == ExtremumKind::Max ? b.T_star : a.T_star;
        if (!(t_max > t_min)) {
            ++breaks;
        }
    }
    CheckResult c;
    c.measured = breaks;
    c.threshold = 0.0;
    c.margin = 0.0 - breaks;
    c.status = (breaks == 0 && !cps.empty()) ? CheckStatus::Pass : CheckStatus::Fail;
    c.detail = std::to_string(cps.size()) + " extrema; kinds alternate and maxima exceed neighbouring minima";
    return c;
}

CheckResult interleaving(const std::vector<double>& levels, const std::vector<CriticalPeriod>& cps)
{
    int empty_gaps = 0;
    for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
        const bool found = std::any_of(cps.begin(), cps.end(), [&](const CriticalPeriod& c) {
            return c.h_star > levels[i] && c.h_star < levels[i + 1];
        });
        if (!found) {
            ++empty_gaps;
        }
    }
    CheckResult c;
    c.measured = empty_gaps;
    c.threshold = 0.0;
    c.margin = 0.0 - empty_gaps;
    c.status = empty_gaps == 0 ? CheckStatus::Pass : CheckStatus::Fail;
    c.detail = "every gap between consecutive 2pi-levels holds an extremum";
    return c;
}

CheckResult non_isochrony(const PotentialSystem& sys, double xi_max, const QuadratureConfig& cfg)
{
    const std::vector<ScanPoint> scan = scan_period(sys, 0.5, xi_max, 16, cfg);
    double best = 0.0;
    for (std::size_t i = 0; i < scan.size(); ++i) {
        for (std::size_t j = i + 1; j < scan.size(); ++j) {
            const auto& a = scan[i].sample;
            const auto& b = scan[j].sample;
            const double noise = std::max(a.err_est + b.err_est, 1e-15 * (a.T + b.T));
            best = std::max(best, std::abs(a.T - b.T) / noise);
        }
    }
    return lower_bound_check(best, 100.0, "largest |T_i - T_j| over combined error estimates on a 16-point scan");
}

} // namespace

std::string_view to_string(CheckStatus s) noexcept
{
    switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skip: return "skip";
    }
    return "unknown";
}

bool VerifyReport::all_passed() const
{
    return std::none_of(checks.begin(), checks.end(),
                        [](const auto& kv) { return kv.second.status == CheckStatus::Fail; });
}

VerifyReport run_verify(double lambda, int k_max, const AnalysisConfig& cfg)
{
    if (k_max < 1 || k_max > 20) {
        throw Error(ErrorKind::InvalidParameter, "k_max must lie in [1, 20]");
    }
    const PotentialSystem sys(lambda);
    if (lambda == 0.0) {
        throw Error(ErrorKind::DegenerateIsochronous, "lambda = 0 is the isochronous linear center; nothing to verify");
    }
    cfg.quadrature.validate();
    const double xi_max = (2.0 * k_max + 1.0) * pi;
    const CenterValidity validity = validate_center(sys, xi_max);
    if (!validity.is_global) {
        throw Error(ErrorKind::InvalidParameter, "lambda = " + format_double(lambda) +
                                                     " is outside the validated window: g vanishes at x = " +
                                                     format_double(*validity.first_sign_failure));
    }

    VerifyReport r;
    r.lambda = lambda;
    r.k_max = k_max;
    r.config = cfg;
    r.orientation = lambda > 0.0 ? "T(h_k) >= 2pi >= T(hbar_k)" : "T(h_k) <= 2pi <= T(hbar_k) (swapped for lambda < 0)";

    r.checks["isochrony-baseline"] = isochrony_baseline(cfg.quadrature);
    r.checks["small-h"] = small_h(sys, cfg.quadrature);
    r.checks["opial"] = opial(sys);
    r.checks["bessel-identity"] = bessel_identity();

    try {
        r.brackets = two_pi_brackets(sys, k_max, cfg.quadrature);
        double slack = std::numeric_limits<double>::infinity();
        const double orient = lambda > 0.0 ? 1.0 : -1.0;
        for (const auto& b : r.brackets) {
            // Expected: orient * (T(2k pi) - 2pi) >= 0 >= orient * (T((2k+1) pi) - 2pi).
            const bool even_is_lo = b.lower_is_even;
            const double t_even = even_is_lo ? b.T_lo : b.T_hi;
            const double t_odd = even_is_lo ? b.T_hi : b.T_lo;
            slack = std::min({slack, orient * (t_even - two_pi) + 1e-8, -orient * (t_odd - two_pi) + 1e-8});
        }
        r.checks["sign-brackets"] = lower_bound_check(slack, 0.0, "T - 2pi at the bracket ends has the predicted signs "
                                                                  "(1e-8 slack), k = 1.." + std::to_string(k_max));
        r.two_pi_levels = find_two_pi_levels(sys, k_max, cfg.quadrature);
        double worst = 0.0;
        for (double h : r.two_pi_levels) {
            worst = std::max(worst, std::abs(period_at_energy(sys, h, cfg.quadrature).T - two_pi));
        }
        CheckResult levels = upper_bound_check(worst, 1e-9, "max |T(h) - 2pi| over the located levels");
        if (static_cast<int>(r.two_pi_levels.size()) < k_max) {
            levels.status = CheckStatus::Fail;
            levels.detail += "; fewer levels than brackets";
        }
        r.checks["two-pi-levels"] = levels;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::SignViolation) {
            throw;
        }
        CheckResult c;
        c.status = CheckStatus::Fail;
        c.margin = -1.0;
        c.detail = e.what();
        r.checks["sign-brackets"] = c;
    }

    const CriticalScan scan = find_critical_periods(sys, xi_max, cfg.quadrature);
    r.critical_periods = scan.periods;
    CheckResult alt = alternation(r.critical_periods);
    if (static_cast<int>(r.critical_periods.size()) < k_max - 1) {
        alt.status = CheckStatus::Fail;
        alt.detail += "; fewer than k_max - 1 extrema";
    }
    if (!scan.ambiguous.empty()) {
        alt.detail += "; " + std::to_string(scan.ambiguous.size()) + " ambiguous grid cells";
    }
    r.checks["alternation"] = alt;
    if (!r.two_pi_levels.empty()) {
        r.checks["interleaving"] = interleaving(r.two_pi_levels, r.critical_periods);
    }
    r.checks["non-isochrony"] = non_isochrony(sys, xi_max, cfg.quadrature);
    r.checks["oracle-agreement"] = oracle_agreement(sys, xi_max, cfg);
    return r;
}

std::string samples_to_csv(std::vector<SampleRecord> samples)
{
    std::stable_sort(samples.begin(), samples.end(),
                     [](const SampleRecord& a, const SampleRecord& b) { return a.sample.xi < b.sample.xi; });
    std::string out = "lambda,xi,h,T,T_err,method\n";
    for (const auto& rec : samples) {
        const auto& s = rec.sample;
        out += format_double(rec.lambda) + ',' + format_double(s.xi) + ',' + format_double(s.h) + ',' +
               format_double(s.T) + ',' + format_double(s.err_est) + ',' + std::string(to_string(s.method)) + '\n';
    }
    return out;
}

json samples_to_json(std::vector<SampleRecord> samples)
{
    std::stable_sort(samples.begin(), samples.end(),
                     [](const SampleRecord& a, const SampleRecord& b) { return a.sample.xi < b.sample.xi; });
    json arr = json::array();
    for (const auto& rec : samples) {
        json row = {{"lambda", rec.lambda}};
        row.update(to_json(rec.sample));
        arr.push_back(std::move(row));
    }
    return arr;
}

void export_samples(const std::vector<SampleRecord>& samples, const std::filesystem::path& path, ExportFormat format)
{
    if (format == ExportFormat::Csv) {
        write_file_atomic(path, samples_to_csv(samples));
    } else {
        write_file_atomic(path, samples_to_json(samples).dump(2) + '\n');
    }
}

json to_json(const AnalysisConfig& cfg)
{
    return {{"rel_tol", cfg.quadrature.rel_tol},
            {"max_depth", cfg.quadrature.max_depth},
            {"base_nodes", cfg.quadrature.base_nodes},
            {"oracle_tol", cfg.oracle_tol},
            {"lambda_eps", cfg.lambda_eps}};
}

json to_json(const PeriodSample& s)
{
    return {{"xi", s.xi}, {"h", s.h}, {"T", s.T}, {"T_err", s.err_est}, {"method", to_string(s.method)}};
}

json to_json(const CriticalPeriod& c)
{
    return {{"xi_star", c.xi_star},
            {"h_star", c.h_star},
            {"T_star", c.T_star},
            {"kind", to_string(c.kind)},
            {"refine_err", c.refine_err}};
}

json to_json(const TwoPiBracket& b)
{
    return {{"k", b.k},           {"h_lo", b.h_lo},       {"h_hi", b.h_hi},       {"xi_lo", b.xi_lo},
            {"xi_hi", b.xi_hi},   {"T_lo", b.T_lo},       {"T_hi", b.T_hi},       {"err_lo", b.err_lo},
            {"err_hi", b.err_hi}, {"sign_lo", b.sign_lo}, {"sign_hi", b.sign_hi}, {"degenerate", b.degenerate},
            {"lower_is_even", b.lower_is_even}};
}

json to_json(const VerifyReport& r)
{
    json out;
    out["tool_version"] = tool_version;
    out["lambda"] = r.lambda;
    out["k_max"] = r.k_max;
    out["config"] = to_json(r.config);
    out["orientation"] = r.orientation;
    out["all_passed"] = r.all_passed();
    json checks = json::object();
    for (const auto& [name, c] : r.checks) {
        checks[name] = {{"status", to_string(c.status)},
                        {"measured", c.measured},
                        {"threshold", c.threshold},
                        {"margin", c.margin},
                        {"detail", c.detail}};
    }
    out["checks"] = std::move(checks);
    json brackets = json::array();
    for (const auto& b : r.brackets) {
        brackets.push_back(to_json(b));
    }
    out["brackets"] = std::move(brackets);
    out["two_pi_levels"] = r.two_pi_levels;
    json cps = json::array();
    for (const auto& c : r.critical_periods) {
        cps.push_back(to_json(c));
    }
    out["critical_periods"] = std::move(cps);
    return out;
}

} // namespace periodfn
