// Command-line front end: single period evaluations, scans, critical periods,
// 2pi-levels, the Opial indicator, Bessel utilities, the ODE oracle and the
// verification pipeline.
//
// Exit codes: 0 success / all checks pass, 1 check or numerical failure,
// 2 usage or configuration error.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "periodfn/bessel.hpp"
#include "periodfn/error.hpp"
#include "periodfn/io_util.hpp"
#include "periodfn/ode_oracle.hpp"
#include "periodfn/period_function.hpp"
#include "periodfn/report.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace periodfn;

constexpr int exit_ok = 0;
constexpr int exit_check_failed = 1;
constexpr int exit_usage = 2;

struct GlobalOptions {
    std::optional<double> rel_tol;
    std::optional<int> max_depth;
    std::optional<double> oracle_tol;
    std::optional<double> lambda_eps;
    std::string config_path;
    std::string format = "json";
    std::string out_path;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct Output {
    json payload;
    std::optional<std::string> csv; // set when the command has a tabular form
    int exit_code = exit_ok;
};

AnalysisConfig resolve_config(const GlobalOptions& g)
{
    AnalysisConfig cfg;
    if (!g.config_path.empty()) {
        std::ifstream in(g.config_path);
        if (!in) {
            throw Error(ErrorKind::InvalidParameter, "cannot read config file " + g.config_path);
        }
        json file;
        try {
            file = json::parse(in);
        } catch (const json::exception& e) {
            throw Error(ErrorKind::InvalidParameter, "malformed config file " + g.config_path + ": " + e.what());
        }
        for (const auto& [key, value] : file.items()) {
            if (key == "rel_tol") {
                cfg.quadrature.rel_tol = value.get<double>();
            } else if (key == "max_depth") {
                cfg.quadrature.max_depth = value.get<int>();
            } else if (key == "base_nodes") {
                cfg.quadrature.base_nodes = value.get<int>();
            } else if (key == "oracle_tol") {
                cfg.oracle_tol = value.get<double>();
            } else if (key == "lambda_eps") {
                cfg.lambda_eps = value.get<double>();
            } else {
                throw Error(ErrorKind::InvalidParameter, "unknown config key '" + key + "'");
            }
        }
    }
    if (g.rel_tol) {
        cfg.quadrature.rel_tol = *g.rel_tol;
    }
    if (g.max_depth) {
        cfg.quadrature.max_depth = *g.max_depth;
    }
    if (g.oracle_tol) {
        cfg.oracle_tol = *g.oracle_tol;
    }
    if (g.lambda_eps) {
        cfg.lambda_eps = *g.lambda_eps;
    }
    cfg.quadrature.validate();
    return cfg;
}

std::string table_to_csv(const Table& t)
{
    std::string out;
    const auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            out += (i ? "," : "") + cells[i];
        }
        out += '\n';
    };
    line(t.header);
    for (const auto& r : t.rows) {
        line(r);
    }
    return out;
}

json envelope(std::string_view command, const AnalysisConfig& cfg)
{
    json j;
    j["tool_version"] = tool_version;
    j["command"] = command;
    j["config"] = to_json(cfg);
    return j;
}

void emit(const Output& out, const GlobalOptions& g, int argc, char** argv)
{
    std::string body;
    if (g.format == "csv") {
        if (!out.csv) {
            throw Error(ErrorKind::InvalidParameter, "this command has no CSV form; use --format json");
        }
        body = *out.csv;
    } else {
        body = out.payload.dump(2) + '\n';
    }
    if (g.out_path.empty()) {
        std::cout << body;
        return;
    }
    write_file_atomic(g.out_path, body);
    // Run metadata lives beside the payload so the payload stays byte-stable.
    json meta;
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    meta["generated_at"] = stamp;
    meta["tool_version"] = tool_version;
    std::vector<std::string> args(argv, argv + argc);
    meta["argv"] = args;
    write_file_atomic(g.out_path + ".meta.json", meta.dump(2) + '\n');
}

Output samples_output(std::string_view command, const AnalysisConfig& cfg, double lambda,
                      const std::vector<PeriodSample>& samples, json extra = json::object())
{
    std::vector<SampleRecord> records;
    for (const auto& s : samples) {
        records.push_back({lambda, s});
    }
    Output out;
    out.payload = envelope(command, cfg);
    out.payload["lambda"] = lambda;
    for (auto& [k, v] : extra.items()) {
        out.payload[k] = v;
    }
    out.payload["samples"] = samples_to_json(records);
    out.csv = samples_to_csv(records);
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Period function toolkit for x'' + x + lambda sin(x) = 0"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--rel-tol", g.rel_tol, "Quadrature relative tolerance (default 1e-10)");
    app.add_option("--max-depth", g.max_depth, "Adaptive quadrature depth cap (default 40)");
    app.add_option("--oracle-tol", g.oracle_tol, "ODE oracle tolerance (default 1e-11)");
    app.add_option("--lambda-eps", g.lambda_eps, "Step for the lambda-derivative (default 1e-5)");
    app.add_option("--config", g.config_path, "JSON config file; flags take precedence");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", g.out_path, "Write output to this file instead of stdout");

    double lambda = 1.0;
    std::optional<double> xi;
    std::optional<double> h;
    auto* period = app.add_subcommand("period", "Period T at one amplitude or energy");
    period->set_help_flag("--help", "Print this help message and exit");
    period->add_option("--lambda", lambda)->required();
    auto* xi_opt = period->add_option("--xi", xi, "Amplitude");
    auto* h_opt = period->add_option("--h", h, "Energy level");
    xi_opt->excludes(h_opt);
    bool with_derivative = false;
    period->add_flag("--derivative", with_derivative, "Also report dT/dh");

    double xi_min = 0.1;
    double xi_max = 10.0;
    int n = 50;
    auto* scan = app.add_subcommand("scan", "Period on a uniform amplitude grid");
    scan->add_option("--lambda", lambda)->required();
    scan->add_option("--xi-min", xi_min)->required();
    scan->add_option("--xi-max", xi_max)->required();
    scan->add_option("--n", n)->required();

    auto* critical = app.add_subcommand("critical", "Critical periods on (0, xi_max]");
    critical->add_option("--lambda", lambda)->required();
    critical->add_option("--xi-max", xi_max)->required();

    int k_max = 5;
    auto* two_pi_cmd = app.add_subcommand("two-pi", "2pi brackets and the energies with T = 2pi");
    two_pi_cmd->add_option("--lambda", lambda)->required();
    two_pi_cmd->add_option("--k-max", k_max)->required();

    double x_max = 20.0;
    auto* opial_cmd = app.add_subcommand("opial", "Zeros of the Opial indicator d/dx[G/x^2]");
    opial_cmd->add_option("--lambda", lambda)->required();
    opial_cmd->add_option("--x-max", x_max)->required();

    std::string bessel_op;
    double bessel_xi = 1.0;
    int zero_count = 5;
    auto* bessel_cmd = app.add_subcommand("bessel", "J1 utilities: j1, zeros, identity");
    bessel_cmd->add_option("op", bessel_op)->required()->check(CLI::IsMember({"j1", "zeros", "identity"}));
    bessel_cmd->add_option("--xi", bessel_xi, "Argument for j1 / identity");
    bessel_cmd->add_option("--n", zero_count, "Number of zeros");

    auto* verify = app.add_subcommand("verify", "Run the verification pipeline");
    verify->add_option("--lambda", lambda)->required();
    verify->add_option("--k-max", k_max)->required();

    double oracle_xi = 1.0;
    std::string trace_path;
    auto* oracle = app.add_subcommand("oracle", "Period by direct ODE integration");
    oracle->add_option("--lambda", lambda)->required();
    oracle->add_option("--xi", oracle_xi)->required();
    oracle->add_option("--trace", trace_path, "Dump the orbit as CSV t,x,y,H");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        const AnalysisConfig cfg = resolve_config(g);
        const QuadratureConfig& qc = cfg.quadrature;
        Output out;

        if (*period) {
            if (!xi && !h) {
                throw Error(ErrorKind::InvalidParameter, "period needs --xi or --h");
            }
            const PotentialSystem sys(lambda);
            const PeriodSample s = xi ? period_at_amplitude(sys, *xi, qc) : period_at_energy(sys, *h, qc);
            json extra = json::object();
            if (with_derivative) {
                const PeriodDerivative d = period_derivative(sys, s.h, qc);
                extra["dT_dh"] = {{"value", d.value}, {"err_est", d.err_est}};
            }
            out = samples_output("period", cfg, lambda, {s}, extra);
        } else if (*scan) {
            const PotentialSystem sys(lambda);
            std::vector<PeriodSample> samples;
            json failed = json::array();
            for (const auto& p : scan_period(sys, xi_min, xi_max, n, qc)) {
                samples.push_back(p.sample);
                if (!p.converged) {
                    failed.push_back(p.sample.xi);
                }
            }
            out = samples_output("scan", cfg, lambda, samples, {{"unconverged_xi", failed}});
        } else if (*critical) {
            const PotentialSystem sys(lambda);
            const CriticalScan cs = find_critical_periods(sys, xi_max, qc);
            out.payload = envelope("critical", cfg);
            out.payload["lambda"] = lambda;
            out.payload["xi_max"] = xi_max;
            json arr = json::array();
            Table t{{"xi_star", "h_star", "T_star", "kind", "refine_err"}, {}};
            for (const auto& c : cs.periods) {
                arr.push_back(to_json(c));
                t.rows.push_back({format_double(c.xi_star), format_double(c.h_star), format_double(c.T_star),
                                  std::string(to_string(c.kind)), format_double(c.refine_err)});
            }
            out.payload["critical_periods"] = arr;
            json amb = json::array();
            for (const auto& a : cs.ambiguous) {
                amb.push_back({a.xi_lo, a.xi_hi});
            }
            out.payload["ambiguous_brackets"] = amb;
            out.csv = table_to_csv(t);
        } else if (*two_pi_cmd) {
            const PotentialSystem sys(lambda);
            const auto brackets = two_pi_brackets(sys, k_max, qc);
            out.payload = envelope("two-pi", cfg);
            out.payload["lambda"] = lambda;
            json arr = json::array();
            Table t{{"k", "h_lo", "h_hi", "T_lo", "T_hi", "sign_lo", "sign_hi"}, {}};
            for (const auto& b : brackets) {
                arr.push_back(to_json(b));
                t.rows.push_back({std::to_string(b.k), format_double(b.h_lo), format_double(b.h_hi),
                                  format_double(b.T_lo), format_double(b.T_hi), std::to_string(b.sign_lo),
                                  std::to_string(b.sign_hi)});
            }
            out.payload["brackets"] = arr;
            if (lambda == 0.0) {
                out.payload["degenerate_isochronous"] = true;
            } else {
                out.payload["levels"] = find_two_pi_levels(sys, k_max, qc);
            }
            out.csv = table_to_csv(t);
        } else if (*opial_cmd) {
            const PotentialSystem sys(lambda);
            const auto zeros = opial_sign_changes(sys, x_max);
            out.payload = envelope("opial", cfg);
            out.payload["lambda"] = lambda;
            out.payload["x_max"] = x_max;
            out.payload["zeros"] = zeros;
            Table t{{"x", "indicator_left", "indicator_right"}, {}};
            for (double z : zeros) {
                t.rows.push_back({format_double(z), format_double(opial_indicator(sys, z - 1e-3)),
                                  format_double(opial_indicator(sys, z + 1e-3))});
            }
            out.csv = table_to_csv(t);
        } else if (*bessel_cmd) {
            out.payload = envelope("bessel", cfg);
            out.payload["op"] = bessel_op;
            if (bessel_op == "j1") {
                const auto e = bessel::j1(bessel_xi);
                out.payload["xi"] = bessel_xi;
                out.payload["value"] = e.value;
                out.payload["method"] = bessel::to_string(e.method);
                out.payload["err_bound"] = e.err_bound;
                out.csv = table_to_csv({{"xi", "value", "method", "err_bound"},
                                        {{format_double(bessel_xi), format_double(e.value),
                                          std::string(bessel::to_string(e.method)), format_double(e.err_bound)}}});
            } else if (bessel_op == "zeros") {
                const auto zeros = bessel::j1_zeros(zero_count);
                out.payload["zeros"] = zeros;
                Table t{{"index", "zero"}, {}};
                for (std::size_t i = 0; i < zeros.size(); ++i) {
                    t.rows.push_back({std::to_string(i + 1), format_double(zeros[i])});
                }
                out.csv = table_to_csv(t);
            } else {
                const auto v = bessel::variational_integral(bessel_xi);
                const double rhs = two_pi * bessel::j1(bessel_xi).value;
                out.payload["xi"] = bessel_xi;
                out.payload["integral"] = v.value;
                out.payload["two_pi_j1"] = rhs;
                out.payload["difference"] = v.value - rhs;
                out.csv = table_to_csv({{"xi", "integral", "two_pi_j1", "difference"},
                                        {{format_double(bessel_xi), format_double(v.value), format_double(rhs),
                                          format_double(v.value - rhs)}}});
            }
        } else if (*verify) {
            const VerifyReport r = run_verify(lambda, k_max, cfg);
            out.payload = to_json(r);
            Table t{{"check", "status", "measured", "threshold", "margin"}, {}};
            for (const auto& [name, c] : r.checks) {
                t.rows.push_back({name, std::string(to_string(c.status)), format_double(c.measured),
                                  format_double(c.threshold), format_double(c.margin)});
            }
            out.csv = table_to_csv(t);
            for (const auto& [name, c] : r.checks) {
                std::cerr << "[" << to_string(c.status) << "] " << name << ": " << c.detail << '\n';
            }
            out.exit_code = r.all_passed() ? exit_ok : exit_check_failed;
        } else if (*oracle) {
            const PotentialSystem sys(lambda);
            OracleOptions opts;
            opts.keep_trace = !trace_path.empty();
            const OrbitResult r = integrate_orbit(sys, oracle_xi, cfg.oracle_tol, opts);
            PeriodSample s;
            s.xi = oracle_xi;
            s.h = sys.G(oracle_xi);
            s.T = 2.0 * r.half_time;
            s.err_est = std::max(std::abs(r.full_time - s.T), cfg.oracle_tol * s.T);
            s.method = PeriodMethod::OdeOracle;
            out = samples_output("oracle", cfg, lambda, {s},
                                 {{"quarter_time", r.quarter_time},
                                  {"full_time", r.full_time},
                                  {"max_drift", r.max_drift},
                                  {"accepted_steps", r.accepted_steps},
                                  {"rejected_steps", r.rejected_steps}});
            if (opts.keep_trace) {
                write_trace_csv(sys, r.trace, trace_path);
            }
        }

        emit(out, g, argc, argv);
        return out.exit_code;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        switch (e.kind()) {
        case ErrorKind::InvalidParameter:
        case ErrorKind::DegenerateIsochronous:
        case ErrorKind::NonMonotoneEnergy:
        case ErrorKind::RangeExceeded:
        case ErrorKind::Io:
            return exit_usage;
        default:
            return exit_check_failed;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
}
