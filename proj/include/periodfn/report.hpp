#pragma once

// Desk-scale verification pipeline and serialization of its results.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "periodfn/period_function.hpp"
#include "periodfn/quadrature.hpp"

namespace periodfn {

inline constexpr std::string_view tool_version = "0.1.0";

struct AnalysisConfig {
    QuadratureConfig quadrature;
    double oracle_tol = 1e-11;
    double lambda_eps = 1e-5;
};

enum class CheckStatus { Pass, Fail, Skip };

std::string_view to_string(CheckStatus s) noexcept;

// `margin` is positive when the check passes (threshold minus measured, or the
// analogous slack for two-sided checks).
struct CheckResult {
    CheckStatus status = CheckStatus::Pass;
    double measured = 0.0;
    double threshold = 0.0;
    double margin = 0.0;
    std::string detail;
};

struct VerifyReport {
    double lambda = 0.0;
    int k_max = 0;
    std::string orientation;
    std::vector<TwoPiBracket> brackets;
    std::vector<double> two_pi_levels;
    std::vector<CriticalPeriod> critical_periods;
    std::map<std::string, CheckResult> checks;
    AnalysisConfig config;

    bool all_passed() const;
};

// Runs center validation, bracket signs, 2pi-levels, critical periods with
// alternation and interleaving, the Bessel identity suite and ODE oracle spot
// checks. Throws DegenerateIsochronous for lambda = 0 and InvalidParameter for
// k_max outside [1, 20] or a lambda whose center is not global on the range.
VerifyReport run_verify(double lambda, int k_max, const AnalysisConfig& cfg = {});

struct SampleRecord {
    double lambda;
    PeriodSample sample;
};

enum class ExportFormat { Csv, Json };

// Header `lambda,xi,h,T,T_err,method`, rows in ascending xi, 17 significant digits.
std::string samples_to_csv(std::vector<SampleRecord> samples);
nlohmann::ordered_json samples_to_json(std::vector<SampleRecord> samples);
void export_samples(const std::vector<SampleRecord>& samples, const std::filesystem::path& path, ExportFormat format);

nlohmann::ordered_json to_json(const AnalysisConfig& cfg);
nlohmann::ordered_json to_json(const PeriodSample& s);
nlohmann::ordered_json to_json(const CriticalPeriod& c);
nlohmann::ordered_json to_json(const TwoPiBracket& b);
nlohmann::ordered_json to_json(const VerifyReport& r);

} // namespace periodfn
