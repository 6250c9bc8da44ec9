#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "periodfn/error.hpp"
#include "periodfn/io_util.hpp"
#include "periodfn/report.hpp"

using namespace periodfn;

namespace {

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

PeriodSample sample(double xi, double T)
{
    PeriodSample s;
    s.xi = xi;
    s.h = xi * xi / 2;
    s.T = T;
    s.err_est = 1e-12;
    return s;
}

} // namespace

TEST_CASE("format_double round-trips")
{
    for (double v : {0.1, 2.0 / 3.0, 6.283185307179586, 1e-300, -123456.789}) {
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(1.0) == "1");
}

TEST_CASE("csv export of one linear sample")
{
    const auto s = period_at_amplitude(PotentialSystem(0.0), 1.0);
    const std::string csv = samples_to_csv({{0.0, s}});
    const std::string prefix = "lambda,xi,h,T,T_err,method\n0,1,0.5,6.28318530717958";
    CHECK(csv.substr(0, prefix.size()) == prefix);
    CHECK(csv.find(",quadrature\n") != std::string::npos);
}

TEST_CASE("empty export is header only")
{
    const auto dir = std::filesystem::temp_directory_path();
    const auto path = dir / "periodfn_empty.csv";
    export_samples({}, path, ExportFormat::Csv);
    CHECK(slurp(path) == "lambda,xi,h,T,T_err,method\n");
    std::filesystem::remove(path);
}

TEST_CASE("rows come out in ascending xi")
{
    const std::vector<SampleRecord> recs = {{1.0, sample(3.0, 6.0)}, {1.0, sample(1.0, 5.0)}, {1.0, sample(2.0, 5.5)}};
    const std::string csv = samples_to_csv(recs);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    std::vector<std::string> firsts;
    while (std::getline(in, line)) {
        firsts.push_back(line.substr(0, line.find(',', 2)));
    }
    REQUIRE(firsts.size() == 3);
    CHECK(firsts[0] == "1,1");
    CHECK(firsts[1] == "1,2");
    CHECK(firsts[2] == "1,3");

    const auto j = samples_to_json(recs);
    REQUIRE(j.size() == 3);
    CHECK(j[0]["xi"] == 1.0);
    CHECK(j[2]["xi"] == 3.0);
    CHECK(j[0].contains("lambda"));
    CHECK(j[0].contains("T_err"));
    CHECK(j[0]["method"] == "quadrature");
}

TEST_CASE("export is deterministic and atomic")
{
    const std::vector<SampleRecord> recs = {{0.5, sample(2.0, 6.1)}, {0.5, sample(1.0, 6.2)}};
    const auto dir = std::filesystem::temp_directory_path();
    const auto a = dir / "periodfn_a.json";
    const auto b = dir / "periodfn_b.json";
    export_samples(recs, a, ExportFormat::Json);
    export_samples(recs, b, ExportFormat::Json);
    CHECK(slurp(a) == slurp(b));
    CHECK_FALSE(std::filesystem::exists(a.string() + ".tmp"));
    std::filesystem::remove(a);
    std::filesystem::remove(b);
}

TEST_CASE("export to an unwritable path raises Io")
{
    try {
        export_samples({}, "/nonexistent-dir/for/sure/x.csv", ExportFormat::Csv);
        FAIL("expected Io");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Io);
        CHECK(std::string(e.what()).find("/nonexistent-dir/for/sure/x.csv") != std::string::npos);
    }
}

TEST_CASE("run_verify at lambda = 1")
{
    const auto r = run_verify(1.0, 5);
    for (const auto& [name, c] : r.checks) {
        CAPTURE(name);
        CAPTURE(c.detail);
        CHECK(c.status != CheckStatus::Fail);
    }
    CHECK(r.all_passed());
    CHECK(r.two_pi_levels.size() >= 5);
    CHECK(r.critical_periods.size() >= 4);
    for (std::size_t i = 1; i < r.critical_periods.size(); ++i) {
        CHECK(r.critical_periods[i].kind != r.critical_periods[i - 1].kind);
    }
    for (const char* name : {"isochrony-baseline", "small-h", "opial", "bessel-identity", "oracle-agreement",
                             "alternation", "sign-brackets"}) {
        CHECK(r.checks.count(name) == 1);
    }
    const auto j = to_json(r);
    CHECK(j["tool_version"] == std::string(tool_version));
    CHECK(j["all_passed"] == true);
    CHECK(j["config"]["rel_tol"] == 1e-10);
}

TEST_CASE("run_verify rejects lambda = 0 and bad k_max")
{
    try {
        (void)run_verify(0.0, 3);
        FAIL("expected DegenerateIsochronous");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DegenerateIsochronous);
    }
    CHECK_THROWS_AS(run_verify(1.0, 0), Error);
    CHECK_THROWS_AS(run_verify(1.0, 21), Error);
    CHECK_THROWS_AS(run_verify(6.0, 3), Error);
}

TEST_CASE("run_verify at lambda = -0.5 notes the swapped orientation")
{
    const auto r = run_verify(-0.5, 3);
    CHECK(r.all_passed());
    CHECK(r.orientation.find("swap") != std::string::npos);
    CHECK(r.two_pi_levels.size() >= 3);
}
