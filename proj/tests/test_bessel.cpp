#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "periodfn/bessel.hpp"
#include "periodfn/error.hpp"

using namespace periodfn;
using oracle::pi;

TEST_CASE("j1_series examples")
{
    CHECK(bessel::j1_series(0.0).value == 0.0);
    const auto s = bessel::j1_series(0.2);
    CHECK(s.value == doctest::Approx(0.1 - 0.0005 + 0.2 * 0.2 * 0.2 * 0.2 * 0.2 / 384).epsilon(1e-9));
    CHECK(std::abs(s.value - oracle::j1_at_0_2) <= 1e-16);
    CHECK(std::abs(bessel::j1_series(2.0).value - bessel::j1_integral(2.0).value) <= 1e-12);
    CHECK(s.err_bound >= 0.0);
}

TEST_CASE("j1_series range guard")
{
    CHECK_NOTHROW(bessel::j1_series(14.0));
    try {
        (void)bessel::j1_series(14.5);
        FAIL("expected RangeExceeded");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::RangeExceeded);
    }
}

TEST_CASE("j1_integral examples")
{
    CHECK(bessel::j1_integral(0.0).value == 0.0);
    CHECK(std::abs(bessel::j1_integral(0.2).value - bessel::j1_series(0.2).value) <= 1e-13);
    const auto v = bessel::j1_integral(30.0);
    CHECK(std::isfinite(v.value));
    CHECK(std::abs(v.value) <= std::sqrt(2.0 / (pi * 30.0)) + 0.01);
    CHECK(v.err_bound >= 0.0);
}

TEST_CASE("j1 examples and frozen values")
{
    CHECK(bessel::j1(0.0).value == 0.0);
    CHECK(std::abs(bessel::j1_series(12.0).value - bessel::j1_integral(12.0).value) <= 1e-11);
    CHECK(std::abs(bessel::j1(3.83171).value) <= 1e-5);
    CHECK(std::abs(bessel::j1(1.0).value - oracle::j1_at_1) <= 1e-15);
    CHECK(std::abs(bessel::j1(2.0).value - oracle::j1_at_2) <= 1e-15);
    CHECK(bessel::j1(11.0).method == bessel::Method::Series);
    CHECK(bessel::j1(13.0).method == bessel::Method::Integral);
}

TEST_CASE("j1_asymptotic examples")
{
    const auto a = bessel::j1_asymptotic(3 * pi / 4);
    CHECK(a.value == doctest::Approx(std::sqrt(8.0 / (3 * pi * pi))).epsilon(1e-14));
    const double C = bessel::asymptotic_remainder_constant();
    CHECK(C > 0.0);
    CHECK(std::abs(bessel::j1_asymptotic(50.0).value - bessel::j1(50.0).value) <= C * std::pow(50.0, -1.5));
    CHECK(bessel::j1_asymptotic(50.0).err_bound == doctest::Approx(C * std::pow(50.0, -1.5)));
    try {
        (void)bessel::j1_asymptotic(0.5);
        FAIL("expected InvalidParameter");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidParameter);
    }
}

TEST_CASE("asymptotic error decays like xi^-3/2")
{
    // The pointwise error oscillates through zero, so compare the envelope
    // over one period around each point.
    auto window_max = [](double center) {
        double m = 0.0;
        for (int i = 0; i <= 400; ++i) {
            const double x = center - pi + 2 * pi * i / 400.0;
            m = std::max(m, std::abs(bessel::j1_asymptotic(x).value - bessel::j1(x).value));
        }
        return m;
    };
    const double ratio = window_max(40.0) / window_max(10.0);
    const double expected = std::pow(10.0 / 40.0, 1.5);
    CHECK(ratio >= expected / 3);
    CHECK(ratio <= expected * 3);
}

TEST_CASE("j1_zeros examples and frozen values")
{
    const auto z1 = bessel::j1_zeros(1);
    REQUIRE(z1.size() == 1);
    CHECK(z1[0] == doctest::Approx(3.831706).epsilon(1e-6));

    const auto z5 = bessel::j1_zeros(5);
    REQUIRE(z5.size() == 5);
    for (int i = 0; i < 5; ++i) {
        CHECK(std::abs(z5[i] - oracle::j1_zeros[i]) <= 1e-11);
        if (i > 0) {
            CHECK(z5[i] > z5[i - 1]);
        }
    }
    CHECK(std::abs((z5[4] - z5[3]) - pi) <= 0.05);

    const auto z2 = bessel::j1_zeros(2);
    CHECK(z2[1] == doctest::Approx(7.015587).epsilon(1e-6));
    CHECK(bessel::j1(z2[1] - 1e-3).value * bessel::j1(z2[1] + 1e-3).value < 0.0);

    CHECK_THROWS_AS(bessel::j1_zeros(0), Error);
}

TEST_CASE("variational integral examples")
{
    CHECK(bessel::variational_integral(0.0).value == 0.0);
    CHECK(std::abs(bessel::variational_integral(1.0).value - 2 * pi * bessel::j1_series(1.0).value) <= 1e-12);
    const double z = bessel::j1_zeros(1)[0];
    CHECK(std::abs(bessel::variational_integral(z).value) <= 1e-10);
}

TEST_CASE("bessel ode residual examples")
{
    CHECK(std::abs(bessel::bessel_ode_residual(1.0)) <= 2e-6);
    CHECK(std::abs(bessel::bessel_ode_residual(3.831706)) <= 1e-5 * 16);
    CHECK(std::abs(bessel::bessel_ode_residual(20.0)) <= 1e-5 * 401);
    CHECK_THROWS_AS(bessel::bessel_ode_residual(0.1), Error);
}

TEST_CASE("property: series and integral agree on [0, 12]")
{
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        const double x = 12.0 * i / 499.0;
        worst = std::max(worst, std::abs(bessel::j1_series(x).value - bessel::j1_integral(x).value));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("property: identity on [0, 20]")
{
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double x = 20.0 * i / 199.0;
        worst = std::max(worst, std::abs(bessel::variational_integral(x).value - 2 * pi * bessel::j1(x).value));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("property: small-argument limit")
{
    CHECK(std::abs(bessel::j1(1e-4).value / 1e-4 - 0.5) <= 1e-8);
    for (double x : {1e-3, 0.1, 0.5, 1.5}) {
        CHECK(bessel::j1(x).value == doctest::Approx(oracle::j1_plain_series(x)).epsilon(1e-14));
    }
}

TEST_CASE("property: zero simplicity")
{
    for (double z : bessel::j1_zeros(10)) {
        CAPTURE(z);
        CHECK(bessel::j1(z - 1e-6).value * bessel::j1(z + 1e-6).value < 0.0);
    }
}

TEST_CASE("property: envelope on [5, 100]")
{
    const double C = bessel::asymptotic_remainder_constant();
    for (int i = 0; i <= 950; ++i) {
        const double x = 5.0 + 0.1 * i;
        CAPTURE(x);
        CHECK(std::abs(bessel::j1(x).value) <= std::sqrt(2.0 / (pi * x)) + C * std::pow(x, -1.5));
    }
}

TEST_CASE("property: ode residual scale")
{
    for (double x = 0.5; x <= 30.0; x += 0.37) {
        CAPTURE(x);
        CHECK(std::abs(bessel::bessel_ode_residual(x)) <= 1e-5 * (1 + x * x));
    }
}
