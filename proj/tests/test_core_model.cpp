#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "periodfn/core_model.hpp"
#include "periodfn/error.hpp"

using namespace periodfn;

TEST_CASE("eval_g examples")
{
    CHECK(eval_g(PotentialSystem(0.0), 1.3) == 1.3);
    CHECK(eval_g(PotentialSystem(1.0), pi) == doctest::Approx(pi).epsilon(1e-15));
    CHECK(eval_g(PotentialSystem(2.0), pi / 2) == doctest::Approx(pi / 2 + 2).epsilon(1e-15));
}

TEST_CASE("eval_G examples")
{
    CHECK(eval_G(PotentialSystem(7.0), 0.0) == 0.0);
    CHECK(eval_G(PotentialSystem(1.0), 2 * pi) == doctest::Approx(2 * pi * pi).epsilon(1e-15));
    CHECK(eval_G(PotentialSystem(1.0), pi) == doctest::Approx(pi * pi / 2 + 2).epsilon(1e-15));
}

TEST_CASE("lambda below -1 or non-finite is rejected")
{
    CHECK_THROWS_AS((void)PotentialSystem(-1.5), Error);
    CHECK_THROWS_AS((void)PotentialSystem(std::nan("")), Error);
    CHECK_THROWS_AS((void)PotentialSystem(INFINITY), Error);
    try {
        PotentialSystem bad(-2.0);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidParameter);
    }
    CHECK_NOTHROW((void)PotentialSystem(-1.0));
}

TEST_CASE("g derivatives at zero")
{
    auto d0 = g_derivatives_at_zero(PotentialSystem(0.0));
    CHECK(d0.g1 == 1.0);
    CHECK(d0.g2 == 0.0);
    CHECK(d0.g3 == 0.0);
    auto d1 = g_derivatives_at_zero(PotentialSystem(1.0));
    CHECK(d1.g1 == 2.0);
    CHECK(d1.g2 == 0.0);
    CHECK(d1.g3 == -1.0);
    auto dm = g_derivatives_at_zero(PotentialSystem(-1.0));
    CHECK(dm.g1 == 0.0);
    CHECK(dm.g2 == 0.0);
    CHECK(dm.g3 == 1.0);
}

TEST_CASE("center asymptotics")
{
    auto a0 = center_asymptotics(PotentialSystem(0.0));
    CHECK(a0.period.value() == doctest::Approx(2 * pi).epsilon(1e-15));
    CHECK(a0.slope.value() == 0.0);

    auto a3 = center_asymptotics(PotentialSystem(3.0));
    CHECK(a3.period.value() == doctest::Approx(pi).epsilon(1e-15));
    CHECK(a3.slope.value() == doctest::Approx(3 * pi / 128).epsilon(1e-15));

    auto am = center_asymptotics(PotentialSystem(-1.0));
    CHECK(am.period.kind() == ExtendedReal::Kind::PlusInfinity);
    CHECK(am.slope.kind() == ExtendedReal::Kind::MinusInfinity);
    CHECK_THROWS_AS(am.period.value(), Error);
}

TEST_CASE("slope formula from g derivatives matches closed form")
{
    for (double lam : {0.1, 0.5, 1.0, 2.0, 4.0}) {
        PotentialSystem sys(lam);
        auto d = g_derivatives_at_zero(sys);
        const double formula =
            pi * (5 * d.g2 * d.g2 - 3 * d.g1 * d.g3) / (12 * std::pow(d.g1, 3.5));
        const double closed = lam * pi / (4 * std::pow(1 + lam, 2.5));
        CHECK(std::abs(formula - closed) <= 1e-14 * std::abs(closed));
        CHECK(std::abs(center_asymptotics(sys).slope.value() - closed) <= 1e-14 * std::abs(closed));
    }
}

TEST_CASE("energy_to_amplitude examples")
{
    CHECK(energy_to_amplitude(PotentialSystem(0.0), 8.0) == doctest::Approx(4.0).epsilon(1e-13));
    CHECK(energy_to_amplitude(PotentialSystem(1.0), 2 * pi * pi) == doctest::Approx(2 * pi).epsilon(1e-13));
    CHECK(energy_to_amplitude(PotentialSystem(1.0), pi * pi / 2 + 2) == doctest::Approx(pi).epsilon(1e-13));
    CHECK_THROWS_AS(energy_to_amplitude(PotentialSystem(1.0), -1.0), Error);
}

TEST_CASE("energy_to_amplitude past the monotone range")
{
    PotentialSystem sys(6.0);
    REQUIRE(sys.monotone_limit().has_value());
    const double h = sys.G(*sys.monotone_limit()) * 4.0;
    try {
        (void)energy_to_amplitude(sys, h);
        FAIL("expected NonMonotoneEnergy");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonMonotoneEnergy);
    }
}

TEST_CASE("turning points")
{
    auto t0 = turning_points(PotentialSystem(0.0), 2.0);
    CHECK(t0.x_left == doctest::Approx(-2.0).epsilon(1e-13));
    CHECK(t0.x_right == doctest::Approx(2.0).epsilon(1e-13));
    auto t1 = turning_points(PotentialSystem(1.0), 2 * pi * pi);
    CHECK(t1.x_left == doctest::Approx(-2 * pi).epsilon(1e-13));
    CHECK(t1.x_right == doctest::Approx(2 * pi).epsilon(1e-13));
    PotentialSystem nil(-1.0);
    auto t2 = turning_points(nil, nil.G(1.0));
    CHECK(t2.x_left == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(t2.x_right == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(t2.x_left == -t2.x_right);
}

TEST_CASE("validate_center examples")
{
    auto v1 = validate_center(PotentialSystem(1.0), 100.0);
    CHECK(v1.is_global);
    CHECK_FALSE(v1.first_sign_failure.has_value());
    CHECK(v1.c_low <= v1.c_high);
    CHECK(std::isfinite(v1.c_low));
    CHECK(std::isfinite(v1.c_high));
    CHECK(v1.center_kind == CenterKind::Elementary);

    auto v6 = validate_center(PotentialSystem(6.0), 100.0);
    CHECK_FALSE(v6.is_global);
    REQUIRE(v6.first_sign_failure.has_value());
    // First zero of x + 6 sin x; g is already negative well before 3pi/2.
    CHECK(*v6.first_sign_failure == doctest::Approx(oracle::first_zero_g_lambda6).epsilon(1e-9));
    CHECK(PotentialSystem(6.0).g(3 * pi / 2) < 0.0);

    auto vm = validate_center(PotentialSystem(-1.0), 100.0);
    CHECK(vm.is_global);
    CHECK(vm.center_kind == CenterKind::Nilpotent);
}

TEST_CASE("validity sweep over lambda")
{
    for (double lam = -1.0; lam < 4.6; lam += 0.05) {
        CAPTURE(lam);
        CHECK(validate_center(PotentialSystem(lam), 100.0).is_global);
    }
    CHECK(validate_center(PotentialSystem(4.59), 100.0).is_global);
    for (double lam : {5.0, 6.0, 10.0}) {
        CAPTURE(lam);
        CHECK_FALSE(validate_center(PotentialSystem(lam), 100.0).is_global);
    }
}

TEST_CASE("property: oddness of g and evenness of G")
{
    std::mt19937_64 rng(20261015);
    std::uniform_real_distribution<double> dist(-50.0, 50.0);
    for (double lam : {-1.0, -0.5, 0.5, 1.0, 2.0}) {
        PotentialSystem sys(lam);
        for (int i = 0; i < 1000; ++i) {
            const double x = dist(rng);
            CHECK(eval_g(sys, -x) == -eval_g(sys, x));
            CHECK(eval_G(sys, -x) == eval_G(sys, x));
        }
    }
}

TEST_CASE("property: G is non-negative for lambda >= -1")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-50.0, 50.0);
    for (double lam : {-1.0, -0.9, 0.0, 3.0}) {
        PotentialSystem sys(lam);
        for (int i = 0; i < 500; ++i) {
            CHECK(eval_G(sys, dist(rng)) >= 0.0);
        }
    }
}

TEST_CASE("property: amplitude round trip")
{
    for (double lam : {-1.0, -0.5, 0.0, 1.0, 2.0, 4.0}) {
        PotentialSystem sys(lam);
        for (int i = 0; i <= 40; ++i) {
            const double h = std::pow(10.0, -6.0 + 10.0 * i / 40.0);
            const double xi = energy_to_amplitude(sys, h);
            CAPTURE(lam);
            CAPTURE(h);
            CHECK(xi > 0.0);
            CHECK(std::abs(eval_G(sys, xi) - h) <= 1e-12 * h);
        }
    }
}

TEST_CASE("energy gap agrees with a direct difference where that is accurate")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> xs(0.5, 30.0);
    for (double lam : {-1.0, 0.5, 2.0}) {
        PotentialSystem sys(lam);
        for (int i = 0; i < 200; ++i) {
            const double xi = xs(rng);
            const double gap = xi * std::uniform_real_distribution<double>(0.3, 1.7)(rng);
            const double direct = sys.G(xi) - sys.G(xi - gap);
            CHECK(sys.energy_gap(xi, gap) == doctest::Approx(direct).epsilon(1e-11));
            CHECK(sys.energy_gap(xi, gap) ==
                  doctest::Approx(oracle::raw_energy_gap(lam, xi, gap)).epsilon(1e-12));
        }
    }
}

TEST_CASE("energy gap stays relatively accurate for tiny gaps")
{
    PotentialSystem sys(1.0);
    const double xi = 2 * pi;
    for (double d : {1e-3, 1e-6, 1e-9, 1e-12}) {
        // h - G(xi - d) ~ g(xi) d for small d.
        const double lead = sys.g(xi) * d - 0.5 * sys.dg(xi) * d * d;
        CHECK(sys.energy_gap(xi, d) == doctest::Approx(lead).epsilon(1e-8));
    }
}

TEST_CASE("monotone limit")
{
    CHECK_FALSE(PotentialSystem(1.0).monotone_limit().has_value());
    CHECK_FALSE(PotentialSystem(-1.0).monotone_limit().has_value());
    auto lim = PotentialSystem(6.0).monotone_limit();
    REQUIRE(lim.has_value());
    CHECK(*lim == doctest::Approx(oracle::first_zero_g_lambda6).epsilon(1e-12));
}
