#include "fixtures.hpp"

#include "sideband/errors.hpp"
#include "sideband/model.hpp"

#include <doctest.h>

using namespace sideband;
using fixtures::rel;

TEST_CASE("kappa is the sum of the port rates")
{
    fixtures::Draw d(11);
    for (int i = 0; i < 50; ++i) {
        const SystemParams p = d.params(false);
        CHECK(p.kappa() == doctest::Approx(p.kappa_L + p.kappa_R + p.kappa_I).epsilon(1e-15));
    }
}

TEST_CASE("n_c is a convex combination of the port occupations")
{
    fixtures::Draw d(12);
    for (int i = 0; i < 100; ++i) {
        const SystemParams p = d.params(false);
        const BathSpec b = d.baths(true);
        const double lo = std::min({b.n_R, b.n_L, b.n_I});
        const double hi = std::max({b.n_R, b.n_L, b.n_I});
        const double nc = b.n_c(p);
        CHECK(nc >= lo - 1e-15);
        CHECK(nc <= hi + 1e-15);
        CHECK(b.n_eff(p) == doctest::Approx(2.0 * nc - b.n_R));
    }
}

TEST_CASE("G and n_p round trip")
{
    fixtures::Draw d(13);
    for (int i = 0; i < 100; ++i) {
        const SystemParams p = d.params(false);
        const double n_p = d.log_uniform(1.0, 1e8);
        const ToneSpec a = ToneSpec::from_photons(ToneRole::generic, -p.omega_m, n_p);
        const ToneSpec b = ToneSpec::from_coupling(ToneRole::generic, -p.omega_m, a.coupling(p));
        CHECK(rel(b.photon_number(p), n_p) < 1e-12);
        CHECK(rel(a.gamma_opt(p), 4.0 * p.g0 * p.g0 * n_p / p.kappa()) < 1e-12);
    }
}

TEST_CASE("effective mechanics")
{
    const SystemParams p = fixtures::si_device();
    BathSpec b;
    b.n_m = 1e4;

    SUBCASE("cooling off is the identity")
    {
        const auto off = ToneSpec::from_coupling(ToneRole::cooling, -p.omega_m, 0.0);
        const auto em = derive_effective_mechanics(p, b, off);
        CHECK(em.gamma_M == p.gamma_m);
        CHECK(em.n_M == doctest::Approx(b.n_m));
    }

    SUBCASE("hand arithmetic with a 350 Hz cooling rate")
    {
        // n_L = n_I = n_R = 0.24 makes n_c = 0.24 regardless of the port split
        b.n_R = b.n_L = b.n_I = 0.24;
        const double gc = from_hz(350.0);
        const auto tone = ToneSpec::from_coupling(ToneRole::cooling, -p.omega_m,
                                                  std::sqrt(gc * p.kappa() / 4.0));
        const auto em = derive_effective_mechanics(p, b, tone);
        CHECK(to_hz(em.gamma_M) == doctest::Approx(360.0).epsilon(1e-12));
        CHECK(em.n_M == doctest::Approx((10.0 * 1e4 + 350.0 * 0.24) / 360.0).epsilon(1e-12));
        CHECK(em.n_M == doctest::Approx(278.0).epsilon(1e-3));
    }

    SUBCASE("equal baths are a fixed point")
    {
        b.n_R = b.n_L = b.n_I = b.n_m = 3.7;
        const auto tone = ToneSpec::from_photons(ToneRole::cooling, -p.omega_m, 4e5);
        CHECK(derive_effective_mechanics(p, b, tone).n_M == doctest::Approx(3.7).epsilon(1e-14));
    }

    SUBCASE("a probe is not a cooling tone")
    {
        const auto tone = ToneSpec::from_photons(ToneRole::red_probe, -p.omega_m, 1.0);
        CHECK_THROWS_AS(derive_effective_mechanics(p, b, tone), ConfigError);
    }
}

TEST_CASE("stability gate")
{
    const SystemParams p = fixtures::si_device();
    auto coupling_for = [&](double gamma_opt) { return std::sqrt(gamma_opt * p.kappa() / 4.0); };
    const double delta = from_hz(5e3);

    SUBCASE("balanced tones are stable")
    {
        const ProbeDrive g{false, coupling_for(from_hz(100.0))};
        const ToneConfig c = three_tone(p, g, g, std::nullopt, delta, 0.0);
        CHECK(validate_stability(p, c) == doctest::Approx(p.gamma_m));
    }

    SUBCASE("lone blue tone with twice the intrinsic damping")
    {
        const auto blue = ToneSpec::from_coupling(ToneRole::generic, p.omega_m,
                                                  coupling_for(2.0 * p.gamma_m));
        CHECK_THROWS_AS(validate_stability(p, ToneConfig::single(blue)), InstabilityError);
    }

    SUBCASE("anti-damping beats the effective linewidth")
    {
        const ToneConfig c = three_tone(p, {false, coupling_for(from_hz(100.0))},
                                        {false, coupling_for(from_hz(500.0))},
                                        ProbeDrive{false, coupling_for(from_hz(350.0))}, delta,
                                        from_hz(30e3));
        try {
            validate_stability(p, c);
            FAIL("expected InstabilityError");
        } catch (const InstabilityError& e) {
            CHECK(to_hz(e.gamma_tot()) == doctest::Approx(-40.0).epsilon(1e-9));
            CHECK(std::string(e.what()).find("InstabilityError") == 0);
        }
    }
}

TEST_CASE("tone placement and separation gates")
{
    const SystemParams p = fixtures::si_device();
    const ProbeDrive g{true, 1e5};

    CHECK_NOTHROW(three_tone(p, g, g, g, from_hz(5e3), from_hz(30e3)).validate(p));
    CHECK_THROWS_AS(three_tone(p, g, g, std::nullopt, from_hz(50.0), 0.0).validate(p),
                    ValidityError);
    CHECK_THROWS_AS(three_tone(p, g, g, g, from_hz(5e3), from_hz(4e3)).validate(p), ValidityError);

    ToneConfig close = three_tone(p, g, g, std::nullopt, from_hz(50.0), 0.0);
    close.allow_close_sidebands = true;
    CHECK_NOTHROW(close.validate(p));

    ToneConfig misplaced = three_tone(p, g, g, std::nullopt, from_hz(5e3), 0.0);
    misplaced.delta = from_hz(6e3);
    CHECK_THROWS_AS(misplaced.validate(p), ConfigError);
}

TEST_CASE("bose occupation")
{
    const double n = bose_occupation(from_hz(4e6), 0.2);
    CHECK(n == doctest::Approx(k_boltzmann * 0.2 / (hbar * from_hz(4e6)) - 0.5).epsilon(1e-6));
    CHECK(n == doctest::Approx(1041.0).epsilon(1e-3));
    CHECK_THROWS_AS(bose_occupation(1.0, 0.0), ConfigError);
}

TEST_CASE("spectrum invariants")
{
    CHECK_NOTHROW(Spectrum({0.0, 1.0}, {1.0, 2.0}));
    CHECK_THROWS_AS(Spectrum({0.0, 1.0}, {1.0}), ConfigError);
    CHECK_THROWS_AS(Spectrum({1.0, 0.0}, {1.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(Spectrum({0.0, 1.0}, {1.0, NAN}), ConfigError);
    const auto g = linear_grid(-1.0, 1.0, 5);
    CHECK(g.front() == -1.0);
    CHECK(g.back() == 1.0);
    CHECK(g[2] == doctest::Approx(0.0));
}
