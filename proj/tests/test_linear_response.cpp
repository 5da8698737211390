#include "fixtures.hpp"

#include "sideband/errors.hpp"
#include "sideband/linear_response.hpp"
#include "sideband/scattering.hpp"

#include <doctest.h>

using namespace sideband;
using fixtures::rel;
using fixtures::tone_with_rate;

namespace {

ToneSpec tone_for(const SystemParams& p, DetuningSign s, double gamma_opt)
{
    return tone_with_rate(p, ToneRole::generic, -sign_value(s) * p.omega_m, gamma_opt);
}

} // namespace

TEST_CASE("mechanical susceptibility")
{
    const double m = 2.0, wm = 5.0, gm = 0.1;
    const cplx s = chi_xx(0.0, m, wm, gm);
    CHECK(s.real() == doctest::Approx(-1.0 / (m * wm * wm)));
    CHECK(s.imag() == 0.0);
    const cplx r = chi_xx(wm, m, wm, gm);
    CHECK(std::abs(r.real()) < 1e-15);
    CHECK(std::abs(r) == doctest::Approx(1.0 / (m * wm * gm)));
    for (double w : linear_grid(0.01, 20.0, 200))
        CHECK(chi_xx(w, m, wm, gm).imag() < 0.0);
    CHECK_THROWS_AS(chi_xx(1.0, 0.0, wm, gm), ConfigError);
}

TEST_CASE("detector correlators at resonance")
{
    const SystemParams p = fixtures::si_device(0.0);
    const double gopt = from_hz(1.0);

    SUBCASE("vacuum gives the half-quantum correlation with opposite signs")
    {
        const BathSpec vac;
        const auto red = detector_correlators_at_resonance(p, vac, tone_for(p, DetuningSign::red, gopt),
                                                           DetuningSign::red);
        const auto blue = detector_correlators_at_resonance(
            p, vac, tone_for(p, DetuningSign::blue, gopt), DetuningSign::blue);
        CHECK(std::abs(red.S_zF - cplx(0.0, -0.5)) < 1e-12);
        CHECK(std::abs(blue.S_zF - cplx(0.0, 0.5)) < 1e-12);
        CHECK(std::abs(red.S_zF + blue.S_zF) == 0.0);
        CHECK(std::abs(red.chi_IF) == doctest::Approx(std::abs(blue.chi_IF)).epsilon(1e-14));
        CHECK(red.S_II == doctest::Approx(blue.S_II).epsilon(1e-14));
        CHECK(red.S_FF == doctest::Approx(blue.S_FF).epsilon(1e-14));
    }

    SUBCASE("thermal baths")
    {
        BathSpec b;
        b.n_R = 0.34;
        b.n_L = 0.8;
        const double expected = 0.5 + 2.0 * b.n_c(p) - b.n_R;
        for (auto s : {DetuningSign::red, DetuningSign::blue}) {
            const auto d = detector_correlators_at_resonance(p, b, tone_for(p, s, gopt), s);
            CHECK(std::abs(d.S_zF.real()) < 1e-12);
            CHECK(d.S_zF.imag() == doctest::Approx(-sign_value(s) * expected).epsilon(1e-12));
        }
    }

    SUBCASE("image band is a good-cavity correction")
    {
        auto deviation = [&](double scale) {
            SystemParams q = p;
            q.omega_m *= scale;
            const ToneSpec t = tone_for(q, DetuningSign::red, gopt);
            const auto full = detector_correlators(q, BathSpec{}, t, DetuningSign::red, q.omega_m);
            const auto res = detector_correlators_at_resonance(q, BathSpec{}, t, DetuningSign::red);
            return std::abs(full.S_zF - res.S_zF);
        };
        CHECK(deviation(1.0) < p.kappa() / p.omega_m);
        CHECK(deviation(1.0) / deviation(4.0) == doctest::Approx(4.0).epsilon(0.05));
    }

    SUBCASE("positivity and Cauchy-Schwarz over frequency")
    {
        BathSpec b;
        b.n_R = 0.2;
        b.n_L = 1.5;
        for (auto s : {DetuningSign::red, DetuningSign::blue}) {
            const ToneSpec t = tone_for(p, s, gopt);
            for (double w : linear_grid(p.omega_m - 0.2 * p.kappa(), p.omega_m + 0.2 * p.kappa(), 41)) {
                const auto d = detector_correlators(p, b, t, s, w);
                CHECK(d.S_II >= 0.0);
                CHECK(d.S_FF >= 0.0);
                CHECK(std::norm(d.S_IF) <= d.S_II * d.S_FF * (1.0 + 1e-10));
            }
        }
    }
}

TEST_CASE("effective position spectrum")
{
    const SystemParams p = fixtures::si_device(0.0);
    const double gopt = from_hz(1e-3);
    const auto grid = linear_grid(-5.0 * p.gamma_m, 5.0 * p.gamma_m, 101);

    SUBCASE("red drive cancels zero-temperature motion")
    {
        const Spectrum s = sxx_effective(p, BathSpec{}, tone_for(p, DetuningSign::red, gopt),
                                         DetuningSign::red, grid);
        const double bare = -chi_xx(p.omega_m, mechanical_mass(p), p.omega_m, p.gamma_m).imag();
        for (std::size_t k = 0; k < s.size(); ++k)
            CHECK(std::abs(s.value(k)) < 1e-12 * bare);
    }

    SUBCASE("blue drive doubles the zero-point motion")
    {
        BathSpec b;
        const Spectrum s = sxx_effective(p, b, tone_for(p, DetuningSign::blue, gopt),
                                         DetuningSign::blue, grid);
        const double m = mechanical_mass(p);
        for (std::size_t k = 0; k < s.size(); ++k) {
            const double w = std::abs(grid[k] - p.omega_m);
            const double bare = -chi_xx(w, m, p.omega_m, p.gamma_m).imag();
            CHECK(s.value(k) == doctest::Approx(2.0 * bare * (b.n_m + 1.0)).epsilon(1e-12));
        }
    }
}

TEST_CASE("linear response agrees with scattering in weak coupling")
{
    const SystemParams p = fixtures::si_device(0.0);
    const double gopt = 1e-4 * p.gamma_m;
    struct Case {
        BathSpec b;
        DetuningSign s;
    };
    BathSpec thermal_mech;
    thermal_mech.n_m = 12.0;
    BathSpec squash;
    squash.n_R = 0.3;
    squash.n_L = 4.0;
    squash.n_m = 0.5;
    const Case cases[] = {{thermal_mech, DetuningSign::red}, {thermal_mech, DetuningSign::blue},
                          {squash, DetuningSign::red}, {squash, DetuningSign::blue}};
    for (const auto& c : cases) {
        const ToneSpec t = tone_for(p, c.s, gopt);
        const auto grid = linear_grid(-3.0 * p.gamma_m, 3.0 * p.gamma_m, 13);
        const Spectrum lr = output_spectrum_lr(p, c.b, t, c.s, grid);
        const Spectrum sc = single_tone_spectrum(p, c.b, t, c.s, SpectrumKind::symmetrized, grid);
        const auto d = detector_correlators_at_resonance(p, c.b, t, c.s);
        const double floor = noise_floor(p, c.b);
        CHECK(rel(d.S_II - d.S_II_image, floor) < 1e-3);
        for (std::size_t k = 0; k < grid.size(); ++k)
            CHECK(rel(lr.value(k) - d.S_II, sc.value(k) - floor) < 1e-3);
        if (&c == &cases[2])
            CHECK(sc.value(6) - floor < 0.0);
    }
}

TEST_CASE("Heisenberg constraint")
{
    SUBCASE("boundary values")
    {
        CHECK(std::abs(heisenberg_gap(1.0, 1.0, cplx(0.0, 0.5)).rhs) < 1e-15);
        CHECK(std::abs(heisenberg_gap(1.0, 1.0, cplx(0.0, -0.5)).rhs) < 1e-15);
        CHECK(heisenberg_gap(1.0, 1.0, cplx(0.7, 0.0)).rhs == doctest::Approx(0.25));
        const auto edge = heisenberg_gap(0.5, 0.5, 0.0);
        CHECK(edge.gap == 0.0);
        CHECK(edge.satisfied);
        CHECK_THROWS_AS(heisenberg_gap(-1.0, 1.0, 0.0), ConfigError);
        CHECK(delta_factor(cplx(0.3, 0.0)) == doctest::Approx(0.0));
        CHECK(1.0 + delta_factor(cplx(0.0, 1.0)) == doctest::Approx(0.0));
    }

    SUBCASE("vacuum resonance reaches the minimum")
    {
        const SystemParams p = fixtures::si_device(0.0);
        for (auto s : {DetuningSign::red, DetuningSign::blue}) {
            const auto nc = noise_constraint(p, BathSpec{}, tone_for(p, s, from_hz(2.0)), s);
            CHECK(std::abs(nc.report.rhs) < 1e-12);
            CHECK(nc.report.satisfied);
        }
    }

    SUBCASE("physical draws satisfy the inequality")
    {
        fixtures::Draw d(41);
        for (int i = 0; i < 200; ++i) {
            const SystemParams p = d.params(i % 2 == 0);
            const BathSpec b = d.baths(true);
            const DetuningSign s = i % 4 < 2 ? DetuningSign::red : DetuningSign::blue;
            const auto nc = noise_constraint(p, b, tone_for(p, s, p.gamma_m * d.uniform(0.0, 0.5)), s);
            CHECK(nc.report.gap >= -1e-10);
        }
    }
}
