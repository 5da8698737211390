#include "sideband/langevin.hpp"
#include "sideband/multitone.hpp"

#include <doctest.h>

#include <iostream>

using namespace sideband;

namespace {

OracleComparison run_case(const CanonicalCase& cc)
{
    const OracleRun run = run_oracle(cc.params, cc.baths, cc.tones, cc.sim, cc.window);
    const OracleComparison cmp = compare_with_analytic(cc.params, cc.baths, cc.tones, run.psd);
    for (const auto& pk : cmp.peaks)
        std::cout << cc.name << ' ' << pk.label << ": weight " << pk.mc_weight << " vs "
                  << pk.analytic_weight << " (" << 100.0 * pk.rel_err << "%), floor " << pk.mc_floor
                  << " vs " << pk.analytic_floor << ", centre " << pk.mc_center << " vs "
                  << pk.analytic_center << ", " << run.runtime_s << " s\n";
    return cmp;
}

void check_agreement(const OracleComparison& cmp)
{
    for (const auto& pk : cmp.peaks) {
        INFO(pk.label);
        CHECK(std::abs(pk.rel_err) < 0.05);
        CHECK(std::abs(pk.mc_floor / pk.analytic_floor - 1.0) < 0.02);
        CHECK(std::abs(pk.mc_center - pk.analytic_center) < pk.gamma_tot / 10.0);
    }
}

const PeakComparison& peak(const OracleComparison& c, const std::string& label)
{
    for (const auto& pk : c.peaks)
        if (pk.label == label)
            return pk;
    throw std::runtime_error("missing peak " + label);
}

} // namespace

TEST_CASE("Monte-Carlo spectra reproduce the analytic spectra")
{
    for (const auto& name : canonical_names()) {
        SUBCASE(name.c_str())
        {
            const CanonicalCase cc = canonical_case(name, 1, 1000);
            const OracleComparison cmp = run_case(cc);
            check_agreement(cmp);

            if (cc.tones.has_probe_pair()) {
                const auto& as = peak(cmp, "anti_stokes");
                const auto& st = peak(cmp, "stokes");
                const auto ms = multitone_spectra(cc.params, cc.baths, cc.tones,
                                                  SpectrumKind::symmetrized, {0.0});
                const double model = sideband_ratio_model(ms.n_plus, cc.baths.n_eff(cc.params));
                CHECK(std::abs(st.mc_weight / as.mc_weight / model - 1.0) < 0.05);
            }
            if (name == "thermal-squashing")
                CHECK(peak(cmp, "anti_stokes").mc_weight < 0.0);
        }
    }
}

TEST_CASE("halving the time step leaves the spectrum unchanged")
{
    CanonicalCase cc = canonical_case("red-probe", 4, 400);
    const OracleComparison coarse = run_case(cc);
    cc.sim.dt *= 0.5;
    cc.sim.n_steps *= 2;
    cc.sim.burn_in *= 2;
    const OracleComparison fine = run_case(cc);
    check_agreement(coarse);
    check_agreement(fine);
    const double a = coarse.peaks.front().mc_weight;
    const double b = fine.peaks.front().mc_weight;
    // independent noise realisations, each with about 2% scatter
    CHECK(std::abs(a / b - 1.0) < 0.08);
}
