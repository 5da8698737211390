#pragma once

#include "sideband/model.hpp"
#include "sideband/scattering.hpp"

#include <boost/random/mersenne_twister.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace sideband {

using Rng = boost::random::mt19937_64;

inline constexpr const char* rng_algorithm =
    "boost::random::mt19937_64 seeded by std::seed_seq{seed_lo, seed_hi, trajectory}; "
    "boost::random::normal_distribution";

// Generator for one trajectory of a run.
Rng trajectory_rng(std::uint64_t seed, std::uint64_t trajectory);

struct SimConfig {
    double dt = 0.0;
    std::size_t n_steps = 0;
    std::size_t n_trajectories = 1;
    std::uint64_t seed = 0;
    std::size_t burn_in = 0;
    // Welch segments per trajectory, 50% overlap
    std::size_t psd_segments = 1;

    // Samples per Welch segment implied by n_steps, burn_in and psd_segments.
    std::size_t segment_length() const;
    // Throws StepSizeError on the resolution gates.
    void validate(const SystemParams& p, double gamma_tot) const;
};

// Complex white noise with <|xi|^2> = (n + w/2) / dt per sample, split
// equally between independent real and imaginary parts.
std::vector<cplx> synthesize_input_noise(double n, double w, double dt, std::size_t count,
                                         Rng& rng);

struct TrajectoryOutput {
    std::vector<cplx> output_field; // d_R,out after burn-in
    double dt = 0.0;
    double mean_phonons = 0.0; // <|c|^2> after burn-in
};

// Euler-Maruyama integration of the linearized RWA equations in the frame
// rotating with the cavity (d) and the mechanics (c).
TrajectoryOutput integrate_langevin(const SystemParams& p, const BathSpec& b, const ToneConfig& c,
                                    const SimConfig& sim, std::uint64_t trajectory = 0);

// Welch estimate of the two-sided symmetrized output spectrum on offsets
// from omega_c, Hann window, 50% overlap.
Spectrum estimate_psd(const TrajectoryOutput& traj, std::size_t psd_segments);

struct OracleRun {
    Spectrum psd;
    std::size_t n_segments = 0;
    std::size_t segment_length = 0;
    double mean_phonons = 0.0;
    double runtime_s = 0.0;
};

// Streams all trajectories through the Welch accumulator without storing the
// time series. Trajectories run in parallel (SIDEBAND_LAB_THREADS caps the
// thread count) and are reduced in index order. Only bins with
// |offset| <= window are kept when window > 0.
OracleRun run_oracle(const SystemParams& p, const BathSpec& b, const ToneConfig& c,
                     const SimConfig& sim, double window = 0.0);

struct PeakComparison {
    std::string label;
    double analytic_center = 0.0;
    double mc_center = 0.0;
    double analytic_weight = 0.0;
    double mc_weight = 0.0;
    double rel_err = 0.0;
    double analytic_floor = 0.0;
    double mc_floor = 0.0;
    double gamma_tot = 0.0;
};

struct OracleComparison {
    std::vector<PeakComparison> peaks;
    Spectrum analytic; // symmetrized analytic spectrum on the Monte-Carlo grid
};

// Fits every analytic peak in the Monte-Carlo spectrum. Single tones use the
// exact single-tone lineshape, probe pairs the multitone spectra.
OracleComparison compare_with_analytic(const SystemParams& p, const BathSpec& b,
                                       const ToneConfig& c, const Spectrum& mc);

// dt = 0.048/kappa (tightened if gamma_tot demands), segments of at least
// 30/gamma_tot, burn-in of 20/gamma_tot.
SimConfig default_sim_config(const SystemParams& p, const ToneConfig& c, std::uint64_t seed,
                             std::size_t n_segments);

struct CanonicalCase {
    std::string name;
    SystemParams params;
    BathSpec baths;
    ToneConfig tones;
    SimConfig sim;
    double window = 0.0;
};

// red-probe, blue-probe, balanced-pair, pair-cooling, thermal-squashing
std::vector<std::string> canonical_names();
// n_segments is the Welch segment count of the single trajectory.
CanonicalCase canonical_case(const std::string& name, std::uint64_t seed = 1,
                             std::size_t n_segments = 2000);

} // namespace sideband
