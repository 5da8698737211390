#pragma once

#include "sideband/model.hpp"

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include <cmath>

namespace fixtures {

using namespace sideband;

// 5.4 GHz device with si-figure port rates; kappa_I adjustable.
inline SystemParams si_device(double kappa_I_khz = 265.0)
{
    SystemParams p;
    p.omega_c = from_hz(5.4e9);
    p.omega_m = from_hz(4e6);
    p.g0 = from_hz(16.0);
    p.kappa_L = from_hz(155e3);
    p.kappa_R = from_hz(450e3);
    p.kappa_I = from_hz(kappa_I_khz * 1e3);
    p.gamma_m = from_hz(10.0);
    return p;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

struct Draw {
    boost::random::mt19937_64 rng;
    explicit Draw(std::uint64_t seed) : rng(seed) {}
    double uniform(double lo, double hi)
    {
        return boost::random::uniform_real_distribution<double>(lo, hi)(rng);
    }
    double log_uniform(double lo, double hi)
    {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    SystemParams params(bool two_port)
    {
        SystemParams p;
        p.omega_c = from_hz(uniform(4e9, 8e9));
        p.omega_m = from_hz(uniform(3e6, 6e6));
        p.g0 = from_hz(uniform(5.0, 30.0));
        p.kappa_L = from_hz(uniform(50e3, 400e3));
        p.kappa_R = from_hz(uniform(50e3, 600e3));
        p.kappa_I = two_port ? 0.0 : from_hz(uniform(0.0, 400e3));
        p.gamma_m = from_hz(uniform(5.0, 50.0));
        return p;
    }

    BathSpec baths(bool unit_weights)
    {
        BathSpec b;
        b.n_R = uniform(0.0, 2.0);
        b.n_L = uniform(0.0, 2.0);
        b.n_I = uniform(0.0, 2.0);
        b.n_m = log_uniform(0.1, 1e4);
        if (!unit_weights) {
            b.alpha_R = uniform(0.5, 1.5);
            b.alpha_L = uniform(0.5, 1.5);
            b.alpha_I = uniform(0.5, 1.5);
            b.beta = uniform(0.5, 1.5);
        }
        return b;
    }
};

} // namespace fixtures

namespace fixtures {

inline sideband::ToneSpec tone_with_rate(const sideband::SystemParams& p,
                                         sideband::ToneRole role, double detuning,
                                         double gamma_opt)
{
    return sideband::ToneSpec::from_coupling(role, detuning,
                                             std::sqrt(gamma_opt * p.kappa() / 4.0));
}

} // namespace fixtures
