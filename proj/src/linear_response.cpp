#include "sideband/linear_response.hpp"

#include "sideband/errors.hpp"

#include <cmath>

namespace sideband {

namespace {

constexpr cplx I{0.0, 1.0};

struct PortNoise {
    double kappa;
    double sym; // 1/2 + n
};

std::array<PortNoise, 3> ports(const SystemParams& p, const BathSpec& b)
{
    return {{{p.kappa_R, 0.5 + b.n_R}, {p.kappa_L, 0.5 + b.n_L}, {p.kappa_I, 0.5 + b.n_I}}};
}

} // namespace

cplx chi_xx(double omega, double m, double omega_m, double gamma_m)
{
    if (!(m > 0.0))
        throw ConfigError("mass must be positive");
    return (1.0 / m) / cplx(omega * omega - omega_m * omega_m, omega * gamma_m);
}

double mechanical_mass(const SystemParams& p)
{
    const double x = p.x_zp_or_unit();
    return 1.0 / (2.0 * p.omega_m * x * x);
}

cplx cavity_susceptibility(const SystemParams& p, DetuningSign sign, double omega)
{
    return 1.0 / cplx(0.5 * p.kappa(), -(omega - sign_value(sign) * p.omega_m));
}

DetectorNoise detector_correlators(const SystemParams& p, const BathSpec& b, const ToneSpec& tone,
                                   DetuningSign sign, double omega, bool image_band)
{
    p.require_good_cavity();
    const double G = tone.coupling(p);
    const double xzp = p.x_zp_or_unit();
    const double kR = p.kappa_R;
    cplx cp = cavity_susceptibility(p, sign, omega);
    cplx cm = cavity_susceptibility(p, sign, -omega);
    if (!image_band)
        (std::norm(cp) < std::norm(cm) ? cp : cm) = 0.0;
    const auto pn = ports(p, b);

    DetectorNoise d;
    d.evaluated_at = omega;
    d.chi_IF = -I * std::sqrt(kR) * G / xzp * (cp - std::conj(cm));

    double band[2];
    const cplx chis[2] = {cp, cm};
    double total_in = 0.0;
    for (const auto& q : pn)
        total_in += q.kappa * q.sym;
    for (int k = 0; k < 2; ++k) {
        const cplx c = chis[k];
        double v = std::norm(1.0 - kR * c) * pn[0].sym;
        v += kR * std::norm(c) * (pn[1].kappa * pn[1].sym + pn[2].kappa * pn[2].sym);
        band[k] = v;
    }
    d.S_II = band[0] + band[1];
    d.S_II_image = std::norm(cp) < std::norm(cm) ? band[0] : band[1];
    d.S_FF = G * G / (xzp * xzp) * (std::norm(cp) + std::norm(cm)) * total_in;

    auto lambda = [&](int port, cplx c) -> cplx {
        if (port == 0)
            return -(1.0 - kR * c) * std::conj(c);
        return pn[port].kappa * std::norm(c);
    };
    cplx sum = 0.0;
    for (int q = 0; q < 3; ++q)
        sum += (lambda(q, cp) + std::conj(lambda(q, cm))) * pn[q].sym;
    d.S_IF = -std::sqrt(kR) * G / xzp * sum;
    d.S_zF = d.S_IF / d.chi_IF;
    return d;
}

DetectorNoise detector_correlators_at_resonance(const SystemParams& p, const BathSpec& b,
                                                const ToneSpec& tone, DetuningSign sign)
{
    return detector_correlators(p, b, tone, sign, p.omega_m, false);
}

double backaction_spectrum(const SystemParams& p, const BathSpec& b, const ToneSpec& tone,
                           DetuningSign sign, double omega)
{
    const DetectorNoise d = detector_correlators_at_resonance(p, b, tone, sign);
    return std::norm(chi_xx(omega, mechanical_mass(p), p.omega_m, p.gamma_m)) * d.S_FF;
}

Spectrum sxx_effective(const SystemParams& p, const BathSpec& b, const ToneSpec& tone,
                       DetuningSign sign, const std::vector<double>& grid, bool include_backaction)
{
    const DetectorNoise d = detector_correlators_at_resonance(p, b, tone, sign);
    const double m = mechanical_mass(p);
    const double s = sign_value(sign);
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double w = std::abs(grid[i] + s * p.omega_m);
        const cplx chi = chi_xx(w, m, p.omega_m, p.gamma_m);
        v[i] = -chi.imag() * ((1.0 + 2.0 * b.n_m) + 2.0 * d.S_zF.imag());
        if (include_backaction)
            v[i] += std::norm(chi) * d.S_FF;
    }
    return Spectrum(grid, std::move(v));
}

Spectrum output_spectrum_lr(const SystemParams& p, const BathSpec& b, const ToneSpec& tone,
                            DetuningSign sign, const std::vector<double>& grid)
{
    const DetectorNoise d = detector_correlators_at_resonance(p, b, tone, sign);
    const Spectrum sx = sxx_effective(p, b, tone, sign, grid);
    const double gain = std::norm(d.chi_IF);
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        v[i] = d.S_II + gain * sx.value(i);
    return Spectrum(grid, std::move(v));
}

double delta_factor(cplx y)
{
    return 0.5 * (std::abs(1.0 + y * y) - (1.0 + std::norm(y)));
}

HeisenbergReport heisenberg_gap(double S_zz, double S_FF, cplx S_zF)
{
    if (!(S_zz >= 0.0) || !(S_FF >= 0.0))
        throw ConfigError("heisenberg_gap needs non-negative S_zz and S_FF");
    HeisenbergReport r;
    r.lhs = S_zz * S_FF - std::norm(S_zF);
    r.rhs = 0.25 * (1.0 + delta_factor(2.0 * S_zF));
    r.gap = r.lhs - r.rhs;
    r.satisfied = r.lhs >= r.rhs - 1e-12;
    return r;
}

NoiseConstraint noise_constraint(const SystemParams& p, const BathSpec& b, const ToneSpec& tone,
                                 DetuningSign sign)
{
    NoiseConstraint nc;
    nc.detector = detector_correlators_at_resonance(p, b, tone, sign);
    nc.S_zz = nc.detector.S_II / std::norm(nc.detector.chi_IF);
    nc.report = heisenberg_gap(nc.S_zz, nc.detector.S_FF, nc.detector.S_zF);
    return nc;
}

} // namespace sideband
