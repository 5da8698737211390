#include "sideband/multitone.hpp"

#include "sideband/errors.hpp"

#include <cmath>
#include <sstream>

namespace sideband {

namespace {

void require_unit_weights(const BathSpec& b)
{
    if (!b.unit_vacuum_weights())
        throw ValidityError("multitone spectra assume alpha_sigma = beta = 1");
}

void require_probe_pair(const ToneConfig& c)
{
    if (!c.has_probe_pair())
        throw ConfigError("configuration needs a red_probe and a blue_probe tone");
}

struct Balanced {
    double gamma_opt;
    DampingBudget budget;
};

Balanced require_balanced(const SystemParams& p, const BathSpec& b, const ToneConfig& c)
{
    require_probe_pair(c);
    const double Gr = c.find(ToneRole::red_probe)->coupling(p);
    const double Gb = c.find(ToneRole::blue_probe)->coupling(p);
    if (std::abs(Gr - Gb) > 1e-12 * std::max(Gr, Gb)) {
        std::ostringstream os;
        os << "probe couplings differ: G_red = " << Gr << ", G_blue = " << Gb << " rad/s";
        throw UnbalancedError(os.str());
    }
    const DampingBudget d = damping_budget(p, b, c);
    return {d.gamma_plus, d};
}

double lorentz(double x, double width) { return 1.0 / (x * x + 0.25 * width * width); }

} // namespace

std::vector<double> default_multitone_grid(double delta)
{
    return linear_grid(-4.0 * delta, 4.0 * delta, 4001);
}

Spectrum sxx_spectrum(const SystemParams& p, const BathSpec& b, const ToneConfig& c,
                      const std::vector<double>& grid)
{
    const double gtot = validate_stability(p, c);
    const DampingBudget d = damping_budget(p, b, c);
    const double bracket =
        (d.n_M + 0.5) + (d.gamma_minus + d.gamma_plus) / d.gamma_M * (b.n_c(p) + 0.5);
    const double xzp2 = p.x_zp ? (*p.x_zp) * (*p.x_zp) : 1.0;
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        v[i] = d.gamma_M * lorentz(grid[i], gtot) * bracket * xzp2;
    return Spectrum(grid, std::move(v));
}

double averaged_occupation(const SystemParams& p, const BathSpec& b, const ToneConfig& c)
{
    const double gtot = validate_stability(p, c);
    const DampingBudget d = damping_budget(p, b, c);
    const double n_c = b.n_c(p);
    return (d.gamma_M * d.n_M + d.gamma_minus * (n_c + 1.0) + d.gamma_plus * n_c) / gtot;
}

MultitoneSpectra multitone_spectra(const SystemParams& p, const BathSpec& b, const ToneConfig& c,
                                   SpectrumKind kind, const std::vector<double>& grid)
{
    require_unit_weights(b);
    require_probe_pair(c);
    const double gtot = validate_stability(p, c);
    const DampingBudget d = damping_budget(p, b, c);
    if (!c.allow_close_sidebands && !(c.delta > 10.0 * gtot)) {
        std::ostringstream os;
        os << "sideband separation gate: delta = " << c.delta
           << " rad/s must exceed 10 gamma_tot = " << 10.0 * gtot << " rad/s";
        throw ValidityError(os.str());
    }

    const double r = p.kappa_R / p.kappa();
    const double n_eff = b.n_eff(p);
    const double n_bar = averaged_occupation(p, b, c);

    MultitoneSpectra out;
    out.floor = noise_floor(p, b) - (kind == SpectrumKind::normal_ordered ? 0.5 : 0.0);
    out.gamma_tot = gtot;
    out.n_bar_m = n_bar;
    out.gamma_plus = d.gamma_plus;
    out.gamma_minus = d.gamma_minus;

    const double as_bracket = n_bar - n_eff;
    const double s_bracket = kind == SpectrumKind::symmetrized
                                 ? n_bar + n_eff + 1.0
                                 : n_bar + n_eff + d.gamma_M / gtot +
                                       (d.gamma_plus - d.gamma_minus) / gtot;

    std::vector<double> as(grid.size()), st(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid[i];
        as[i] = out.floor + r * gtot * d.gamma_plus * lorentz(x + c.delta, gtot) * as_bracket;
        st[i] = out.floor + r * gtot * d.gamma_minus * lorentz(x - c.delta, gtot) * s_bracket;
    }
    out.anti_stokes = Spectrum(grid, std::move(as));
    out.stokes = Spectrum(grid, std::move(st));
    out.anti_stokes_weight = r * d.gamma_plus * as_bracket;
    out.stokes_weight = r * d.gamma_minus * s_bracket;
    out.n_plus = as_bracket;
    out.n_minus = s_bracket;
    return out;
}

double multitone_integrated_asymmetry(const SystemParams& p, const BathSpec& b,
                                      const ToneConfig& c)
{
    validate_stability(p, c);
    const DampingBudget d = damping_budget(p, b, c);
    const double r = p.kappa_R / p.kappa();
    const double n_eff = b.n_eff(p);
    const double n_bar = averaged_occupation(p, b, c);
    return r * (n_bar * (d.gamma_minus - d.gamma_plus) + (n_eff + 1.0) * d.gamma_minus +
                n_eff * d.gamma_plus);
}

double sideband_ratio_model(double n_m_plus, double n_eff)
{
    if (n_m_plus == 0.0 || !std::isfinite(n_m_plus))
        throw ConfigError("sideband_ratio_model needs a finite, non-zero n_m_plus");
    return 1.0 + (2.0 * n_eff + 1.0) / n_m_plus;
}

TwinPeakComponents full_rwa_components(const SystemParams& p, const BathSpec& b,
                                       const ToneConfig& c, const std::vector<double>& grid)
{
    require_unit_weights(b);
    const Balanced bal = require_balanced(p, b, c);
    const double g = bal.gamma_opt;
    const double gM = bal.budget.gamma_M;
    const double r = p.kappa_R / p.kappa();
    const double n_c = b.n_c(p);
    const double n_eff = b.n_eff(p);
    const double n_bar = averaged_occupation(p, b, c);
    const double S0 = noise_floor(p, b);
    const double h = 0.25 * gM * gM;
    const double dl = c.delta;

    const std::size_t n = grid.size();
    std::vector<double> tot(n), fl(n, S0), mix(n), st(n), as(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid[i];
        const double lp = (x + dl) * (x + dl) + h;
        const double lm = (x - dl) * (x - dl) + h;
        mix[i] = -4.0 * r * g * g * ((x - dl) * (x + dl) + h) / (lp * lm) * (n_c + 0.5);
        as[i] = r * gM * g / lp * (n_bar - n_eff);
        st[i] = r * gM * g / lm * (n_bar + n_eff + 1.0);
        tot[i] = S0 + mix[i] + as[i] + st[i];
    }
    return {Spectrum(grid, std::move(tot)), Spectrum(grid, std::move(fl)),
            Spectrum(grid, std::move(mix)), Spectrum(grid, std::move(st)),
            Spectrum(grid, std::move(as))};
}

Spectrum full_rwa_spectrum(const SystemParams& p, const BathSpec& b, const ToneConfig& c,
                           const std::vector<double>& grid)
{
    return full_rwa_components(p, b, c, grid).total;
}

double peak_ratio_correction(const SystemParams& p, const BathSpec& b, const ToneConfig& c,
                             Sideband side)
{
    const Balanced bal = require_balanced(p, b, c);
    const double gM = bal.budget.gamma_M;
    const double n_M = bal.budget.n_M;
    const double x = 4.0 * c.delta / gM;
    const double base = bal.gamma_opt / gM * (2.0 * b.n_c(p) + 1.0);
    const double n_eff = b.n_eff(p);
    double frac;
    if (side == Sideband::stokes) {
        const double n_opt = base + n_eff;
        frac = (n_M - n_opt) / (n_M + n_opt + 1.0);
    } else {
        const double n_opt = base - n_eff;
        frac = (n_M - n_opt + 1.0) / (n_M + n_opt);
    }
    return 1.0 + frac / (x * x + 1.0);
}

} // namespace sideband
