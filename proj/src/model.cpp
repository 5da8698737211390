#include "sideband/model.hpp"

#include "sideband/errors.hpp"

#include <cmath>
#include <sstream>

namespace sideband {

namespace {

void require(bool ok, const std::string& msg)
{
    if (!ok)
        throw ConfigError(msg);
}

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }
bool finite_pos(double x) { return std::isfinite(x) && x > 0.0; }

} // namespace

double bose_occupation(double omega, double temperature)
{
    if (!(temperature > 0.0) || !(omega > 0.0))
        throw ConfigError("bose_occupation needs positive frequency and temperature");
    return 1.0 / std::expm1(hbar * omega / (k_boltzmann * temperature));
}

void SystemParams::validate() const
{
    require(finite_pos(omega_c), "omega_c must be positive");
    require(finite_pos(omega_m), "omega_m must be positive");
    require(finite_pos(g0), "g0 must be positive");
    require(finite_pos(kappa_L), "kappa_L must be positive");
    require(finite_pos(kappa_R), "kappa_R must be positive");
    require(finite_nonneg(kappa_I), "kappa_I must be non-negative");
    require(finite_pos(gamma_m), "gamma_m must be positive");
    if (x_zp)
        require(finite_pos(*x_zp), "x_zp must be positive");
}

void SystemParams::require_good_cavity() const
{
    if (!(omega_m > kappa())) {
        std::ostringstream os;
        os << "good-cavity gate: omega_m = " << omega_m << " rad/s is not above kappa = " << kappa()
           << " rad/s";
        throw ValidityError(os.str());
    }
}

double BathSpec::n_c(const SystemParams& p) const
{
    return (p.kappa_L * n_L + p.kappa_R * n_R + p.kappa_I * n_I) / p.kappa();
}

double BathSpec::alpha_c(const SystemParams& p) const
{
    return (p.kappa_L * alpha_L + p.kappa_R * alpha_R + p.kappa_I * alpha_I) / p.kappa();
}

bool BathSpec::unit_vacuum_weights() const
{
    return alpha_R == 1.0 && alpha_L == 1.0 && alpha_I == 1.0 && beta == 1.0;
}

void BathSpec::validate() const
{
    require(finite_nonneg(n_R) && finite_nonneg(n_L) && finite_nonneg(n_I) && finite_nonneg(n_m),
            "bath occupations must be finite and non-negative");
    require(finite_nonneg(alpha_R) && finite_nonneg(alpha_L) && finite_nonneg(alpha_I) &&
                finite_nonneg(beta),
            "vacuum weights must be finite and non-negative");
}

std::string_view to_string(ToneRole role)
{
    switch (role) {
    case ToneRole::red_probe:
        return "red_probe";
    case ToneRole::blue_probe:
        return "blue_probe";
    case ToneRole::cooling:
        return "cooling";
    case ToneRole::generic:
        return "generic";
    }
    return "generic";
}

ToneRole tone_role_from_string(std::string_view name)
{
    if (name == "red_probe")
        return ToneRole::red_probe;
    if (name == "blue_probe")
        return ToneRole::blue_probe;
    if (name == "cooling")
        return ToneRole::cooling;
    if (name == "generic")
        return ToneRole::generic;
    throw ConfigError("unknown tone role '" + std::string(name) + "'");
}

ToneSpec ToneSpec::from_photons(ToneRole role, double detuning, double n_p)
{
    require(std::isfinite(detuning), "tone detuning must be finite");
    require(finite_nonneg(n_p), "n_p must be finite and non-negative");
    return ToneSpec(role, detuning, n_p, true);
}

ToneSpec ToneSpec::from_coupling(ToneRole role, double detuning, double G)
{
    require(std::isfinite(detuning), "tone detuning must be finite");
    require(finite_nonneg(G), "G must be finite and non-negative");
    return ToneSpec(role, detuning, G, false);
}

double ToneSpec::photon_number(const SystemParams& p) const
{
    if (by_photons_)
        return value_;
    const double r = value_ / p.g0;
    return r * r;
}

double ToneSpec::coupling(const SystemParams& p) const
{
    return by_photons_ ? p.g0 * std::sqrt(value_) : value_;
}

double ToneSpec::gamma_opt(const SystemParams& p) const
{
    const double G = coupling(p);
    return 4.0 * G * G / p.kappa();
}

const ToneSpec* ToneConfig::find(ToneRole role) const
{
    for (const auto& t : tones)
        if (t.role() == role)
            return &t;
    return nullptr;
}

bool ToneConfig::has_probe_pair() const
{
    return find(ToneRole::red_probe) && find(ToneRole::blue_probe);
}

void ToneConfig::validate(const SystemParams& p) const
{
    require(!tones.empty(), "tone list is empty");
    int counts[3] = {0, 0, 0};
    for (const auto& t : tones)
        if (t.role() != ToneRole::generic)
            ++counts[static_cast<int>(t.role())];
    require(counts[0] <= 1 && counts[1] <= 1 && counts[2] <= 1,
            "at most one tone per role (red_probe, blue_probe, cooling)");
    require(finite_nonneg(delta) && finite_nonneg(delta_c), "delta and delta_c must be non-negative");

    const double tol = 1e-9 * (p.omega_m + delta + delta_c);
    auto check_place = [&](ToneRole role, double expected) {
        if (const ToneSpec* t = find(role)) {
            if (std::abs(t->detuning() - expected) > tol) {
                std::ostringstream os;
                os << to_string(role) << " detuning " << t->detuning() << " rad/s does not match "
                   << expected << " rad/s implied by omega_m, delta, delta_c";
                throw ConfigError(os.str());
            }
        }
    };
    check_place(ToneRole::red_probe, -(p.omega_m + delta));
    check_place(ToneRole::blue_probe, p.omega_m + delta);
    check_place(ToneRole::cooling, -(p.omega_m + delta_c));

    if (has_probe_pair() && !allow_close_sidebands) {
        if (!(delta > 10.0 * p.gamma_m)) {
            std::ostringstream os;
            os << "sideband separation gate: delta = " << delta << " rad/s must exceed 10 gamma_m = "
               << 10.0 * p.gamma_m << " rad/s";
            throw ValidityError(os.str());
        }
        if (find(ToneRole::cooling) && !(delta_c > delta))
            throw ValidityError("sideband separation gate: delta_c must exceed delta");
    }
}

ToneConfig ToneConfig::single(const ToneSpec& tone)
{
    ToneConfig c;
    c.tones.push_back(tone);
    return c;
}

namespace {

ToneSpec make_tone(ToneRole role, double detuning, ProbeDrive d)
{
    return d.by_photons ? ToneSpec::from_photons(role, detuning, d.value)
                        : ToneSpec::from_coupling(role, detuning, d.value);
}

} // namespace

ToneConfig three_tone(const SystemParams& p, ProbeDrive red, ProbeDrive blue,
                      std::optional<ProbeDrive> cooling, double delta, double delta_c)
{
    ToneConfig c;
    c.delta = delta;
    c.delta_c = delta_c;
    c.tones.push_back(make_tone(ToneRole::red_probe, -(p.omega_m + delta), red));
    c.tones.push_back(make_tone(ToneRole::blue_probe, p.omega_m + delta, blue));
    if (cooling)
        c.tones.push_back(make_tone(ToneRole::cooling, -(p.omega_m + delta_c), *cooling));
    return c;
}

EffectiveMechanics derive_effective_mechanics(const SystemParams& p, const BathSpec& b,
                                              const ToneSpec& cooling)
{
    if (cooling.role() != ToneRole::cooling)
        throw ConfigError("derive_effective_mechanics expects a cooling tone");
    const double gc = cooling.gamma_opt(p);
    const double gM = p.gamma_m + gc;
    return {gM, (p.gamma_m * b.n_m + gc * b.n_c(p)) / gM};
}

DampingBudget damping_budget(const SystemParams& p, const BathSpec& b, const ToneConfig& c)
{
    DampingBudget d;
    for (const auto& t : c.tones) {
        const double g = t.gamma_opt(p);
        switch (t.role()) {
        case ToneRole::red_probe:
            d.gamma_plus += g;
            break;
        case ToneRole::blue_probe:
            d.gamma_minus += g;
            break;
        case ToneRole::cooling:
            d.gamma_cool += g;
            break;
        case ToneRole::generic:
            (t.red_side() ? d.gamma_plus : d.gamma_minus) += g;
            break;
        }
    }
    d.gamma_M = p.gamma_m + d.gamma_cool;
    d.n_M = (p.gamma_m * b.n_m + d.gamma_cool * b.n_c(p)) / d.gamma_M;
    d.gamma_tot = d.gamma_M + d.gamma_plus - d.gamma_minus;
    return d;
}

double validate_stability(const SystemParams& p, const ToneConfig& c)
{
    const DampingBudget d = damping_budget(p, BathSpec::vacuum(), c);
    if (!(d.gamma_tot > 0.0)) {
        std::ostringstream os;
        os << "total damping gamma_tot = " << d.gamma_tot << " rad/s ("
           << to_hz(d.gamma_tot) << " Hz) is not positive";
        throw InstabilityError(d.gamma_tot, os.str());
    }
    return d.gamma_tot;
}

Spectrum::Spectrum(std::vector<double> offsets, std::vector<double> values)
    : offsets_(std::move(offsets)), values_(std::move(values))
{
    if (offsets_.size() != values_.size())
        throw ConfigError("spectrum grid and values differ in length");
    for (std::size_t i = 0; i < offsets_.size(); ++i) {
        if (!std::isfinite(offsets_[i]) || !std::isfinite(values_[i]))
            throw ConfigError("spectrum contains non-finite entries");
        if (i > 0 && !(offsets_[i] > offsets_[i - 1]))
            throw ConfigError("spectrum grid must be strictly increasing");
    }
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n)
{
    if (n < 2 || !(hi > lo))
        throw ConfigError("linear_grid needs n >= 2 and hi > lo");
    std::vector<double> g(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = lo + step * static_cast<double>(i);
    g.back() = hi;
    return g;
}

} // namespace sideband
