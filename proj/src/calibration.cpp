#include "sideband/calibration.hpp"

#include "sideband/errors.hpp"
#include "sideband/least_squares.hpp"
#include "sideband/multitone.hpp"

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace sideband {

namespace {

constexpr cplx J{0.0, 1.0};

double median(std::vector<double> v)
{
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
        m = 0.5 * (m + lo);
    }
    return m;
}

LorentzianFit initial_guess(const Spectrum& s)
{
    const auto& x = s.offsets();
    const auto& v = s.values();
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    const double scale = std::max(std::abs(*lo), std::abs(*hi));
    if (!(*hi - *lo > 1e-12 * scale))
        throw DegenerateData("spectrum is flat");

    LorentzianFit f;
    f.floor = median(v);
    std::size_t k = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs(v[i] - f.floor) > std::abs(v[k] - f.floor))
            k = i;
    f.amplitude = v[k] - f.floor;
    f.center = x[k];
    const double half = 0.5 * std::abs(f.amplitude);
    auto crossing = [&](int dir) {
        std::ptrdiff_t i = static_cast<std::ptrdiff_t>(k);
        const std::ptrdiff_t end = dir < 0 ? 0 : static_cast<std::ptrdiff_t>(v.size()) - 1;
        while (i != end && std::abs(v[static_cast<std::size_t>(i)] - f.floor) > half)
            i += dir;
        const auto a = static_cast<std::size_t>(i);
        if (i == static_cast<std::ptrdiff_t>(k))
            return x[a];
        const auto b = static_cast<std::size_t>(i - dir);
        const double ya = std::abs(v[a] - f.floor);
        const double yb = std::abs(v[b] - f.floor);
        const double t = yb != ya ? (yb - half) / (yb - ya) : 0.5;
        return x[b] + t * (x[a] - x[b]);
    };
    f.width = crossing(+1) - crossing(-1);
    if (!(f.width > 0.0))
        f.width = 2.0 * (x[1] - x[0]);
    return f;
}

} // namespace

double LorentzianFit::at(double x) const
{
    const double h = 0.5 * width;
    const double u = x - center;
    return floor + amplitude * h * h / (u * u + h * h);
}

LorentzianFit fit_lorentzian(const Spectrum& spec, const std::optional<LorentzianFit>& init)
{
    if (spec.size() < 20)
        throw DegenerateData("need at least 20 points to fit a Lorentzian");
    const LorentzianFit start = init ? *init : initial_guess(spec);
    const auto& x = spec.offsets();
    const auto& y = spec.values();
    if (!init && x.back() - x.front() < 5.0 * start.width)
        throw DegenerateData("spectrum must span at least five linewidths");

    const auto m = static_cast<Eigen::Index>(spec.size());
    LeastSquaresProblem prob;
    prob.n_residuals = m;
    const double level = std::abs(start.amplitude) + std::abs(start.floor);
    prob.scale = Eigen::Vector4d(start.width, start.width, level, level);
    prob.evaluate = [&](const Eigen::VectorXd& q, Eigen::VectorXd& r, Eigen::MatrixXd* Jm) {
        const double c = q[0], h = 0.5 * q[1], A = q[2], f = q[3];
        for (Eigen::Index i = 0; i < m; ++i) {
            const double u = x[static_cast<std::size_t>(i)] - c;
            const double D = u * u + h * h;
            const double L = h * h / D;
            r[i] = f + A * L - y[static_cast<std::size_t>(i)];
            if (Jm) {
                (*Jm)(i, 0) = A * h * h * 2.0 * u / (D * D);
                (*Jm)(i, 1) = A * h * u * u / (D * D);
                (*Jm)(i, 2) = L;
                (*Jm)(i, 3) = 1.0;
            }
        }
    };
    const LeastSquaresResult res = solve_least_squares(
        prob, Eigen::Vector4d(start.center, start.width, start.amplitude, start.floor));

    LorentzianFit out;
    out.center = res.params[0];
    out.width = std::abs(res.params[1]);
    out.amplitude = res.params[2];
    out.floor = res.params[3];
    out.residual_norm = res.residual_norm;
    out.covariance = res.covariance;
    out.iterations = res.iterations;
    if (!(out.width > 0.0))
        throw DegenerateData("fitted width collapsed to zero");
    return out;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y,
                 const std::vector<double>& sigma)
{
    if (x.size() != y.size() || (!sigma.empty() && sigma.size() != x.size()))
        throw ConfigError("fit_line: mismatched input lengths");
    if (std::set<double>(x.begin(), x.end()).size() < 2)
        throw RankDeficient("need at least two distinct abscissae");

    const auto m = static_cast<Eigen::Index>(x.size());
    const double xs = std::max(std::abs(*std::max_element(x.begin(), x.end())),
                               std::abs(*std::min_element(x.begin(), x.end())));
    double ys = 0.0;
    for (double v : y)
        ys = std::max(ys, std::abs(v));
    if (ys == 0.0)
        ys = 1.0;

    // parameters in units of (ys, ys / xs) keep the normal matrix well scaled
    LeastSquaresProblem prob;
    prob.n_residuals = m;
    prob.scale = Eigen::Vector2d(1.0, 1.0);
    prob.evaluate = [&](const Eigen::VectorXd& q, Eigen::VectorXd& r, Eigen::MatrixXd* Jm) {
        for (Eigen::Index i = 0; i < m; ++i) {
            const auto k = static_cast<std::size_t>(i);
            const double w = sigma.empty() || sigma[k] <= 0.0 ? 1.0 : ys / sigma[k];
            const double xi = x[k] / xs;
            r[i] = w * (q[0] + q[1] * xi - y[k] / ys);
            if (Jm) {
                (*Jm)(i, 0) = w;
                (*Jm)(i, 1) = w * xi;
            }
        }
    };
    LeastSquaresOptions opt;
    opt.step_tolerance = 1e-13;
    const LeastSquaresResult res = solve_least_squares(prob, Eigen::Vector2d(0.0, 0.0), opt);

    LineFit f;
    f.intercept = res.params[0] * ys;
    f.slope = res.params[1] * ys / xs;
    f.intercept_sigma = std::sqrt(res.covariance(0, 0)) * ys;
    f.slope_sigma = std::sqrt(res.covariance(1, 1)) * ys / xs;
    f.residual_norm = res.residual_norm * ys;
    return f;
}

LinewidthFit fit_linewidth_vs_power(const std::vector<PowerPoint>& points)
{
    std::vector<double> x, y, s;
    for (const auto& pt : points) {
        x.push_back(pt.P_thru);
        y.push_back(pt.gamma_tot);
        s.push_back(pt.sigma);
    }
    const LineFit f = fit_line(x, y, s);
    return {f.intercept, f.slope, f.intercept_sigma, f.slope_sigma};
}

double probe_frequency(const SystemParams& p, ProbeSide side, double delta)
{
    const double off = p.omega_m + delta;
    return side == ProbeSide::plus ? p.omega_c - off : p.omega_c + off;
}

namespace {

// P_m / P_thru per unit (2 g0 / kappa)^2 n_m
double thermometry_prefactor(const SystemParams& p, const ThermometryChannel& ch, ProbeSide side)
{
    if (!(ch.gain_c > 0.0) || !(ch.gain_probe > 0.0))
        throw ConfigError("system gains must be positive");
    const double w = probe_frequency(p, side, ch.delta);
    return (p.omega_c / w) * (ch.gain_c / ch.gain_probe) / (1.0 + ch.delta_corr);
}

} // namespace

double thermometry_ratio(const SystemParams& p, const ThermometryChannel& ch, ProbeSide side,
                         double n_m)
{
    const double k = 2.0 * p.g0 / p.kappa();
    return thermometry_prefactor(p, ch, side) * k * k * n_m;
}

double thermometry_occupation(const SystemParams& p, const ThermometryChannel& ch,
                              ProbeSide side, double ratio)
{
    return ratio / thermometry_ratio(p, ch, side, 1.0);
}

double g0_from_conversion_slope(const SystemParams& p, const ThermometryChannel& ch,
                                ProbeSide side, double slope)
{
    if (!(slope > 0.0))
        throw DegenerateData("thermometry slope must be positive");
    return 0.5 * p.kappa() * std::sqrt(slope / thermometry_prefactor(p, ch, side));
}

double noise_floor_increase(const SystemParams& p, const BathSpec& b, double lambda_conv)
{
    if (!(lambda_conv > 0.0))
        throw ConfigError("lambda must be positive");
    const double kR = p.kappa_R;
    return (b.n_eff(p) - (2.0 * kR - p.kappa()) / (2.0 * kR) * b.n_R) / (2.0 * lambda_conv);
}

double floor_offset_correction(const SystemParams& p, const BathSpec& b)
{
    return (2.0 * p.kappa_R - p.kappa()) / p.kappa_R * b.n_R;
}

SidebandLedger sideband_difference_and_average(const SystemParams& p, const BathSpec& b,
                                               const ToneConfig& c, double lambda_conv,
                                               double delta_eta)
{
    const ToneSpec* red = c.find(ToneRole::red_probe);
    const ToneSpec* blue = c.find(ToneRole::blue_probe);
    if (!red || !blue)
        throw ConfigError("configuration needs a red_probe and a blue_probe tone");
    const double gp = red->gamma_opt(p);
    const double gm = blue->gamma_opt(p);
    if (std::abs(gp - gm) > 1e-12 * std::max(gp, gm))
        throw UnbalancedError("sideband ledger assumes gamma_opt+ = gamma_opt-");
    const DampingBudget d = damping_budget(p, b, c);
    const double kR = p.kappa_R;
    const double k = p.kappa();
    const double le = lambda_conv * delta_eta;

    SidebandLedger out;
    out.diff = 4.0 * le + (2.0 * kR - k) / kR * b.n_R + 1.0;
    out.avg = (2.0 * gp + d.gamma_cool) / d.gamma_M * (le + (4.0 * kR - k) / (4.0 * kR) * b.n_R) +
              p.gamma_m / d.gamma_M * b.n_m + gp / d.gamma_M + 0.5;
    return out;
}

double output_floor_model(const SystemParams& p, double n_R, double alpha_R, double lambda_conv,
                          double S_hemt, double offset)
{
    const double k = p.kappa();
    const double r = p.kappa_R / k;
    const double lor = k * k / (k * k + 4.0 * offset * offset);
    return (lor * (r - 1.0) * n_R + k / (4.0 * p.kappa_R) * (alpha_R + 2.0 * n_R)) / lambda_conv +
           S_hemt;
}

OccupationFit fit_output_occupation(const Spectrum& spec, const SystemParams& p,
                                    double lambda_conv, double alpha_R)
{
    if (!(lambda_conv > 0.0))
        throw ConfigError("lambda must be positive");
    const auto& x = spec.offsets();
    const auto& y = spec.values();
    if (x.back() - x.front() < 3.0 * p.kappa())
        throw ConfigError("floor spectrum must span at least three cavity linewidths");

    double ys = 0.0;
    for (double v : y)
        ys += std::abs(v);
    ys /= static_cast<double>(y.size());
    if (ys == 0.0)
        ys = 1.0 / lambda_conv;

    // parameters: n_R and S_hemt in units of ys
    const auto m = static_cast<Eigen::Index>(spec.size());
    LeastSquaresProblem prob;
    prob.n_residuals = m;
    prob.scale = Eigen::Vector2d(1.0, 1.0);
    prob.evaluate = [&](const Eigen::VectorXd& q, Eigen::VectorXd& r, Eigen::MatrixXd* Jm) {
        for (Eigen::Index i = 0; i < m; ++i) {
            const auto k = static_cast<std::size_t>(i);
            const double base = output_floor_model(p, 0.0, alpha_R, lambda_conv, 0.0, x[k]);
            const double dn = output_floor_model(p, 1.0, alpha_R, lambda_conv, 0.0, x[k]) - base;
            r[i] = (base + q[0] * dn) / ys + q[1] - y[k] / ys;
            if (Jm) {
                (*Jm)(i, 0) = dn / ys;
                (*Jm)(i, 1) = 1.0;
            }
        }
    };
    const LeastSquaresResult res = solve_least_squares(prob, Eigen::Vector2d(0.1, 0.0));

    OccupationFit f;
    f.n_R = res.params[0];
    f.S_hemt = res.params[1] * ys;
    f.n_R_sigma = std::sqrt(res.covariance(0, 0));
    f.S_hemt_sigma = std::sqrt(res.covariance(1, 1)) * ys;
    f.residual_norm = res.residual_norm * ys;
    return f;
}

cplx s21_shunt(const SystemParams& p, const ShuntModel& shunt, double omega)
{
    if (shunt.C_out < 0.0)
        throw ConfigError("C_out must be non-negative");
    const cplx s0 = -std::sqrt(p.kappa_R * p.kappa_L) / (J * (omega - p.omega_c) + 0.5 * p.kappa());
    return s0 + 2.0 * shunt.R_L * J * p.omega_c * shunt.C_out;
}

double transmission_correction(const SystemParams& p, const ShuntModel& shunt, double omega)
{
    const double k = p.kappa();
    return 4.0 * shunt.R_L * p.omega_c * shunt.C_out * k / std::sqrt(p.kappa_L * p.kappa_R) *
           ((omega - p.omega_c) / k);
}

double s21_ratio_db(const SystemParams& p, const ShuntModel& shunt, double delta)
{
    const double lo = std::abs(s21_shunt(p, shunt, probe_frequency(p, ProbeSide::plus, delta)));
    const double hi = std::abs(s21_shunt(p, shunt, probe_frequency(p, ProbeSide::minus, delta)));
    return 20.0 * std::log10(hi / lo);
}

double correction_from_ratio_db(double ratio_db)
{
    const double q = std::pow(10.0, ratio_db / 10.0);
    return (q - 1.0) / (q + 1.0);
}

ShuntFit fit_shunt_capacitance(const Spectrum& trace_db, const SystemParams& p, double R_L)
{
    const auto& x = trace_db.offsets();
    const auto& y = trace_db.values();
    const auto m = static_cast<Eigen::Index>(trace_db.size());
    if (m < 3)
        throw DegenerateData("S21 trace too short");
    constexpr double fF = 1e-15;
    const double db = 20.0 / std::numbers::ln10;

    std::vector<double> off0(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        off0[i] = y[i] - 20.0 * std::log10(std::abs(s21_shunt(p, {0.0, R_L}, p.omega_c + x[i])));

    // parameters: C_out in fF, gain in dB
    LeastSquaresProblem prob;
    prob.n_residuals = m;
    prob.scale = Eigen::Vector2d(1.0, 1.0);
    prob.evaluate = [&](const Eigen::VectorXd& q, Eigen::VectorXd& r, Eigen::MatrixXd* Jm) {
        const ShuntModel sh{q[0] * fF, R_L};
        const cplx dS = 2.0 * R_L * J * p.omega_c * fF;
        for (Eigen::Index i = 0; i < m; ++i) {
            const auto k = static_cast<std::size_t>(i);
            const cplx S = s21_shunt(p, {std::max(sh.C_out, 0.0), R_L}, p.omega_c + x[k]) +
                           (sh.C_out < 0.0 ? 2.0 * R_L * J * p.omega_c * sh.C_out : cplx{});
            r[i] = q[1] + 20.0 * std::log10(std::abs(S)) - y[k];
            if (Jm) {
                (*Jm)(i, 0) = db * (std::conj(S) * dS).real() / std::norm(S);
                (*Jm)(i, 1) = 1.0;
            }
        }
    };
    const LeastSquaresResult res = solve_least_squares(prob, Eigen::Vector2d(1.0, median(off0)));

    ShuntFit f;
    f.C_out = res.params[0] * fF;
    f.gain_db = res.params[1];
    f.C_out_sigma = std::sqrt(res.covariance(0, 0)) * fF;
    f.residual_norm = res.residual_norm;
    return f;
}

namespace {

class Noise {
public:
    Noise(double level, std::uint64_t seed) : level_(level), rng_(seed) {}
    double relative(double v) { return level_ > 0.0 ? v * (1.0 + level_ * gauss_(rng_)) : v; }
    double additive(double v, double sigma) { return level_ > 0.0 ? v + sigma * gauss_(rng_) : v; }
    double level() const { return level_; }

private:
    double level_;
    boost::random::mt19937_64 rng_;
    boost::random::normal_distribution<double> gauss_{0.0, 1.0};
};

struct SidebandMeasurement {
    double P_m_plus, P_m_minus, P_thru_plus, P_thru_minus;
};

SidebandMeasurement measure_sidebands(const SystemParams& p, const BathSpec& b, const ToneConfig& c,
                                      const SyntheticOptions& opt, double delta_plus,
                                      double delta_minus, Noise& noise)
{
    const MultitoneSpectra probe = multitone_spectra(p, b, c, SpectrumKind::symmetrized,
                                                     {-c.delta, c.delta});
    const double half = 8.0 * probe.gamma_tot;
    const std::size_t n = 241;
    auto fit_peak = [&](double centre, bool stokes) {
        const auto g = linear_grid(centre - half, centre + half, n);
        const MultitoneSpectra ms = multitone_spectra(p, b, c, SpectrumKind::symmetrized, g);
        const Spectrum& s = stokes ? ms.stokes : ms.anti_stokes;
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i)
            v[i] = noise.relative(s.value(i));
        return fit_lorentzian(Spectrum(g, std::move(v))).weight();
    };
    const double w_plus = fit_peak(-c.delta, false);
    const double w_minus = fit_peak(c.delta, true);

    const ToneSpec* red = c.find(ToneRole::red_probe);
    const ToneSpec* blue = c.find(ToneRole::blue_probe);
    const double wp = probe_frequency(p, ProbeSide::plus, c.delta);
    const double wm = probe_frequency(p, ProbeSide::minus, c.delta);
    SidebandMeasurement out;
    out.P_m_plus = opt.gain_c * hbar * p.omega_c * w_plus;
    out.P_m_minus = opt.gain_c * hbar * p.omega_c * w_minus;
    out.P_thru_plus = noise.relative(opt.gain_plus * hbar * wp * (1.0 + delta_plus) * p.kappa_R *
                                     red->photon_number(p));
    out.P_thru_minus = noise.relative(opt.gain_minus * hbar * wm * (1.0 + delta_minus) *
                                      p.kappa_R * blue->photon_number(p));
    return out;
}

} // namespace

ClosureReport run_synthetic_closure(const SystemParams& p, const BathSpec& b, const ToneConfig& c,
                                    const SyntheticOptions& opt)
{
    p.validate();
    b.validate();
    c.validate(p);
    Noise noise(opt.noise, opt.seed);
    ClosureReport rep;
    const ShuntModel truth{opt.C_out, 50.0};

    // transmission trace and shunt capacitance
    {
        const double span = 1.25 * (p.omega_m + 2.0 * c.delta);
        const auto g = linear_grid(-span, span, 801);
        std::vector<double> v(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            v[i] = opt.gain_db +
                   20.0 * std::log10(noise.relative(std::abs(s21_shunt(p, truth, p.omega_c + g[i]))));
        rep.s21_trace = Spectrum(g, std::move(v));
        rep.shunt = fit_shunt_capacitance(rep.s21_trace, p);
    }
    const ShuntModel fitted{rep.shunt.C_out, 50.0};
    auto corr = [&](const ShuntModel& sh, ProbeSide side, double delta) {
        return transmission_correction(p, sh, probe_frequency(p, side, delta));
    };

    // linewidth against detected red pump power
    {
        const double w_red = p.omega_c - p.omega_m;
        const double d_true = transmission_correction(p, truth, w_red);
        std::vector<PowerPoint> pts;
        for (int i = 0; i <= 8; ++i) {
            const double n_p = std::pow(10.0, 3.0 + 0.5 * i);
            const double gt = p.gamma_m + 4.0 * p.g0 * p.g0 / p.kappa() * n_p;
            const double P = opt.gain_plus * hbar * w_red * (1.0 + d_true) * p.kappa_R * n_p;
            pts.push_back({noise.relative(P), noise.relative(gt), 0.0});
        }
        rep.linewidth = fit_linewidth_vs_power(pts);
        const double d_fit = transmission_correction(p, fitted, w_red);
        const double watts_per_photon = opt.gain_plus * hbar * w_red * (1.0 + d_fit) * p.kappa_R;
        rep.g0_linewidth = std::sqrt(std::max(rep.linewidth.slope, 0.0) * watts_per_photon *
                                     p.kappa() / 4.0);
    }

    // thermometry sweep with weak balanced probes
    const double dth = opt.delta_thermometry;
    const double dp_true = corr(truth, ProbeSide::plus, dth);
    const double dm_true = corr(truth, ProbeSide::minus, dth);
    rep.delta_plus = corr(fitted, ProbeSide::plus, dth);
    rep.delta_minus = corr(fitted, ProbeSide::minus, dth);
    {
        ToneConfig th = three_tone(p, {true, opt.n_p_thermometry}, {true, opt.n_p_thermometry},
                                   std::nullopt, dth, 0.0);
        ThermometrySweep& sw = rep.thermometry;
        std::vector<double> rp, rm;
        for (int i = 0; i < 10; ++i) {
            const double T = 0.020 + 0.020 * i;
            BathSpec bt = b;
            bt.n_m = bose_occupation(p.omega_m, T);
            const SidebandMeasurement m = measure_sidebands(p, bt, th, opt, dp_true, dm_true, noise);
            sw.temperatures.push_back(T);
            sw.n_m.push_back(bt.n_m);
            sw.P_m_plus.push_back(m.P_m_plus);
            sw.P_m_minus.push_back(m.P_m_minus);
            sw.P_thru_plus.push_back(m.P_thru_plus);
            sw.P_thru_minus.push_back(m.P_thru_minus);
            rp.push_back(m.P_m_plus / m.P_thru_plus);
            rm.push_back(m.P_m_minus / m.P_thru_minus);
        }
        sw.fit_plus = fit_line(sw.n_m, rp);
        sw.fit_minus = fit_line(sw.n_m, rm);
    }
    auto g0_from = [&](double k, double d, ProbeSide side, double gain) {
        return g0_from_conversion_slope(p, {dth, opt.gain_c, gain, d}, side, k);
    };
    rep.g0_plus = g0_from(rep.thermometry.fit_plus.slope, rep.delta_plus, ProbeSide::plus,
                          opt.gain_plus);
    rep.g0_minus = g0_from(rep.thermometry.fit_minus.slope, rep.delta_minus, ProbeSide::minus,
                           opt.gain_minus);
    rep.g0 = 0.5 * (rep.g0_plus + rep.g0_minus);
    rep.conversion_plus = 1.0 / rep.thermometry.fit_plus.slope;
    rep.conversion_minus = 1.0 / rep.thermometry.fit_minus.slope;

    // sideband measurement at the configured powers; conversion constants
    // carry the thermometry transmission, so rescale for the probe offset
    {
        const double dp = corr(truth, ProbeSide::plus, c.delta);
        const double dm = corr(truth, ProbeSide::minus, c.delta);
        const SidebandMeasurement m = measure_sidebands(p, b, c, opt, dp, dm, noise);
        auto rescale = [&](ProbeSide side, double d_th, double d_meas) {
            const double w_th = probe_frequency(p, side, dth);
            const double w_ms = probe_frequency(p, side, c.delta);
            return (w_ms / w_th) * (1.0 + d_meas) / (1.0 + d_th);
        };
        rep.n_plus = rep.conversion_plus * m.P_m_plus / m.P_thru_plus *
                     rescale(ProbeSide::plus, rep.delta_plus, corr(fitted, ProbeSide::plus, c.delta));
        rep.n_minus = rep.conversion_minus * m.P_m_minus / m.P_thru_minus *
                      rescale(ProbeSide::minus, rep.delta_minus,
                              corr(fitted, ProbeSide::minus, c.delta));
        rep.n_eff = 0.5 * (rep.n_minus - rep.n_plus - 1.0);
        rep.n_eff_true = b.n_eff(p);
    }

    // undriven floor for the output-port occupation
    {
        const auto g = linear_grid(-2.0 * p.kappa(), 2.0 * p.kappa(), 401);
        std::vector<double> clean(g.size());
        double mean = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            clean[i] = output_floor_model(p, b.n_R, b.alpha_R, opt.lambda_conv, opt.S_hemt, g[i]);
            mean += clean[i];
        }
        mean /= static_cast<double>(g.size());
        for (auto& v : clean)
            v = noise.additive(v, opt.noise * mean);
        rep.floor_spectrum = Spectrum(g, std::move(clean));
        rep.occupation = fit_output_occupation(rep.floor_spectrum, p, opt.lambda_conv, b.alpha_R);
        rep.n_R_true = b.n_R;
    }
    return rep;
}

} // namespace sideband
