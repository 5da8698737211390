#include "sideband/langevin.hpp"

#include "sideband/errors.hpp"
#include "sideband/least_squares.hpp"
#include "sideband/multitone.hpp"

#include <boost/random/normal_distribution.hpp>
#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

namespace sideband {

namespace {

constexpr cplx I{0.0, 1.0};

std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

// Streaming Welch accumulator: Hann window, 50% overlap.
class Welch {
public:
    Welch(std::size_t length, double dt) : L_(length), dt_(dt), buf_(length), acc_(length, 0.0)
    {
        window_.resize(L_);
        for (std::size_t n = 0; n < L_; ++n) {
            window_[n] = 0.5 * (1.0 - std::cos(two_pi * static_cast<double>(n) / static_cast<double>(L_)));
            wsum2_ += window_[n] * window_[n];
        }
        std::lock_guard<std::mutex> lock(planner_mutex());
        in_ = fftw_alloc_complex(L_);
        out_ = fftw_alloc_complex(L_);
        plan_ = fftw_plan_dft_1d(static_cast<int>(L_), in_, out_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    Welch(const Welch&) = delete;
    Welch& operator=(const Welch&) = delete;
    ~Welch()
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan_);
        fftw_free(in_);
        fftw_free(out_);
    }

    void push(cplx x)
    {
        buf_[fill_++] = x;
        if (fill_ == L_) {
            process();
            std::copy(buf_.begin() + static_cast<std::ptrdiff_t>(L_ / 2), buf_.end(), buf_.begin());
            fill_ = L_ / 2;
        }
    }

    std::size_t segments() const { return segments_; }
    const std::vector<double>& accumulated() const { return acc_; }
    double scale() const { return dt_ / wsum2_; }

private:
    void process()
    {
        for (std::size_t n = 0; n < L_; ++n) {
            in_[n][0] = window_[n] * buf_[n].real();
            in_[n][1] = window_[n] * buf_[n].imag();
        }
        fftw_execute(plan_);
        for (std::size_t k = 0; k < L_; ++k)
            acc_[k] += out_[k][0] * out_[k][0] + out_[k][1] * out_[k][1];
        ++segments_;
    }

    std::size_t L_;
    double dt_;
    std::vector<cplx> buf_;
    std::vector<double> window_;
    std::vector<double> acc_;
    double wsum2_ = 0.0;
    std::size_t fill_ = 0;
    std::size_t segments_ = 0;
    fftw_complex* in_ = nullptr;
    fftw_complex* out_ = nullptr;
    fftw_plan plan_ = nullptr;
};

// Turns an accumulated periodogram into a spectrum ordered by offset.
Spectrum finish_psd(const std::vector<double>& acc, double scale, std::size_t segments,
                    double dt, double window)
{
    const std::size_t L = acc.size();
    const double dw = two_pi / (static_cast<double>(L) * dt);
    std::vector<double> x, v;
    const double norm = scale / static_cast<double>(segments);
    for (std::size_t j = 0; j < L; ++j) {
        const std::size_t k = (j + L / 2) % L;
        const double w = (static_cast<double>(j) - static_cast<double>(L / 2)) * dw;
        if (window > 0.0 && std::abs(w) > window)
            continue;
        x.push_back(w);
        v.push_back(acc[k] * norm);
    }
    return Spectrum(std::move(x), std::move(v));
}

struct Coupling {
    double G;
    double eps; // rotation rate of the interaction in the (d, c) frame
    bool red;
};

class Stepper {
public:
    Stepper(const SystemParams& p, const BathSpec& b, const ToneConfig& c, double dt, Rng& rng)
        : dt_(dt), rng_(rng)
    {
        k_half_ = 0.5 * p.kappa();
        g_half_ = 0.5 * p.gamma_m;
        sk_R_ = std::sqrt(p.kappa_R);
        // L and I ports only reach the output through d, so one draw carries both
        const double var[3] = {
            p.kappa_R * (b.n_R + 0.5 * b.alpha_R),
            p.kappa_L * (b.n_L + 0.5 * b.alpha_L) + p.kappa_I * (b.n_I + 0.5 * b.alpha_I),
            p.gamma_m * (b.n_m + 0.5 * b.beta)};
        for (int i = 0; i < 3; ++i)
            sd_[i] = std::sqrt(var[i] / dt / 2.0);
        for (const auto& t : c.tones) {
            const bool red = t.red_side();
            const double eps = red ? -t.detuning() - p.omega_m : t.detuning() - p.omega_m;
            couplings_.push_back({t.coupling(p), eps, red});
            phase_.push_back(1.0);
            rot_.push_back(std::exp(I * eps * dt));
        }
    }

    // Advances one step and returns the output sample of that step.
    cplx step()
    {
        cplx xi[3];
        for (int i = 0; i < 3; ++i) {
            const double re = gauss_(rng_);
            const double im = gauss_(rng_);
            xi[i] = {sd_[i] * re, sd_[i] * im};
        }

        const cplx d_start = d_;
        cplx dd = -k_half_ * d_;
        cplx dc = -g_half_ * c_;
        for (std::size_t k = 0; k < couplings_.size(); ++k) {
            const Coupling& cp = couplings_[k];
            const cplx ph = phase_[k];
            if (cp.red) {
                dd += -I * cp.G * ph * c_;
                dc += -I * cp.G * std::conj(ph) * d_;
            } else {
                dd += -I * cp.G * std::conj(ph) * std::conj(c_);
                dc += -I * cp.G * std::conj(ph) * std::conj(d_);
            }
        }
        d_ += dt_ * (dd - xi[0] - xi[1]);
        c_ += dt_ * (dc - xi[2]);
        // cavity field at the step midpoint keeps the output flat to O(kappa dt)^2
        const cplx out = xi[0] / sk_R_ + sk_R_ * 0.5 * (d_start + d_);

        ++n_;
        if (n_ % 4096 == 0) {
            const double t = static_cast<double>(n_) * dt_;
            for (std::size_t k = 0; k < couplings_.size(); ++k)
                phase_[k] = std::exp(I * couplings_[k].eps * t);
        } else {
            for (std::size_t k = 0; k < couplings_.size(); ++k)
                phase_[k] *= rot_[k];
        }
        return out;
    }

    cplx mechanics() const { return c_; }

private:
    double dt_;
    Rng& rng_;
    boost::random::normal_distribution<double> gauss_{0.0, 1.0};
    double k_half_ = 0.0, g_half_ = 0.0, sk_R_ = 0.0;
    double sd_[3] = {}; // scaled by the port rates
    std::vector<Coupling> couplings_;
    std::vector<cplx> phase_, rot_;
    cplx d_{0.0, 0.0}, c_{0.0, 0.0};
    std::uint64_t n_ = 0;
};

double checked_gamma_tot(const SystemParams& p, const BathSpec& b, const ToneConfig& c,
                         const SimConfig& sim)
{
    p.validate();
    b.validate();
    c.validate(p);
    const double g = validate_stability(p, c);
    sim.validate(p, g);
    return g;
}

std::size_t thread_count(std::size_t jobs)
{
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SIDEBAND_LAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0)
            n = std::min(n, static_cast<std::size_t>(v));
    }
    return std::min(n, jobs);
}

} // namespace

Rng trajectory_rng(std::uint64_t seed, std::uint64_t trajectory)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trajectory),
                      static_cast<std::uint32_t>(trajectory >> 32)};
    return Rng(seq);
}

std::size_t SimConfig::segment_length() const
{
    if (psd_segments == 0 || burn_in >= n_steps)
        return 0;
    std::size_t L = 2 * (n_steps - burn_in) / (psd_segments + 1);
    return L - L % 2;
}

void SimConfig::validate(const SystemParams& p, double gamma_tot) const
{
    if (!(dt > 0.0) || n_trajectories == 0 || psd_segments == 0)
        throw ConfigError("simulation needs dt > 0, at least one trajectory and one segment");
    if (burn_in >= n_steps)
        throw ConfigError("burn-in must be shorter than the run");
    if (segment_length() < 16)
        throw ConfigError("too few samples for the requested Welch segments");
    std::ostringstream os;
    if (!(dt * p.kappa() < 0.05)) {
        os << "dt*kappa = " << dt * p.kappa() << " must be below 0.05";
        throw StepSizeError(os.str());
    }
    if (!(dt * gamma_tot < 1e-3)) {
        os << "dt*gamma_tot = " << dt * gamma_tot << " must be below 1e-3";
        throw StepSizeError(os.str());
    }
    if (!(static_cast<double>(n_steps) * dt > 50.0 / gamma_tot)) {
        os << "run length " << static_cast<double>(n_steps) * dt << " s must exceed 50/gamma_tot = "
           << 50.0 / gamma_tot << " s";
        throw StepSizeError(os.str());
    }
}

std::vector<cplx> synthesize_input_noise(double n, double w, double dt, std::size_t count, Rng& rng)
{
    if (!(dt > 0.0))
        throw ConfigError("dt must be positive");
    const double sd = std::sqrt((n + 0.5 * w) / dt / 2.0);
    boost::random::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<cplx> out(count);
    for (auto& z : out) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        z = {sd * re, sd * im};
    }
    return out;
}

TrajectoryOutput integrate_langevin(const SystemParams& p, const BathSpec& b, const ToneConfig& c,
                                    const SimConfig& sim, std::uint64_t trajectory)
{
    checked_gamma_tot(p, b, c, sim);
    Rng rng = trajectory_rng(sim.seed, trajectory);
    Stepper st(p, b, c, sim.dt, rng);
    TrajectoryOutput out;
    out.dt = sim.dt;
    out.output_field.reserve(sim.n_steps - sim.burn_in);
    double phonons = 0.0;
    for (std::size_t n = 0; n < sim.n_steps; ++n) {
        const cplx y = st.step();
        if (n >= sim.burn_in) {
            out.output_field.push_back(y);
            phonons += std::norm(st.mechanics());
        }
    }
    out.mean_phonons = phonons / static_cast<double>(sim.n_steps - sim.burn_in);
    return out;
}

Spectrum estimate_psd(const TrajectoryOutput& traj, std::size_t psd_segments)
{
    const std::size_t N = traj.output_field.size();
    if (psd_segments == 0)
        throw ConfigError("need at least one Welch segment");
    std::size_t L = 2 * N / (psd_segments + 1);
    L -= L % 2;
    if (L < 16)
        throw ConfigError("trajectory too short for the requested Welch segments");
    Welch w(L, traj.dt);
    const std::size_t used = (psd_segments + 1) * (L / 2);
    for (std::size_t n = 0; n < used; ++n)
        w.push(traj.output_field[n]);
    return finish_psd(w.accumulated(), w.scale(), w.segments(), traj.dt, 0.0);
}

OracleRun run_oracle(const SystemParams& p, const BathSpec& b, const ToneConfig& c,
                     const SimConfig& sim, double window)
{
    checked_gamma_tot(p, b, c, sim);
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t L = sim.segment_length();

    struct Partial {
        std::vector<double> acc;
        std::size_t segments = 0;
        double phonons = 0.0;
        double scale = 0.0;
    };
    std::vector<Partial> parts(sim.n_trajectories);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t j = next++; j < sim.n_trajectories; j = next++) {
            Rng rng = trajectory_rng(sim.seed, j);
            Stepper st(p, b, c, sim.dt, rng);
            Welch w(L, sim.dt);
            double phonons = 0.0;
            for (std::size_t n = 0; n < sim.n_steps; ++n) {
                const cplx y = st.step();
                if (n >= sim.burn_in) {
                    w.push(y);
                    phonons += std::norm(st.mechanics());
                }
            }
            parts[j] = {w.accumulated(), w.segments(),
                        phonons / static_cast<double>(sim.n_steps - sim.burn_in), w.scale()};
        }
    };
    const std::size_t nt = thread_count(sim.n_trajectories);
    if (nt <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < nt; ++i)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }

    std::vector<double> acc(L, 0.0);
    std::size_t segments = 0;
    double phonons = 0.0;
    for (const auto& part : parts) {
        for (std::size_t k = 0; k < L; ++k)
            acc[k] += part.acc[k];
        segments += part.segments;
        phonons += part.phonons;
    }
    OracleRun run;
    run.psd = finish_psd(acc, parts.front().scale, segments, sim.dt, window);
    run.n_segments = segments;
    run.segment_length = L;
    run.mean_phonons = phonons / static_cast<double>(sim.n_trajectories);
    run.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return run;
}

namespace {

struct AnalyticPeak {
    std::string label;
    double center;
    double weight;
    double gamma_tot;
    double floor;
};

struct AnalyticModel {
    std::vector<AnalyticPeak> peaks;
    std::vector<double> values;
};

AnalyticModel analytic_model(const SystemParams& p, const BathSpec& b, const ToneConfig& c,
                             const std::vector<double>& grid)
{
    AnalyticModel m;
    if (c.has_probe_pair()) {
        const MultitoneSpectra ms = multitone_spectra(p, b, c, SpectrumKind::symmetrized, grid);
        m.peaks.push_back({"anti_stokes", -c.delta, ms.anti_stokes_weight, ms.gamma_tot, ms.floor});
        m.peaks.push_back({"stokes", c.delta, ms.stokes_weight, ms.gamma_tot, ms.floor});
        for (std::size_t i = 0; i < grid.size(); ++i)
            m.values.push_back(ms.anti_stokes.value(i) + ms.stokes.value(i) - ms.floor);
        // the cooling tone scatters the same motion into -delta_c
        if (const ToneSpec* cool = c.find(ToneRole::cooling)) {
            const double w = p.kappa_R / p.kappa() * cool->gamma_opt(p) * ms.n_plus;
            const double h = 0.5 * ms.gamma_tot;
            m.peaks.insert(m.peaks.begin(), {"cooling", -c.delta_c, w, ms.gamma_tot, ms.floor});
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double u = grid[i] + c.delta_c;
                m.values[i] += w * ms.gamma_tot / (u * u + h * h);
            }
        }
        return m;
    }
    if (c.tones.size() != 1)
        throw ConfigError("analytic comparison needs a single tone or a probe pair");
    const ToneSpec& t = c.tones.front();
    const DetuningSign sign = t.red_side() ? DetuningSign::red : DetuningSign::blue;
    const SingleToneLineshape ls =
        single_tone_lineshape(p, b, t, sign, SpectrumKind::symmetrized, LineshapeModel::exact);
    const double centre = t.red_side() ? t.detuning() + p.omega_m : t.detuning() - p.omega_m;
    m.peaks.push_back({t.red_side() ? "anti_stokes" : "stokes", centre, ls.weight(), ls.gamma_tot,
                       ls.floor});
    for (double x : grid)
        m.values.push_back(ls.at(x - centre));
    return m;
}

} // namespace

OracleComparison compare_with_analytic(const SystemParams& p, const BathSpec& b,
                                       const ToneConfig& c, const Spectrum& mc)
{
    const AnalyticModel am = analytic_model(p, b, c, mc.offsets());
    const std::size_t np = am.peaks.size();

    double sep = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < np; ++i)
        sep = std::min(sep, std::abs(am.peaks[i + 1].center - am.peaks[i].center));
    const double gmax = std::max_element(am.peaks.begin(), am.peaks.end(), [](auto& a, auto& b2) {
                            return a.gamma_tot < b2.gamma_tot;
                        })->gamma_tot;
    const double fit_half = 30.0 * gmax;
    const double band = std::min(10.0 * gmax, 0.4 * sep);

    double lo = am.peaks.front().center - fit_half;
    double hi = am.peaks.back().center + fit_half;
    // residuals weighted by the analytic spectrum
    std::vector<double> x, y, sig;
    for (std::size_t i = 0; i < mc.size(); ++i)
        if (mc.offset(i) >= lo && mc.offset(i) <= hi) {
            x.push_back(mc.offset(i));
            y.push_back(mc.value(i));
            sig.push_back(std::max(std::abs(am.values[i]), 1e-3 * am.peaks.front().floor));
        }
    if (x.size() < 3 * np + 20)
        throw DegenerateData("Monte-Carlo spectrum does not resolve the analytic peaks");

    // parameters: per peak (center, width, amplitude), then a floor even about
    // the cavity, where thermal cavity noise curves it on the scale kappa
    const auto m = static_cast<Eigen::Index>(x.size());
    const auto nq = static_cast<Eigen::Index>(3 * np + 2);
    Eigen::VectorXd q0(nq), scale(nq);
    double level = 0.0;
    for (std::size_t k = 0; k < np; ++k) {
        const auto& pk = am.peaks[k];
        const double A = 4.0 * pk.weight / pk.gamma_tot;
        q0.segment(static_cast<Eigen::Index>(3 * k), 3) << pk.center, pk.gamma_tot, A;
        scale.segment(static_cast<Eigen::Index>(3 * k), 3) << pk.gamma_tot, pk.gamma_tot,
            std::abs(A) + std::abs(pk.floor);
        level = std::max(level, std::abs(A) + std::abs(pk.floor));
    }
    const double reach = std::max(std::abs(lo), std::abs(hi));
    q0.tail(2) << am.peaks.front().floor, 0.0;
    scale.tail(2) << level, level / (reach * reach);
    auto floor_at = [&](const Eigen::VectorXd& q, double xi) { return q[nq - 2] + q[nq - 1] * xi * xi; };

    auto peak_at = [](const Eigen::VectorXd& q, std::size_t k, double xi) {
        const auto o = static_cast<Eigen::Index>(3 * k);
        const double h = 0.5 * q[o + 1];
        const double u = xi - q[o];
        return q[o + 2] * h * h / (u * u + h * h);
    };

    LeastSquaresProblem prob;
    prob.n_residuals = m;
    prob.scale = scale;
    prob.evaluate = [&](const Eigen::VectorXd& q, Eigen::VectorXd& r, Eigen::MatrixXd* J) {
        for (Eigen::Index i = 0; i < m; ++i) {
            const double xi = x[static_cast<std::size_t>(i)];
            const double w = 1.0 / sig[static_cast<std::size_t>(i)];
            double model = floor_at(q, xi);
            for (std::size_t k = 0; k < np; ++k) {
                const auto o = static_cast<Eigen::Index>(3 * k);
                const double h = 0.5 * q[o + 1];
                const double u = xi - q[o];
                const double D = u * u + h * h;
                const double A = q[o + 2];
                model += A * h * h / D;
                if (J) {
                    (*J)(i, o) = w * A * h * h * 2.0 * u / (D * D);
                    (*J)(i, o + 1) = w * A * h * u * u / (D * D);
                    (*J)(i, o + 2) = w * h * h / D;
                }
            }
            r[i] = w * (model - y[static_cast<std::size_t>(i)]);
            if (J) {
                (*J)(i, nq - 2) = w;
                (*J)(i, nq - 1) = w * xi * xi;
            }
        }
    };
    const LeastSquaresResult fit = solve_least_squares(prob, q0);
    const Eigen::VectorXd& q = fit.params;
    const double dx = x[1] - x[0];

    OracleComparison out;
    for (std::size_t k = 0; k < np; ++k) {
        const auto o = static_cast<Eigen::Index>(3 * k);
        const double c0 = q[o];
        const double h = 0.5 * std::abs(q[o + 1]);
        double integral = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (std::abs(x[i] - c0) > band)
                continue;
            double v = y[i] - floor_at(q, x[i]);
            for (std::size_t j = 0; j < np; ++j)
                if (j != k)
                    v -= peak_at(q, j, x[i]);
            integral += v * dx / two_pi;
        }
        const double tail = q[o + 2] * h / pi * (0.5 * pi - std::atan(band / h));

        PeakComparison pc;
        pc.label = am.peaks[k].label;
        pc.analytic_center = am.peaks[k].center;
        pc.mc_center = c0;
        pc.analytic_weight = am.peaks[k].weight;
        pc.mc_weight = integral + tail;
        pc.rel_err = (pc.mc_weight - pc.analytic_weight) / std::abs(pc.analytic_weight);
        pc.analytic_floor = am.peaks[k].floor;
        pc.mc_floor = floor_at(q, c0);
        pc.gamma_tot = am.peaks[k].gamma_tot;
        out.peaks.push_back(pc);
    }
    out.analytic = Spectrum(mc.offsets(), am.values);
    return out;
}

SimConfig default_sim_config(const SystemParams& p, const ToneConfig& c, std::uint64_t seed,
                             std::size_t n_segments)
{
    const double gamma_tot = validate_stability(p, c);
    SimConfig sim;
    sim.dt = 0.048 / p.kappa();
    if (sim.dt * gamma_tot >= 1e-3)
        sim.dt = 0.9e-3 / gamma_tot;
    std::size_t L = 16;
    while (static_cast<double>(L) * sim.dt < 30.0 / gamma_tot)
        L *= 2;
    sim.seed = seed;
    sim.psd_segments = n_segments;
    sim.burn_in = static_cast<std::size_t>(std::ceil(20.0 / (gamma_tot * sim.dt)));
    sim.n_steps = sim.burn_in + (n_segments + 1) * (L / 2);
    return sim;
}

std::vector<std::string> canonical_names()
{
    return {"red-probe", "blue-probe", "balanced-pair", "pair-cooling", "thermal-squashing"};
}

CanonicalCase canonical_case(const std::string& name, std::uint64_t seed, std::size_t n_segments)
{
    CanonicalCase cc;
    cc.name = name;
    SystemParams& p = cc.params;
    p.omega_c = 1.0e5;
    p.omega_m = 1.0e4;
    p.g0 = 1.0;
    p.kappa_R = 360.0;
    p.kappa_L = 20.0;
    p.kappa_I = 20.0;
    p.gamma_m = 1.0;
    BathSpec& b = cc.baths;
    double delta = 12.0;
    double delta_c = 0.0;

    auto coupling = [&](double gamma_opt) { return std::sqrt(gamma_opt * p.kappa() / 4.0); };
    auto single = [&](bool red, double gamma_opt) {
        const double det = red ? -p.omega_m : p.omega_m;
        return ToneConfig::single(ToneSpec::from_coupling(ToneRole::generic, det, coupling(gamma_opt)));
    };
    auto pair = [&](double gamma_opt, std::optional<double> gamma_cool) {
        std::optional<ProbeDrive> cool;
        if (gamma_cool)
            cool = ProbeDrive{false, coupling(*gamma_cool)};
        return three_tone(p, {false, coupling(gamma_opt)}, {false, coupling(gamma_opt)}, cool, delta,
                          delta_c);
    };

    if (name == "red-probe") {
        b.n_m = 100.0;
        cc.tones = single(true, 0.1);
    } else if (name == "blue-probe") {
        b.n_m = 10.0;
        cc.tones = single(false, 0.5);
    } else if (name == "balanced-pair") {
        cc.tones = pair(1.0, std::nullopt);
    } else if (name == "pair-cooling") {
        b.n_m = 5.0;
        delta = 16.0;
        delta_c = 40.0;
        cc.tones = pair(0.5, 0.5);
    } else if (name == "thermal-squashing") {
        b.n_I = 20.0;
        b.n_m = 0.1;
        cc.tones = single(true, 2.5);
    } else {
        throw ConfigError("unknown canonical case '" + name + "'");
    }

    cc.sim = default_sim_config(p, cc.tones, seed, n_segments);
    cc.window = 60.0;
    return cc;
}

} // namespace sideband
