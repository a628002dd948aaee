#include "neurodyn/arm_sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <string>
#include <vector>

#include <omp.h>

#include "neurodyn/dsp.hpp"
#include "neurodyn/error.hpp"
#include "neurodyn/threads.hpp"

namespace neurodyn::arm {

namespace {

// saturating PD servo + excitation-noise policy constants, tuned against
// the reach-completion target (>= 90% of trials within 0.1 rad)
constexpr std::array<double, 2> kKp{0.5, 0.3};   // N*m/rad
constexpr std::array<double, 2> kKd{0.02, 0.01}; // N*m*s/rad
constexpr double kCoactivation = 0.08;
constexpr double kNoiseTauS = 0.08; // OU correlation time of excitation noise
constexpr double kEmgFloor = 0.02;  // resting carrier level of the EMG model

struct InertiaTerms {
    double a1, a2, a3;
};

// M11 = a1 + 2 a2 cos q2, M12 = M21 = a3 + a2 cos q2, M22 = a3
InertiaTerms inertia_terms(const ArmParams& p)
{
    const double r1 = 0.5 * p.l1;
    const double r2 = 0.5 * p.l2;
    const double i1 = p.m1 * p.l1 * p.l1 / 12.0;
    const double i2 = p.m2 * p.l2 * p.l2 / 12.0;
    return {i1 + i2 + p.m1 * r1 * r1 + p.m2 * (p.l1 * p.l1 + r2 * r2),
            p.m2 * p.l1 * r2, i2 + p.m2 * r2 * r2};
}

std::array<double, 2> muscle_torque(const std::array<double, 4>& a,
                                    const ArmParams& p)
{
    return {p.moment_arm[0] * a[0] * p.f_max[0] -
                p.moment_arm[1] * a[1] * p.f_max[1],
            p.moment_arm[2] * a[2] * p.f_max[2] -
                p.moment_arm[3] * a[3] * p.f_max[3]};
}

std::mt19937_64 trial_engine(std::uint64_t seed, std::size_t trial,
                             unsigned stream)
{
    std::seed_seq seq{static_cast<unsigned>(seed & 0xffffffffu),
                      static_cast<unsigned>(seed >> 32),
                      static_cast<unsigned>(trial), stream};
    return std::mt19937_64(seq);
}

} // namespace

void ArmParams::validate() const
{
    require(l1 > 0 && l2 > 0 && m1 > 0 && m2 > 0, errc::invalid_config,
            "link lengths and masses must be positive");
    require(sim_dt > 0, errc::invalid_config, "sim_dt must be positive");
    require(tau_act > 0, errc::invalid_config, "tau_act must be positive");
    require(damping >= 0, errc::invalid_config, "damping must be >= 0");
    for (double f : f_max)
        require(f >= 0.2 && f <= 1.2, errc::invalid_config,
                "f_max outside the plausible range [0.2, 1.2] N");
    for (double r : moment_arm)
        require(r > 0, errc::invalid_config, "moment arms must be positive");
    for (int j = 0; j < 2; j++)
        require(q_min[j] < q_max[j], errc::invalid_config,
                "joint limits must satisfy q_min < q_max");
    substeps();
}

int ArmParams::substeps() const
{
    const double ratio = ctrl_dt / sim_dt;
    const int n = static_cast<int>(std::lround(ratio));
    require(n >= 1 && std::abs(ratio - n) < 1e-9, errc::invalid_config,
            "ctrl_dt must be a positive integer multiple of sim_dt");
    return n;
}

void ReachScript::validate(const ArmParams& p) const
{
    require(trials >= 1, errc::invalid_config, "trials must be >= 1");
    require(duration >= p.ctrl_dt, errc::invalid_config,
            "duration must cover at least one control step");
    require(noise >= 0, errc::invalid_config, "noise scale must be >= 0");
    for (int j = 0; j < 2; j++) {
        require(start_q[j] >= p.q_min[j] && start_q[j] <= p.q_max[j],
                errc::invalid_config, "start posture outside joint limits");
        require(target_q[j] >= p.q_min[j] && target_q[j] <= p.q_max[j],
                errc::invalid_config, "target posture outside joint limits");
    }
}

ArmState step(const ArmState& state, const std::array<double, 4>& u,
              const ArmParams& p)
{
    p.validate();
    for (double ui : u)
        require(std::isfinite(ui) && ui >= 0.0 && ui <= 1.0,
                errc::invalid_argument, "excitation must lie in [0, 1]");

    const auto it = inertia_terms(p);
    const double decay = std::exp(-p.sim_dt / p.tau_act);
    const double r1 = 0.5 * p.l1;
    const double r2 = 0.5 * p.l2;
    const int n_sub = p.substeps();

    ArmState s = state;
    for (int k = 0; k < n_sub; k++) {
        for (int m = 0; m < 4; m++) {
            // exact update of da/dt = (u - a)/tau_act over sim_dt
            s.a[m] = u[m] + (s.a[m] - u[m]) * decay;
            s.a[m] = std::clamp(s.a[m], 0.0, 1.0);
        }
        const auto tau = muscle_torque(s.a, p);
        const double c2 = std::cos(s.q[1]);
        const double s2 = std::sin(s.q[1]);
        const double m11 = it.a1 + 2.0 * it.a2 * c2;
        const double m12 = it.a3 + it.a2 * c2;
        const double m22 = it.a3;
        const double h = it.a2 * s2;
        const double cor1 =
            -h * (2.0 * s.qdot[0] * s.qdot[1] + s.qdot[1] * s.qdot[1]);
        const double cor2 = h * s.qdot[0] * s.qdot[0];
        const double g1 =
            p.gravity * ((p.m1 * r1 + p.m2 * p.l1) * std::cos(s.q[0]) +
                         p.m2 * r2 * std::cos(s.q[0] + s.q[1]));
        const double g2 = p.gravity * p.m2 * r2 * std::cos(s.q[0] + s.q[1]);
        const double rhs1 = tau[0] - cor1 - g1 - p.damping * s.qdot[0];
        const double rhs2 = tau[1] - cor2 - g2 - p.damping * s.qdot[1];
        const double det = m11 * m22 - m12 * m12;
        const double qdd1 = (m22 * rhs1 - m12 * rhs2) / det;
        const double qdd2 = (-m12 * rhs1 + m11 * rhs2) / det;
        // semi-implicit: position advances with the updated velocity
        s.qdot[0] += qdd1 * p.sim_dt;
        s.qdot[1] += qdd2 * p.sim_dt;
        s.q[0] += s.qdot[0] * p.sim_dt;
        s.q[1] += s.qdot[1] * p.sim_dt;
        for (int j = 0; j < 2; j++) {
            if (s.q[j] < p.q_min[j]) {
                s.q[j] = p.q_min[j];
                if (s.qdot[j] < 0) s.qdot[j] = 0;
            } else if (s.q[j] > p.q_max[j]) {
                s.q[j] = p.q_max[j];
                if (s.qdot[j] > 0) s.qdot[j] = 0;
            }
        }
    }
    for (int j = 0; j < 2; j++)
        require(std::isfinite(s.q[j]) && std::isfinite(s.qdot[j]),
                errc::non_finite_state, "integration diverged");
    return s;
}

namespace {

void simulate_trial(std::size_t trial, const ReachScript& script,
                    const ArmParams& p, const dsp::BiquadCascade& band,
                    std::size_t n_out, int sub_out, int emg_per_ctrl,
                    TrialSet& tracks, TrialSet& emg)
{
    const std::size_t n_ctrl = n_out * static_cast<std::size_t>(sub_out);

    auto rng = trial_engine(script.seed, trial, 1);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double ou_decay = std::exp(-p.ctrl_dt / kNoiseTauS);
    const double ou_diff =
        script.noise * std::sqrt(1.0 - ou_decay * ou_decay);

    ArmState s;
    s.q = script.start_q;
    std::array<double, 4> xi{0.0, 0.0, 0.0, 0.0};
    std::vector<std::array<double, 4>> knots(n_ctrl + 1);
    knots[0] = s.a;

    for (std::size_t c = 0; c < n_ctrl; c++) {
        if (c % static_cast<std::size_t>(sub_out) == 0) {
            const std::size_t row = c / static_cast<std::size_t>(sub_out);
            tracks(trial, row, 0) = s.q[0];
            tracks(trial, row, 1) = s.q[1];
            tracks(trial, row, 2) = s.qdot[0];
            tracks(trial, row, 3) = s.qdot[1];
            for (std::size_t m = 0; m < 4; m++)
                tracks(trial, row, 4 + m) = s.a[m];
        }
        std::array<double, 4> u;
        for (int j = 0; j < 2; j++) {
            const double tau_des =
                kKp[j] * (script.target_q[j] - s.q[j]) - kKd[j] * s.qdot[j];
            const double flex =
                tau_des > 0
                    ? tau_des / (p.moment_arm[2 * j] * p.f_max[2 * j])
                    : 0.0;
            const double ext =
                tau_des < 0
                    ? -tau_des / (p.moment_arm[2 * j + 1] * p.f_max[2 * j + 1])
                    : 0.0;
            u[2 * j] = std::clamp(kCoactivation + flex + xi[2 * j], 0.0, 1.0);
            u[2 * j + 1] =
                std::clamp(kCoactivation + ext + xi[2 * j + 1], 0.0, 1.0);
        }
        for (int m = 0; m < 4; m++)
            xi[m] = xi[m] * ou_decay + ou_diff * gauss(rng);
        s = step(s, u, p);
        knots[c + 1] = s.a;
    }

    // pseudo-EMG: band-limited unit noise amplitude-modulated by the
    // (interpolated) activation plus a resting floor
    const std::size_t n_emg = emg.steps();
    std::vector<double> white(n_emg);
    for (std::size_t m = 0; m < 4; m++) {
        auto erng = trial_engine(script.seed, trial, 100 + static_cast<unsigned>(m));
        std::normal_distribution<double> egauss(0.0, 1.0);
        for (std::size_t i = 0; i < n_emg; i++) white[i] = egauss(erng);
        const auto carrier = dsp::filter_forward(band, white);
        for (std::size_t i = 0; i < n_emg; i++) {
            const std::size_t k = i / static_cast<std::size_t>(emg_per_ctrl);
            const double frac =
                static_cast<double>(i % static_cast<std::size_t>(emg_per_ctrl)) /
                static_cast<double>(emg_per_ctrl);
            const double a =
                knots[k][m] + frac * (knots[k + 1][m] - knots[k][m]);
            emg(trial, i, m) = (a + kEmgFloor) * carrier[i];
        }
    }
}

} // namespace

ReachData generate_reaches(const ReachScript& script, const ArmParams& p,
                           int threads)
{
    p.validate();
    script.validate(p);

    const double ratio_out = 1.0 / (kTrackRateHz * p.ctrl_dt);
    const int sub_out = static_cast<int>(std::lround(ratio_out));
    require(sub_out >= 1 && std::abs(ratio_out - sub_out) < 1e-9,
            errc::invalid_config,
            "ctrl_dt must divide the 200 Hz logging interval");
    const std::size_t n_out = static_cast<std::size_t>(
        std::floor(script.duration * kTrackRateHz + 1e-9));
    require(n_out >= 1, errc::invalid_config,
            "duration shorter than one 200 Hz sample");
    const int emg_per_out =
        static_cast<int>(std::lround(kEmgRateHz / kTrackRateHz));
    require(emg_per_out % sub_out == 0, errc::invalid_config,
            "EMG rate must be a multiple of the control rate");
    const int emg_per_ctrl = emg_per_out / sub_out;
    const std::size_t n_emg =
        n_out * static_cast<std::size_t>(emg_per_out);

    std::vector<ChannelSpec> track_ch{
        {"q_shoulder", ChannelKind::joint_angle, "rad"},
        {"q_elbow", ChannelKind::joint_angle, "rad"},
        {"qdot_shoulder", ChannelKind::joint_velocity, "rad/s"},
        {"qdot_elbow", ChannelKind::joint_velocity, "rad/s"},
    };
    std::vector<ChannelSpec> emg_ch;
    for (const char* m : kMuscleNames) {
        track_ch.push_back({std::string("a_") + m,
                            ChannelKind::muscle_activation, ""});
        emg_ch.push_back({std::string("emg_") + m, ChannelKind::raw_emg, "mV"});
    }

    ReachData out{TrialSet(script.trials, n_out, std::move(track_ch),
                           kTrackRateHz),
                  TrialSet(script.trials, n_emg, std::move(emg_ch),
                           kEmgRateHz)};

    const auto band = dsp::design_butterworth(
        4, dsp::FilterKind::bandpass, {20.0, 1000.0}, kEmgRateHz);

    std::exception_ptr err;
    const int nthreads = resolve_threads(threads);
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
    for (std::int64_t t = 0; t < static_cast<std::int64_t>(script.trials);
         t++) {
        try {
            simulate_trial(static_cast<std::size_t>(t), script, p, band,
                           n_out, sub_out, emg_per_ctrl, out.tracks, out.emg);
        } catch (...) {
#pragma omp critical(neurodyn_arm_err)
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);

    out.tracks.check_finite();
    out.emg.check_finite();
    return out;
}

} // namespace neurodyn::arm
