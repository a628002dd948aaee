#ifndef NEURODYN_ARM_SIM_HPP
#define NEURODYN_ARM_SIM_HPP

#include <array>
#include <cstdint>

#include "neurodyn/trial_data.hpp"

namespace neurodyn::arm {

/// Planar 2-link arm with four antagonistic first-order muscles.
/// Muscle index order everywhere: shoulder flexor, shoulder extensor,
/// elbow flexor (biceps analog), elbow extensor (triceps analog).
/// Torque is activation * moment_arm * f_max with constant moment arms;
/// no force-length/velocity curves — the plant exists to produce
/// dynamically coupled joint/muscle data, not biomechanical fidelity.
struct ArmParams {
    double l1 = 0.06; // link lengths, m
    double l2 = 0.06;
    double m1 = 0.10; // link masses, kg
    double m2 = 0.08;
    std::array<double, 4> moment_arm{0.08, 0.08, 0.06, 0.06}; // m
    std::array<double, 4> f_max{1.1, 1.1, 0.9, 0.9};          // N
    double tau_act = 0.015; // activation time constant, s
    double sim_dt = 0.00125;
    double ctrl_dt = 0.0025;
    double gravity = 0.0;             // m/s^2, along -y
    double damping = 0.01;            // viscous joint damping, N*m*s/rad
    std::array<double, 2> q_min{-1.0, 0.1}; // joint limits, rad
    std::array<double, 2> q_max{2.2, 2.8};

    void validate() const;
    int substeps() const; // ctrl_dt / sim_dt
};

struct ArmState {
    std::array<double, 2> q{0.0, 0.0};
    std::array<double, 2> qdot{0.0, 0.0};
    std::array<double, 4> a{0.0, 0.0, 0.0, 0.0};
};

/// One control interval: exact exponential activation update and
/// semi-implicit Euler rigid-body substeps at sim_dt. Joint limits are
/// enforced by clamping with zeroed velocity.
ArmState step(const ArmState& state, const std::array<double, 4>& u,
              const ArmParams& p);

/// A batch of point-to-point reaches driven by a saturating PD servo
/// mapped onto the antagonist pairs, with seeded
/// Ornstein-Uhlenbeck excitation noise per trial.
struct ReachScript {
    std::array<double, 2> start_q{0.5, 1.2};
    std::array<double, 2> target_q{1.0, 1.7};
    double duration = 0.3; // s
    std::size_t trials = 46;
    double noise = 0.15; // OU excitation noise scale
    std::uint64_t seed = 0;

    void validate(const ArmParams& p) const;
};

/// Output of generate_reaches. Kinematics and activations are logged at
/// 200 Hz (tracks); the pseudo-EMG measurement model runs at 30 kHz in
/// its own set (emg) so the envelope chain sees realistic-rate input.
/// Pseudo-EMG is amplitude-modulated band-limited noise,
/// (activation + floor) * carrier, so rectification + smoothing recovers
/// a trace monotone in the underlying activation.
struct ReachData {
    TrialSet tracks;
    TrialSet emg;
};

ReachData generate_reaches(const ReachScript& script, const ArmParams& p,
                           int threads = 0);

inline constexpr double kTrackRateHz = 200.0;
inline constexpr double kEmgRateHz = 30000.0;
inline constexpr std::array<const char*, 4> kMuscleNames{
    "shoulder_flexor", "shoulder_extensor", "biceps", "triceps"};

} // namespace neurodyn::arm

#endif
