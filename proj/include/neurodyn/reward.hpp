#ifndef NEURODYN_REWARD_HPP
#define NEURODYN_REWARD_HPP

#include <map>
#include <span>
#include <vector>

#include "neurodyn/trial_data.hpp"

namespace neurodyn::reward {

/// Weight bundle for the instantaneous imitation reward
///   r = lambda_joint * r_joint - lambda_ctrl * c_ctrl - lambda_energy * c_energy.
struct RewardWeights {
    double lambda_joint = 5.0;
    double lambda_ctrl = 0.15;
    double lambda_energy = 0.01;
    double alpha_joint = 0.2;

    static RewardWeights joint_only() { return {5.0, 0.0, 0.0, 0.2}; }
    static RewardWeights physics_aware() { return {5.0, 0.15, 0.01, 0.2}; }

    void validate() const;
};

struct RewardSample {
    double r_joint;
    double c_ctrl;
    double c_energy;
    double r_total;
};

struct RewardTrace {
    std::vector<double> r_joint, c_ctrl, c_energy, r_total;

    void push(const RewardSample& s);
    std::size_t size() const { return r_total.size(); }
};

/// exp(-alpha * sum_i (q_i - q_ref_i)^2), in (0, 1], equal to 1 iff q == q_ref.
double joint_reward(std::span<const double> q, std::span<const double> q_ref,
                    double alpha);

/// Sum of squared actuator commands.
double control_cost(std::span<const double> a);

/// Sum over joints of |velocity| * |actuator force|.
double energy_cost(std::span<const double> v, std::span<const double> f);

/// Weighted combination of the three terms. v and f may both be empty when
/// lambda_energy is zero (the energy term is then zero).
RewardSample total_reward(std::span<const double> q,
                          std::span<const double> q_ref,
                          std::span<const double> a,
                          std::span<const double> v,
                          std::span<const double> f, const RewardWeights& w);

/// Fraction of non-DC periodogram power at frequencies f with
/// band_lo < f <= min(band_hi, fs/2). The left edge is exclusive and the
/// right edge inclusive so that a partition of (0, fs/2] into adjacent
/// bands sums exactly to 1. A constant signal has no non-DC power and the
/// fraction is defined as 0.
double high_freq_power(std::span<const double> x, double fs_hz,
                       double band_lo_hz, double band_hi_hz);

/// Mean absolute error over all trials, timesteps and channels.
double mae(const TrialSet& x, const TrialSet& y);

/// Per-channel mean absolute error, pooled over trials and timesteps.
std::vector<double> mae_per_channel(const TrialSet& x, const TrialSet& y);

struct SweepPoint {
    double param_value;
    std::vector<double> per_seed_values;
    double mean;
    double ci95_lo;
    double ci95_hi;
};

/// Per parameter value: sample mean and Student-t 95% confidence interval
/// mean +- t(0.975, n-1) * s / sqrt(n). Points come back sorted ascending
/// by parameter value. Each list needs at least two seeds.
std::vector<SweepPoint>
aggregate_sweep(const std::map<double, std::vector<double>>& points);

} // namespace neurodyn::reward

#endif
