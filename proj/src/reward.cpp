#include "neurodyn/reward.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <boost/math/distributions/students_t.hpp>

namespace neurodyn::reward {

void RewardWeights::validate() const
{
    for (double w : {lambda_joint, lambda_ctrl, lambda_energy})
        require(std::isfinite(w) && w >= 0, errc::invalid_argument,
                "reward weights must be finite and >= 0");
    require(std::isfinite(alpha_joint) && alpha_joint > 0,
            errc::invalid_argument, "alpha_joint must be > 0");
}

void RewardTrace::push(const RewardSample& s)
{
    r_joint.push_back(s.r_joint);
    c_ctrl.push_back(s.c_ctrl);
    c_energy.push_back(s.c_energy);
    r_total.push_back(s.r_total);
}

double joint_reward(std::span<const double> q, std::span<const double> q_ref,
                    double alpha)
{
    require(!q.empty(), errc::invalid_argument, "empty joint vector");
    require(q.size() == q_ref.size(), errc::length_mismatch,
            "joint vectors differ in length");
    require(alpha > 0, errc::invalid_argument, "alpha must be > 0");
    double ss = 0.0;
    for (std::size_t i = 0; i < q.size(); i++) {
        const double d = q[i] - q_ref[i];
        ss += d * d;
    }
    return std::exp(-alpha * ss);
}

double control_cost(std::span<const double> a)
{
    require(!a.empty(), errc::invalid_argument, "empty action vector");
    double ss = 0.0;
    for (double v : a) ss += v * v;
    return ss;
}

double energy_cost(std::span<const double> v, std::span<const double> f)
{
    require(!v.empty(), errc::invalid_argument, "empty velocity vector");
    require(v.size() == f.size(), errc::length_mismatch,
            "velocity and force vectors differ in length");
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); i++)
        sum += std::abs(v[i]) * std::abs(f[i]);
    return sum;
}

RewardSample total_reward(std::span<const double> q,
                          std::span<const double> q_ref,
                          std::span<const double> a,
                          std::span<const double> v,
                          std::span<const double> f, const RewardWeights& w)
{
    w.validate();
    RewardSample s{};
    s.r_joint = joint_reward(q, q_ref, w.alpha_joint);
    s.c_ctrl = control_cost(a);
    if (v.empty() && f.empty()) {
        require(w.lambda_energy == 0.0, errc::invalid_argument,
                "energy cost weighted but no velocities/forces given");
        s.c_energy = 0.0;
    } else {
        s.c_energy = energy_cost(v, f);
    }
    s.r_total = w.lambda_joint * s.r_joint - w.lambda_ctrl * s.c_ctrl -
                w.lambda_energy * s.c_energy;
    return s;
}

double high_freq_power(std::span<const double> x, double fs_hz,
                       double band_lo_hz, double band_hi_hz)
{
    require(x.size() >= 8, errc::too_short,
            "need at least 8 samples for the spectral metric");
    require(fs_hz > 0, errc::invalid_argument, "sample rate must be positive");
    require(band_lo_hz < band_hi_hz, errc::invalid_argument,
            "band_lo must be below band_hi");
    require(band_lo_hz < fs_hz / 2.0, errc::invalid_argument,
            "band_lo must be below Nyquist");

    const std::size_t n = x.size();
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);

    // direct DFT; sequences here are short trial windows
    const double hi = std::min(band_hi_hz, fs_hz / 2.0);
    double total = 0.0, in_band = 0.0;
    for (std::size_t k = 1; k <= n / 2; k++) {
        std::complex<double> acc = 0.0;
        const double w = -2.0 * std::numbers::pi *
                         static_cast<double>(k) / static_cast<double>(n);
        for (std::size_t i = 0; i < n; i++)
            acc += (x[i] - mean) * std::polar(1.0, w * static_cast<double>(i));
        // one-sided weighting: interior bins carry their mirror twin
        const bool nyquist = (n % 2 == 0) && (k == n / 2);
        const double p = std::norm(acc) * (nyquist ? 1.0 : 2.0);
        total += p;
        const double f = static_cast<double>(k) * fs_hz /
                         static_cast<double>(n);
        if (f > band_lo_hz && f <= hi) in_band += p;
    }
    if (total <= 0.0) return 0.0; // constant signal
    return in_band / total;
}

namespace {

void check_same_shape(const TrialSet& x, const TrialSet& y)
{
    require(x.trials() == y.trials() && x.steps() == y.steps() &&
                x.channels() == y.channels(),
            errc::shape_mismatch, "TrialSets differ in shape");
}

} // namespace

double mae(const TrialSet& x, const TrialSet& y)
{
    check_same_shape(x, y);
    require(!x.raw().empty(), errc::empty_input, "empty TrialSets");
    double sum = 0.0;
    auto xs = x.raw();
    auto ys = y.raw();
    for (std::size_t i = 0; i < xs.size(); i++)
        sum += std::abs(xs[i] - ys[i]);
    return sum / static_cast<double>(xs.size());
}

std::vector<double> mae_per_channel(const TrialSet& x, const TrialSet& y)
{
    check_same_shape(x, y);
    std::vector<double> out(x.channels(), 0.0);
    const std::size_t cells = x.trials() * x.steps();
    require(cells > 0, errc::empty_input, "empty TrialSets");
    for (std::size_t t = 0; t < x.trials(); t++)
        for (std::size_t n = 0; n < x.steps(); n++)
            for (std::size_t c = 0; c < x.channels(); c++)
                out[c] += std::abs(x(t, n, c) - y(t, n, c));
    for (double& v : out) v /= static_cast<double>(cells);
    return out;
}

std::vector<SweepPoint>
aggregate_sweep(const std::map<double, std::vector<double>>& points)
{
    std::vector<SweepPoint> out;
    for (const auto& [param, seeds] : points) {
        const std::size_t n = seeds.size();
        require(n >= 2, errc::too_few_seeds,
                "parameter " + format_double(param) + " has " +
                    std::to_string(n) + " seed value(s), need >= 2");
        double mean = 0.0;
        for (double v : seeds) mean += v;
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (double v : seeds) ss += (v - mean) * (v - mean);
        const double sd = std::sqrt(ss / static_cast<double>(n - 1));
        boost::math::students_t dist(static_cast<double>(n - 1));
        const double tq = boost::math::quantile(dist, 0.975);
        const double hw = tq * sd / std::sqrt(static_cast<double>(n));
        out.push_back({param, seeds, mean, mean - hw, mean + hw});
    }
    return out; // std::map iteration is already ascending by parameter
}

} // namespace neurodyn::reward
