#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "neurodyn/reward.hpp"

using namespace neurodyn;
using namespace neurodyn::reward;

namespace {

std::vector<double> sine(std::size_t n, double f_hz, double fs_hz)
{
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; i++)
        x[i] = std::sin(2.0 * std::numbers::pi * f_hz *
                        static_cast<double>(i) / fs_hz);
    return x;
}

} // namespace

TEST_CASE("joint reward anchors")
{
    // single joint, 1 rad error, alpha 0.2
    CHECK(joint_reward(std::vector{1.0}, std::vector{0.0}, 0.2) ==
          doctest::Approx(0.8187307530779818).epsilon(1e-12));
    // two joints at 1 and 1.5 rad error with the same target shape
    const double ss = 1.0 + 1.5 * 1.5;
    CHECK(joint_reward(std::vector{1.0, 1.5}, std::vector{0.0, 0.0}, 0.2) ==
          doctest::Approx(std::exp(-0.2 * ss)).epsilon(1e-12));
    CHECK(joint_reward(std::vector{0.5, -2.0}, std::vector{0.5, -2.0}, 0.2) ==
          1.0);
}

TEST_CASE("joint reward is a bounded similarity")
{
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    for (int i = 0; i < 2000; i++) {
        std::vector<double> q{dist(rng), dist(rng)};
        std::vector<double> q_ref{dist(rng), dist(rng)};
        const double r = joint_reward(q, q_ref, 0.2);
        CHECK(r > 0.0);
        CHECK(r <= 1.0);
        if (q != q_ref) CHECK(r < 1.0);
        CHECK(joint_reward(q, q, 0.2) == 1.0);
    }
}

TEST_CASE("control and energy cost oracles")
{
    CHECK(control_cost(std::vector{0.1, 0.2}) ==
          doctest::Approx(0.05).epsilon(1e-15));
    CHECK(energy_cost(std::vector{1.0, -2.0}, std::vector{3.0, 4.0}) == 11.0);
    CHECK_THROWS_AS(control_cost(std::vector<double>{}), Error);
    CHECK_THROWS_AS(energy_cost(std::vector{1.0}, std::vector{1.0, 2.0}),
                    Error);
}

TEST_CASE("total reward composes the three terms exactly")
{
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int i = 0; i < 500; i++) {
        std::vector<double> q{dist(rng), dist(rng)};
        std::vector<double> q_ref{dist(rng), dist(rng)};
        std::vector<double> a{dist(rng), dist(rng), dist(rng), dist(rng)};
        std::vector<double> v{dist(rng), dist(rng)};
        std::vector<double> f{dist(rng), dist(rng)};

        const auto joint_only = total_reward(q, q_ref, a, v, f,
                                             RewardWeights::joint_only());
        CHECK(joint_only.r_total == 5.0 * joint_only.r_joint);

        const auto physics = total_reward(q, q_ref, a, v, f,
                                          RewardWeights::physics_aware());
        CHECK(physics.r_total == 5.0 * physics.r_joint -
                                     0.15 * physics.c_ctrl -
                                     0.01 * physics.c_energy);
    }
}

TEST_CASE("energy term needs velocities and forces")
{
    const std::vector<double> q{1.0}, a{0.1};
    RewardWeights w;
    CHECK_THROWS_AS(total_reward(q, q, a, {}, {}, w), Error);
    w.lambda_energy = 0.0;
    const auto s = total_reward(q, q, a, {}, {}, w);
    CHECK(s.c_energy == 0.0);
    CHECK(s.r_joint == 1.0);
}

TEST_CASE("reward trace accumulates samples")
{
    RewardTrace trace;
    trace.push({1.0, 2.0, 3.0, 4.0});
    trace.push({5.0, 6.0, 7.0, 8.0});
    CHECK(trace.size() == 2);
    CHECK(trace.r_joint == std::vector{1.0, 5.0});
    CHECK(trace.r_total == std::vector{4.0, 8.0});
}

TEST_CASE("spectral fraction isolates a high-frequency tone")
{
    const auto hi = sine(400, 50.0, 400.0);
    CHECK(high_freq_power(hi, 400.0, 10.0, 1000.0) ==
          doctest::Approx(1.0).epsilon(1e-6));
    const auto lo = sine(400, 2.0, 400.0);
    CHECK(high_freq_power(lo, 400.0, 10.0, 1000.0) <= 1e-3);
}

TEST_CASE("adjacent spectral bands partition the total power")
{
    std::mt19937 rng(5);
    std::normal_distribution<double> dist;
    std::vector<double> x(128);
    for (double& v : x) v = dist(rng);
    const double fs = 400.0;
    const double p1 = high_freq_power(x, fs, 1e-12, 50.0);
    const double p2 = high_freq_power(x, fs, 50.0, 100.0);
    const double p3 = high_freq_power(x, fs, 100.0, 200.0);
    CHECK(p1 + p2 + p3 == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("spectral metric edge cases")
{
    const std::vector<double> flat(64, 3.0);
    CHECK(high_freq_power(flat, 400.0, 10.0, 100.0) == 0.0);
    CHECK_THROWS_AS(high_freq_power(std::vector{1.0, 2.0}, 400.0, 10.0, 100.0),
                    Error);
    CHECK_THROWS_AS(high_freq_power(flat, 400.0, 100.0, 10.0), Error);
    CHECK_THROWS_AS(high_freq_power(flat, 400.0, 300.0, 400.0), Error);
}

TEST_CASE("mae oracles")
{
    TrialSet x(1, 2, {{"a", ChannelKind::other, ""},
                      {"b", ChannelKind::other, ""}}, 1.0);
    TrialSet y = x;
    x(0, 0, 0) = 1.0;
    x(0, 1, 0) = 3.0; // channel a differs by (1, 3)
    y(0, 0, 1) = 2.0; // channel b differs by (2, 0)
    CHECK(mae(x, y) == doctest::Approx(1.5));
    const auto per = mae_per_channel(x, y);
    REQUIRE(per.size() == 2);
    CHECK(per[0] == doctest::Approx(2.0));
    CHECK(per[1] == doctest::Approx(1.0));

    TrialSet z(1, 3, {{"a", ChannelKind::other, ""}}, 1.0);
    CHECK_THROWS_AS(mae(x, z), Error);
}

TEST_CASE("sweep aggregation matches the t-interval oracle")
{
    const auto equal = aggregate_sweep({{1.0, {4.0, 4.0, 4.0, 4.0, 4.0}}});
    REQUIRE(equal.size() == 1);
    CHECK(equal[0].mean == 4.0);
    CHECK(equal[0].ci95_hi - equal[0].ci95_lo == 0.0);

    const auto spread =
        aggregate_sweep({{1.0, {0.0, 0.0, 0.0, 0.0, 10.0}}});
    CHECK(spread[0].mean == doctest::Approx(2.0));
    const double half = (spread[0].ci95_hi - spread[0].ci95_lo) / 2.0;
    CHECK(half == doctest::Approx(5.552).epsilon(0.01 / 5.552));

    const auto multi = aggregate_sweep(
        {{0.2, {1.0, 2.0}}, {0.1, {5.0, 6.0}}, {0.15, {3.0, 4.0}}});
    REQUIRE(multi.size() == 3);
    CHECK(multi[0].param_value == 0.1); // sorted ascending
    CHECK(multi[2].param_value == 0.2);
    CHECK(multi[1].mean == doctest::Approx(3.5));

    CHECK_THROWS_AS(aggregate_sweep({{1.0, {2.0}}}), Error);
}
