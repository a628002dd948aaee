#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "neurodyn/arm_sim.hpp"

using namespace neurodyn;
using namespace neurodyn::arm;

TEST_CASE("arm parameter validation")
{
    ArmParams p;
    CHECK_NOTHROW(p.validate());
    CHECK(p.substeps() == 2);

    p.f_max = {1.5, 1.1, 0.9, 0.9}; // outside the calibrated envelope
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("InvalidConfig"),
                         Error);
    p = {};
    p.f_max = {0.1, 1.1, 0.9, 0.9};
    CHECK_THROWS_AS(p.validate(), Error);
    p = {};
    p.sim_dt = 0.0007; // ctrl_dt not an integer multiple
    CHECK_THROWS_AS(p.validate(), Error);
    p = {};
    p.l1 = 0.0;
    CHECK_THROWS_AS(p.validate(), Error);
    p = {};
    p.q_min = {1.0, 1.0};
    p.q_max = {0.5, 2.0};
    CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("balanced antagonists hold the arm still")
{
    const ArmParams p;
    ArmState s;
    s.q = {0.8, 1.4};
    s.a = {0.3, 0.3, 0.2, 0.2};
    // flexor/extensor pairs share moment arm and f_max, so equal
    // activations cancel exactly
    const auto next = step(s, {0.3, 0.3, 0.2, 0.2}, p);
    CHECK(next.q[0] == s.q[0]);
    CHECK(next.q[1] == s.q[1]);
    CHECK(next.qdot[0] == 0.0);
    CHECK(next.qdot[1] == 0.0);
}

TEST_CASE("activation follows an exact exponential toward the command")
{
    const ArmParams p;
    ArmState s;
    s.a = {1.0, 0.0, 0.5, 0.25};
    const auto next = step(s, {0.0, 0.0, 0.5, 1.0}, p);
    // two substeps of exp decay with rate sim_dt / tau_act
    const double k = std::exp(-p.sim_dt / p.tau_act);
    double a0 = 1.0;
    a0 = 0.0 + (a0 - 0.0) * k;
    a0 = 0.0 + (a0 - 0.0) * k;
    CHECK(next.a[0] == doctest::Approx(a0).epsilon(1e-15));
    CHECK(next.a[1] == 0.0);
    CHECK(next.a[2] == 0.5); // already at the command
    CHECK(next.a[3] < 1.0);
    CHECK(next.a[3] > 0.25);
}

TEST_CASE("step rejects bad commands")
{
    const ArmParams p;
    ArmState s;
    CHECK_THROWS_AS(step(s, {1.5, 0.0, 0.0, 0.0}, p), Error);
    CHECK_THROWS_AS(step(s, {-0.1, 0.0, 0.0, 0.0}, p), Error);
    CHECK_THROWS_AS(
        step(s, {std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0, 0.0}, p),
        Error);
}

TEST_CASE("joint limits clamp position and zero velocity")
{
    const ArmParams p;
    ArmState s;
    s.q = {p.q_max[0] - 0.01, 1.0};
    s.a = {1.0, 0.0, 0.0, 0.0}; // full shoulder flexion, no antagonist
    for (int i = 0; i < 400; i++) s = step(s, {1.0, 0.0, 0.0, 0.0}, p);
    CHECK(s.q[0] == p.q_max[0]);
    CHECK(s.qdot[0] == 0.0);
}

TEST_CASE("free motion decays under viscous damping")
{
    const ArmParams p;
    ArmState s;
    s.q = {0.5, 1.5};
    s.qdot = {3.0, -3.0};
    const double start2 = s.qdot[0] * s.qdot[0] + s.qdot[1] * s.qdot[1];
    double peak2 = 0.0;
    for (int i = 0; i < 2000; i++) {
        s = step(s, {0.0, 0.0, 0.0, 0.0}, p);
        peak2 = std::max(peak2,
                         s.qdot[0] * s.qdot[0] + s.qdot[1] * s.qdot[1]);
    }
    // inertia coupling may slosh speed between joints, but never above start
    CHECK(peak2 <= start2 * 1.2);
    CHECK(std::abs(s.qdot[0]) < 1e-3);
    CHECK(std::abs(s.qdot[1]) < 1e-3);
    CHECK(std::isfinite(s.q[0]));
    CHECK(std::isfinite(s.q[1]));
}

TEST_CASE("reach batch has the contract shape and channel names")
{
    ReachScript script;
    script.trials = 3;
    const auto data = generate_reaches(script, {});

    CHECK(data.tracks.trials() == 3);
    CHECK(data.tracks.steps() == 60);
    CHECK(data.tracks.sample_rate_hz() == kTrackRateHz);
    const std::vector<std::string> expect{
        "q_shoulder",        "q_elbow",
        "qdot_shoulder",     "qdot_elbow",
        "a_shoulder_flexor", "a_shoulder_extensor",
        "a_biceps",          "a_triceps"};
    REQUIRE(data.tracks.channels() == expect.size());
    for (std::size_t c = 0; c < expect.size(); c++)
        CHECK(data.tracks.channel(c).name == expect[c]);
    CHECK(data.tracks.channel(0).kind == ChannelKind::joint_angle);
    CHECK(data.tracks.channel(2).kind == ChannelKind::joint_velocity);
    CHECK(data.tracks.channel(4).kind == ChannelKind::muscle_activation);

    CHECK(data.emg.trials() == 3);
    CHECK(data.emg.steps() == 9000);
    CHECK(data.emg.sample_rate_hz() == kEmgRateHz);
    REQUIRE(data.emg.channels() == 4);
    CHECK(data.emg.channel(0).name == "emg_shoulder_flexor");
    CHECK(data.emg.channel(3).name == "emg_triceps");
    CHECK(data.emg.channel(0).kind == ChannelKind::raw_emg);
}

TEST_CASE("zero noise makes every trial identical")
{
    ReachScript script;
    script.trials = 3;
    script.noise = 0.0;
    const auto data = generate_reaches(script, {});
    for (std::size_t t = 1; t < 3; t++)
        for (std::size_t c = 0; c < data.tracks.channels(); c++)
            CHECK(data.tracks.series(t, c) == data.tracks.series(0, c));
}

TEST_CASE("generation is deterministic and thread-count invariant")
{
    ReachScript script;
    script.trials = 4;
    script.seed = 99;
    const auto a = generate_reaches(script, {}, 1);
    const auto b = generate_reaches(script, {}, 1);
    CHECK(a.tracks == b.tracks);
    CHECK(a.emg == b.emg);
    for (int threads : {2, 3, 8}) {
        const auto c = generate_reaches(script, {}, threads);
        CHECK(c.tracks == a.tracks);
        CHECK(c.emg == a.emg);
    }

    script.seed = 100; // different stream, different data
    const auto d = generate_reaches(script, {});
    CHECK_FALSE(d.tracks == a.tracks);
    CHECK_FALSE(d.emg == a.emg);
}

TEST_CASE("reaches settle near the target")
{
    ReachScript script;
    script.trials = 12;
    script.seed = 5;
    const auto data = generate_reaches(script, {});
    const std::size_t last = data.tracks.steps() - 1;
    std::size_t hits = 0;
    for (std::size_t t = 0; t < data.tracks.trials(); t++) {
        const double e0 =
            std::abs(data.tracks(t, last, 0) - script.target_q[0]);
        const double e1 =
            std::abs(data.tracks(t, last, 1) - script.target_q[1]);
        if (e0 < 0.1 && e1 < 0.1) hits++;
    }
    CHECK(hits * 10 >= data.tracks.trials() * 9); // >= 90%
}

TEST_CASE("pseudo-emg amplitude tracks activation")
{
    ReachScript script;
    script.trials = 2;
    script.seed = 8;
    const auto data = generate_reaches(script, {});
    // block-mean |emg| per 200 Hz step must be high where the recorded
    // activation is high and low where it is low (amplitude modulation)
    const std::size_t per_out = 150; // 30 kHz samples per 200 Hz sample
    const std::size_t steps = data.tracks.steps();
    const std::size_t a_col = data.tracks.channel_index("a_shoulder_flexor");
    for (std::size_t t = 0; t < data.tracks.trials(); t++) {
        std::vector<std::size_t> order(steps);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t x, std::size_t y) {
                      return data.tracks(t, x, a_col) < data.tracks(t, y, a_col);
                  });
        auto block_mean = [&](std::size_t n) {
            double acc = 0.0;
            for (std::size_t i = 0; i < per_out; i++)
                acc += std::abs(data.emg(t, n * per_out + i, 0));
            return acc / static_cast<double>(per_out);
        };
        double low = 0.0, high = 0.0;
        for (std::size_t k = 0; k < 6; k++) {
            low += block_mean(order[k]);
            high += block_mean(order[steps - 1 - k]);
        }
        CHECK(high > 1.5 * low);
    }

    // noise floor keeps the carrier alive even at zero activation
    double any = 0.0;
    for (std::size_t i = 0; i < 9000; i++) any += std::abs(data.emg(1, i, 3));
    CHECK(any > 0.0);
}

TEST_CASE("script validation")
{
    const ArmParams p;
    ReachScript s;
    s.trials = 0;
    CHECK_THROWS_AS(s.validate(p), Error);
    s = {};
    s.duration = 0.001; // below one control step
    CHECK_THROWS_AS(s.validate(p), Error);
    s = {};
    s.noise = -0.5;
    CHECK_THROWS_AS(s.validate(p), Error);
}
