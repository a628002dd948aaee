// Timing comparison between the serial reference kernels and the OpenMP
// ones. Results must agree bit-for-bit; this binary checks that while it
// measures, so a benchmark run doubles as a consistency check.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include "neurodyn/arm_sim.hpp"
#include "neurodyn/dsp.hpp"
#include "neurodyn/edm.hpp"
#include "neurodyn/threads.hpp"
#include "neurodyn/trial_data.hpp"

using namespace neurodyn;

namespace {

double time_best_of(int repeats, const std::function<void()>& fn)
{
    double best = 1e300;
    for (int r = 0; r < repeats; r++) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const double s = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
        best = std::min(best, s);
    }
    return best;
}

void report(const char* name, double serial_s, double parallel_s, bool match)
{
    std::printf("%-28s serial %8.1f ms   parallel %8.1f ms   speedup %.2fx   %s\n",
                name, serial_s * 1e3, parallel_s * 1e3, serial_s / parallel_s,
                match ? "results match" : "RESULTS DIFFER");
}

TrialSet logistic_trials(std::size_t trials, std::size_t steps)
{
    TrialSet set(trials, steps, {{"x", ChannelKind::other, ""}}, 1.0);
    for (std::size_t t = 0; t < trials; t++) {
        double x = 0.17 + 0.61 * static_cast<double>(t + 1) /
                              static_cast<double>(trials + 2);
        for (int i = 0; i < 100; i++) x = 3.9 * x * (1.0 - x);
        std::vector<double> series(steps);
        for (double& v : series) {
            v = x;
            x = 3.9 * x * (1.0 - x);
        }
        set.set_series(t, 0, series);
    }
    return set;
}

} // namespace

int main()
{
    const int workers = resolve_threads(0);
    std::printf("worker threads: %d\n\n", workers);
    bool all_match = true;

    {
        const auto set = logistic_trials(24, 400);
        edm::EmbeddingConfig cfg;
        cfg.E = 3;
        cfg.columns = {"x"};
        cfg.target = "x";
        const auto lib = edm::delay_embed(set, cfg);

        edm::SimplexOptions opts;
        opts.theiler = 2;
        edm::ForecastResult ref, par;
        const double ts = time_best_of(3, [&] {
            ref = edm::serial::simplex_forecast(lib, lib, cfg.E, opts);
        });
        const double tp = time_best_of(3, [&] {
            par = edm::simplex_forecast(lib, lib, cfg.E, opts);
        });
        bool match = ref.rho == par.rho &&
                     ref.predictions.size() == par.predictions.size();
        for (std::size_t i = 0; match && i < ref.predictions.size(); i++)
            match = ref.predictions[i].predicted ==
                    par.predictions[i].predicted;
        all_match &= match;
        report("simplex_forecast (9.5k pts)", ts, tp, match);
    }

    {
        arm::ReachScript script;
        script.trials = 16;
        const auto data = arm::generate_reaches(script, {});
        TrialSet env1, envN;
        const double ts = time_best_of(
            3, [&] { env1 = dsp::extract_envelopes(data.emg, {}, 1); });
        const double tp = time_best_of(
            3, [&] { envN = dsp::extract_envelopes(data.emg, {}, workers); });
        const bool match = env1 == envN;
        all_match &= match;
        report("extract_envelopes (16 trials)", ts, tp, match);
    }

    {
        arm::ReachScript script;
        script.trials = 24;
        arm::ReachData d1, dN;
        const double ts =
            time_best_of(3, [&] { d1 = arm::generate_reaches(script, {}, 1); });
        const double tp = time_best_of(
            3, [&] { dN = arm::generate_reaches(script, {}, workers); });
        const bool match = d1.tracks == dN.tracks && d1.emg == dN.emg;
        all_match &= match;
        report("generate_reaches (24 trials)", ts, tp, match);
    }

    return all_match ? 0 : 1;
}
