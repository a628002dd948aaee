// neurodyn: command-line front end for the analysis library.
// Subcommands: emg-process, edm, reward-eval, pca, synth-generate,
// config show. Exit codes: 0 success, 1 I/O failure, 2 validation error.

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "neurodyn/arm_sim.hpp"
#include "neurodyn/dsp.hpp"
#include "neurodyn/edm.hpp"
#include "neurodyn/error.hpp"
#include "neurodyn/pca.hpp"
#include "neurodyn/reward.hpp"
#include "neurodyn/run_config.hpp"
#include "neurodyn/svg_plot.hpp"
#include "neurodyn/trial_data.hpp"

namespace nd = neurodyn;
using nlohmann::ordered_json;

namespace {

nd::CsvFormat parse_format(const std::string& name)
{
    if (name == "wide") return nd::CsvFormat::csv_wide;
    if (name == "long") return nd::CsvFormat::csv_long;
    nd::fail(nd::errc::invalid_argument,
             "unknown CSV format '" + name + "' (use wide or long)");
}

nd::RunConfig effective_config(const std::string& path)
{
    return path.empty() ? nd::RunConfig{} : nd::load_run_config(path);
}

int parse_int(const std::string& s)
{
    int v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        nd::fail(nd::errc::invalid_argument, "cannot parse integer '" + s + "'");
    return v;
}

// "1..5" (inclusive, either direction) or "1,3,5"
std::vector<int> parse_int_range(const std::string& text)
{
    std::vector<int> out;
    const auto dots = text.find("..");
    if (dots != std::string::npos) {
        int a = parse_int(text.substr(0, dots));
        int b = parse_int(text.substr(dots + 2));
        if (a > b) std::swap(a, b);
        for (int v = a; v <= b; v++) out.push_back(v);
        return out;
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = std::min(text.find(',', pos), text.size());
        out.push_back(parse_int(text.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return out;
}

std::ofstream open_output(const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        nd::fail(nd::errc::io_failure,
                 "cannot open '" + path + "' for writing");
    return out;
}

void finish_output(std::ofstream& out, const std::string& path)
{
    if (!out.flush())
        nd::fail(nd::errc::io_failure, "write failed for '" + path + "'");
    std::cout << "wrote " << path << "\n";
}

// every summary embeds the effective config so runs are self-describing
void write_summary(const std::string& path, ordered_json summary,
                   const nd::RunConfig& cfg)
{
    summary["config"] = ordered_json::parse(nd::dump_run_config(cfg));
    auto out = open_output(path);
    out << summary.dump(2) << "\n";
    finish_output(out, path);
}

std::vector<std::string> channels_of_kind(const nd::TrialSet& set,
                                          nd::ChannelKind kind)
{
    std::vector<std::string> out;
    for (std::size_t c = 0; c < set.channels(); c++)
        if (set.channel(c).kind == kind) out.push_back(set.channel(c).name);
    return out;
}

std::vector<double> row_values(const nd::TrialSet& set, std::size_t t,
                               std::size_t n,
                               const std::vector<std::size_t>& cols)
{
    std::vector<double> out(cols.size());
    for (std::size_t i = 0; i < cols.size(); i++)
        out[i] = set(t, n, cols[i]);
    return out;
}

std::vector<std::size_t> channel_indices(const nd::TrialSet& set,
                                         const std::vector<std::string>& names)
{
    std::vector<std::size_t> out;
    for (const auto& name : names) out.push_back(set.channel_index(name));
    return out;
}

// ---------------------------------------------------------------- emg

struct EmgOpts {
    std::string in, out_prefix, config_path;
    std::string format = "wide";
    int threads = 0;
};

void run_emg_process(const EmgOpts& o)
{
    const auto cfg = effective_config(o.config_path);
    const auto fmt = parse_format(o.format);
    const auto raw = nd::load_trialset(o.in, fmt);
    const auto env = nd::dsp::extract_envelopes(raw, cfg.envelope, o.threads);

    const std::string env_path = o.out_prefix + "_envelope.csv";
    nd::save_trialset(env, env_path, fmt);
    std::cout << "wrote " << env_path << "\n";

    ordered_json summary;
    summary["command"] = "emg-process";
    summary["input"] = o.in;
    summary["trials"] = env.trials();
    summary["samples_per_trial"] = env.steps();
    ordered_json names = ordered_json::array();
    for (std::size_t c = 0; c < env.channels(); c++)
        names.push_back(env.channel(c).name);
    summary["channels"] = names;
    write_summary(o.out_prefix + "_summary.json", std::move(summary), cfg);
}

// ---------------------------------------------------------------- edm

struct EdmOpts {
    std::string in, target, out_prefix, config_path;
    std::vector<std::string> sources;
    std::string format = "wide";
    std::string split;
    std::string E_range, tau_range, Tp_range;
    int E = 0, tau = 0, Tp = 0, theiler = -1;
    bool sweep = false;
    int threads = 0;
    bool E_set = false, tau_set = false, Tp_set = false;
};

void write_forecast_csv(const nd::edm::ForecastResult& res,
                        const std::string& path)
{
    auto out = open_output(path);
    out << "trial,timestep,observed,predicted\n";
    for (const auto& p : res.predictions)
        out << p.origin.trial << ',' << p.origin.step << ','
            << nd::format_double(p.observed) << ','
            << nd::format_double(p.predicted) << "\n";
    finish_output(out, path);
}

void write_forecast_svg(const nd::edm::ForecastResult& res,
                        const std::string& path)
{
    std::map<std::size_t, std::vector<const nd::edm::Prediction*>> by_trial;
    for (const auto& p : res.predictions)
        by_trial[p.origin.trial].push_back(&p);

    std::vector<nd::svg::Plot> panels;
    for (const auto& [trial, preds] : by_trial) {
        if (panels.size() == 3) break;
        nd::svg::Plot panel;
        panel.title = "trial " + std::to_string(trial);
        panel.x_label = "timestep";
        panel.y_label = "value";
        nd::svg::Series obs{"observed", {}, {}, "", false};
        nd::svg::Series pred{"predicted", {}, {}, "", false};
        for (const auto* p : preds) {
            obs.x.push_back(static_cast<double>(p->origin.step));
            obs.y.push_back(p->observed);
            pred.x.push_back(static_cast<double>(p->origin.step));
            pred.y.push_back(p->predicted);
        }
        panel.series = {obs, pred};
        panels.push_back(std::move(panel));
    }
    nd::svg::Plot scatter;
    scatter.title = "pooled (rho=" + nd::format_double(res.rho) + ")";
    scatter.x_label = "observed";
    scatter.y_label = "predicted";
    nd::svg::Series cloud{"", {}, {}, "", true};
    for (const auto& p : res.predictions) {
        cloud.x.push_back(p.observed);
        cloud.y.push_back(p.predicted);
    }
    scatter.series = {cloud};
    panels.push_back(std::move(scatter));
    nd::svg::write_svg(nd::svg::render_panels(panels, 2), path);
    std::cout << "wrote " << path << "\n";
}

void run_edm(const EdmOpts& o)
{
    auto cfg = effective_config(o.config_path);
    if (o.E_set) cfg.edm.embedding.E = o.E;
    if (o.tau_set) cfg.edm.embedding.tau = o.tau;
    if (o.Tp_set) cfg.edm.embedding.Tp = o.Tp;
    if (o.theiler >= 0) cfg.edm.embedding.theiler = o.theiler;
    if (!o.split.empty()) cfg.edm.split = nd::split_from_name(o.split);
    if (!o.E_range.empty()) cfg.edm.E_range = parse_int_range(o.E_range);
    if (!o.tau_range.empty()) cfg.edm.tau_range = parse_int_range(o.tau_range);
    if (!o.Tp_range.empty()) cfg.edm.Tp_range = parse_int_range(o.Tp_range);

    const auto set = nd::load_trialset(o.in, parse_format(o.format));

    if (o.sweep) {
        nd::require(o.sources.size() == 1, nd::errc::invalid_argument,
                    "--sweep runs a univariate search and takes exactly one "
                    "--source");
        const auto rows = nd::edm::param_search(
            set, o.sources[0], o.target, cfg.edm.E_range, cfg.edm.tau_range,
            cfg.edm.Tp_range, cfg.edm.split, cfg.edm.embedding.theiler,
            o.threads);

        const std::string grid_path = o.out_prefix + "_grid.csv";
        auto out = open_output(grid_path);
        out << "E,tau,Tp,rho,n_pred,best\n";
        for (const auto& r : rows)
            out << r.E << ',' << r.tau << ',' << r.Tp << ','
                << nd::format_double(r.rho) << ',' << r.n_pred << ','
                << (r.best ? 1 : 0) << "\n";
        finish_output(out, grid_path);

        // one rho-vs-Tp curve per (E, tau)
        std::map<std::pair<int, int>, nd::svg::Series> curves;
        for (const auto& r : rows) {
            auto& s = curves[{r.E, r.tau}];
            if (s.label.empty())
                s.label = "E=" + std::to_string(r.E) +
                          " tau=" + std::to_string(r.tau);
            s.x.push_back(r.Tp);
            s.y.push_back(r.rho);
        }
        nd::svg::Plot plot;
        plot.title = "simplex forecast skill";
        plot.x_label = "Tp";
        plot.y_label = "rho";
        for (auto& [key, s] : curves) plot.series.push_back(std::move(s));
        plot.height = std::max(plot.height,
                               60.0 + 14.0 * static_cast<double>(plot.series.size()));
        nd::svg::write_svg(nd::svg::render(plot), o.out_prefix + "_grid.svg");
        std::cout << "wrote " << o.out_prefix + "_grid.svg" << "\n";

        ordered_json summary;
        summary["command"] = "edm";
        summary["mode"] = "sweep";
        summary["source"] = o.sources[0];
        summary["target"] = o.target;
        summary["rows"] = rows.size();
        for (const auto& r : rows)
            if (r.best)
                summary["best"] = {{"E", r.E},
                                   {"tau", r.tau},
                                   {"Tp", r.Tp},
                                   {"rho", r.rho},
                                   {"n_pred", r.n_pred}};
        write_summary(o.out_prefix + "_summary.json", std::move(summary), cfg);
        return;
    }

    auto ecfg = cfg.edm.embedding;
    if (o.sources.size() > 1) ecfg.mode = nd::edm::EmbedMode::multivariate_direct;
    const auto res = nd::edm::cross_predict(set, o.sources, o.target, ecfg,
                                            cfg.edm.split, o.threads);
    write_forecast_csv(res, o.out_prefix + "_forecast.csv");
    write_forecast_svg(res, o.out_prefix + "_forecast.svg");

    ordered_json summary;
    summary["command"] = "edm";
    summary["mode"] = "forecast";
    summary["sources"] = o.sources;
    summary["target"] = o.target;
    summary["rho"] = res.rho;
    summary["E"] = res.config.E;
    summary["tau"] = res.config.tau;
    summary["Tp"] = res.config.Tp;
    summary["theiler"] = res.config.theiler;
    summary["n_pred"] = res.predictions.size();
    write_summary(o.out_prefix + "_summary.json", std::move(summary), cfg);
}

// ------------------------------------------------------------- reward

struct RewardOpts {
    std::string rollout, reference, out_prefix, config_path;
    std::string format = "wide";
    std::vector<std::string> joints, actions, velocities, forces;
    double hf_lo = 10.0, hf_hi = 1000.0;
    std::string sweep_in;
};

void run_sweep_aggregate(const std::string& in_path,
                         const std::string& out_path)
{
    std::ifstream in(in_path);
    if (!in)
        nd::fail(nd::errc::io_failure,
                 "cannot open '" + in_path + "' for reading");
    std::string line;
    nd::require(bool(std::getline(in, line)), nd::errc::missing_column,
                "empty sweep file: missing 'param,value' header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    nd::require(line == "param,value", nd::errc::missing_column,
                "sweep file header must be 'param,value'");
    std::map<double, std::vector<double>> groups;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        line_no++;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        nd::require(comma != std::string::npos, nd::errc::parse_error,
                    "line " + std::to_string(line_no) + ": expected 2 fields");
        char* end = nullptr;
        const std::string a = line.substr(0, comma);
        const std::string b = line.substr(comma + 1);
        const double param = std::strtod(a.c_str(), &end);
        nd::require(end == a.c_str() + a.size() && !a.empty(),
                    nd::errc::parse_error,
                    "line " + std::to_string(line_no) +
                        ": cannot parse param '" + a + "'");
        const double value = std::strtod(b.c_str(), &end);
        nd::require(end == b.c_str() + b.size() && !b.empty(),
                    nd::errc::parse_error,
                    "line " + std::to_string(line_no) +
                        ": cannot parse value '" + b + "'");
        groups[param].push_back(value);
    }
    const auto points = nd::reward::aggregate_sweep(groups);
    auto out = open_output(out_path);
    out << "param,mean,ci_lo,ci_hi,n\n";
    for (const auto& p : points)
        out << nd::format_double(p.param_value) << ','
            << nd::format_double(p.mean) << ','
            << nd::format_double(p.ci95_lo) << ','
            << nd::format_double(p.ci95_hi) << ',' << p.per_seed_values.size()
            << "\n";
    finish_output(out, out_path);
}

void run_reward_eval(const RewardOpts& o)
{
    const auto cfg = effective_config(o.config_path);

    if (!o.sweep_in.empty())
        run_sweep_aggregate(o.sweep_in, o.out_prefix + "_sweep.csv");
    if (o.rollout.empty()) {
        nd::require(!o.sweep_in.empty(), nd::errc::invalid_argument,
                    "nothing to do: pass --rollout/--reference or --sweep-in");
        return;
    }
    nd::require(!o.reference.empty(), nd::errc::invalid_argument,
                "--reference is required with --rollout");

    const auto fmt = parse_format(o.format);
    const auto roll = nd::load_trialset(o.rollout, fmt);
    const auto ref = nd::load_trialset(o.reference, fmt);
    nd::require(roll.trials() == ref.trials() && roll.steps() == ref.steps(),
                nd::errc::shape_mismatch,
                "rollout and reference differ in trials or timesteps");

    auto joints = o.joints.empty()
                      ? channels_of_kind(roll, nd::ChannelKind::joint_angle)
                      : o.joints;
    nd::require(!joints.empty(), nd::errc::invalid_argument,
                "no joint channels found; pass --joints");
    auto actions =
        o.actions.empty()
            ? channels_of_kind(roll, nd::ChannelKind::muscle_activation)
            : o.actions;
    nd::require(!actions.empty(), nd::errc::invalid_argument,
                "no action channels found; pass --actions");
    auto velocities =
        o.velocities.empty()
            ? channels_of_kind(roll, nd::ChannelKind::joint_velocity)
            : o.velocities;
    const auto& w = cfg.reward;
    if (o.forces.empty())
        nd::require(w.lambda_energy == 0.0, nd::errc::invalid_argument,
                    "lambda_energy > 0 needs --forces (per-joint force "
                    "channels) or a config with lambda_energy 0");
    else
        nd::require(o.forces.size() == velocities.size(),
                    nd::errc::length_mismatch,
                    "--forces must name one channel per velocity channel");

    const auto j_roll = channel_indices(roll, joints);
    const auto j_ref = channel_indices(ref, joints);
    const auto a_cols = channel_indices(roll, actions);
    const auto v_cols = channel_indices(roll, velocities);
    const auto f_cols = channel_indices(roll, o.forces);
    const bool with_energy = !o.forces.empty();

    const std::string trace_path = o.out_prefix + "_reward.csv";
    auto out = open_output(trace_path);
    out << "trial,timestep,r_joint,c_ctrl,c_energy,r_total\n";
    double sum_total = 0.0;
    for (std::size_t t = 0; t < roll.trials(); t++) {
        for (std::size_t n = 0; n < roll.steps(); n++) {
            const auto q = row_values(roll, t, n, j_roll);
            const auto q_ref = row_values(ref, t, n, j_ref);
            const auto a = row_values(roll, t, n, a_cols);
            const auto v = with_energy ? row_values(roll, t, n, v_cols)
                                       : std::vector<double>{};
            const auto f = with_energy ? row_values(roll, t, n, f_cols)
                                       : std::vector<double>{};
            const auto s = nd::reward::total_reward(q, q_ref, a, v, f, w);
            sum_total += s.r_total;
            out << t << ',' << n << ',' << nd::format_double(s.r_joint) << ','
                << nd::format_double(s.c_ctrl) << ','
                << nd::format_double(s.c_energy) << ','
                << nd::format_double(s.r_total) << "\n";
        }
    }
    finish_output(out, trace_path);

    // spectral chatter metric per action channel, averaged across trials
    if (o.hf_hi > roll.sample_rate_hz() / 2.0)
        std::cerr << "note: high-frequency band upper edge "
                  << nd::format_double(o.hf_hi) << " Hz clamped to Nyquist "
                  << nd::format_double(roll.sample_rate_hz() / 2.0) << " Hz\n";
    ordered_json hf;
    for (std::size_t i = 0; i < actions.size(); i++) {
        double acc = 0.0;
        for (std::size_t t = 0; t < roll.trials(); t++)
            acc += nd::reward::high_freq_power(roll.series(t, a_cols[i]),
                                               roll.sample_rate_hz(), o.hf_lo,
                                               o.hf_hi);
        hf[actions[i]] = acc / static_cast<double>(roll.trials());
    }

    const auto roll_j = nd::select_channels(roll, joints);
    const auto ref_j = nd::select_channels(ref, joints);
    const auto mae_ch = nd::reward::mae_per_channel(roll_j, ref_j);
    ordered_json mae;
    for (std::size_t i = 0; i < joints.size(); i++) mae[joints[i]] = mae_ch[i];

    const double n_samples =
        static_cast<double>(roll.trials() * roll.steps());
    ordered_json summary;
    summary["command"] = "reward-eval";
    summary["rollout"] = o.rollout;
    summary["reference"] = o.reference;
    summary["mean_r_total"] = sum_total / n_samples;
    summary["mae"] = {{"overall", nd::reward::mae(roll_j, ref_j)},
                      {"per_channel", mae}};
    summary["hf_power_fraction"] = hf;
    summary["hf_band_hz"] = {o.hf_lo, o.hf_hi};
    write_summary(o.out_prefix + "_summary.json", std::move(summary), cfg);
}

// ---------------------------------------------------------------- pca

struct PcaOpts {
    std::string in, behavior, out_prefix, config_path;
    std::string format = "wide";
};

void run_pca(const PcaOpts& o)
{
    const auto cfg = effective_config(o.config_path);
    const auto acts = nd::load_trialset(o.in, parse_format(o.format));
    const auto emb = nd::pca::project_top3(acts, o.behavior);

    const std::string emb_path = o.out_prefix + "_embedding.csv";
    auto out = open_output(emb_path);
    out << "clip,timestep,pc1,pc2,pc3";
    if (emb.has_behavior()) out << ',' << emb.behavior_name;
    out << "\n";
    for (std::size_t t = 0; t < emb.n_clips; t++)
        for (std::size_t n = 0; n < emb.n_steps; n++) {
            out << t << ',' << n;
            for (std::size_t c = 0; c < 3; c++)
                out << ',' << nd::format_double(emb(t, n, c));
            if (emb.has_behavior())
                out << ',' << nd::format_double(emb.behavior[t * emb.n_steps + n]);
            out << "\n";
        }
    finish_output(out, emb_path);

    // Fig-style pairwise projections of the 3-D embedding
    const std::array<std::pair<int, int>, 3> pairs{
        {{0, 1}, {0, 2}, {1, 2}}};
    std::vector<nd::svg::Plot> panels;
    for (const auto& [a, b] : pairs) {
        nd::svg::Plot panel;
        panel.title = "PC" + std::to_string(a + 1) + " vs PC" +
                      std::to_string(b + 1);
        panel.x_label = "PC" + std::to_string(a + 1);
        panel.y_label = "PC" + std::to_string(b + 1);
        nd::svg::Series cloud{"", {}, {}, "", true};
        for (std::size_t t = 0; t < emb.n_clips; t++)
            for (std::size_t n = 0; n < emb.n_steps; n++) {
                cloud.x.push_back(emb(t, n, static_cast<std::size_t>(a)));
                cloud.y.push_back(emb(t, n, static_cast<std::size_t>(b)));
            }
        panel.series = {cloud};
        panels.push_back(std::move(panel));
    }
    nd::svg::write_svg(nd::svg::render_panels(panels, 3),
                       o.out_prefix + "_embedding.svg");
    std::cout << "wrote " << o.out_prefix + "_embedding.svg" << "\n";

    ordered_json summary;
    summary["command"] = "pca";
    summary["input"] = o.in;
    summary["variance_ratio"] = emb.variance_ratio;
    double total = 0.0;
    for (double r : emb.variance_ratio) total += r;
    summary["variance_ratio_sum"] = total;
    if (emb.has_behavior()) summary["behavior"] = emb.behavior_name;
    write_summary(o.out_prefix + "_summary.json", std::move(summary), cfg);
}

// -------------------------------------------------------------- synth

struct SynthOpts {
    std::string out_prefix, config_path;
    std::string format = "wide";
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    double noise = -1.0;
    double duration = 0.0;
    int threads = 0;
    bool seed_set = false, trials_set = false, noise_set = false,
         duration_set = false;
};

void run_synth(const SynthOpts& o)
{
    auto cfg = effective_config(o.config_path);
    if (o.seed_set) cfg.synth.script.seed = o.seed;
    if (o.trials_set) cfg.synth.script.trials = o.trials;
    if (o.noise_set) cfg.synth.script.noise = o.noise;
    if (o.duration_set) cfg.synth.script.duration = o.duration;

    const auto data = nd::arm::generate_reaches(cfg.synth.script,
                                                cfg.synth.params, o.threads);
    const auto fmt = parse_format(o.format);

    std::vector<std::string> kin, act;
    for (std::size_t c = 0; c < data.tracks.channels(); c++) {
        const auto& name = data.tracks.channel(c).name;
        (name.rfind("a_", 0) == 0 ? act : kin).push_back(name);
    }
    const std::string kin_path = o.out_prefix + "_kinematics.csv";
    const std::string act_path = o.out_prefix + "_activations.csv";
    const std::string emg_path = o.out_prefix + "_emg.csv";
    nd::save_trialset(nd::select_channels(data.tracks, kin), kin_path, fmt);
    std::cout << "wrote " << kin_path << "\n";
    nd::save_trialset(nd::select_channels(data.tracks, act), act_path, fmt);
    std::cout << "wrote " << act_path << "\n";
    nd::save_trialset(data.emg, emg_path, fmt);
    std::cout << "wrote " << emg_path << "\n";

    ordered_json summary;
    summary["command"] = "synth-generate";
    summary["trials"] = data.tracks.trials();
    summary["samples_per_trial"] = data.tracks.steps();
    summary["emg_samples_per_trial"] = data.emg.steps();
    summary["seed"] = cfg.synth.script.seed;
    write_summary(o.out_prefix + "_summary.json", std::move(summary), cfg);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"neuromechanical time-series toolkit: EMG envelopes, "
                 "imitation-reward metrics, PCA embeddings, and "
                 "simplex-projection forecasting over trial-aligned CSVs"};
    app.require_subcommand(1);

    EmgOpts emg;
    auto* c_emg = app.add_subcommand(
        "emg-process", "Extract normalized EMG envelopes from raw traces");
    c_emg->add_option("--in", emg.in, "input raw EMG CSV")->required();
    c_emg->add_option("--out", emg.out_prefix, "output path prefix")
        ->required();
    c_emg->add_option("--format", emg.format, "CSV layout: wide or long");
    c_emg->add_option("--config", emg.config_path, "JSON config file");
    c_emg->add_option("--threads", emg.threads,
                      "worker threads (0 = NEURODYN_THREADS or all cores)");
    c_emg->callback([&] { run_emg_process(emg); });

    EdmOpts edm;
    auto* c_edm = app.add_subcommand(
        "edm", "Delay-embedding simplex forecasting and parameter sweeps");
    c_edm->add_option("--in", edm.in, "input trial CSV")->required();
    c_edm->add_option("--source", edm.sources,
                      "source channel(s); several switch to multivariate "
                      "embedding")
        ->required()
        ->delimiter(',');
    c_edm->add_option("--target", edm.target, "target channel")->required();
    auto* oE = c_edm->add_option("--E", edm.E, "embedding dimension");
    auto* otau = c_edm->add_option("--tau", edm.tau, "embedding delay");
    auto* oTp = c_edm->add_option("--Tp", edm.Tp, "prediction horizon");
    c_edm->add_option("--theiler", edm.theiler, "temporal exclusion radius");
    c_edm->add_option("--split", edm.split,
                      "leave_one_trial_out or half_split");
    c_edm->add_flag("--sweep", edm.sweep, "grid-search (E, tau, Tp)");
    c_edm->add_option("--E-range", edm.E_range, "sweep range, e.g. 1..5");
    c_edm->add_option("--tau-range", edm.tau_range,
                      "sweep range, e.g. -3..-1");
    c_edm->add_option("--Tp-range", edm.Tp_range, "sweep range, e.g. 1..5");
    c_edm->add_option("--out", edm.out_prefix, "output path prefix")
        ->required();
    c_edm->add_option("--format", edm.format, "CSV layout: wide or long");
    c_edm->add_option("--config", edm.config_path, "JSON config file");
    c_edm->add_option("--threads", edm.threads,
                      "worker threads (0 = NEURODYN_THREADS or all cores)");
    c_edm->callback([&] {
        edm.E_set = oE->count() > 0;
        edm.tau_set = otau->count() > 0;
        edm.Tp_set = oTp->count() > 0;
        run_edm(edm);
    });

    RewardOpts rew;
    auto* c_rew = app.add_subcommand(
        "reward-eval", "Imitation reward traces, MAE and spectral metrics");
    c_rew->add_option("--rollout", rew.rollout, "rollout trial CSV");
    c_rew->add_option("--reference", rew.reference, "reference trial CSV");
    c_rew->add_option("--out", rew.out_prefix, "output path prefix")
        ->required();
    c_rew->add_option("--joints", rew.joints, "joint angle channels")
        ->delimiter(',');
    c_rew->add_option("--actions", rew.actions, "action channels")
        ->delimiter(',');
    c_rew->add_option("--velocities", rew.velocities,
                      "joint velocity channels")
        ->delimiter(',');
    c_rew->add_option("--forces", rew.forces, "per-joint force channels")
        ->delimiter(',');
    c_rew->add_option("--hf-lo", rew.hf_lo, "spectral band lower edge, Hz");
    c_rew->add_option("--hf-hi", rew.hf_hi, "spectral band upper edge, Hz");
    c_rew->add_option("--sweep-in", rew.sweep_in,
                      "per-seed CSV (param,value) to aggregate with 95% CIs");
    c_rew->add_option("--format", rew.format, "CSV layout: wide or long");
    c_rew->add_option("--config", rew.config_path, "JSON config file");
    c_rew->callback([&] { run_reward_eval(rew); });

    PcaOpts pca;
    auto* c_pca = app.add_subcommand(
        "pca", "Project activation channels onto their top-3 components");
    c_pca->add_option("--in", pca.in, "input activation CSV")->required();
    c_pca->add_option("--behavior", pca.behavior,
                      "channel carried alongside the embedding");
    c_pca->add_option("--out", pca.out_prefix, "output path prefix")
        ->required();
    c_pca->add_option("--format", pca.format, "CSV layout: wide or long");
    c_pca->add_option("--config", pca.config_path, "JSON config file");
    c_pca->callback([&] { run_pca(pca); });

    SynthOpts synth;
    auto* c_synth = app.add_subcommand(
        "synth-generate", "Generate coupled 2-link-arm reach trials");
    auto* oseed = c_synth->add_option("--seed", synth.seed, "RNG seed");
    auto* otrials =
        c_synth->add_option("--trials", synth.trials, "number of trials");
    auto* onoise =
        c_synth->add_option("--noise", synth.noise, "excitation noise scale");
    auto* oduration =
        c_synth->add_option("--duration", synth.duration, "trial length, s");
    c_synth->add_option("--out", synth.out_prefix, "output path prefix")
        ->required();
    c_synth->add_option("--format", synth.format, "CSV layout: wide or long");
    c_synth->add_option("--config", synth.config_path, "JSON config file");
    c_synth->add_option("--threads", synth.threads,
                        "worker threads (0 = NEURODYN_THREADS or all cores)");
    c_synth->callback([&] {
        synth.seed_set = oseed->count() > 0;
        synth.trials_set = otrials->count() > 0;
        synth.noise_set = onoise->count() > 0;
        synth.duration_set = oduration->count() > 0;
        run_synth(synth);
    });

    std::string show_config_path;
    auto* c_cfg = app.add_subcommand("config", "Configuration helpers");
    c_cfg->require_subcommand(1);
    auto* c_show = c_cfg->add_subcommand(
        "show", "Print the effective configuration as canonical JSON");
    c_show->add_option("--config", show_config_path, "JSON config file");
    c_show->callback(
        [&] { std::cout << nd::dump_run_config(effective_config(show_config_path)); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const nd::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.is_io() ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
