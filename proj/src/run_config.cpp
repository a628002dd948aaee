#include "neurodyn/run_config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

#include "neurodyn/error.hpp"

namespace neurodyn {

namespace {

using ordered_json = nlohmann::ordered_json;

void check_keys(const ordered_json& obj, const std::string& path,
                std::initializer_list<const char*> allowed)
{
    require(obj.is_object(), errc::invalid_config,
            "config section '" + path + "' must be a JSON object");
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (key == a) known = true;
        require(known, errc::invalid_config,
                "unknown config key '" + path + "." + key + "'");
        (void)value;
    }
}

template <typename T>
void read(const ordered_json& obj, const char* key, T& out)
{
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

template <typename T, std::size_t N>
void read_array(const ordered_json& obj, const char* key,
                const std::string& path, std::array<T, N>& out)
{
    if (!obj.contains(key)) return;
    const auto& arr = obj.at(key);
    require(arr.is_array() && arr.size() == N, errc::invalid_config,
            "config key '" + path + "." + key + "' must be an array of " +
                std::to_string(N) + " numbers");
    for (std::size_t i = 0; i < N; i++) out[i] = arr.at(i).get<T>();
}

void parse_envelope(const ordered_json& obj, dsp::EnvelopeConfig& cfg)
{
    check_keys(obj, "envelope",
               {"fs_in_hz", "band_lo_hz", "band_hi_hz", "lp_hz", "fs_out_hz",
                "clip_len", "norm_percentile"});
    read(obj, "fs_in_hz", cfg.fs_in_hz);
    read(obj, "band_lo_hz", cfg.band_lo_hz);
    read(obj, "band_hi_hz", cfg.band_hi_hz);
    read(obj, "lp_hz", cfg.lp_hz);
    read(obj, "fs_out_hz", cfg.fs_out_hz);
    read(obj, "clip_len", cfg.clip_len);
    read(obj, "norm_percentile", cfg.norm_percentile);
}

void parse_reward(const ordered_json& obj, reward::RewardWeights& w)
{
    check_keys(obj, "reward",
               {"lambda_joint", "lambda_ctrl", "lambda_energy", "alpha_joint"});
    read(obj, "lambda_joint", w.lambda_joint);
    read(obj, "lambda_ctrl", w.lambda_ctrl);
    read(obj, "lambda_energy", w.lambda_energy);
    read(obj, "alpha_joint", w.alpha_joint);
}

void parse_edm(const ordered_json& obj, EdmRunConfig& cfg)
{
    check_keys(obj, "edm",
               {"E", "tau", "Tp", "theiler", "mode", "split", "E_range",
                "tau_range", "Tp_range"});
    read(obj, "E", cfg.embedding.E);
    read(obj, "tau", cfg.embedding.tau);
    read(obj, "Tp", cfg.embedding.Tp);
    read(obj, "theiler", cfg.embedding.theiler);
    if (obj.contains("mode"))
        cfg.embedding.mode = embed_mode_from_name(obj.at("mode").get<std::string>());
    if (obj.contains("split"))
        cfg.split = split_from_name(obj.at("split").get<std::string>());
    read(obj, "E_range", cfg.E_range);
    read(obj, "tau_range", cfg.tau_range);
    read(obj, "Tp_range", cfg.Tp_range);
    require(cfg.embedding.E >= 1, errc::invalid_config, "edm.E must be >= 1");
    require(cfg.embedding.tau != 0, errc::invalid_config,
            "edm.tau must be nonzero");
    require(cfg.embedding.Tp >= 1, errc::invalid_config,
            "edm.Tp must be >= 1");
    require(cfg.embedding.theiler >= 0, errc::invalid_config,
            "edm.theiler must be >= 0");
}

void parse_synth(const ordered_json& obj, SynthConfig& cfg)
{
    check_keys(obj, "synth",
               {"trials", "duration", "noise", "seed", "start_q", "target_q",
                "arm"});
    read(obj, "trials", cfg.script.trials);
    read(obj, "duration", cfg.script.duration);
    read(obj, "noise", cfg.script.noise);
    read(obj, "seed", cfg.script.seed);
    read_array(obj, "start_q", "synth", cfg.script.start_q);
    read_array(obj, "target_q", "synth", cfg.script.target_q);
    if (obj.contains("arm")) {
        const auto& arm_obj = obj.at("arm");
        check_keys(arm_obj, "synth.arm",
                   {"l1", "l2", "m1", "m2", "moment_arm", "f_max", "tau_act",
                    "sim_dt", "ctrl_dt", "gravity", "damping", "q_min",
                    "q_max"});
        auto& p = cfg.params;
        read(arm_obj, "l1", p.l1);
        read(arm_obj, "l2", p.l2);
        read(arm_obj, "m1", p.m1);
        read(arm_obj, "m2", p.m2);
        read_array(arm_obj, "moment_arm", "synth.arm", p.moment_arm);
        read_array(arm_obj, "f_max", "synth.arm", p.f_max);
        read(arm_obj, "tau_act", p.tau_act);
        read(arm_obj, "sim_dt", p.sim_dt);
        read(arm_obj, "ctrl_dt", p.ctrl_dt);
        read(arm_obj, "gravity", p.gravity);
        read(arm_obj, "damping", p.damping);
        read_array(arm_obj, "q_min", "synth.arm", p.q_min);
        read_array(arm_obj, "q_max", "synth.arm", p.q_max);
    }
}

template <typename T, std::size_t N>
ordered_json to_array(const std::array<T, N>& a)
{
    ordered_json out = ordered_json::array();
    for (const T& v : a) out.push_back(v);
    return out;
}

} // namespace

const char* split_name(edm::SplitScheme split)
{
    return split == edm::SplitScheme::leave_one_trial_out
               ? "leave_one_trial_out"
               : "half_split";
}

edm::SplitScheme split_from_name(const std::string& name)
{
    if (name == "leave_one_trial_out")
        return edm::SplitScheme::leave_one_trial_out;
    if (name == "half_split") return edm::SplitScheme::half_split;
    fail(errc::invalid_config, "unknown split scheme '" + name + "'");
}

const char* embed_mode_name(edm::EmbedMode mode)
{
    return mode == edm::EmbedMode::univariate_delay ? "univariate_delay"
                                                    : "multivariate_direct";
}

edm::EmbedMode embed_mode_from_name(const std::string& name)
{
    if (name == "univariate_delay") return edm::EmbedMode::univariate_delay;
    if (name == "multivariate_direct")
        return edm::EmbedMode::multivariate_direct;
    fail(errc::invalid_config, "unknown embedding mode '" + name + "'");
}

RunConfig parse_run_config(const std::string& json_text)
{
    ordered_json doc;
    try {
        doc = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(errc::parse_error, std::string("config is not valid JSON: ") +
                                    e.what());
    }

    RunConfig cfg;
    try {
        check_keys(doc, "$", {"envelope", "reward", "edm", "pca", "synth"});
        if (doc.contains("envelope")) parse_envelope(doc.at("envelope"), cfg.envelope);
        if (doc.contains("reward")) parse_reward(doc.at("reward"), cfg.reward);
        if (doc.contains("edm")) parse_edm(doc.at("edm"), cfg.edm);
        if (doc.contains("pca")) {
            check_keys(doc.at("pca"), "pca", {"n_components"});
            read(doc.at("pca"), "n_components", cfg.pca_components);
        }
        if (doc.contains("synth")) parse_synth(doc.at("synth"), cfg.synth);
    } catch (const nlohmann::json::exception& e) {
        fail(errc::invalid_config,
             std::string("config has a wrongly typed value: ") + e.what());
    }

    cfg.envelope.validate();
    cfg.reward.validate();
    cfg.synth.params.validate();
    cfg.synth.script.validate(cfg.synth.params);
    require(cfg.pca_components >= 1, errc::invalid_config,
            "pca.n_components must be >= 1");
    return cfg;
}

RunConfig load_run_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) fail(errc::io_failure, "cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

std::string dump_run_config(const RunConfig& config)
{
    ordered_json doc;
    doc["envelope"] = {{"fs_in_hz", config.envelope.fs_in_hz},
                       {"band_lo_hz", config.envelope.band_lo_hz},
                       {"band_hi_hz", config.envelope.band_hi_hz},
                       {"lp_hz", config.envelope.lp_hz},
                       {"fs_out_hz", config.envelope.fs_out_hz},
                       {"clip_len", config.envelope.clip_len},
                       {"norm_percentile", config.envelope.norm_percentile}};
    doc["reward"] = {{"lambda_joint", config.reward.lambda_joint},
                     {"lambda_ctrl", config.reward.lambda_ctrl},
                     {"lambda_energy", config.reward.lambda_energy},
                     {"alpha_joint", config.reward.alpha_joint}};
    doc["edm"] = {{"E", config.edm.embedding.E},
                  {"tau", config.edm.embedding.tau},
                  {"Tp", config.edm.embedding.Tp},
                  {"theiler", config.edm.embedding.theiler},
                  {"mode", embed_mode_name(config.edm.embedding.mode)},
                  {"split", split_name(config.edm.split)},
                  {"E_range", config.edm.E_range},
                  {"tau_range", config.edm.tau_range},
                  {"Tp_range", config.edm.Tp_range}};
    doc["pca"] = {{"n_components", config.pca_components}};
    doc["synth"] = {
        {"trials", config.synth.script.trials},
        {"duration", config.synth.script.duration},
        {"noise", config.synth.script.noise},
        {"seed", config.synth.script.seed},
        {"start_q", to_array(config.synth.script.start_q)},
        {"target_q", to_array(config.synth.script.target_q)},
        {"arm",
         {{"l1", config.synth.params.l1},
          {"l2", config.synth.params.l2},
          {"m1", config.synth.params.m1},
          {"m2", config.synth.params.m2},
          {"moment_arm", to_array(config.synth.params.moment_arm)},
          {"f_max", to_array(config.synth.params.f_max)},
          {"tau_act", config.synth.params.tau_act},
          {"sim_dt", config.synth.params.sim_dt},
          {"ctrl_dt", config.synth.params.ctrl_dt},
          {"gravity", config.synth.params.gravity},
          {"damping", config.synth.params.damping},
          {"q_min", to_array(config.synth.params.q_min)},
          {"q_max", to_array(config.synth.params.q_max)}}}};
    return doc.dump(2) + "\n";
}

} // namespace neurodyn
