#ifndef NEURODYN_RUN_CONFIG_HPP
#define NEURODYN_RUN_CONFIG_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "neurodyn/arm_sim.hpp"
#include "neurodyn/dsp.hpp"
#include "neurodyn/edm.hpp"
#include "neurodyn/reward.hpp"

namespace neurodyn {

struct EdmRunConfig {
    edm::EmbeddingConfig embedding; // columns/target are set per invocation
    edm::SplitScheme split = edm::SplitScheme::leave_one_trial_out;
    std::vector<int> E_range{1, 2, 3, 4, 5};
    std::vector<int> tau_range{-3, -2, -1};
    std::vector<int> Tp_range{1, 2, 3, 4, 5};
};

struct SynthConfig {
    arm::ReachScript script;
    arm::ArmParams params;
};

/// Aggregated tool configuration. Every field has the module default, a
/// JSON config file overrides selectively, and unknown keys anywhere in
/// the document are rejected.
struct RunConfig {
    dsp::EnvelopeConfig envelope;
    reward::RewardWeights reward;
    EdmRunConfig edm;
    std::size_t pca_components = 3;
    SynthConfig synth;
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

/// Canonical JSON rendering (fixed key order, shortest round-trip
/// numbers). parse(dump(c)) reproduces c exactly, and dumping twice gives
/// identical bytes, which is what `config show` relies on.
std::string dump_run_config(const RunConfig& config);

const char* split_name(edm::SplitScheme split);
edm::SplitScheme split_from_name(const std::string& name);
const char* embed_mode_name(edm::EmbedMode mode);
edm::EmbedMode embed_mode_from_name(const std::string& name);

} // namespace neurodyn

#endif
