#ifndef NEURODYN_TRIAL_DATA_HPP
#define NEURODYN_TRIAL_DATA_HPP

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "neurodyn/error.hpp"

namespace neurodyn {

enum class ChannelKind {
    joint_angle,
    joint_velocity,
    muscle_activation,
    emg_envelope,
    raw_emg,
    latent,
    other,
};

const char* channel_kind_name(ChannelKind kind);
ChannelKind channel_kind_from_name(std::string_view name);

struct ChannelSpec {
    std::string name;
    ChannelKind kind = ChannelKind::other;
    std::string units;

    bool operator==(const ChannelSpec&) const = default;
};

/// Multichannel trial-aligned time series: a dense (trial, timestep,
/// channel) block of doubles plus channel metadata and the sample rate.
/// Immutable by convention once filled; all library operations return new
/// sets instead of mutating, so sharing across threads is safe.
class TrialSet {
  public:
    TrialSet() = default;

    /// Zero-initialized block. Channel names must be nonempty and unique.
    TrialSet(std::size_t trials, std::size_t steps,
             std::vector<ChannelSpec> channels, double sample_rate_hz);

    std::size_t trials() const { return trials_; }
    std::size_t steps() const { return steps_; }
    std::size_t channels() const { return channels_.size(); }

    double sample_rate_hz() const { return sample_rate_hz_; }
    void set_sample_rate_hz(double hz);

    const std::vector<ChannelSpec>& channel_specs() const { return channels_; }
    const ChannelSpec& channel(std::size_t c) const { return channels_.at(c); }
    void set_channel_kind(std::size_t c, ChannelKind kind, std::string units);

    bool has_channel(std::string_view name) const;
    /// Index of a named channel; throws UnknownChannel if absent.
    std::size_t channel_index(std::string_view name) const;

    double operator()(std::size_t t, std::size_t n, std::size_t c) const
    {
        return data_[(t * steps_ + n) * channels_.size() + c];
    }
    double& operator()(std::size_t t, std::size_t n, std::size_t c)
    {
        return data_[(t * steps_ + n) * channels_.size() + c];
    }

    /// Copy of the 1-D series for one (trial, channel).
    std::vector<double> series(std::size_t t, std::size_t c) const;
    void set_series(std::size_t t, std::size_t c, std::span<const double> x);

    std::span<const double> raw() const { return data_; }
    std::span<double> raw() { return data_; }

    /// Rejects NaN/Inf anywhere in the block (NonFiniteValue).
    void check_finite() const;

    bool operator==(const TrialSet&) const = default;

  private:
    std::size_t trials_ = 0;
    std::size_t steps_ = 0;
    std::vector<ChannelSpec> channels_;
    double sample_rate_hz_ = 1.0;
    std::vector<double> data_; // (trial, timestep, channel) row-major
};

/// Read-only view of one trial of a TrialSet.
class TrialSlice {
  public:
    TrialSlice(const TrialSet& parent, std::size_t trial)
        : parent_(&parent), trial_(trial)
    {
        require(trial < parent.trials(), errc::invalid_argument,
                "trial index out of range");
    }

    std::size_t steps() const { return parent_->steps(); }
    std::size_t channels() const { return parent_->channels(); }
    double sample_rate_hz() const { return parent_->sample_rate_hz(); }
    const ChannelSpec& channel(std::size_t c) const { return parent_->channel(c); }

    double operator()(std::size_t n, std::size_t c) const
    {
        return (*parent_)(trial_, n, c);
    }

  private:
    const TrialSet* parent_;
    std::size_t trial_;
};

enum class CsvFormat { csv_long, csv_wide };

/// Load a TrialSet from disk. csv_wide rows are (trial, timestep,
/// ch1..chC) with a header naming the channels; csv_long rows are
/// (trial, timestep, channel, value). Leading "# key value" comment lines
/// carry sample rate and channel metadata and are optional on input.
/// Trials are sorted ascending by their file index and reindexed from 0;
/// timesteps must be contiguous from 0 and equal-length across trials.
TrialSet load_trialset(const std::string& path, CsvFormat format);

/// Inverse of load_trialset; load(save(x)) == x bit-exactly.
void save_trialset(const TrialSet& set, const std::string& path,
                   CsvFormat format);

/// New TrialSet whose channels follow the requested name order.
TrialSet select_channels(const TrialSet& set,
                         const std::vector<std::string>& names);

/// Shortest decimal form of v that round-trips to the same double.
/// All CSV/JSON/SVG output funnels through this so reruns are bit-identical.
std::string format_double(double v);

} // namespace neurodyn

#endif
