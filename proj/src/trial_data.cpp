#include "neurodyn/trial_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <system_error>

namespace neurodyn {

const char* channel_kind_name(ChannelKind kind)
{
    switch (kind) {
    case ChannelKind::joint_angle: return "joint_angle";
    case ChannelKind::joint_velocity: return "joint_velocity";
    case ChannelKind::muscle_activation: return "muscle_activation";
    case ChannelKind::emg_envelope: return "emg_envelope";
    case ChannelKind::raw_emg: return "raw_emg";
    case ChannelKind::latent: return "latent";
    case ChannelKind::other: return "other";
    }
    return "other";
}

ChannelKind channel_kind_from_name(std::string_view name)
{
    if (name == "joint_angle") return ChannelKind::joint_angle;
    if (name == "joint_velocity") return ChannelKind::joint_velocity;
    if (name == "muscle_activation") return ChannelKind::muscle_activation;
    if (name == "emg_envelope") return ChannelKind::emg_envelope;
    if (name == "raw_emg") return ChannelKind::raw_emg;
    if (name == "latent") return ChannelKind::latent;
    return ChannelKind::other;
}

std::string format_double(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

void validate_channel_names(const std::vector<ChannelSpec>& channels)
{
    std::set<std::string> seen;
    for (const auto& ch : channels) {
        require(!ch.name.empty(), errc::invalid_argument,
                "channel name must be nonempty");
        require(seen.insert(ch.name).second, errc::invalid_argument,
                "duplicate channel name '" + ch.name + "'");
    }
}

double parse_value(std::string_view field, std::size_t line_no)
{
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last)
        fail(errc::parse_error, "line " + std::to_string(line_no) +
                                    ": cannot parse number '" +
                                    std::string(field) + "'");
    return v;
}

long parse_index(std::string_view field, std::size_t line_no,
                 const char* what)
{
    long v = 0;
    auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size())
        fail(errc::parse_error, "line " + std::to_string(line_no) +
                                    ": cannot parse " + what + " '" +
                                    std::string(field) + "'");
    return v;
}

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

struct CsvMeta {
    double sample_rate_hz = 1.0;
    std::vector<std::string> channels; // csv_long only
    std::vector<ChannelKind> kinds;
    std::vector<std::string> units;
};

// Leading "# key value" lines before the header.
CsvMeta read_meta(std::istream& in, std::size_t& line_no)
{
    CsvMeta meta;
    while (in.peek() == '#') {
        std::string line;
        std::getline(in, line);
        line_no++;
        std::istringstream ls(line);
        std::string hash, key, rest;
        ls >> hash >> key;
        std::getline(ls, rest);
        if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
        if (!rest.empty() && rest.back() == '\r') rest.pop_back();
        if (key == "sample_rate_hz") {
            meta.sample_rate_hz = parse_value(rest, line_no);
            require(meta.sample_rate_hz > 0, errc::invalid_argument,
                    "sample_rate_hz must be positive");
        } else if (key == "channels") {
            meta.channels = split_csv(rest);
        } else if (key == "kinds") {
            for (const auto& k : split_csv(rest))
                meta.kinds.push_back(channel_kind_from_name(k));
        } else if (key == "units") {
            meta.units = split_csv(rest);
        }
        // unknown comment lines are ignored
    }
    return meta;
}

void apply_meta(TrialSet& set, const CsvMeta& meta)
{
    set.set_sample_rate_hz(meta.sample_rate_hz);
    for (std::size_t c = 0; c < set.channels(); c++) {
        ChannelKind kind =
            c < meta.kinds.size() ? meta.kinds[c] : ChannelKind::other;
        std::string units = c < meta.units.size() ? meta.units[c] : "";
        set.set_channel_kind(c, kind, std::move(units));
    }
}

// cell map keyed (trial, timestep) -> per-channel values + fill mask
struct RowKey {
    long trial;
    long step;
    bool operator<(const RowKey& o) const
    {
        return trial != o.trial ? trial < o.trial : step < o.step;
    }
};

TrialSet assemble(const std::map<RowKey, std::vector<double>>& cells,
                  std::vector<ChannelSpec> channels, const CsvMeta& meta)
{
    // group by trial, check contiguous timesteps and equal lengths
    std::map<long, long> trial_len;
    for (const auto& [key, row] : cells) {
        auto [it, fresh] = trial_len.emplace(key.trial, 0);
        require(key.step == it->second, errc::ragged_trials,
                "trial " + std::to_string(key.trial) +
                    ": timesteps not contiguous from 0 (saw " +
                    std::to_string(key.step) + ", expected " +
                    std::to_string(it->second) + ")");
        it->second++;
        (void)fresh;
    }
    std::size_t steps = trial_len.empty() ? 0 : (std::size_t)trial_len.begin()->second;
    for (const auto& [trial, len] : trial_len)
        require((std::size_t)len == steps, errc::ragged_trials,
                "trial " + std::to_string(trial) + " has " +
                    std::to_string(len) + " timesteps, expected " +
                    std::to_string(steps));

    TrialSet set(trial_len.size(), steps, std::move(channels),
                 meta.sample_rate_hz);
    apply_meta(set, meta);

    std::size_t t = 0;
    long prev_trial = 0;
    bool first = true;
    for (const auto& [key, row] : cells) {
        if (!first && key.trial != prev_trial) t++;
        first = false;
        prev_trial = key.trial;
        for (std::size_t c = 0; c < row.size(); c++)
            set(t, (std::size_t)key.step, c) = row[c];
    }
    set.check_finite();
    return set;
}

TrialSet load_wide(std::istream& in, std::size_t& line_no)
{
    CsvMeta meta = read_meta(in, line_no);

    std::string header;
    require(bool(std::getline(in, header)), errc::missing_column,
            "empty file: missing header row");
    line_no++;
    auto cols = split_csv(header);
    require(cols.size() >= 2 && cols[0] == "trial" && cols[1] == "timestep",
            errc::missing_column,
            "csv_wide header must start with 'trial,timestep'");

    std::vector<ChannelSpec> channels;
    for (std::size_t c = 2; c < cols.size(); c++)
        channels.push_back({cols[c], ChannelKind::other, ""});
    validate_channel_names(channels);

    std::map<RowKey, std::vector<double>> cells;
    std::string line;
    while (std::getline(in, line)) {
        line_no++;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv(line);
        require(fields.size() == cols.size(), errc::parse_error,
                "line " + std::to_string(line_no) + ": expected " +
                    std::to_string(cols.size()) + " fields, got " +
                    std::to_string(fields.size()));
        RowKey key{parse_index(fields[0], line_no, "trial index"),
                   parse_index(fields[1], line_no, "timestep")};
        std::vector<double> row(channels.size());
        for (std::size_t c = 0; c < channels.size(); c++)
            row[c] = parse_value(fields[c + 2], line_no);
        auto [it, fresh] = cells.emplace(key, std::move(row));
        require(fresh, errc::duplicate_cell,
                "duplicate row for trial " + std::to_string(key.trial) +
                    ", timestep " + std::to_string(key.step));
        (void)it;
    }
    return assemble(cells, std::move(channels), meta);
}

TrialSet load_long(std::istream& in, std::size_t& line_no)
{
    CsvMeta meta = read_meta(in, line_no);

    std::string header;
    require(bool(std::getline(in, header)), errc::missing_column,
            "empty file: missing header row");
    line_no++;
    auto cols = split_csv(header);
    require(cols.size() == 4 && cols[0] == "trial" && cols[1] == "timestep" &&
                cols[2] == "channel" && cols[3] == "value",
            errc::missing_column,
            "csv_long header must be 'trial,timestep,channel,value'");

    // channel order: metadata line if present, else first appearance
    std::vector<std::string> channel_order = meta.channels;
    std::map<std::string, std::size_t> channel_idx;
    for (std::size_t c = 0; c < channel_order.size(); c++)
        channel_idx[channel_order[c]] = c;

    struct LongCell {
        RowKey key;
        std::size_t channel;
        double value;
    };
    std::vector<LongCell> raw;
    std::string line;
    while (std::getline(in, line)) {
        line_no++;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv(line);
        require(fields.size() == 4, errc::parse_error,
                "line " + std::to_string(line_no) +
                    ": expected 4 fields, got " +
                    std::to_string(fields.size()));
        RowKey key{parse_index(fields[0], line_no, "trial index"),
                   parse_index(fields[1], line_no, "timestep")};
        auto [it, fresh] = channel_idx.emplace(fields[2], channel_order.size());
        if (fresh) {
            require(meta.channels.empty(), errc::unknown_channel,
                    "line " + std::to_string(line_no) + ": channel '" +
                        fields[2] + "' not in '# channels' metadata");
            channel_order.push_back(fields[2]);
        }
        raw.push_back({key, it->second, parse_value(fields[3], line_no)});
    }

    std::vector<ChannelSpec> channels;
    for (const auto& name : channel_order)
        channels.push_back({name, ChannelKind::other, ""});
    validate_channel_names(channels);

    std::map<RowKey, std::vector<double>> cells;
    std::map<RowKey, std::vector<bool>> filled;
    for (const auto& cell : raw) {
        auto& row = cells[cell.key];
        auto& mask = filled[cell.key];
        row.resize(channels.size(), 0.0);
        mask.resize(channels.size(), false);
        require(!mask[cell.channel], errc::duplicate_cell,
                "duplicate cell: trial " + std::to_string(cell.key.trial) +
                    ", timestep " + std::to_string(cell.key.step) +
                    ", channel '" + channel_order[cell.channel] + "'");
        mask[cell.channel] = true;
        row[cell.channel] = cell.value;
    }
    for (const auto& [key, mask] : filled) {
        for (std::size_t c = 0; c < mask.size(); c++)
            require(mask[c], errc::ragged_trials,
                    "trial " + std::to_string(key.trial) + ", timestep " +
                        std::to_string(key.step) + ": missing channel '" +
                        channel_order[c] + "'");
    }
    return assemble(cells, std::move(channels), meta);
}

void write_meta(std::ostream& out, const TrialSet& set, bool with_channels)
{
    out << "# sample_rate_hz " << format_double(set.sample_rate_hz()) << "\n";
    if (with_channels) {
        out << "# channels";
        for (std::size_t c = 0; c < set.channels(); c++)
            out << (c == 0 ? " " : ",") << set.channel(c).name;
        out << "\n";
    }
    out << "# kinds";
    for (std::size_t c = 0; c < set.channels(); c++)
        out << (c == 0 ? " " : ",") << channel_kind_name(set.channel(c).kind);
    out << "\n# units";
    for (std::size_t c = 0; c < set.channels(); c++)
        out << (c == 0 ? " " : ",") << set.channel(c).units;
    out << "\n";
}

} // namespace

TrialSet::TrialSet(std::size_t trials, std::size_t steps,
                   std::vector<ChannelSpec> channels, double sample_rate_hz)
    : trials_(trials), steps_(steps), channels_(std::move(channels)),
      sample_rate_hz_(sample_rate_hz),
      data_(trials * steps * channels_.size(), 0.0)
{
    validate_channel_names(channels_);
    require(sample_rate_hz_ > 0 && std::isfinite(sample_rate_hz_),
            errc::invalid_argument, "sample_rate_hz must be positive");
}

void TrialSet::set_sample_rate_hz(double hz)
{
    require(hz > 0 && std::isfinite(hz), errc::invalid_argument,
            "sample_rate_hz must be positive");
    sample_rate_hz_ = hz;
}

void TrialSet::set_channel_kind(std::size_t c, ChannelKind kind,
                                std::string units)
{
    channels_.at(c).kind = kind;
    channels_.at(c).units = std::move(units);
}

bool TrialSet::has_channel(std::string_view name) const
{
    for (const auto& ch : channels_)
        if (ch.name == name) return true;
    return false;
}

std::size_t TrialSet::channel_index(std::string_view name) const
{
    for (std::size_t c = 0; c < channels_.size(); c++)
        if (channels_[c].name == name) return c;
    fail(errc::unknown_channel, "no channel named '" + std::string(name) + "'");
}

std::vector<double> TrialSet::series(std::size_t t, std::size_t c) const
{
    std::vector<double> out(steps_);
    for (std::size_t n = 0; n < steps_; n++) out[n] = (*this)(t, n, c);
    return out;
}

void TrialSet::set_series(std::size_t t, std::size_t c,
                          std::span<const double> x)
{
    require(x.size() == steps_, errc::length_mismatch,
            "series length does not match timestep count");
    for (std::size_t n = 0; n < steps_; n++) (*this)(t, n, c) = x[n];
}

void TrialSet::check_finite() const
{
    for (double v : data_)
        require(std::isfinite(v), errc::non_finite_value,
                "TrialSet contains a NaN or Inf value");
}

TrialSet load_trialset(const std::string& path, CsvFormat format)
{
    std::ifstream in(path);
    if (!in) fail(errc::io_failure, "cannot open '" + path + "' for reading");
    std::size_t line_no = 0;
    return format == CsvFormat::csv_wide ? load_wide(in, line_no)
                                         : load_long(in, line_no);
}

void save_trialset(const TrialSet& set, const std::string& path,
                   CsvFormat format)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(errc::io_failure, "cannot open '" + path + "' for writing");

    if (format == CsvFormat::csv_wide) {
        write_meta(out, set, false);
        out << "trial,timestep";
        for (std::size_t c = 0; c < set.channels(); c++)
            out << ',' << set.channel(c).name;
        out << "\n";
        for (std::size_t t = 0; t < set.trials(); t++)
            for (std::size_t n = 0; n < set.steps(); n++) {
                out << t << ',' << n;
                for (std::size_t c = 0; c < set.channels(); c++)
                    out << ',' << format_double(set(t, n, c));
                out << "\n";
            }
    } else {
        write_meta(out, set, true);
        out << "trial,timestep,channel,value\n";
        for (std::size_t t = 0; t < set.trials(); t++)
            for (std::size_t n = 0; n < set.steps(); n++)
                for (std::size_t c = 0; c < set.channels(); c++)
                    out << t << ',' << n << ',' << set.channel(c).name << ','
                        << format_double(set(t, n, c)) << "\n";
    }
    if (!out.flush()) fail(errc::io_failure, "write failed for '" + path + "'");
}

TrialSet select_channels(const TrialSet& set,
                         const std::vector<std::string>& names)
{
    std::vector<std::size_t> idx;
    std::vector<ChannelSpec> channels;
    for (const auto& name : names) {
        idx.push_back(set.channel_index(name));
        channels.push_back(set.channel(idx.back()));
    }
    validate_channel_names(channels);

    TrialSet out(set.trials(), set.steps(), std::move(channels),
                 set.sample_rate_hz());
    for (std::size_t t = 0; t < set.trials(); t++)
        for (std::size_t n = 0; n < set.steps(); n++)
            for (std::size_t c = 0; c < idx.size(); c++)
                out(t, n, c) = set(t, n, idx[c]);
    return out;
}

} // namespace neurodyn
