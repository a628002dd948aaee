#include "neurodyn/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "neurodyn/threads.hpp"

namespace neurodyn::dsp {

namespace {

using cplx = std::complex<double>;

constexpr int kEnvelopeFilterOrder = 4;

// Upper-half-plane poles of the analog Butterworth prototype (unit
// cutoff); conjugates are implied, one biquad per listed pole.
std::vector<cplx> prototype_poles(int order)
{
    std::vector<cplx> poles;
    for (int k = 1; k <= order / 2; k++) {
        double theta =
            std::numbers::pi * (2.0 * k - 1.0) / (2.0 * order) +
            std::numbers::pi / 2.0;
        poles.emplace_back(std::cos(theta), std::sin(theta));
    }
    return poles;
}

enum class SectionShape { lowpass, highpass };

// Map one analog pole pair through the bilinear transform and normalize
// the passband reference gain (z=1 for lowpass, z=-1 for highpass).
BiquadSection make_section(cplx analog_pole, double fs, SectionShape shape)
{
    const double k = 2.0 * fs;
    cplx zp = (k + analog_pole) / (k - analog_pole);

    BiquadSection s;
    s.a1 = -2.0 * zp.real();
    s.a2 = std::norm(zp);

    if (shape == SectionShape::lowpass) {
        double g = (1.0 + s.a1 + s.a2) / 4.0;
        s.b0 = g;
        s.b1 = 2.0 * g;
        s.b2 = g;
    } else {
        double g = (1.0 - s.a1 + s.a2) / 4.0;
        s.b0 = g;
        s.b1 = -2.0 * g;
        s.b2 = g;
    }
    return s;
}

double prewarp(double f_hz, double fs)
{
    return 2.0 * fs * std::tan(std::numbers::pi * f_hz / fs);
}

std::vector<BiquadSection> design_half(int order, double cutoff_hz,
                                       double fs, SectionShape shape)
{
    const double wc = prewarp(cutoff_hz, fs);
    std::vector<BiquadSection> sections;
    for (cplx p : prototype_poles(order)) {
        cplx analog = shape == SectionShape::lowpass ? wc * p : wc / p;
        sections.push_back(make_section(analog, fs, shape));
    }
    return sections;
}

// One DF2T pass. x0 is the assumed constant level before the signal
// starts; the state is initialized so a constant input passes through
// with no transient.
void biquad_pass(const BiquadSection& s, std::vector<double>& x, double x0)
{
    const double y0 = s.dc_gain() * x0;
    double z1 = (s.b1 + s.b2) * x0 - (s.a1 + s.a2) * y0;
    double z2 = s.b2 * x0 - s.a2 * y0;
    for (double& v : x) {
        double y = s.b0 * v + z1;
        z1 = s.b1 * v - s.a1 * y + z2;
        z2 = s.b2 * v - s.a2 * y;
        v = y;
    }
}

void cascade_pass(const BiquadCascade& cascade, std::vector<double>& x)
{
    for (const auto& s : cascade.sections)
        biquad_pass(s, x, x.empty() ? 0.0 : x[0]);
}

} // namespace

bool BiquadSection::is_stable() const
{
    return std::abs(a2) < 1.0 && std::abs(a1) < 1.0 + a2;
}

double BiquadSection::dc_gain() const
{
    return (b0 + b1 + b2) / (1.0 + a1 + a2);
}

bool BiquadCascade::is_stable() const
{
    return std::all_of(sections.begin(), sections.end(),
                       [](const BiquadSection& s) { return s.is_stable(); });
}

BiquadCascade design_butterworth(int order, FilterKind kind,
                                 const std::vector<double>& cutoffs_hz,
                                 double fs_hz)
{
    require(order >= 2 && order % 2 == 0, errc::odd_order,
            "filter order must be even and >= 2");
    require(fs_hz > 0, errc::invalid_argument, "sample rate must be positive");
    for (double f : cutoffs_hz)
        require(f > 0 && f < fs_hz / 2.0, errc::invalid_cutoff,
                "cutoff " + format_double(f) +
                    " Hz outside (0, Nyquist) at fs=" + format_double(fs_hz));

    BiquadCascade cascade;
    if (kind == FilterKind::lowpass) {
        require(cutoffs_hz.size() == 1, errc::invalid_cutoff,
                "lowpass takes exactly one cutoff");
        cascade.sections =
            design_half(order, cutoffs_hz[0], fs_hz, SectionShape::lowpass);
        cascade.description = "lowpass " + format_double(cutoffs_hz[0]) +
                              " Hz @ " + format_double(fs_hz) + " Hz";
    } else {
        require(cutoffs_hz.size() == 2 && cutoffs_hz[0] < cutoffs_hz[1],
                errc::invalid_cutoff,
                "bandpass takes two ascending cutoffs");
        cascade.sections =
            design_half(order, cutoffs_hz[1], fs_hz, SectionShape::lowpass);
        auto hp =
            design_half(order, cutoffs_hz[0], fs_hz, SectionShape::highpass);
        cascade.sections.insert(cascade.sections.end(), hp.begin(), hp.end());
        cascade.description = "bandpass " + format_double(cutoffs_hz[0]) +
                              "-" + format_double(cutoffs_hz[1]) + " Hz @ " +
                              format_double(fs_hz) + " Hz";
    }

    for (const auto& s : cascade.sections)
        require(s.is_stable(), errc::invalid_cutoff,
                "designed section is unstable; cutoff too close to Nyquist");
    return cascade;
}

double magnitude_response(const BiquadCascade& cascade, double f_hz,
                          double fs_hz)
{
    const double w = 2.0 * std::numbers::pi * f_hz / fs_hz;
    const cplx z1 = std::polar(1.0, -w);
    const cplx z2 = z1 * z1;
    cplx h = 1.0;
    for (const auto& s : cascade.sections)
        h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
    return std::abs(h);
}

std::vector<double> filter_forward(const BiquadCascade& cascade,
                                   std::span<const double> x)
{
    std::vector<double> y(x.begin(), x.end());
    cascade_pass(cascade, y);
    return y;
}

std::vector<double> filter_zero_phase(const BiquadCascade& cascade,
                                      std::span<const double> x)
{
    const std::size_t pad = 3 * static_cast<std::size_t>(cascade.order());
    require(x.size() > pad, errc::too_short,
            "input length " + std::to_string(x.size()) +
                " too short for zero-phase filtering (need > " +
                std::to_string(pad) + ")");

    // odd reflection about the first/last samples
    std::vector<double> ext;
    ext.reserve(x.size() + 2 * pad);
    for (std::size_t i = 0; i < pad; i++)
        ext.push_back(2.0 * x[0] - x[pad - i]);
    ext.insert(ext.end(), x.begin(), x.end());
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < pad; i++)
        ext.push_back(2.0 * x[n - 1] - x[n - 2 - i]);

    cascade_pass(cascade, ext);
    std::reverse(ext.begin(), ext.end());
    cascade_pass(cascade, ext);
    std::reverse(ext.begin(), ext.end());

    return std::vector<double>(ext.begin() + pad, ext.begin() + pad + n);
}

std::vector<double> rectify(std::span<const double> x)
{
    std::vector<double> y(x.size());
    std::transform(x.begin(), x.end(), y.begin(),
                   [](double v) { return std::abs(v); });
    return y;
}

std::vector<double> block_downsample(std::span<const double> x,
                                     std::size_t factor)
{
    require(factor >= 1, errc::invalid_argument, "factor must be >= 1");
    require(x.size() >= factor, errc::empty_input,
            "input shorter than one block");
    std::vector<double> y(x.size() / factor);
    for (std::size_t k = 0; k < y.size(); k++) {
        double sum = 0.0;
        for (std::size_t i = 0; i < factor; i++) sum += x[k * factor + i];
        y[k] = sum / static_cast<double>(factor);
    }
    return y;
}

double percentile(std::vector<double> values, double p)
{
    require(!values.empty(), errc::empty_input, "percentile of empty data");
    require(p > 0 && p <= 100, errc::invalid_argument,
            "percentile must be in (0, 100]");
    std::sort(values.begin(), values.end());
    const double h = (p / 100.0) * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= values.size()) return values.back();
    const double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

void EnvelopeConfig::validate() const
{
    require(fs_in_hz > 0 && fs_out_hz > 0, errc::invalid_argument,
            "sample rates must be positive");
    require(0 < band_lo_hz && band_lo_hz < band_hi_hz &&
                band_hi_hz < fs_in_hz / 2.0,
            errc::invalid_cutoff, "need 0 < band_lo < band_hi < fs_in/2");
    require(0 < lp_hz && lp_hz < fs_out_hz / 2.0 &&
                fs_out_hz <= fs_in_hz,
            errc::invalid_cutoff, "need 0 < lp_hz < fs_out/2 <= fs_in/2");
    require(clip_len >= 1, errc::invalid_argument, "clip_len must be >= 1");
    require(norm_percentile > 0 && norm_percentile <= 100,
            errc::invalid_argument, "norm_percentile must be in (0, 100]");
    const double ratio = fs_in_hz / fs_out_hz;
    require(std::abs(ratio - std::round(ratio)) < 1e-9 && ratio >= 1,
            errc::invalid_argument,
            "fs_in/fs_out must be a positive integer");
}

std::size_t EnvelopeConfig::downsample_factor() const
{
    return static_cast<std::size_t>(std::llround(fs_in_hz / fs_out_hz));
}

TrialSet extract_envelopes(const TrialSet& raw, const EnvelopeConfig& cfg,
                           int threads)
{
    cfg.validate();
    require(raw.sample_rate_hz() == cfg.fs_in_hz, errc::invalid_argument,
            "input sample rate " + format_double(raw.sample_rate_hz()) +
                " does not match fs_in_hz " + format_double(cfg.fs_in_hz));

    const std::size_t factor = cfg.downsample_factor();
    require(raw.steps() >= cfg.clip_len * factor, errc::trial_too_short,
            "trials have " + std::to_string(raw.steps()) +
                " samples, need >= " + std::to_string(cfg.clip_len * factor));

    const auto bandpass = design_butterworth(
        kEnvelopeFilterOrder, FilterKind::bandpass,
        {cfg.band_lo_hz, cfg.band_hi_hz}, cfg.fs_in_hz);
    const auto lowpass = design_butterworth(
        kEnvelopeFilterOrder, FilterKind::lowpass, {cfg.lp_hz}, cfg.fs_in_hz);

    std::vector<ChannelSpec> channels = raw.channel_specs();
    for (auto& ch : channels) {
        ch.kind = ChannelKind::emg_envelope;
        ch.units = "normalized";
    }
    TrialSet out(raw.trials(), cfg.clip_len, std::move(channels),
                 cfg.fs_out_hz);

    const std::size_t n_tasks = raw.trials() * raw.channels();
    const int nt = resolve_threads(threads);

#pragma omp parallel for num_threads(nt) schedule(static)
    for (std::size_t task = 0; task < n_tasks; task++) {
        const std::size_t t = task / raw.channels();
        const std::size_t c = task % raw.channels();
        auto x = raw.series(t, c);
        x = filter_zero_phase(bandpass, x);
        x = rectify(x);
        x = filter_zero_phase(lowpass, x);
        x = block_downsample(x, factor);
        x.resize(cfg.clip_len);
        out.set_series(t, c, x);
    }

    // normalize per channel with all trials and timesteps pooled
    for (std::size_t c = 0; c < out.channels(); c++) {
        std::vector<double> pooled;
        pooled.reserve(out.trials() * out.steps());
        for (std::size_t t = 0; t < out.trials(); t++)
            for (std::size_t n = 0; n < out.steps(); n++)
                pooled.push_back(out(t, n, c));
        if (pooled.empty()) continue;
        const double scale = percentile(std::move(pooled), cfg.norm_percentile);
        for (std::size_t t = 0; t < out.trials(); t++)
            for (std::size_t n = 0; n < out.steps(); n++) {
                double v = scale > 0.0 ? out(t, n, c) / scale : 0.0;
                out(t, n, c) = std::clamp(v, 0.0, 1.0);
            }
    }
    return out;
}

} // namespace neurodyn::dsp
