#ifndef NEURODYN_DSP_HPP
#define NEURODYN_DSP_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "neurodyn/trial_data.hpp"

namespace neurodyn::dsp {

/// One second-order IIR section, a0 normalized to 1.
struct BiquadSection {
    double b0 = 1.0, b1 = 0.0, b2 = 0.0;
    double a1 = 0.0, a2 = 0.0;

    /// Poles strictly inside the unit circle (Jury criterion).
    bool is_stable() const;
    /// DC gain H(z=1); zero for highpass-type sections.
    double dc_gain() const;
};

struct BiquadCascade {
    std::vector<BiquadSection> sections;
    std::string description;

    int order() const { return 2 * static_cast<int>(sections.size()); }
    bool is_stable() const;
};

enum class FilterKind { lowpass, bandpass };

/// Butterworth design via bilinear transform with frequency pre-warping.
/// `order` is the analog prototype order (even, >= 2); a lowpass of order
/// n yields n/2 sections, a bandpass is realized as a lowpass-highpass
/// cascade and yields n sections. Cutoffs are -3 dB points in Hz and must
/// lie strictly inside (0, fs/2); a bandpass takes two ascending cutoffs.
BiquadCascade design_butterworth(int order, FilterKind kind,
                                 const std::vector<double>& cutoffs_hz,
                                 double fs_hz);

/// Magnitude of the cascade frequency response at f_hz.
double magnitude_response(const BiquadCascade& cascade, double f_hz,
                          double fs_hz);

/// Forward-backward (zero-phase) filtering with odd-reflective edge
/// padding of length 3x the filter order and steady-state section
/// initialization. Output length equals input length; the effective
/// magnitude response is the cascade's squared magnitude.
std::vector<double> filter_zero_phase(const BiquadCascade& cascade,
                                      std::span<const double> x);

/// Single forward pass, steady-state initialized to x[0]. Exposed for the
/// impulse/stability tests.
std::vector<double> filter_forward(const BiquadCascade& cascade,
                                   std::span<const double> x);

/// Full-wave rectification: out[i] = |x[i]|.
std::vector<double> rectify(std::span<const double> x);

/// Non-overlapping block means; a trailing partial block is discarded.
std::vector<double> block_downsample(std::span<const double> x,
                                     std::size_t factor);

/// Percentile with linear interpolation between order statistics,
/// p in (0, 100].
double percentile(std::vector<double> values, double p);

/// Parameters of the envelope extraction chain.
struct EnvelopeConfig {
    double fs_in_hz = 30000.0;
    double band_lo_hz = 20.0;
    double band_hi_hz = 1000.0;
    double lp_hz = 50.0;
    double fs_out_hz = 200.0;
    std::size_t clip_len = 60;
    double norm_percentile = 98.0;

    void validate() const;
    std::size_t downsample_factor() const;
};

/// Per trial and channel: bandpass -> rectify -> lowpass -> block-average
/// downsample -> truncate to clip_len. Then, per channel with all trials
/// pooled, divide by the norm_percentile percentile and clamp to [0, 1].
/// A channel whose percentile is zero comes out all-zero. Trials and
/// channels are processed in parallel; output is identical for any thread
/// count.
TrialSet extract_envelopes(const TrialSet& raw, const EnvelopeConfig& cfg,
                           int threads = 0);

} // namespace neurodyn::dsp

#endif
