#ifndef NEURODYN_ERROR_HPP
#define NEURODYN_ERROR_HPP

#include <stdexcept>
#include <string>

namespace neurodyn {

// Every failure the library reports carries one of these tags so callers
// (and the CLI exit-code mapping) can dispatch without string matching.
enum class errc {
    // file / parsing
    io_failure,
    parse_error,
    missing_column,
    ragged_trials,
    non_finite_value,
    duplicate_cell,
    // data model
    unknown_channel,
    shape_mismatch,
    length_mismatch,
    // dsp
    invalid_cutoff,
    odd_order,
    too_short,
    empty_input,
    trial_too_short,
    // stats / reward
    too_few_seeds,
    degenerate_signal,
    constant_sequence,
    // edm
    library_too_small,
    dimension_mismatch,
    insufficient_trials,
    // pca
    degenerate_data,
    too_few_rows,
    // simulation
    non_finite_state,
    // config / generic validation
    invalid_config,
    invalid_argument,
};

const char* errc_name(errc kind);

class Error : public std::runtime_error {
  public:
    Error(errc kind, const std::string& msg)
        : std::runtime_error(std::string(errc_name(kind)) + ": " + msg),
          kind_(kind)
    {
    }

    errc kind() const { return kind_; }

    // I/O failures map to CLI exit 1, everything else to exit 2.
    bool is_io() const { return kind_ == errc::io_failure; }

  private:
    errc kind_;
};

[[noreturn]] inline void fail(errc kind, const std::string& msg)
{
    throw Error(kind, msg);
}

inline void require(bool cond, errc kind, const std::string& msg)
{
    if (!cond) fail(kind, msg);
}

} // namespace neurodyn

#endif
