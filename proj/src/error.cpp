#include "neurodyn/error.hpp"

namespace neurodyn {

const char* errc_name(errc kind)
{
    switch (kind) {
    case errc::io_failure: return "IoFailure";
    case errc::parse_error: return "ParseError";
    case errc::missing_column: return "MissingColumn";
    case errc::ragged_trials: return "RaggedTrials";
    case errc::non_finite_value: return "NonFiniteValue";
    case errc::duplicate_cell: return "DuplicateCell";
    case errc::unknown_channel: return "UnknownChannel";
    case errc::shape_mismatch: return "ShapeMismatch";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::invalid_cutoff: return "InvalidCutoff";
    case errc::odd_order: return "OddOrder";
    case errc::too_short: return "TooShort";
    case errc::empty_input: return "EmptyInput";
    case errc::trial_too_short: return "TrialTooShort";
    case errc::too_few_seeds: return "TooFewSeeds";
    case errc::degenerate_signal: return "DegenerateSignal";
    case errc::constant_sequence: return "ConstantSequence";
    case errc::library_too_small: return "LibraryTooSmall";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::insufficient_trials: return "InsufficientTrials";
    case errc::degenerate_data: return "DegenerateData";
    case errc::too_few_rows: return "TooFewRows";
    case errc::non_finite_state: return "NonFiniteState";
    case errc::invalid_config: return "InvalidConfig";
    case errc::invalid_argument: return "InvalidArgument";
    }
    return "Error";
}

} // namespace neurodyn
