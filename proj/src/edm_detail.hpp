#ifndef NEURODYN_SRC_EDM_DETAIL_HPP
#define NEURODYN_SRC_EDM_DETAIL_HPP

#include <cmath>
#include <span>
#include <vector>

#include "neurodyn/edm.hpp"

// Helpers shared by the parallel kernel and the serial reference. Both
// implementations must call these so their floating-point operation
// order is identical and results stay bit-for-bit comparable.

namespace neurodyn::edm::detail {

struct Candidate {
    double d;
    PointOrigin origin;
    double future;
};

// Strict total order: distance, then origin. No two library points share
// an origin, so ties in distance resolve deterministically.
inline bool candidate_less(const Candidate& a, const Candidate& b)
{
    if (a.d != b.d) return a.d < b.d;
    return a.origin < b.origin;
}

inline double euclidean(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double diff = a[j] - b[j];
        s += diff * diff;
    }
    return std::sqrt(s);
}

inline bool excluded(const PointOrigin& lib, const PointOrigin& query,
                     const SimplexOptions& opts)
{
    if (opts.exclude_self && lib == query) return true;
    if (opts.theiler > 0 && lib.trial == query.trial) {
        const auto lo = lib.step < query.step ? lib.step : query.step;
        const auto hi = lib.step < query.step ? query.step : lib.step;
        if (hi - lo <= static_cast<std::size_t>(opts.theiler)) return true;
    }
    return false;
}

// Weighted-average prediction from the k nearest candidates, already
// sorted by candidate_less. w_i = exp(-d_i/d_1); when the nearest
// distance is zero the exact matches split all the weight equally.
inline double predict(const Candidate* nbrs, std::size_t k)
{
    const double d1 = nbrs[0].d;
    if (d1 == 0.0) {
        double sum = 0.0;
        std::size_t z = 0;
        for (std::size_t i = 0; i < k && nbrs[i].d == 0.0; ++i) {
            sum += nbrs[i].future;
            ++z;
        }
        return sum / static_cast<double>(z);
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double w = std::exp(-nbrs[i].d / d1);
        num += w * nbrs[i].future;
        den += w;
    }
    return num / den;
}

} // namespace neurodyn::edm::detail

#endif
