#include <algorithm>
#include <limits>
#include <vector>

#include "neurodyn/edm.hpp"
#include "neurodyn/error.hpp"
#include "edm_detail.hpp"

// Single-threaded reference simplex projection: no OpenMP, full sort of
// the candidate list per query. Slower but obviously correct; the
// parallel kernel is required to match it bit-for-bit.

namespace neurodyn::edm::serial {

ForecastResult simplex_forecast(const EmbeddedLibrary& library,
                                const EmbeddedLibrary& queries, int E,
                                const SimplexOptions& opts)
{
    require(E >= 1, errc::invalid_argument, "E must be >= 1");
    require(queries.dim() == library.dim(), errc::dimension_mismatch,
            "query dimension does not match library");
    const std::size_t k = static_cast<std::size_t>(E) + 1;
    require(library.size() >= k, errc::library_too_small,
            "library has " + std::to_string(library.size()) +
                " points, simplex needs at least " + std::to_string(k));

    ForecastResult result;
    result.config = queries.config();
    std::vector<detail::Candidate> cands;
    for (std::size_t q = 0; q < queries.size(); ++q) {
        const auto qp = queries.point(q);
        const auto& qo = queries.origin(q);
        cands.clear();
        for (std::size_t i = 0; i < library.size(); ++i) {
            if (detail::excluded(library.origin(i), qo, opts)) continue;
            cands.push_back({detail::euclidean(library.point(i), qp),
                             library.origin(i), library.future(i)});
        }
        if (cands.size() < k) continue;
        std::sort(cands.begin(), cands.end(), detail::candidate_less);
        result.predictions.push_back(
            {qo, detail::predict(cands.data(), k), queries.future(q)});
    }

    result.rho = std::numeric_limits<double>::quiet_NaN();
    if (result.predictions.size() >= 3) {
        std::vector<double> obs, pred;
        obs.reserve(result.predictions.size());
        pred.reserve(result.predictions.size());
        for (const auto& p : result.predictions) {
            obs.push_back(p.observed);
            pred.push_back(p.predicted);
        }
        const bool obs_const =
            std::all_of(obs.begin(), obs.end(),
                        [&](double x) { return x == obs.front(); });
        const bool pred_const =
            std::all_of(pred.begin(), pred.end(),
                        [&](double x) { return x == pred.front(); });
        if (!obs_const && !pred_const) result.rho = spearman_rho(obs, pred);
    }
    return result;
}

} // namespace neurodyn::edm::serial
