#include "neurodyn/edm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <numeric>
#include <utility>

#include <omp.h>

#include "neurodyn/error.hpp"
#include "neurodyn/threads.hpp"
#include "edm_detail.hpp"

namespace neurodyn::edm {

namespace {

double guarded_rho(const std::vector<Prediction>& preds)
{
    if (preds.size() < 3) return std::numeric_limits<double>::quiet_NaN();
    std::vector<double> obs(preds.size());
    std::vector<double> pred(preds.size());
    for (std::size_t i = 0; i < preds.size(); ++i) {
        obs[i] = preds[i].observed;
        pred[i] = preds[i].predicted;
    }
    const auto constant = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(),
                           [&](double x) { return x == v.front(); });
    };
    if (constant(obs) || constant(pred))
        return std::numeric_limits<double>::quiet_NaN();
    return spearman_rho(obs, pred);
}

std::vector<double> average_ranks(std::span<const double> x)
{
    const std::size_t n = x.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (x[a] != x[b]) return x[a] < x[b];
        return a < b;
    });
    std::vector<double> rank(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[idx[j + 1]] == x[idx[i]])
            ++j;
        // ties share the mean of the 1-based ranks they span
        const double r = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
        for (std::size_t m = i; m <= j; ++m)
            rank[idx[m]] = r;
        i = j + 1;
    }
    return rank;
}

struct TrialSubset {
    std::vector<std::size_t> library;
    std::vector<std::size_t> queries;
};

} // namespace

void EmbeddingConfig::validate() const
{
    require(E >= 1, errc::invalid_argument, "embedding dimension E must be >= 1");
    require(Tp >= 1, errc::invalid_argument, "prediction horizon Tp must be >= 1");
    require(theiler >= 0, errc::invalid_argument, "theiler window must be >= 0");
    require(!columns.empty(), errc::invalid_argument, "no source columns given");
    require(!target.empty(), errc::invalid_argument, "no target channel given");
    if (mode == EmbedMode::univariate_delay) {
        require(tau != 0, errc::invalid_argument, "tau must be nonzero");
        require(columns.size() == 1, errc::invalid_argument,
                "univariate_delay takes exactly one source column");
    }
}

std::size_t EmbeddingConfig::dim() const
{
    return mode == EmbedMode::univariate_delay ? static_cast<std::size_t>(E)
                                               : columns.size();
}

void EmbeddedLibrary::add_point(std::span<const double> coords,
                                PointOrigin origin, double future)
{
    require(coords.size() == dim_, errc::dimension_mismatch,
            "point dimension does not match library");
    coords_.insert(coords_.end(), coords.begin(), coords.end());
    origins_.push_back(origin);
    futures_.push_back(future);
}

EmbeddedLibrary
EmbeddedLibrary::filter_trials(std::span<const std::size_t> trials) const
{
    std::vector<std::size_t> keep(trials.begin(), trials.end());
    std::sort(keep.begin(), keep.end());
    EmbeddedLibrary out(dim_, config_);
    for (std::size_t i = 0; i < size(); ++i) {
        if (std::binary_search(keep.begin(), keep.end(), origins_[i].trial))
            out.add_point(point(i), origins_[i], futures_[i]);
    }
    return out;
}

EmbeddedLibrary delay_embed(const TrialSet& set, const EmbeddingConfig& cfg)
{
    cfg.validate();
    std::vector<std::size_t> cols;
    cols.reserve(cfg.columns.size());
    for (const auto& name : cfg.columns)
        cols.push_back(set.channel_index(name));
    const std::size_t target = set.channel_index(cfg.target);

    const std::size_t dim = cfg.dim();
    EmbeddedLibrary lib(dim, cfg);
    const std::int64_t n = static_cast<std::int64_t>(set.steps());
    const std::int64_t tau = cfg.tau;
    const std::int64_t span = cfg.mode == EmbedMode::univariate_delay
                                  ? static_cast<std::int64_t>(cfg.E - 1) * tau
                                  : 0;
    // first/last t for which every lag index and t+Tp stay inside the trial
    const std::int64_t lo = std::max<std::int64_t>(0, -span);
    const std::int64_t hi =
        std::min<std::int64_t>(n - 1 - std::max<std::int64_t>(0, span),
                               n - 1 - cfg.Tp);
    require(hi >= lo, errc::trial_too_short,
            "trials too short for E=" + std::to_string(cfg.E) +
                " tau=" + std::to_string(cfg.tau) +
                " Tp=" + std::to_string(cfg.Tp) + " (need " +
                std::to_string(std::llabs(span) + cfg.Tp + 1) + " steps, have " +
                std::to_string(n) + ")");

    std::vector<double> point(dim);
    for (std::size_t t = 0; t < set.trials(); ++t) {
        for (std::int64_t s = lo; s <= hi; ++s) {
            if (cfg.mode == EmbedMode::univariate_delay) {
                for (std::int64_t j = 0; j < cfg.E; ++j)
                    point[static_cast<std::size_t>(j)] =
                        set(t, static_cast<std::size_t>(s + j * tau), cols[0]);
            } else {
                for (std::size_t c = 0; c < cols.size(); ++c)
                    point[c] = set(t, static_cast<std::size_t>(s), cols[c]);
            }
            const double future =
                set(t, static_cast<std::size_t>(s + cfg.Tp), target);
            lib.add_point(point, {t, static_cast<std::size_t>(s)}, future);
        }
    }
    return lib;
}

double spearman_rho(std::span<const double> obs, std::span<const double> pred)
{
    require(obs.size() == pred.size(), errc::length_mismatch,
            "observed and predicted lengths differ");
    require(obs.size() >= 3, errc::too_short,
            "spearman_rho needs at least 3 pairs");
    const auto constant = [](std::span<const double> v) {
        return std::all_of(v.begin(), v.end(),
                           [&](double x) { return x == v.front(); });
    };
    require(!constant(obs), errc::constant_sequence,
            "observed sequence is constant");
    require(!constant(pred), errc::constant_sequence,
            "predicted sequence is constant");

    const auto rx = average_ranks(obs);
    const auto ry = average_ranks(pred);
    const double n = static_cast<double>(rx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        const double dx = rx[i] - mx;
        const double dy = ry[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    return sxy / std::sqrt(sxx * syy);
}

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

    const std::size_t nq = queries.size();
    std::vector<double> predicted(nq, 0.0);
    std::vector<char> valid(nq, 0);
    std::exception_ptr err;

    const int nthreads = resolve_threads(opts.threads);
#pragma omp parallel num_threads(nthreads)
    {
        std::vector<detail::Candidate> cands;
        cands.reserve(library.size());
#pragma omp for schedule(static)
        for (std::int64_t qi = 0; qi < static_cast<std::int64_t>(nq); ++qi) {
            try {
                const auto q = static_cast<std::size_t>(qi);
                const auto qp = queries.point(q);
                const auto& qo = queries.origin(q);
                cands.clear();
                for (std::size_t i = 0; i < library.size(); ++i) {
                    if (detail::excluded(library.origin(i), qo, opts)) continue;
                    cands.push_back({detail::euclidean(library.point(i), qp),
                                     library.origin(i), library.future(i)});
                }
                if (cands.size() < k) continue; // not enough admissible neighbors
                std::partial_sort(cands.begin(),
                                  cands.begin() + static_cast<std::ptrdiff_t>(k),
                                  cands.end(), detail::candidate_less);
                predicted[q] = detail::predict(cands.data(), k);
                valid[q] = 1;
            } catch (...) {
#pragma omp critical(neurodyn_edm_err)
                if (!err) err = std::current_exception();
            }
        }
    }
    if (err) std::rethrow_exception(err);

    ForecastResult result;
    result.config = queries.config();
    for (std::size_t q = 0; q < nq; ++q) {
        if (!valid[q]) continue;
        result.predictions.push_back(
            {queries.origin(q), predicted[q], queries.future(q)});
    }
    result.rho = guarded_rho(result.predictions);
    return result;
}

ForecastResult cross_predict(const TrialSet& set,
                             const std::vector<std::string>& source_channels,
                             const std::string& target_channel,
                             EmbeddingConfig cfg, SplitScheme split,
                             int threads)
{
    cfg.columns = source_channels;
    cfg.target = target_channel;
    const auto all = delay_embed(set, cfg);

    const std::size_t n_trials = set.trials();
    require(n_trials >= 2, errc::insufficient_trials,
            "cross_predict needs at least 2 trials");

    SimplexOptions opts;
    opts.theiler = cfg.theiler;
    opts.exclude_self = false; // library and queries are disjoint by split
    opts.threads = threads;
    const int E_eff = static_cast<int>(cfg.dim());

    std::vector<TrialSubset> subsets;
    if (split == SplitScheme::leave_one_trial_out) {
        for (std::size_t t = 0; t < n_trials; ++t) {
            TrialSubset s;
            s.queries.push_back(t);
            for (std::size_t u = 0; u < n_trials; ++u)
                if (u != t) s.library.push_back(u);
            subsets.push_back(std::move(s));
        }
    } else {
        TrialSubset s;
        const std::size_t half = n_trials / 2;
        for (std::size_t t = 0; t < half; ++t)
            s.library.push_back(t);
        for (std::size_t t = half; t < n_trials; ++t)
            s.queries.push_back(t);
        subsets.push_back(std::move(s));
    }

    ForecastResult pooled;
    pooled.config = cfg;
    for (const auto& s : subsets) {
        const auto lib = all.filter_trials(s.library);
        const auto qry = all.filter_trials(s.queries);
        auto part = simplex_forecast(lib, qry, E_eff, opts);
        pooled.predictions.insert(pooled.predictions.end(),
                                  part.predictions.begin(),
                                  part.predictions.end());
    }
    pooled.rho = guarded_rho(pooled.predictions);
    return pooled;
}

std::vector<GridRow> param_search(const TrialSet& set,
                                  const std::string& source_channel,
                                  const std::string& target_channel,
                                  std::vector<int> E_range,
                                  std::vector<int> tau_range,
                                  std::vector<int> Tp_range,
                                  SplitScheme split, int theiler, int threads)
{
    require(!E_range.empty() && !tau_range.empty() && !Tp_range.empty(),
            errc::invalid_argument, "parameter ranges must be nonempty");
    std::sort(E_range.begin(), E_range.end());
    std::sort(tau_range.begin(), tau_range.end());
    std::sort(Tp_range.begin(), Tp_range.end());

    struct Combo {
        int E, tau, Tp;
    };
    std::vector<Combo> combos;
    for (int E : E_range)
        for (int tau : tau_range)
            for (int Tp : Tp_range)
                combos.push_back({E, tau, Tp});

    std::vector<GridRow> rows(combos.size());
    std::exception_ptr err;
    const int nthreads = resolve_threads(threads);
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(combos.size()); ++i) {
        try {
            const auto& c = combos[static_cast<std::size_t>(i)];
            EmbeddingConfig cfg;
            cfg.E = c.E;
            cfg.tau = c.tau;
            cfg.Tp = c.Tp;
            cfg.theiler = theiler;
            cfg.mode = EmbedMode::univariate_delay;
            const auto res = cross_predict(set, {source_channel},
                                           target_channel, cfg, split,
                                           /*threads=*/1);
            rows[static_cast<std::size_t>(i)] = {
                c.E, c.tau, c.Tp, res.rho, res.predictions.size(), false};
        } catch (...) {
#pragma omp critical(neurodyn_edm_grid_err)
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);

    std::size_t best = rows.size();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (std::isnan(rows[i].rho)) continue;
        if (best == rows.size() || rows[i].rho > rows[best].rho) best = i;
    }
    if (best < rows.size()) rows[best].best = true;
    return rows;
}

} // namespace neurodyn::edm
