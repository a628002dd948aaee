#ifndef NEURODYN_EDM_HPP
#define NEURODYN_EDM_HPP

#include <compare>
#include <span>
#include <string>
#include <vector>

#include "neurodyn/trial_data.hpp"

namespace neurodyn::edm {

enum class EmbedMode { univariate_delay, multivariate_direct };
enum class SplitScheme { leave_one_trial_out, half_split };

/// Delay-embedding and forecasting parameters. tau < 0 lags into the
/// past (tau = -1 is one-step-back coordinates), tau > 0 lags forward;
/// both are valid, only the index bookkeeping differs. In
/// multivariate_direct mode the embedding vector is the listed columns at
/// lag 0 and the effective dimension is columns.size().
struct EmbeddingConfig {
    int E = 2;
    int tau = -1;
    int Tp = 1;
    int theiler = 0;
    std::vector<std::string> columns;
    std::string target;
    EmbedMode mode = EmbedMode::univariate_delay;

    void validate() const;
    /// Dimension of the embedded points this config produces.
    std::size_t dim() const;
};

struct PointOrigin {
    std::size_t trial = 0;
    std::size_t step = 0;

    auto operator<=>(const PointOrigin&) const = default;
};

/// Point cloud of embedding vectors. Every point's lag indices and its
/// future index lie inside one trial; vectors never span trial
/// boundaries.
class EmbeddedLibrary {
  public:
    EmbeddedLibrary() = default;
    EmbeddedLibrary(std::size_t dim, EmbeddingConfig config)
        : dim_(dim), config_(std::move(config))
    {
    }

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return origins_.size(); }
    const EmbeddingConfig& config() const { return config_; }

    std::span<const double> point(std::size_t i) const
    {
        return {coords_.data() + i * dim_, dim_};
    }
    const PointOrigin& origin(std::size_t i) const { return origins_[i]; }
    double future(std::size_t i) const { return futures_[i]; }

    void add_point(std::span<const double> coords, PointOrigin origin,
                   double future);

    /// Subset containing only points from the given trials.
    EmbeddedLibrary filter_trials(std::span<const std::size_t> trials) const;

  private:
    std::size_t dim_ = 0;
    EmbeddingConfig config_;
    std::vector<double> coords_;
    std::vector<PointOrigin> origins_;
    std::vector<double> futures_;
};

/// Build the delay-embedded point cloud of cfg.columns with futures taken
/// from cfg.target at horizon Tp. Every trial must be long enough for at
/// least one point: N >= (E-1)*|tau| + Tp + 1.
EmbeddedLibrary delay_embed(const TrialSet& set, const EmbeddingConfig& cfg);

struct Prediction {
    PointOrigin origin;
    double predicted;
    double observed;
};

struct ForecastResult {
    std::vector<Prediction> predictions;
    double rho = 0.0;
    EmbeddingConfig config;
};

struct SimplexOptions {
    int theiler = 0;        // same-trial temporal exclusion radius
    bool exclude_self = true; // drop the library point with the query's origin
    int threads = 0;        // 0 = default worker count
};

/// Simplex projection: for each query, the k = E+1 nearest library
/// neighbors by Euclidean distance (ties broken by (trial, timestep)
/// order) predict the query's future as a weighted average with weights
/// w_i = exp(-d_i / d_1). When the nearest distance is zero, the
/// zero-distance neighbors split weight 1 equally and the rest get none.
/// Queries left with fewer than k admissible neighbors after exclusions
/// are skipped. rho is the Spearman correlation of observed vs predicted
/// over all surviving queries.
ForecastResult simplex_forecast(const EmbeddedLibrary& library,
                                const EmbeddedLibrary& queries, int E,
                                const SimplexOptions& opts = {});

/// Spearman rank correlation with averaged tie ranks.
double spearman_rho(std::span<const double> obs, std::span<const double> pred);

/// Embed source channels, forecast the target channel, and score with a
/// library/query split that never lets a query's own trial contribute
/// library points (leave_one_trial_out) or uses the first half of the
/// trials as library (half_split). Returns the pooled result.
ForecastResult cross_predict(const TrialSet& set,
                             const std::vector<std::string>& source_channels,
                             const std::string& target_channel,
                             EmbeddingConfig cfg, SplitScheme split,
                             int threads = 0);

struct GridRow {
    int E;
    int tau;
    int Tp;
    double rho;
    std::size_t n_pred;
    bool best;
};

/// Exhaustive (E, tau, Tp) sweep of univariate-delay cross_predict.
/// Rows come back sorted by (E, tau, Tp) with the argmax row flagged.
std::vector<GridRow> param_search(const TrialSet& set,
                                  const std::string& source_channel,
                                  const std::string& target_channel,
                                  std::vector<int> E_range,
                                  std::vector<int> tau_range,
                                  std::vector<int> Tp_range,
                                  SplitScheme split, int theiler = 0,
                                  int threads = 0);

namespace serial {

/// Plain single-threaded reference implementation of simplex projection
/// (full sort per query, no OpenMP). Kept as the oracle the parallel
/// kernel is tested and benchmarked against.
ForecastResult simplex_forecast(const EmbeddedLibrary& library,
                                const EmbeddedLibrary& queries, int E,
                                const SimplexOptions& opts = {});

} // namespace serial

} // namespace neurodyn::edm

#endif
