#ifndef NEURODYN_PCA_HPP
#define NEURODYN_PCA_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "neurodyn/trial_data.hpp"

namespace neurodyn::pca {

/// Principal components of a (rows x D) data matrix. components is
/// row-major (n_components x D), rows mutually orthonormal.
/// variance_ratio[i] = sigma_i^2 / sum of all sigma^2, so the retained
/// ratios sum to <= 1 and are nonincreasing. Component signs follow a
/// fixed convention (the largest-magnitude coordinate of each component
/// is positive) so repeated fits are comparable.
struct PcaModel {
    std::vector<double> mean;
    std::vector<double> components;
    std::vector<double> variance_ratio;

    std::size_t dim() const { return mean.size(); }
    std::size_t n_components() const { return variance_ratio.size(); }
    std::span<const double> component(std::size_t i) const
    {
        return {components.data() + i * dim(), dim()};
    }
};

/// Mean-centered SVD fit. data is row-major (rows x cols).
PcaModel fit_pca(std::span<const double> data, std::size_t rows,
                 std::size_t cols, std::size_t n_components);

/// Coordinates of one row in component space.
std::vector<double> project(const PcaModel& model, std::span<const double> row);

/// Back-projection from component space into the original space.
std::vector<double> reconstruct(const PcaModel& model,
                                std::span<const double> coords);

/// Trials projected onto the first three principal components, indexed
/// (clip, timestep, component). An optional behavior channel from the
/// same set is excluded from the fit and carried alongside per sample.
struct LatentEmbedding {
    std::size_t n_clips = 0;
    std::size_t n_steps = 0;
    std::vector<double> data;
    std::vector<double> variance_ratio;
    std::string behavior_name;
    std::vector<double> behavior;

    double operator()(std::size_t clip, std::size_t step,
                      std::size_t comp) const
    {
        return data[(clip * n_steps + step) * 3 + comp];
    }
    bool has_behavior() const { return !behavior_name.empty(); }
};

/// Flatten (clips, timesteps, D) -> (clips*timesteps, D), fit 3
/// components, project, reshape back. Needs D >= 3 activation channels
/// after excluding the behavior channel.
LatentEmbedding project_top3(const TrialSet& acts,
                             const std::string& behavior_channel = "");

} // namespace neurodyn::pca

#endif
