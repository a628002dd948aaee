#include "neurodyn/pca.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "neurodyn/error.hpp"

namespace neurodyn::pca {

PcaModel fit_pca(std::span<const double> data, std::size_t rows,
                 std::size_t cols, std::size_t n_components)
{
    require(rows >= 2, errc::too_few_rows, "PCA needs at least 2 rows");
    require(cols >= 1, errc::invalid_argument, "PCA needs at least 1 column");
    require(data.size() == rows * cols, errc::shape_mismatch,
            "data size does not match rows*cols");
    require(n_components >= 1 && n_components <= std::min(rows, cols),
            errc::invalid_argument,
            "n_components must be in [1, min(rows, cols)]");

    using Matrix =
        Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const Matrix> x(data.data(), static_cast<Eigen::Index>(rows),
                               static_cast<Eigen::Index>(cols));
    const Eigen::RowVectorXd mean = x.colwise().mean();
    Matrix centered = x.rowwise() - mean;

    Eigen::BDCSVD<Matrix> svd(centered, Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    const double total = sigma.squaredNorm();
    require(total > 0.0, errc::degenerate_data,
            "data has zero variance, no principal components exist");

    PcaModel model;
    model.mean.assign(mean.data(), mean.data() + cols);
    model.components.resize(n_components * cols);
    model.variance_ratio.resize(n_components);
    for (std::size_t i = 0; i < n_components; ++i) {
        Eigen::VectorXd v = svd.matrixV().col(static_cast<Eigen::Index>(i));
        Eigen::Index peak = 0;
        v.cwiseAbs().maxCoeff(&peak);
        if (v(peak) < 0.0) v = -v;
        for (std::size_t j = 0; j < cols; ++j)
            model.components[i * cols + j] = v(static_cast<Eigen::Index>(j));
        const double s = sigma(static_cast<Eigen::Index>(i));
        model.variance_ratio[i] = s * s / total;
    }
    return model;
}

std::vector<double> project(const PcaModel& model, std::span<const double> row)
{
    require(row.size() == model.dim(), errc::dimension_mismatch,
            "row dimension does not match model");
    std::vector<double> out(model.n_components());
    for (std::size_t i = 0; i < model.n_components(); ++i) {
        const auto c = model.component(i);
        double s = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j)
            s += (row[j] - model.mean[j]) * c[j];
        out[i] = s;
    }
    return out;
}

std::vector<double> reconstruct(const PcaModel& model,
                                std::span<const double> coords)
{
    require(coords.size() == model.n_components(), errc::dimension_mismatch,
            "coordinate count does not match model");
    std::vector<double> out(model.mean);
    for (std::size_t i = 0; i < coords.size(); ++i) {
        const auto c = model.component(i);
        for (std::size_t j = 0; j < out.size(); ++j)
            out[j] += coords[i] * c[j];
    }
    return out;
}

LatentEmbedding project_top3(const TrialSet& acts,
                             const std::string& behavior_channel)
{
    std::size_t behavior_col = acts.channels();
    if (!behavior_channel.empty())
        behavior_col = acts.channel_index(behavior_channel);

    std::vector<std::size_t> act_cols;
    for (std::size_t c = 0; c < acts.channels(); ++c)
        if (c != behavior_col) act_cols.push_back(c);
    require(act_cols.size() >= 3, errc::invalid_argument,
            "project_top3 needs at least 3 activation channels, have " +
                std::to_string(act_cols.size()));

    const std::size_t rows = acts.trials() * acts.steps();
    require(rows >= 2, errc::too_few_rows,
            "project_top3 needs at least 2 flattened rows");

    std::vector<double> flat(rows * act_cols.size());
    for (std::size_t t = 0; t < acts.trials(); ++t)
        for (std::size_t s = 0; s < acts.steps(); ++s)
            for (std::size_t c = 0; c < act_cols.size(); ++c)
                flat[(t * acts.steps() + s) * act_cols.size() + c] =
                    acts(t, s, act_cols[c]);

    const auto model = fit_pca(flat, rows, act_cols.size(), 3);

    LatentEmbedding emb;
    emb.n_clips = acts.trials();
    emb.n_steps = acts.steps();
    emb.variance_ratio = model.variance_ratio;
    emb.data.resize(rows * 3);
    for (std::size_t r = 0; r < rows; ++r) {
        const auto coords = project(
            model, {flat.data() + r * act_cols.size(), act_cols.size()});
        for (std::size_t i = 0; i < 3; ++i)
            emb.data[r * 3 + i] = coords[i];
    }
    if (!behavior_channel.empty()) {
        emb.behavior_name = behavior_channel;
        emb.behavior.resize(rows);
        for (std::size_t t = 0; t < acts.trials(); ++t)
            for (std::size_t s = 0; s < acts.steps(); ++s)
                emb.behavior[t * acts.steps() + s] = acts(t, s, behavior_col);
    }
    return emb;
}

} // namespace neurodyn::pca
