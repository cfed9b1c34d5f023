#include "slkl/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace slkl {

KernelSpec KernelSpec::gaussian(double sigma2)
{
    KernelSpec spec{KernelFamily::gaussian, sigma2};
    spec.validate();
    return spec;
}

void KernelSpec::validate() const
{
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
        throw std::invalid_argument("kernel sigma2 must be positive and finite");
    }
}

void Dataset::validate() const
{
    if (features.rows() < 1 || features.cols() < 1) {
        throw std::invalid_argument("dataset '" + name + "' needs n >= 1 and d >= 1");
    }
    if (targets.size() != features.rows()) {
        throw std::invalid_argument("dataset '" + name + "': target count differs from row count");
    }
    if (!features.allFinite() || !targets.allFinite()) {
        throw std::invalid_argument("dataset '" + name + "' has non-finite entries");
    }
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const
{
    Dataset out;
    out.name = name;
    out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
    out.targets.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= size()) throw std::out_of_range("subset row out of range");
        const auto r = static_cast<Eigen::Index>(rows[i]);
        out.features.row(static_cast<Eigen::Index>(i)) = features.row(r);
        out.targets[static_cast<Eigen::Index>(i)] = targets[r];
    }
    return out;
}

double eval_kernel(const KernelSpec& spec, std::span<const double> x, std::span<const double> x2)
{
    if (x.size() != x2.size()) {
        throw std::invalid_argument("eval_kernel: dimension mismatch");
    }
    double dist2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double diff = x[i] - x2[i];
        dist2 += diff * diff;
    }
    return std::exp(-dist2 / (2.0 * spec.sigma2));
}

Vector compute_column(const KernelSpec& spec, const Dataset& data, std::size_t m)
{
    if (m >= data.size()) throw std::out_of_range("compute_column: landmark index out of range");
    const auto landmark = data.point(m);
    const double diag = eval_kernel(spec, landmark, landmark);
    if (!(diag > 0.0)) {
        throw std::domain_error("compute_column: degenerate landmark with k(x_m, x_m) <= 0");
    }
    const double scale = 1.0 / std::sqrt(diag);
    Vector column(static_cast<Eigen::Index>(data.size()));
    for (std::size_t i = 0; i < data.size(); ++i) {
        column[static_cast<Eigen::Index>(i)] = scale * eval_kernel(spec, data.point(i), landmark);
    }
    return column;
}

Matrix gram_matrix(const KernelSpec& spec, const Dataset& data)
{
    return cross_kernel(spec, data.features, data.features);
}

Matrix cross_kernel(const KernelSpec& spec, const FeatureMatrix& rows, const FeatureMatrix& cols)
{
    if (rows.cols() != cols.cols()) throw std::invalid_argument("cross_kernel: dimension mismatch");
    const auto d = static_cast<std::size_t>(rows.cols());
    Matrix out(rows.rows(), cols.rows());
    for (Eigen::Index j = 0; j < cols.rows(); ++j) {
        const std::span<const double> xj{cols.row(j).data(), d};
        for (Eigen::Index i = 0; i < rows.rows(); ++i) {
            out(i, j) = eval_kernel(spec, {rows.row(i).data(), d}, xj);
        }
    }
    return out;
}

ColumnSource::ColumnSource(KernelSpec spec, const Dataset& data,
                           std::vector<std::size_t> candidates, ColumnMode mode)
    : spec_(spec), features_(data.features), candidates_(std::move(candidates)), mode_(mode)
{
    spec_.validate();
    for (auto m : candidates_) {
        if (m >= data.size()) throw std::out_of_range("ColumnSource: candidate index out of range");
    }
    if (mode_ == ColumnMode::precompute) {
        cache_.resize(features_.rows(), static_cast<Eigen::Index>(candidates_.size()));
        for (std::size_t j = 0; j < candidates_.size(); ++j) {
            cache_.col(static_cast<Eigen::Index>(j)) = evaluate(candidates_[j]);
            slot_.emplace(candidates_[j], static_cast<Eigen::Index>(j));
        }
    }
}

Vector ColumnSource::column(std::size_t m) const
{
    if (mode_ == ColumnMode::precompute) {
        const auto it = slot_.find(m);
        if (it == slot_.end()) throw std::out_of_range("ColumnSource: index is not a candidate");
        return cache_.col(it->second);
    }
    if (m >= rows()) throw std::out_of_range("ColumnSource: index out of range");
    return evaluate(m);
}

Vector ColumnSource::evaluate(std::size_t m) const
{
    ++evaluations_;
    const auto d = static_cast<std::size_t>(features_.cols());
    const std::span<const double> landmark{features_.row(static_cast<Eigen::Index>(m)).data(), d};
    const double diag = eval_kernel(spec_, landmark, landmark);
    if (!(diag > 0.0)) {
        throw std::domain_error("ColumnSource: degenerate landmark with k(x_m, x_m) <= 0");
    }
    const double scale = 1.0 / std::sqrt(diag);
    Vector column(features_.rows());
    for (Eigen::Index i = 0; i < features_.rows(); ++i) {
        column[i] = scale * eval_kernel(spec_, {features_.row(i).data(), d}, landmark);
    }
    return column;
}

} // namespace slkl
