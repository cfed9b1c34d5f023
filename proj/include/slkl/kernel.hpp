#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "slkl/types.hpp"

namespace slkl {

enum class KernelFamily { gaussian };

/// Base positive kernel. The Gaussian form is exp(-|x - x'|^2 / (2 sigma2)).
struct KernelSpec {
    KernelFamily family = KernelFamily::gaussian;
    double sigma2 = 1.0;

    static KernelSpec gaussian(double sigma2);
    void validate() const;
};

/// Training or test examples: one feature row per example and its target.
struct Dataset {
    FeatureMatrix features;
    Vector targets;
    std::string name;

    std::size_t size() const { return static_cast<std::size_t>(features.rows()); }
    std::size_t dim() const { return static_cast<std::size_t>(features.cols()); }

    std::span<const double> point(std::size_t i) const
    {
        return {features.row(static_cast<Eigen::Index>(i)).data(), dim()};
    }

    /// Throws std::invalid_argument on empty, ragged or non-finite data.
    void validate() const;

    Dataset subset(std::span<const std::size_t> rows) const;
};

double eval_kernel(const KernelSpec& spec, std::span<const double> x, std::span<const double> x2);

/// Normalized Gram column c_m[i] = k(x_i, x_m) / sqrt(k(x_m, x_m)).
Vector compute_column(const KernelSpec& spec, const Dataset& data, std::size_t m);

/// Dense n x n Gram matrix. Only for oracles and exact baselines.
Matrix gram_matrix(const KernelSpec& spec, const Dataset& data);

/// Rectangular kernel block K[i][j] = k(rows_i, cols_j).
Matrix cross_kernel(const KernelSpec& spec, const FeatureMatrix& rows, const FeatureMatrix& cols);

enum class ColumnMode { precompute, on_the_fly };

/// Provides normalized columns c_m for a fixed candidate set.
///
/// In precompute mode every candidate column is materialized up front
/// (O(nM) memory). In on-the-fly mode columns are evaluated per request and
/// nothing is cached here; the inverse state keeps the active ones.
class ColumnSource {
public:
    ColumnSource(KernelSpec spec, const Dataset& data, std::vector<std::size_t> candidates,
                 ColumnMode mode);

    Vector column(std::size_t m) const;

    ColumnMode mode() const { return mode_; }
    const std::vector<std::size_t>& candidates() const { return candidates_; }
    std::size_t rows() const { return static_cast<std::size_t>(features_.rows()); }
    const KernelSpec& kernel() const { return spec_; }
    /// Number of columns computed by kernel evaluation so far.
    std::size_t evaluations() const { return evaluations_; }

private:
    Vector evaluate(std::size_t m) const;

    KernelSpec spec_;
    FeatureMatrix features_;
    std::vector<std::size_t> candidates_;
    ColumnMode mode_;
    Matrix cache_;
    std::unordered_map<std::size_t, Eigen::Index> slot_;
    mutable std::size_t evaluations_ = 0;
};

} // namespace slkl
