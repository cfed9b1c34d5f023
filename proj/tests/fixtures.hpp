#pragma once
// Small problem builders shared by the unit tests and the acceptance binary.

#include <vector>

#include "oracles.hpp"
#include "slkl/lowrank_state.hpp"

namespace fixture {

using slkl::Matrix;
using slkl::Vector;

/// Random Gaussian-kernel problem: normalized columns for the first M points.
struct KernelProblem {
    slkl::Dataset data;
    slkl::KernelSpec spec;
    Matrix columns; // n x M
};

inline KernelProblem kernel_problem(slkl::Rng& rng, std::size_t n, std::size_t M, std::size_t d = 2,
                                    double sigma2 = 1.0)
{
    KernelProblem problem{oracle::random_dataset(rng, n, d), slkl::KernelSpec::gaussian(sigma2), {}};
    problem.columns.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(M));
    for (std::size_t m = 0; m < M; ++m) {
        problem.columns.col(static_cast<Eigen::Index>(m)) = slkl::compute_column(problem.spec, problem.data, m);
    }
    return problem;
}

inline slkl::ColumnProvider provider(const Matrix& columns)
{
    return [&columns](std::size_t p) -> Vector { return columns.col(static_cast<Eigen::Index>(p)); };
}

/// Fresh state holding the positive entries of mu (column j <-> index j).
inline slkl::InverseState state_from(const Matrix& columns, const Vector& mu, double lambda)
{
    std::vector<std::size_t> indices;
    std::vector<double> weights;
    for (Eigen::Index j = 0; j < mu.size(); ++j) {
        if (mu[j] > 0.0) {
            indices.push_back(static_cast<std::size_t>(j));
            weights.push_back(mu[j]);
        }
    }
    slkl::InverseState state(lambda, static_cast<std::size_t>(columns.rows()));
    state.assign(indices, weights, provider(columns));
    return state;
}

} // namespace fixture
