#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "slkl/kernel.hpp"
#include "slkl/lowrank_state.hpp"
#include "slkl/types.hpp"

namespace slkl {

/// Trained conical-combination model. Prediction needs only the landmarks
/// and the collapsed weights alpha_tilde; alpha_star is kept so the
/// collapse can be re-checked.
struct ModelSolution {
    double lambda = 1.0;
    std::vector<std::size_t> support_indices;
    FeatureMatrix landmarks;
    Vector mu_star;
    Vector alpha_star;
    Vector alpha_tilde;

    std::size_t support_size() const { return support_indices.size(); }
};

/// alpha* = 2 lambda (lambda I + K(mu))^{-1} y and
/// alpha_tilde_m = mu_m c_m^T alpha* / sqrt(k(x_m, x_m)) for each active m.
ModelSolution solution_from_state(const InverseState& state, const Eigen::Ref<const Vector>& y,
                                  const Dataset& train, const KernelSpec& spec);

/// f(x) = 1/(2 lambda) sum_m alpha_tilde_m k(x_m, x)
double predict(const ModelSolution& model, const KernelSpec& spec, std::span<const double> x);
Vector predict(const ModelSolution& model, const KernelSpec& spec, const FeatureMatrix& points);

/// Thrown when an exact baseline would need a Gram matrix above the size cap.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Exact kernel ridge regression on a set of training points.
class KrrPredictor {
public:
    KrrPredictor(KernelSpec spec, FeatureMatrix points, Vector alpha, double lambda,
                 double dual_objective);

    double predict(std::span<const double> x) const;
    Vector predict(const FeatureMatrix& points) const;

    const Vector& alpha() const { return alpha_; }
    const FeatureMatrix& points() const { return points_; }
    double lambda() const { return lambda_; }
    /// y^T (I + K/lambda)^{-1} y, the dual objective at its maximizer.
    double dual_objective() const { return dual_objective_; }

private:
    KernelSpec spec_;
    FeatureMatrix points_;
    Vector alpha_;
    double lambda_;
    double dual_objective_;
};

inline constexpr std::size_t default_dense_cap = 20000;

/// Solves (I + K/lambda) alpha = 2y by Cholesky.
KrrPredictor krr_full(const KernelSpec& spec, const Dataset& data, double lambda,
                      std::size_t size_cap = default_dense_cap);

/// KRR trained on the rows `subset` only.
KrrPredictor krr_subset(const KernelSpec& spec, const Dataset& data,
                        std::span<const std::size_t> subset, double lambda,
                        std::size_t size_cap = default_dense_cap);

/// KRR dual objective y^T a - a^T (lambda I + K) a / (4 lambda).
double krr_dual_objective(const Matrix& gram, const Eigen::Ref<const Vector>& y,
                          const Eigen::Ref<const Vector>& alpha, double lambda);

/// Every candidate weighted 1, then the same alpha/alpha_tilde construction as SLKL.
ModelSolution unif_baseline(const ColumnSource& columns, const Dataset& train, double lambda);

double mse(std::span<const double> predictions, std::span<const double> targets);
double mse(const Vector& predictions, const Vector& targets);

} // namespace slkl
