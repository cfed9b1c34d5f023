#include "slkl/regression.hpp"

#include <cmath>
#include <string>

namespace slkl {

ModelSolution solution_from_state(const InverseState& state, const Eigen::Ref<const Vector>& y,
                                  const Dataset& train, const KernelSpec& spec)
{
    if (static_cast<std::size_t>(y.size()) != state.rows() || train.size() != state.rows()) {
        throw std::invalid_argument("solution_from_state: size mismatch");
    }
    ModelSolution model;
    model.lambda = state.lambda();
    model.alpha_star = 2.0 * state.lambda() * state.apply_inverse(y);
    const auto m0 = static_cast<Eigen::Index>(state.support_size());
    model.support_indices = state.active();
    model.landmarks.resize(m0, train.features.cols());
    model.mu_star = state.weights();
    model.alpha_tilde.resize(m0);
    const Vector projected = state.columns().transpose() * model.alpha_star;
    for (Eigen::Index j = 0; j < m0; ++j) {
        const auto p = model.support_indices[static_cast<std::size_t>(j)];
        const auto x = train.point(p);
        model.landmarks.row(j) = train.features.row(static_cast<Eigen::Index>(p));
        model.alpha_tilde[j] = model.mu_star[j] * projected[j] / std::sqrt(eval_kernel(spec, x, x));
    }
    return model;
}

double predict(const ModelSolution& model, const KernelSpec& spec, std::span<const double> x)
{
    const auto d = static_cast<std::size_t>(model.landmarks.cols());
    double sum = 0.0;
    for (Eigen::Index j = 0; j < model.landmarks.rows(); ++j) {
        sum += model.alpha_tilde[j] * eval_kernel(spec, {model.landmarks.row(j).data(), d}, x);
    }
    return sum / (2.0 * model.lambda);
}

Vector predict(const ModelSolution& model, const KernelSpec& spec, const FeatureMatrix& points)
{
    Vector out(points.rows());
    const auto d = static_cast<std::size_t>(points.cols());
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        out[i] = predict(model, spec, std::span<const double>(points.row(i).data(), d));
    }
    return out;
}

KrrPredictor::KrrPredictor(KernelSpec spec, FeatureMatrix points, Vector alpha, double lambda,
                           double dual_objective)
    : spec_(spec), points_(std::move(points)), alpha_(std::move(alpha)), lambda_(lambda),
      dual_objective_(dual_objective)
{
}

double KrrPredictor::predict(std::span<const double> x) const
{
    const auto d = static_cast<std::size_t>(points_.cols());
    double sum = 0.0;
    for (Eigen::Index i = 0; i < points_.rows(); ++i) {
        sum += alpha_[i] * eval_kernel(spec_, {points_.row(i).data(), d}, x);
    }
    return sum / (2.0 * lambda_);
}

Vector KrrPredictor::predict(const FeatureMatrix& points) const
{
    return cross_kernel(spec_, points, points_) * alpha_ / (2.0 * lambda_);
}

KrrPredictor krr_full(const KernelSpec& spec, const Dataset& data, double lambda, std::size_t size_cap)
{
    if (!(lambda > 0.0)) throw std::invalid_argument("krr_full: lambda must be positive");
    if (data.size() > size_cap) {
        throw CapacityError("KRR on " + std::to_string(data.size())
                            + " points exceeds the dense size cap of " + std::to_string(size_cap));
    }
    const Matrix gram = gram_matrix(spec, data);
    Matrix system = gram / lambda;
    system.diagonal().array() += 1.0;
    Eigen::LLT<Matrix> llt(system);
    if (llt.info() != Eigen::Success) throw std::runtime_error("krr_full: I + K/lambda not positive definite");
    Vector alpha = llt.solve(2.0 * data.targets);
    const double dual = 0.5 * data.targets.dot(alpha);
    return {spec, data.features, std::move(alpha), lambda, dual};
}

KrrPredictor krr_subset(const KernelSpec& spec, const Dataset& data,
                        std::span<const std::size_t> subset, double lambda, std::size_t size_cap)
{
    return krr_full(spec, data.subset(subset), lambda, size_cap);
}

double krr_dual_objective(const Matrix& gram, const Eigen::Ref<const Vector>& y,
                          const Eigen::Ref<const Vector>& alpha, double lambda)
{
    const Vector k_alpha = gram * alpha + lambda * alpha;
    return y.dot(alpha) - alpha.dot(k_alpha) / (4.0 * lambda);
}

ModelSolution unif_baseline(const ColumnSource& columns, const Dataset& train, double lambda)
{
    InverseState state(lambda, train.size());
    const auto& candidates = columns.candidates();
    const std::vector<double> ones(candidates.size(), 1.0);
    state.assign(candidates, ones, [&](std::size_t m) { return columns.column(m); });
    return solution_from_state(state, train.targets, train, columns.kernel());
}

double mse(std::span<const double> predictions, std::span<const double> targets)
{
    if (predictions.size() != targets.size()) throw std::invalid_argument("mse: length mismatch");
    if (predictions.empty()) throw std::invalid_argument("mse: empty input");
    double sum = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double diff = predictions[i] - targets[i];
        sum += diff * diff;
    }
    return sum / static_cast<double>(predictions.size());
}

double mse(const Vector& predictions, const Vector& targets)
{
    return mse(std::span<const double>(predictions.data(), static_cast<std::size_t>(predictions.size())),
               std::span<const double>(targets.data(), static_cast<std::size_t>(targets.size())));
}

} // namespace slkl
