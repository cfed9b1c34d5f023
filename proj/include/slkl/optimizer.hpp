#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "slkl/kernel.hpp"
#include "slkl/lowrank_state.hpp"
#include "slkl/objective.hpp"
#include "slkl/regression.hpp"

namespace slkl {

/// Curvature used as the Newton denominator. `second_derivative` is the
/// exact d2F/dmu^2 (with its factor 2); `half_second_derivative` drops that
/// factor, which doubles every unconstrained step.
enum class NewtonDenominator { second_derivative, half_second_derivative };

enum class StopReason { converged, max_iters };

std::string_view to_string(ColumnMode mode);
std::string_view to_string(NewtonDenominator denominator);
std::string_view to_string(StopReason reason);
ColumnMode parse_column_mode(std::string_view text);
NewtonDenominator parse_newton_denominator(std::string_view text);

struct TrainConfig {
    double nu = 0.01;
    double lambda = 1.0;
    std::size_t M = 0;
    double epsilon = 1e-4;
    /// 0 selects 100 * M.
    std::size_t max_iters = 0;
    std::uint64_t seed = 0;
    ColumnMode column_mode = ColumnMode::precompute;
    NewtonDenominator newton_denominator = NewtonDenominator::second_derivative;

    std::size_t iteration_cap() const { return max_iters == 0 ? 100 * M : max_iters; }
    void validate(std::size_t n) const;
    ObjectiveParams objective() const { return {nu, lambda}; }
};

/// Per-iteration record. Entry 0 of the histories is the starting point.
struct TrainTrace {
    std::vector<double> objective_history;
    std::vector<std::size_t> m0_history;
    std::vector<std::size_t> chosen_coords;
    std::size_t iterations = 0;
    StopReason stop_reason = StopReason::max_iters;
};

/// Nonnegative weights over the candidate set S (position k <-> index(k)).
class WeightVector {
public:
    explicit WeightVector(std::vector<std::size_t> candidates);

    std::size_t size() const { return candidates_.size(); }
    std::size_t index(std::size_t k) const { return candidates_[k]; }
    const std::vector<std::size_t>& candidates() const { return candidates_; }
    double value(std::size_t k) const { return values_[k]; }
    std::span<const double> values() const { return values_; }
    void set(std::size_t k, double mu);
    std::size_t support_size() const { return support_; }

private:
    std::vector<std::size_t> candidates_;
    std::vector<double> values_;
    std::size_t support_ = 0;
};

/// argmin over v >= 0 of g (v - mu) + h (v - mu)^2 / 2: max(0, mu - g/h)
/// for h > 0 and 0 for h = 0. Throws std::invalid_argument for h < 0.
double newton_coordinate_step(double mu, double g, double h);

struct IterationOutcome {
    std::size_t coord = 0;
    double mu_old = 0.0;
    double mu_new = 0.0;
    double objective = 0.0;
    UpdateCase update = UpdateCase::unchanged;
};

/// One stochastic coordinate Newton step on candidate position `coord`.
/// `current_objective` is F at the incoming state; it is returned unchanged
/// when the weight does not move.
IterationOutcome scnd_iteration(InverseState& state, WeightVector& mu, const Eigen::Ref<const Vector>& y,
                                const ColumnSource& columns, std::size_t coord,
                                const ObjectiveParams& params, double current_objective,
                                NewtonDenominator denominator = NewtonDenominator::second_derivative);

/// M distinct training indices drawn uniformly without replacement. The
/// draw is a partial Fisher-Yates shuffle, so smaller M give prefixes of
/// larger ones for the same seed.
std::vector<std::size_t> sample_candidates(std::size_t n, std::size_t M, std::uint64_t seed);

struct TrainResult {
    ModelSolution model;
    TrainTrace trace;
    std::vector<std::size_t> candidates;
    std::size_t column_evaluations = 0;
};

/// Called after every iteration with the iteration count and the weights.
using IterationObserver = std::function<void(std::size_t, const WeightVector&)>;

/// Stochastic low-rank kernel learning from mu = 0 over the columns given.
TrainResult train_slkl(const ColumnSource& columns, const Dataset& train, const TrainConfig& config,
                       const IterationObserver& observer = {});

/// Draws the candidate set from config.seed and builds the column source.
TrainResult train_slkl(const Dataset& train, const KernelSpec& spec, const TrainConfig& config,
                       const IterationObserver& observer = {});

} // namespace slkl
