#include "slkl/optimizer.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "slkl/rng.hpp"

namespace slkl {

std::string_view to_string(ColumnMode mode)
{
    return mode == ColumnMode::precompute ? "precompute" : "on_the_fly";
}

std::string_view to_string(NewtonDenominator denominator)
{
    return denominator == NewtonDenominator::second_derivative ? "second_derivative"
                                                               : "half_second_derivative";
}

std::string_view to_string(StopReason reason)
{
    return reason == StopReason::converged ? "converged" : "max_iters";
}

ColumnMode parse_column_mode(std::string_view text)
{
    if (text == "precompute") return ColumnMode::precompute;
    if (text == "on_the_fly" || text == "on-the-fly") return ColumnMode::on_the_fly;
    throw std::invalid_argument("unknown column mode '" + std::string(text) + "'");
}

NewtonDenominator parse_newton_denominator(std::string_view text)
{
    if (text == "second_derivative") return NewtonDenominator::second_derivative;
    if (text == "half_second_derivative") return NewtonDenominator::half_second_derivative;
    throw std::invalid_argument("unknown newton denominator '" + std::string(text) + "'");
}

void TrainConfig::validate(std::size_t n) const
{
    ObjectiveParams{nu, lambda}.validate();
    if (M < 1 || M > n) throw std::invalid_argument("M must satisfy 1 <= M <= n");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (iteration_cap() < M) throw std::invalid_argument("max_iters must be at least M");
}

WeightVector::WeightVector(std::vector<std::size_t> candidates)
    : candidates_(std::move(candidates)), values_(candidates_.size(), 0.0)
{
}

void WeightVector::set(std::size_t k, double mu)
{
    if (!(mu >= 0.0)) throw std::invalid_argument("WeightVector: weights must be nonnegative");
    if (values_[k] > 0.0) --support_;
    if (mu > 0.0) ++support_;
    values_[k] = mu;
}

double newton_coordinate_step(double mu, double g, double h)
{
    if (h < 0.0) throw std::invalid_argument("newton_coordinate_step: negative curvature");
    if (h == 0.0) return 0.0;
    return std::max(0.0, mu - g / h);
}

IterationOutcome scnd_iteration(InverseState& state, WeightVector& mu, const Eigen::Ref<const Vector>& y,
                                const ColumnSource& columns, std::size_t coord,
                                const ObjectiveParams& params, double current_objective,
                                NewtonDenominator denominator)
{
    if (coord >= mu.size()) throw std::out_of_range("scnd_iteration: coordinate outside S");
    const std::size_t p = mu.index(coord);
    IterationOutcome out;
    out.coord = coord;
    out.mu_old = mu.value(coord);

    const CoordinateProducts products = state.is_active(p)
                                            ? coordinate_products(state, y, state.column(p))
                                            : coordinate_products(state, y, columns.column(p));
    const double g = grad_coord(products, params);
    double h = hess_coord(products, params);
    if (denominator == NewtonDenominator::half_second_derivative) h *= 0.5;
    out.mu_new = newton_coordinate_step(out.mu_old, g, h);

    if (out.mu_new == out.mu_old) {
        out.update = out.mu_old > 0.0 ? UpdateCase::reweight : UpdateCase::unchanged;
        if (out.mu_old == 0.0) state.update_weight(p, 0.0, {});
        out.objective = current_objective;
        return out;
    }
    out.update = state.update_weight(p, out.mu_new, [&](std::size_t m) { return columns.column(m); });
    mu.set(coord, out.mu_new);
    out.objective = objective_value(state, y, state.weights().sum(), params);
    return out;
}

std::vector<std::size_t> sample_candidates(std::size_t n, std::size_t M, std::uint64_t seed)
{
    if (M > n) throw std::invalid_argument("sample_candidates: M exceeds n");
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    Rng rng = Rng::substream(seed, streams::candidates);
    for (std::size_t i = 0; i < M; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.index(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(M);
    return pool;
}

TrainResult train_slkl(const ColumnSource& columns, const Dataset& train, const TrainConfig& config,
                       const IterationObserver& observer)
{
    train.validate();
    config.validate(train.size());
    if (columns.candidates().size() != config.M) {
        throw std::invalid_argument("train_slkl: column source size differs from M");
    }
    if (columns.rows() != train.size()) {
        throw std::invalid_argument("train_slkl: column source built on a different dataset");
    }
    const ObjectiveParams params = config.objective();
    const Vector& y = train.targets;
    InverseState state(config.lambda, train.size());
    WeightVector mu(columns.candidates());
    Rng coordinates = Rng::substream(config.seed, streams::coordinates);

    TrainResult result;
    TrainTrace& trace = result.trace;
    const std::size_t cap = config.iteration_cap();
    double objective = objective_value(state, y, 0.0, params);
    trace.objective_history.reserve(cap + 1);
    trace.objective_history.push_back(objective);
    trace.m0_history.push_back(0);

    for (std::size_t k = 1; k <= cap; ++k) {
        const auto coord = static_cast<std::size_t>(coordinates.index(config.M));
        const IterationOutcome step =
            scnd_iteration(state, mu, y, columns, coord, params, objective, config.newton_denominator);
        objective = step.objective;
        trace.objective_history.push_back(objective);
        trace.m0_history.push_back(state.support_size());
        trace.chosen_coords.push_back(mu.index(coord));
        trace.iterations = k;
        if (observer) observer(k, mu);
        if (k >= config.M) {
            const double earlier = trace.objective_history[k - config.M];
            if (earlier - objective < config.epsilon * earlier) {
                trace.stop_reason = StopReason::converged;
                break;
            }
        }
    }

    result.model = solution_from_state(state, y, train, columns.kernel());
    result.candidates = columns.candidates();
    result.column_evaluations = columns.evaluations();
    return result;
}

TrainResult train_slkl(const Dataset& train, const KernelSpec& spec, const TrainConfig& config,
                       const IterationObserver& observer)
{
    config.validate(train.size());
    ColumnSource columns(spec, train, sample_candidates(train.size(), config.M, config.seed),
                         config.column_mode);
    return train_slkl(columns, train, config, observer);
}

} // namespace slkl
