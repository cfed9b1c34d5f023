#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "slkl/objective.hpp"

using namespace slkl;

namespace {

double objective_at(const Matrix& columns, const Vector& mu, const Vector& y, const ObjectiveParams& params)
{
    const InverseState state = fixture::state_from(columns, mu, params.lambda);
    return objective_value(state, y, mu.sum(), params);
}

struct Instance {
    Matrix columns;
    Vector mu;
    Vector y;
    ObjectiveParams params;
};

Instance random_instance(Rng& rng)
{
    const std::size_t n = 10 + rng.index(20);
    const std::size_t M = 2 + rng.index(8);
    Instance inst;
    inst.columns = fixture::kernel_problem(rng, n, M).columns;
    inst.mu = oracle::random_vector(rng, static_cast<Eigen::Index>(M), 0.1, 2.0);
    for (Eigen::Index j = 0; j < inst.mu.size(); ++j) {
        if (rng.uniform() < 0.3) inst.mu[j] = 0.0;
    }
    inst.mu[0] = rng.uniform(0.2, 2.0); // coordinate under test stays interior
    inst.y = oracle::random_vector(rng, static_cast<Eigen::Index>(n));
    inst.params = {rng.uniform(0.001, 0.1), rng.uniform(0.3, 3.0)};
    return inst;
}

} // namespace

TEST_CASE("objective_value examples")
{
    const Vector y = (Vector(3) << 1, -2, 0.5).finished();
    const InverseState empty(1.7, 3);
    CHECK(objective_value(empty, y, 0.0, {0.3, 1.7}) == doctest::Approx(y.squaredNorm()).epsilon(1e-15));

    const Matrix c = Matrix::Ones(1, 1);
    const InverseState one = fixture::state_from(c, Vector::Ones(1), 1.0);
    CHECK(objective_value(one, Vector::Ones(1), 1.0, {0.1, 1.0}) == doctest::Approx(0.6).epsilon(1e-15));

    CHECK_THROWS_AS(ObjectiveParams({-0.1, 1.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(ObjectiveParams({0.1, 0.0}).validate(), std::invalid_argument);
}

TEST_CASE("objective_value matches the dense formula")
{
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const auto problem = fixture::kernel_problem(rng, 6, 4);
        const Vector mu = oracle::random_vector(rng, 4, 0.0, 2.0);
        const Vector y = oracle::random_vector(rng, 6);
        const ObjectiveParams params{0.05, 0.8};
        const double dense = oracle::objective(problem.columns, mu, y, params.lambda, params.nu);
        CHECK(std::abs(objective_at(problem.columns, mu, y, params) - dense) <= 1e-10 * dense);
        CHECK(dense > 0.0);
    }
}

TEST_CASE("coordinate derivative examples")
{
    Rng rng(22);
    const auto problem = fixture::kernel_problem(rng, 7, 3);
    const Vector y = oracle::random_vector(rng, 7);
    const ObjectiveParams params{0.02, 1.0};
    const InverseState empty(1.0, 7);
    const Vector c = problem.columns.col(1);
    const double t = y.dot(c);
    CHECK(grad_coord(empty, y, c, params) == doctest::Approx(-t * t + 0.02).epsilon(1e-14));
    CHECK(hess_coord(empty, y, c, params) == doctest::Approx(2.0 * t * t * c.squaredNorm()).epsilon(1e-14));

    // y orthogonal to c under the inverse metric
    const Vector y_perp = y - c * (y.dot(c) / c.squaredNorm());
    CHECK(grad_coord(empty, y_perp, c, params) == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(std::abs(hess_coord(empty, y_perp, c, params)) <= 1e-28);

    CHECK_THROWS_AS(higher_partial(empty, y, c, 1, params), std::invalid_argument);
    CHECK_THROWS_AS(grad_coord(empty, y, c, {0.02, 2.0}), std::invalid_argument);
}

TEST_CASE("derivatives agree with finite differences")
{
    Rng rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        const Instance inst = random_instance(rng);
        const InverseState state = fixture::state_from(inst.columns, inst.mu, inst.params.lambda);
        const Vector c = inst.columns.col(0);
        const auto at = [&](double delta) {
            Vector mu = inst.mu;
            mu[0] += delta;
            return objective_at(inst.columns, mu, inst.y, inst.params);
        };

        const double step = 1e-5;
        const double fd_grad = (at(step) - at(-step)) / (2.0 * step);
        const double grad = grad_coord(state, inst.y, c, inst.params);
        CHECK(std::abs(grad - fd_grad) <= 1e-5 * std::max(std::abs(grad), 1e-3));

        const double f0 = at(0.0);
        const auto second_difference = [&](double hstep) {
            return (at(hstep) - 2.0 * f0 + at(-hstep)) / (hstep * hstep);
        };
        // Richardson extrapolation of the second difference
        const double fd_hess = (4.0 * second_difference(5e-4) - second_difference(1e-3)) / 3.0;
        const double hess = hess_coord(state, inst.y, c, inst.params);
        CHECK(std::abs(hess - fd_hess) <= 1e-4 * std::max(std::abs(hess), 1e-3));

        const auto hess_at = [&](double delta) {
            Vector mu = inst.mu;
            mu[0] += delta;
            const InverseState shifted = fixture::state_from(inst.columns, mu, inst.params.lambda);
            return hess_coord(shifted, inst.y, c, inst.params);
        };
        const double fd_third = (hess_at(step) - hess_at(-step)) / (2.0 * step);
        const double third = higher_partial(state, inst.y, c, 3, inst.params);
        CHECK(std::abs(third - fd_third) <= 1e-3 * std::max(std::abs(third), 1e-3));
        CHECK(third <= 0.0);
        CHECK(higher_partial(state, inst.y, c, 2, inst.params) == hess);
    }
}

TEST_CASE("sign laws")
{
    Rng rng(24);
    for (int trial = 0; trial < 30; ++trial) {
        const Instance inst = random_instance(rng);
        const InverseState state = fixture::state_from(inst.columns, inst.mu, inst.params.lambda);
        for (Eigen::Index m = 0; m < inst.columns.cols(); ++m) {
            const Vector c = inst.columns.col(m);
            CHECK(grad_coord(state, inst.y, c, inst.params) <= inst.params.nu);
            CHECK(hess_coord(state, inst.y, c, inst.params) >= 0.0);
            for (int p = 2; p <= 7; ++p) {
                const double value = higher_partial(state, inst.y, c, p, inst.params);
                if (p % 2 == 0) CHECK(value >= 0.0);
                else CHECK(value <= 0.0);
            }
        }
    }
}

TEST_CASE("coordinate restriction has a closed form and a convergent Taylor series")
{
    Rng rng(25);
    for (int trial = 0; trial < 30; ++trial) {
        const Instance inst = random_instance(rng);
        const InverseState state = fixture::state_from(inst.columns, inst.mu, inst.params.lambda);
        const Vector c = inst.columns.col(0);
        const CoordinateProducts products = coordinate_products(state, inst.y, c);
        const double f0 = objective_value(state, inst.y, inst.mu.sum(), inst.params);
        const double lambda = inst.params.lambda;
        const double t2 = products.y_kinv_c * products.y_kinv_c;
        const double q = products.c_kinv_c;

        for (double delta : {-0.5 * inst.mu[0], 0.3, 2.0}) {
            Vector mu = inst.mu;
            mu[0] += delta;
            const double exact = objective_at(inst.columns, mu, inst.y, inst.params);
            const double closed = f0 - lambda * delta * t2 / (1.0 + delta * q) + inst.params.nu * delta;
            CHECK(std::abs(exact - closed) <= 1e-10 * exact);
        }

        // inside the radius of convergence |delta| q < 1
        const double delta = 0.4 / q;
        double series = f0 + grad_coord(products, inst.params) * delta;
        double factorial = 1.0;
        for (int p = 2; p <= 60; ++p) {
            factorial *= p;
            series += higher_partial(products, p, inst.params) * std::pow(delta, p) / factorial;
        }
        Vector mu = inst.mu;
        mu[0] += delta;
        CHECK(std::abs(series - objective_at(inst.columns, mu, inst.y, inst.params)) <= 1e-9 * series);
    }
}

TEST_CASE("second-order model bounds the coordinate restriction")
{
    Rng rng(26);
    for (int trial = 0; trial < 40; ++trial) {
        const Instance inst = random_instance(rng);
        const InverseState state = fixture::state_from(inst.columns, inst.mu, inst.params.lambda);
        const Vector c = inst.columns.col(0);
        const double f0 = objective_value(state, inst.y, inst.mu.sum(), inst.params);
        const double g = grad_coord(state, inst.y, c, inst.params);
        const double h = hess_coord(state, inst.y, c, inst.params);
        for (int k = 0; k <= 10; ++k) {
            const double v = 3.0 * inst.mu[0] * k / 10.0;
            Vector mu = inst.mu;
            mu[0] = v;
            const double f = objective_at(inst.columns, mu, inst.y, inst.params);
            const double model = f0 + g * (v - inst.mu[0]) + 0.5 * h * (v - inst.mu[0]) * (v - inst.mu[0]);
            const double slack = 1e-10 * std::abs(f0);
            if (v >= inst.mu[0]) CHECK(f <= model + slack);
            else CHECK(f >= model - slack);
        }
    }
}
