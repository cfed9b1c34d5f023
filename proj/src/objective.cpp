#include "slkl/objective.hpp"

#include <cmath>
#include <stdexcept>

namespace slkl {

void ObjectiveParams::validate() const
{
    if (!(nu > 0.0) || !std::isfinite(nu)) throw std::invalid_argument("nu must be positive");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be positive");
}

namespace {

void check_lambda(const InverseState& state, const ObjectiveParams& params)
{
    if (state.lambda() != params.lambda) {
        throw std::invalid_argument("objective lambda differs from the inverse state's lambda");
    }
}

} // namespace

CoordinateProducts coordinate_products(const InverseState& state, const Eigen::Ref<const Vector>& y,
                                       const Eigen::Ref<const Vector>& c_m)
{
    const Vector kinv_c = state.apply_inverse(c_m);
    return {y.dot(kinv_c), c_m.dot(kinv_c)};
}

double objective_value(const InverseState& state, const Eigen::Ref<const Vector>& y, double mu_sum,
                       const ObjectiveParams& params)
{
    check_lambda(state, params);
    return params.lambda * y.dot(state.apply_inverse(y)) + params.nu * mu_sum;
}

double grad_coord(const CoordinateProducts& products, const ObjectiveParams& params)
{
    return -params.lambda * products.y_kinv_c * products.y_kinv_c + params.nu;
}

double grad_coord(const InverseState& state, const Eigen::Ref<const Vector>& y,
                  const Eigen::Ref<const Vector>& c_m, const ObjectiveParams& params)
{
    check_lambda(state, params);
    return grad_coord(coordinate_products(state, y, c_m), params);
}

double hess_coord(const CoordinateProducts& products, const ObjectiveParams& params)
{
    return 2.0 * params.lambda * products.y_kinv_c * products.y_kinv_c * products.c_kinv_c;
}

double hess_coord(const InverseState& state, const Eigen::Ref<const Vector>& y,
                  const Eigen::Ref<const Vector>& c_m, const ObjectiveParams& params)
{
    check_lambda(state, params);
    return hess_coord(coordinate_products(state, y, c_m), params);
}

double higher_partial(const CoordinateProducts& products, int order, const ObjectiveParams& params)
{
    if (order < 2) throw std::invalid_argument("higher_partial: order must be >= 2");
    double factorial = 1.0;
    for (int i = 2; i <= order; ++i) factorial *= i;
    const double sign = (order % 2 == 0) ? 1.0 : -1.0;
    return sign * factorial * params.lambda * products.y_kinv_c * products.y_kinv_c
           * std::pow(products.c_kinv_c, order - 1);
}

double higher_partial(const InverseState& state, const Eigen::Ref<const Vector>& y,
                      const Eigen::Ref<const Vector>& c_m, int order, const ObjectiveParams& params)
{
    check_lambda(state, params);
    return higher_partial(coordinate_products(state, y, c_m), order, params);
}

} // namespace slkl
