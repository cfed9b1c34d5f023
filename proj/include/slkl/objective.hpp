#pragma once

#include "slkl/lowrank_state.hpp"
#include "slkl/types.hpp"

namespace slkl {

/// Penalty nu on the 1-norm of the weights and the ridge lambda (which must
/// match the lambda of the InverseState it is used with).
struct ObjectiveParams {
    double nu = 0.01;
    double lambda = 1.0;

    void validate() const;
};

/// The two quadratic forms every coordinate derivative is built from:
/// y^T K^{-1} c_m and c_m^T K^{-1} c_m, with K^{-1} = (lambda I + K(mu))^{-1}.
/// Both cost one apply_inverse, so they are computed once per coordinate.
struct CoordinateProducts {
    double y_kinv_c = 0.0;
    double c_kinv_c = 0.0;
};

CoordinateProducts coordinate_products(const InverseState& state, const Eigen::Ref<const Vector>& y,
                                       const Eigen::Ref<const Vector>& c_m);

/// F(mu) = y^T (I + K(mu)/lambda)^{-1} y + nu * sum(mu), evaluated as
/// lambda * y^T (lambda I + K(mu))^{-1} y + nu * mu_sum.
double objective_value(const InverseState& state, const Eigen::Ref<const Vector>& y, double mu_sum,
                       const ObjectiveParams& params);

/// dF/dmu_m = -lambda (y^T K^{-1} c_m)^2 + nu
double grad_coord(const CoordinateProducts& products, const ObjectiveParams& params);
double grad_coord(const InverseState& state, const Eigen::Ref<const Vector>& y,
                  const Eigen::Ref<const Vector>& c_m, const ObjectiveParams& params);

/// d2F/dmu_m^2 = 2 lambda (y^T K^{-1} c_m)^2 (c_m^T K^{-1} c_m)
double hess_coord(const CoordinateProducts& products, const ObjectiveParams& params);
double hess_coord(const InverseState& state, const Eigen::Ref<const Vector>& y,
                  const Eigen::Ref<const Vector>& c_m, const ObjectiveParams& params);

/// p-th partial, p >= 2: (-1)^p p! lambda (y^T K^{-1} c_m)^2 (c_m^T K^{-1} c_m)^(p-1).
/// Throws std::invalid_argument for p < 2.
double higher_partial(const CoordinateProducts& products, int order, const ObjectiveParams& params);
double higher_partial(const InverseState& state, const Eigen::Ref<const Vector>& y,
                      const Eigen::Ref<const Vector>& c_m, int order, const ObjectiveParams& params);

} // namespace slkl
