#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "slkl/types.hpp"

namespace slkl {

/// Which of the four incremental G updates a weight change dispatched to.
enum class UpdateCase {
    unchanged = 1, ///< zero stays zero
    reweight = 2,  ///< nonzero to nonzero, rank-1 correction of G
    remove = 3,    ///< nonzero to zero, column dropped
    insert = 4,    ///< zero to nonzero, column appended
};

using ColumnProvider = std::function<Vector(std::size_t)>;

/// Implicit representation of (lambda I + C D C^T)^{-1} through
///
///     (lambda I + C D C^T)^{-1} = I / lambda - C G C^T / lambda^2,
///     G = (D^{-1} + C^T C / lambda)^{-1},
///
/// where C holds the normalized columns of the active (strictly positive)
/// weights and D their values. G is kept directly and patched per weight
/// change in O(n m0 + m0^2).
///
/// Active slots keep insertion order; removal compacts by shifting.
/// Every `refresh_interval` incremental updates G is recomputed from scratch
/// to bound roundoff drift (0 disables the refresh).
class InverseState {
public:
    static constexpr double pivot_tolerance = 1e-12;
    static constexpr std::size_t default_refresh_interval = 1000;

    InverseState(double lambda, std::size_t n,
                 std::size_t refresh_interval = default_refresh_interval);

    double lambda() const { return lambda_; }
    std::size_t rows() const { return n_; }
    std::size_t support_size() const { return active_.size(); }

    const std::vector<std::size_t>& active() const { return active_; }
    auto columns() const { return c_.leftCols(static_cast<Eigen::Index>(active_.size())); }
    auto weights() const { return d_.head(static_cast<Eigen::Index>(active_.size())); }
    auto g() const
    {
        const auto m0 = static_cast<Eigen::Index>(active_.size());
        return g_.topLeftCorner(m0, m0);
    }

    /// Current weight of training index p (0 when inactive).
    double weight(std::size_t p) const;
    bool is_active(std::size_t p) const { return p < n_ && slot_of_[p] >= 0; }
    /// Stored column of an active index.
    Eigen::Ref<const Vector> column(std::size_t p) const;

    /// (lambda I + C D C^T)^{-1} v in O(n m0).
    Vector apply_inverse(const Eigen::Ref<const Vector>& v) const;

    /// Set the weight of index p to mu_new and patch G. The provider is
    /// only called when p enters the support.
    UpdateCase update_weight(std::size_t p, double mu_new, const ColumnProvider& provider);

    /// Replace the whole support with the given indices/weights (all > 0)
    /// and recompute G from scratch.
    void assign(std::span<const std::size_t> indices, std::span<const double> weights,
                const ColumnProvider& provider);

    /// Recompute G by a dense SPD inversion of D^{-1} + C^T C / lambda.
    void rebuild();

    /// Updates dispatched per case (index 0 unused).
    const std::array<std::size_t, 5>& case_counts() const { return case_counts_; }
    std::size_t rebuild_count() const { return rebuilds_; }

private:
    void reserve(std::size_t m0);
    void append(std::size_t p, double mu, const Eigen::Ref<const Vector>& c);
    void erase_slot(Eigen::Index slot);
    void after_incremental_update();

    double lambda_;
    std::size_t n_;
    std::size_t refresh_interval_;
    std::vector<std::size_t> active_;
    std::vector<std::ptrdiff_t> slot_of_;
    // Capacity-backed storage; only the leading m0 columns/entries are live.
    Matrix c_;
    Vector d_;
    Matrix g_;
    std::size_t incremental_updates_ = 0;
    std::size_t rebuilds_ = 0;
    std::array<std::size_t, 5> case_counts_{};
};

/// Woodbury identity: (A + U C V)^{-1} from A^{-1}.
/// Throws std::domain_error when C or C^{-1} + V A^{-1} U is singular.
Matrix woodbury_inverse(const Matrix& a_inv, const Matrix& u, const Matrix& c, const Matrix& v);

/// Inverse of [[A, b], [b^T, c]] from A^{-1} using the Schur complement
/// c - b^T A^{-1} b. Throws std::domain_error when |schur| < 1e-12.
Matrix block_inverse_add(const Matrix& a_inv, const Vector& b, double c);

} // namespace slkl
