#include "slkl/lowrank_state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace slkl {

InverseState::InverseState(double lambda, std::size_t n, std::size_t refresh_interval)
    : lambda_(lambda), n_(n), refresh_interval_(refresh_interval), slot_of_(n, -1)
{
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("InverseState: lambda must be positive");
    }
    c_.resize(static_cast<Eigen::Index>(n), 0);
}

double InverseState::weight(std::size_t p) const
{
    if (!is_active(p)) return 0.0;
    return d_[slot_of_[p]];
}

Eigen::Ref<const Vector> InverseState::column(std::size_t p) const
{
    if (!is_active(p)) throw std::out_of_range("InverseState::column: index not active");
    return c_.col(slot_of_[p]);
}

Vector InverseState::apply_inverse(const Eigen::Ref<const Vector>& v) const
{
    if (static_cast<std::size_t>(v.size()) != n_) {
        throw std::invalid_argument("apply_inverse: vector length differs from n");
    }
    Vector out = v / lambda_;
    if (active_.empty()) return out;
    const Vector projected = columns().transpose() * v;
    const Vector mixed = g() * projected;
    out.noalias() -= columns() * mixed / (lambda_ * lambda_);
    return out;
}

void InverseState::reserve(std::size_t m0)
{
    const auto have = static_cast<std::size_t>(c_.cols());
    if (m0 <= have) return;
    const auto cap = static_cast<Eigen::Index>(std::max<std::size_t>({m0, 2 * have, 8}));
    c_.conservativeResize(Eigen::NoChange, cap);
    d_.conservativeResize(cap);
    g_.conservativeResize(cap, cap);
}

void InverseState::append(std::size_t p, double mu, const Eigen::Ref<const Vector>& c)
{
    if (static_cast<std::size_t>(c.size()) != n_) {
        throw std::invalid_argument("InverseState: column length differs from n");
    }
    const auto slot = static_cast<Eigen::Index>(active_.size());
    reserve(active_.size() + 1);
    c_.col(slot) = c;
    d_[slot] = mu;
    active_.push_back(p);
    slot_of_[p] = slot;
}

void InverseState::erase_slot(Eigen::Index slot)
{
    const auto m0 = static_cast<Eigen::Index>(active_.size());
    const Eigen::Index tail = m0 - slot - 1;
    if (tail > 0) {
        c_.middleCols(slot, tail) = c_.middleCols(slot + 1, tail).eval();
        d_.segment(slot, tail) = d_.segment(slot + 1, tail).eval();
        g_.block(slot, 0, tail, m0) = g_.block(slot + 1, 0, tail, m0).eval();
        g_.block(0, slot, m0 - 1, tail) = g_.block(0, slot + 1, m0 - 1, tail).eval();
    }
    slot_of_[active_[static_cast<std::size_t>(slot)]] = -1;
    active_.erase(active_.begin() + slot);
    for (auto j = static_cast<std::size_t>(slot); j < active_.size(); ++j) {
        slot_of_[active_[j]] = static_cast<std::ptrdiff_t>(j);
    }
}

void InverseState::after_incremental_update()
{
    ++incremental_updates_;
    if (refresh_interval_ != 0 && incremental_updates_ % refresh_interval_ == 0) rebuild();
}

UpdateCase InverseState::update_weight(std::size_t p, double mu_new, const ColumnProvider& provider)
{
    if (p >= n_) throw std::out_of_range("update_weight: index out of range");
    if (!(mu_new >= 0.0) || !std::isfinite(mu_new)) {
        throw std::invalid_argument("update_weight: weight must be finite and nonnegative");
    }
    const bool was_active = is_active(p);
    const bool now_active = mu_new > 0.0;

    if (!was_active && !now_active) {
        ++case_counts_[1];
        return UpdateCase::unchanged;
    }

    if (was_active && now_active) {
        ++case_counts_[2];
        const Eigen::Index j = slot_of_[p];
        const double mu_old = d_[j];
        if (mu_new == mu_old) return UpdateCase::reweight;
        const double delta = 1.0 / mu_new - 1.0 / mu_old;
        const double pivot = 1.0 + delta * g_(j, j);
        d_[j] = mu_new;
        if (std::abs(pivot) < pivot_tolerance) {
            rebuild();
            return UpdateCase::reweight;
        }
        const auto m0 = static_cast<Eigen::Index>(active_.size());
        const Vector gp = g_.col(j).head(m0);
        g_.topLeftCorner(m0, m0).noalias() -= (delta / pivot) * gp * gp.transpose();
        after_incremental_update();
        return UpdateCase::reweight;
    }

    if (was_active) {
        ++case_counts_[3];
        const Eigen::Index j = slot_of_[p];
        const double gpp = g_(j, j);
        if (std::abs(gpp) < pivot_tolerance) {
            erase_slot(j);
            rebuild();
            return UpdateCase::remove;
        }
        const auto m0 = static_cast<Eigen::Index>(active_.size());
        const Vector gp = g_.col(j).head(m0);
        g_.topLeftCorner(m0, m0).noalias() -= (1.0 / gpp) * gp * gp.transpose();
        erase_slot(j);
        after_incremental_update();
        return UpdateCase::remove;
    }

    ++case_counts_[4];
    if (!provider) throw std::invalid_argument("update_weight: column provider required");
    const Vector c = provider(p);
    const auto m0 = static_cast<Eigen::Index>(active_.size());
    const Vector projected = columns().transpose() * c;
    const Vector g_projected = g() * projected;
    const double inv_s = 1.0 / mu_new + c.squaredNorm() / lambda_
                         - projected.dot(g_projected) / (lambda_ * lambda_);
    append(p, mu_new, c);
    if (std::abs(inv_s) < pivot_tolerance) {
        rebuild();
        return UpdateCase::insert;
    }
    const double s = 1.0 / inv_s;
    const Vector v = -(s / lambda_) * g_projected;
    g_.topLeftCorner(m0, m0).noalias() += (1.0 / s) * v * v.transpose();
    g_.block(0, m0, m0, 1) = v;
    g_.block(m0, 0, 1, m0) = v.transpose();
    g_(m0, m0) = s;
    after_incremental_update();
    return UpdateCase::insert;
}

void InverseState::assign(std::span<const std::size_t> indices, std::span<const double> weights,
                          const ColumnProvider& provider)
{
    if (indices.size() != weights.size()) {
        throw std::invalid_argument("assign: index and weight counts differ");
    }
    for (auto p : active_) slot_of_[p] = -1;
    active_.clear();
    for (std::size_t j = 0; j < indices.size(); ++j) {
        if (indices[j] >= n_) throw std::out_of_range("assign: index out of range");
        if (!(weights[j] > 0.0)) throw std::invalid_argument("assign: weights must be positive");
        if (is_active(indices[j])) throw std::invalid_argument("assign: duplicate index");
        append(indices[j], weights[j], provider(indices[j]));
    }
    rebuild();
}

void InverseState::rebuild()
{
    ++rebuilds_;
    const auto m0 = static_cast<Eigen::Index>(active_.size());
    if (m0 == 0) return;
    Matrix inner = columns().transpose() * columns() / lambda_;
    inner.diagonal() += weights().cwiseInverse();
    Eigen::LLT<Matrix> llt(inner);
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error("InverseState::rebuild: D^-1 + C^T C / lambda is not positive definite");
    }
    Matrix fresh = llt.solve(Matrix::Identity(m0, m0));
    g_.topLeftCorner(m0, m0) = 0.5 * (fresh + fresh.transpose());
}

Matrix woodbury_inverse(const Matrix& a_inv, const Matrix& u, const Matrix& c, const Matrix& v)
{
    if (a_inv.rows() != a_inv.cols() || u.rows() != a_inv.rows() || v.cols() != a_inv.cols()
        || c.rows() != c.cols() || u.cols() != c.rows() || v.rows() != c.rows()) {
        throw std::invalid_argument("woodbury_inverse: incompatible shapes");
    }
    if (c.rows() == 0) return a_inv;
    Eigen::FullPivLU<Matrix> c_lu(c);
    if (!c_lu.isInvertible()) throw std::domain_error("woodbury_inverse: C is singular");
    const Matrix a_inv_u = a_inv * u;
    const Matrix inner = c_lu.inverse() + v * a_inv_u;
    Eigen::FullPivLU<Matrix> inner_lu(inner);
    if (!inner_lu.isInvertible()) {
        throw std::domain_error("woodbury_inverse: C^-1 + V A^-1 U is singular");
    }
    return a_inv - a_inv_u * inner_lu.solve(v * a_inv);
}

Matrix block_inverse_add(const Matrix& a_inv, const Vector& b, double c)
{
    if (a_inv.rows() != a_inv.cols() || b.size() != a_inv.rows()) {
        throw std::invalid_argument("block_inverse_add: incompatible shapes");
    }
    const Vector a_inv_b = a_inv * b;
    const Vector b_a_inv = a_inv.transpose() * b;
    const double schur = c - b.dot(a_inv_b);
    if (std::abs(schur) < 1e-12) throw std::domain_error("block_inverse_add: singular Schur complement");
    const Eigen::Index k = a_inv.rows();
    Matrix out(k + 1, k + 1);
    out.topLeftCorner(k, k) = a_inv + a_inv_b * b_a_inv.transpose() / schur;
    out.block(0, k, k, 1) = -a_inv_b / schur;
    out.block(k, 0, 1, k) = -b_a_inv.transpose() / schur;
    out(k, k) = 1.0 / schur;
    return out;
}

} // namespace slkl
