#pragma once

// Dense revised simplex for the small linear programs that back membership,
// hull containment, radial scaling, asymmetry and minimal covers.
//
// Standard form:  minimize c^T x  subject to  A x = b,  x >= 0.

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <vector>

namespace goodman::lp {

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

struct Options {
    double feasibility_tol = 1e-9;
    double optimality_tol = 1e-10;
    double pivot_tol = 1e-9;
    int refactor_every = 64;
    int bland_after_degenerate = 40;
};

struct Result {
    Status status = Status::Infeasible;
    Eigen::VectorXd x;
    Eigen::VectorXd duals;      // simplex multipliers for the rows of A
    double objective = 0.0;
    double infeasibility = 0.0; // phase-one optimum (sum of artificials)
    int iterations = 0;
};

namespace detail {

class RevisedSimplex {
public:
    RevisedSimplex(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Options& opt)
        : m_(a.rows()), n_(a.cols()), opt_(opt) {
        ext_.resize(m_, n_ + m_);
        rhs_ = b;
        flipped_.assign(static_cast<std::size_t>(m_), false);
        ext_.leftCols(n_) = a;
        ext_.rightCols(m_).setIdentity();
        for (Eigen::Index i = 0; i < m_; ++i) {
            if (rhs_(i) < 0) {
                ext_.row(i).head(n_) *= -1.0;
                rhs_(i) = -rhs_(i);
                flipped_[static_cast<std::size_t>(i)] = true;
            }
        }
        basis_.resize(static_cast<std::size_t>(m_));
        is_basic_.assign(static_cast<std::size_t>(n_ + m_), false);
        for (Eigen::Index i = 0; i < m_; ++i) {
            basis_[static_cast<std::size_t>(i)] = n_ + i;
            is_basic_[static_cast<std::size_t>(n_ + i)] = true;
        }
        binv_ = Eigen::MatrixXd::Identity(m_, m_);
        xb_ = rhs_;
    }

    // Runs simplex iterations for `cost` over the extended columns. Columns with
    // index >= enter_limit never enter the basis.
    Status optimize(const Eigen::VectorXd& cost, Eigen::Index enter_limit, int& iterations) {
        const int max_iter = 50 * static_cast<int>(m_ + n_) + 1000;
        int degenerate_streak = 0;
        int since_refactor = 0;
        for (;;) {
            if (iterations >= max_iter) return Status::IterationLimit;
            if (since_refactor >= opt_.refactor_every) {
                refactor();
                since_refactor = 0;
            }
            Eigen::VectorXd cb(m_);
            for (Eigen::Index i = 0; i < m_; ++i) cb(i) = cost(basis_[static_cast<std::size_t>(i)]);
            const Eigen::VectorXd y = binv_.transpose() * cb;
            const Eigen::VectorXd reduced = cost.head(enter_limit) - ext_.leftCols(enter_limit).transpose() * y;

            const bool bland = degenerate_streak >= opt_.bland_after_degenerate;
            Eigen::Index entering = -1;
            double best = -opt_.optimality_tol;
            for (Eigen::Index j = 0; j < enter_limit; ++j) {
                if (is_basic_[static_cast<std::size_t>(j)]) continue;
                if (reduced(j) < best) {
                    entering = j;
                    if (bland) break;
                    best = reduced(j);
                }
            }
            if (entering < 0) return Status::Optimal;

            const Eigen::VectorXd alpha = binv_ * ext_.col(entering);
            Eigen::Index leave = -1;
            double ratio = std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < m_; ++i) {
                if (alpha(i) <= opt_.pivot_tol) continue;
                const double r = std::max(xb_(i), 0.0) / alpha(i);
                if (r < ratio - 1e-12) {
                    ratio = r;
                    leave = i;
                } else if (r <= ratio + 1e-12 && leave >= 0) {
                    const bool prefer = bland ? basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)]
                                              : alpha(i) > alpha(leave);
                    if (prefer) leave = i;
                }
            }
            if (leave < 0) return Status::Unbounded;

            degenerate_streak = ratio < 1e-12 ? degenerate_streak + 1 : 0;
            pivot(leave, entering, alpha, ratio);
            ++iterations;
            ++since_refactor;
        }
    }

    double artificial_sum() const {
        double s = 0.0;
        for (Eigen::Index i = 0; i < m_; ++i)
            if (basis_[static_cast<std::size_t>(i)] >= n_) s += std::max(xb_(i), 0.0);
        return s;
    }

    // Pivots zero-level artificials out of the basis wherever a structural
    // column can replace them. Rows that cannot be repaired are redundant.
    void expel_artificials() {
        for (Eigen::Index r = 0; r < m_; ++r) {
            if (basis_[static_cast<std::size_t>(r)] < n_) continue;
            const Eigen::RowVectorXd row = binv_.row(r) * ext_.leftCols(n_);
            Eigen::Index best = -1;
            double mag = opt_.pivot_tol;
            for (Eigen::Index j = 0; j < n_; ++j) {
                if (is_basic_[static_cast<std::size_t>(j)]) continue;
                if (std::abs(row(j)) > mag) {
                    mag = std::abs(row(j));
                    best = j;
                }
            }
            if (best < 0) continue;
            const Eigen::VectorXd alpha = binv_ * ext_.col(best);
            xb_(r) = 0.0;
            pivot(r, best, alpha, 0.0);
        }
    }

    Eigen::VectorXd primal() const {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
        for (Eigen::Index i = 0; i < m_; ++i) {
            const Eigen::Index j = basis_[static_cast<std::size_t>(i)];
            if (j < n_) x(j) = std::max(xb_(i), 0.0);
        }
        return x;
    }

    Eigen::VectorXd duals(const Eigen::VectorXd& cost) const {
        Eigen::VectorXd cb(m_);
        for (Eigen::Index i = 0; i < m_; ++i) cb(i) = cost(basis_[static_cast<std::size_t>(i)]);
        Eigen::VectorXd y = binv_.transpose() * cb;
        for (Eigen::Index i = 0; i < m_; ++i)
            if (flipped_[static_cast<std::size_t>(i)]) y(i) = -y(i);
        return y;
    }

    Eigen::Index rows() const { return m_; }
    Eigen::Index cols() const { return n_; }

private:
    void pivot(Eigen::Index r, Eigen::Index q, const Eigen::VectorXd& alpha, double theta) {
        xb_ -= theta * alpha;
        xb_(r) = theta;
        const double piv = alpha(r);
        binv_.row(r) /= piv;
        for (Eigen::Index i = 0; i < m_; ++i) {
            if (i == r || alpha(i) == 0.0) continue;
            binv_.row(i) -= alpha(i) * binv_.row(r);
        }
        is_basic_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])] = false;
        basis_[static_cast<std::size_t>(r)] = q;
        is_basic_[static_cast<std::size_t>(q)] = true;
    }

    void refactor() {
        Eigen::MatrixXd bmat(m_, m_);
        for (Eigen::Index i = 0; i < m_; ++i) bmat.col(i) = ext_.col(basis_[static_cast<std::size_t>(i)]);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(bmat);
        binv_ = lu.inverse();
        xb_ = binv_ * rhs_;
        for (Eigen::Index i = 0; i < m_; ++i)
            if (xb_(i) < 0 && xb_(i) > -1e-11) xb_(i) = 0.0;
    }

    Eigen::Index m_;
    Eigen::Index n_;
    Options opt_;
    Eigen::MatrixXd ext_;
    Eigen::VectorXd rhs_;
    std::vector<bool> flipped_;
    std::vector<Eigen::Index> basis_;
    std::vector<bool> is_basic_;
    Eigen::MatrixXd binv_;
    Eigen::VectorXd xb_;
};

} // namespace detail

/// Solves min c^T x s.t. A x = b, x >= 0 with a two-phase revised simplex.
inline Result solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                    const Options& opt = {}) {
    Result res;
    detail::RevisedSimplex simplex(a, b, opt);
    const Eigen::Index n = a.cols();
    const Eigen::Index m = a.rows();

    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n + m);
    phase1.tail(m).setOnes();
    Status st = simplex.optimize(phase1, n, res.iterations);
    res.infeasibility = simplex.artificial_sum();
    if (st == Status::IterationLimit) {
        res.status = st;
        return res;
    }
    if (res.infeasibility > opt.feasibility_tol) {
        res.status = Status::Infeasible;
        return res;
    }
    simplex.expel_artificials();

    Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(n + m);
    phase2.head(n) = c;
    st = simplex.optimize(phase2, n, res.iterations);
    res.status = st;
    res.x = simplex.primal();
    res.duals = simplex.duals(phase2);
    res.objective = c.dot(res.x);
    return res;
}

/// Phase one only: is {x >= 0 : A x = b} nonempty? `infeasibility` on the
/// result reports the residual L1 mass the artificials could not eliminate.
inline Result feasible(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Options& opt = {}) {
    Result res;
    detail::RevisedSimplex simplex(a, b, opt);
    const Eigen::Index n = a.cols();
    const Eigen::Index m = a.rows();
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n + m);
    phase1.tail(m).setOnes();
    const Status st = simplex.optimize(phase1, n, res.iterations);
    res.infeasibility = simplex.artificial_sum();
    res.x = simplex.primal();
    if (st == Status::IterationLimit)
        res.status = st;
    else
        res.status = res.infeasibility <= opt.feasibility_tol ? Status::Optimal : Status::Infeasible;
    return res;
}

} // namespace goodman::lp
