#pragma once

// Covering homothets for non-separable families, their verification through
// the erosion identity, and the smallest covering homothet for measuring how
// tight a construction is.

#include "goodman/asymmetry.hpp"
#include "goodman/error.hpp"
#include "goodman/geometry.hpp"
#include "goodman/interval_lemmas.hpp"
#include "goodman/lp.hpp"
#include "goodman/separability.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace goodman {

enum class CoverTheorem { Balls, Symmetric, GeneralSigma, SimplexFacetParallel };

inline std::string to_string(CoverTheorem t) {
    switch (t) {
    case CoverTheorem::Balls: return "balls";
    case CoverTheorem::Symmetric: return "symmetric";
    case CoverTheorem::GeneralSigma: return "general";
    default: return "simplex";
    }
}

struct CoverResult {
    Homothet cover;
    CoverTheorem theorem = CoverTheorem::Balls;
    Vector normalization_offset; // the point of K placed at the origin before scaling
    bool verified = false;
    double factor = 1.0; // cover scale divided by the total member scale
    std::optional<AsymmetryResult> asymmetry;
    std::vector<std::string> warnings;
};

/// o_i + tau_i K ⊆ t + T K for every member, tested as o_i - t ∈ (T - tau_i) K.
inline bool verify_cover(const Family& family, const Homothet& cover, double tol = kTolerance) {
    for (const auto& m : family.members()) {
        if (cover.scale < m.scale - tol) return false;
        const double room = std::max(cover.scale - m.scale, 0.0);
        if (!member_scaled(m.translation - cover.translation, room, family.body(), tol)) return false;
    }
    return true;
}

/// For a ball body: min over members of R - |c_i - c| - r_i, in absolute units.
inline double ball_cover_slack(const Family& family, const Homothet& cover) {
    if (!family.body().is_ball()) fail(ErrorKind::WrongTheorem, "cover slack is defined for ball bodies");
    const auto& b = family.body().as_ball();
    const Vector c = cover.translation + cover.scale * b.center;
    double slack = std::numeric_limits<double>::infinity();
    for (const auto& m : family.members()) {
        const Vector ci = m.translation + m.scale * b.center;
        slack = std::min(slack, cover.scale * b.radius - (ci - c).norm() - m.scale * b.radius);
    }
    return slack;
}

namespace detail {

// Translations of the members once the point z of K is moved to the origin.
inline Vector shifted_center(const Family& family, const Vector& z) {
    Vector p = Vector::Zero(family.dimension());
    for (const auto& m : family.members()) p += m.scale * (m.translation + m.scale * z);
    return p / family.total_scale();
}

inline CoverResult centred_cover(const Family& family, const Vector& z, double factor, CoverTheorem theorem) {
    CoverResult out;
    out.theorem = theorem;
    out.normalization_offset = z;
    out.factor = factor;
    out.cover.scale = factor * family.total_scale();
    out.cover.translation = shifted_center(family, z) - out.cover.scale * z;
    out.verified = verify_cover(family, out.cover);
    return out;
}

// Cheap necessary condition: non-separability along the coordinate axes.
inline void warn_if_axis_separable(const Family& family, CoverResult& out) {
    std::vector<Vector> axes;
    for (int i = 0; i < family.dimension(); ++i) axes.push_back(Vector::Unit(family.dimension(), i));
    const auto v = check_nonseparable(family, DirectionMode::restricted({axes, DirectionSource::Given}));
    if (!v.ok())
        out.warnings.push_back("family is separable along a coordinate axis; the covering hypothesis fails");
}

} // namespace detail

/// Ball of radius sum r_i centred at the radii-weighted mean of the centres.
inline CoverResult cover_balls(const Family& family) {
    if (!family.body().is_ball()) fail(ErrorKind::WrongTheorem, "the ball theorem needs a ball body");
    auto out = detail::centred_cover(family, family.body().as_ball().center, 1.0, CoverTheorem::Balls);
    detail::warn_if_axis_separable(family, out);
    return out;
}

/// Translate of (sum tau_i) K for a centrally symmetric K.
inline CoverResult cover_symmetric(const Family& family, const Vector& symmetry_center) {
    require_dimension(symmetry_center, family.dimension(), "symmetry center");
    Vector found;
    if (!goodman::symmetry_center(family.body(), found) || (found - symmetry_center).cwiseAbs().maxCoeff() > 1e-9)
        fail(ErrorKind::WrongTheorem, "body is not centrally symmetric about the given point; use the general cover");
    auto out = detail::centred_cover(family, symmetry_center, 1.0, CoverTheorem::Symmetric);
    detail::warn_if_axis_separable(family, out);
    return out;
}

inline CoverResult cover_symmetric(const Family& family) {
    Vector z;
    if (!symmetry_center(family.body(), z)) fail(ErrorKind::WrongTheorem, "body is not centrally symmetric");
    return cover_symmetric(family, z);
}

/// Translate of (sigma + 1)/2 (sum tau_i) K, with K normalized about an
/// approximate Minkowski centre. The level used is the smallest one for which
/// the centre is certified, so the factor never undershoots.
inline CoverResult cover_general(const Family& family) {
    const auto sigma = minkowski_sigma(family.body());
    auto out = detail::centred_cover(family, sigma.center, 0.5 * (sigma.upper + 1.0), CoverTheorem::GeneralSigma);
    out.asymmetry = sigma;
    detail::warn_if_axis_separable(family, out);
    return out;
}

/// Translate of (d + 1)/2 (sum tau_i) K for a simplex K, centred at its centroid.
inline CoverResult cover_simplex_facet_parallel(const Family& family) {
    if (!family.body().is_simplex()) fail(ErrorKind::WrongTheorem, "the facet-parallel theorem needs a simplex body");
    const int d = family.dimension();
    auto out = detail::centred_cover(family, centroid(family.body()), 0.5 * (d + 1), CoverTheorem::SimplexFacetParallel);
    const auto v = check_nonseparable(family, DirectionMode::restricted(facet_normals(family.body())));
    if (!v.ok()) out.warnings.push_back("family is separable by a facet-parallel hyperplane");
    return out;
}

struct MinimalCover {
    double scale = 0.0;
    Vector translation;
    std::string method;             // "simplex-barycentric", "vertex-lp" or "ball-support-sets"
    double stationarity_gap = 0.0;  // ball bodies only
};

namespace detail {

// Smallest T with every member vertex in t + T S for a simplex S. With
// barycentric rows [P | r] = M^{-1}, x ∈ t + T S reads P t - r T <= P x, and
// summing the rows (they sum to (0, 1)) gives T >= -sum_j min_x (P x)_j,
// attained by the t solving all rows with equality.
inline MinimalCover minimal_cover_simplex(const Family& family) {
    const int d = family.dimension();
    const auto& vs = family.body().vertices();
    Eigen::MatrixXd m(d + 1, d + 1);
    for (int j = 0; j <= d; ++j) {
        m.block(0, j, d, 1) = vs[static_cast<std::size_t>(j)];
        m(d, j) = 1.0;
    }
    const Eigen::MatrixXd inv = m.inverse();
    const Eigen::MatrixXd p = inv.leftCols(d);
    const Eigen::VectorXd r = inv.col(d);
    Eigen::VectorXd low = Eigen::VectorXd::Constant(d + 1, std::numeric_limits<double>::infinity());
    for (const auto& mem : family.members())
        for (const auto& x : member_vertices(mem, family.body())) low = low.cwiseMin(p * x);
    MinimalCover out;
    out.method = "simplex-barycentric";
    out.scale = -low.sum();
    out.translation = p.colPivHouseholderQr().solve(low + r * out.scale);
    return out;
}

} // namespace detail

/// Smallest covering homothet via the vertex-representation LP:
///   min T  s.t.  x = t + sum_j mu_xj v_j,  sum_j mu_xj = T  for all member vertices x.
inline MinimalCover minimal_cover_vertex_lp(const Family& family) {
    if (!family.body().is_polytope()) fail(ErrorKind::UnsupportedShape, "the vertex LP needs a polytope body");
    const Eigen::Index d = family.dimension();
    const auto& vs = family.body().vertices();
    const auto m = static_cast<Eigen::Index>(vs.size());
    std::vector<Vector> pts;
    for (const auto& mem : family.members())
        for (const auto& x : member_vertices(mem, family.body())) pts.push_back(x);
    const auto np = static_cast<Eigen::Index>(pts.size());
    // columns: t+, t-, T, mu
    const Eigen::Index cols = 2 * d + 1 + np * m;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(np * (d + 1), cols);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(np * (d + 1));
    for (Eigen::Index i = 0; i < np; ++i) {
        const Eigen::Index r0 = i * (d + 1);
        a.block(r0, 0, d, d) = Eigen::MatrixXd::Identity(d, d);
        a.block(r0, d, d, d) = -Eigen::MatrixXd::Identity(d, d);
        for (Eigen::Index j = 0; j < m; ++j) {
            a.block(r0, 2 * d + 1 + i * m + j, d, 1) = vs[static_cast<std::size_t>(j)];
            a(r0 + d, 2 * d + 1 + i * m + j) = 1.0;
        }
        a(r0 + d, 2 * d) = -1.0;
        b.segment(r0, d) = pts[static_cast<std::size_t>(i)];
    }
    Eigen::VectorXd c = Eigen::VectorXd::Zero(cols);
    c(2 * d) = 1.0;
    const auto res = lp::solve(a, b, c);
    if (res.status != lp::Status::Optimal) fail(ErrorKind::InternalError, "minimal cover LP did not reach an optimum");
    MinimalCover out;
    out.method = "vertex-lp";
    out.scale = res.x(2 * d);
    out.translation = res.x.head(d) - res.x.segment(d, d);
    return out;
}

namespace detail {

// Norm of the minimum-norm point in the hull of `gs` (Frank-Wolfe).
inline double min_norm_in_hull(const std::vector<Vector>& gs) {
    Vector x = gs.front();
    for (int it = 0; it < 2000; ++it) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < gs.size(); ++i)
            if (gs[i].dot(x) < gs[best].dot(x)) best = i;
        const Vector dir = gs[best] - x;
        const double den = dir.squaredNorm();
        if (den < 1e-30) break;
        const double step = std::clamp(-x.dot(dir) / den, 0.0, 1.0);
        if (step <= 0.0) break;
        x += step * dir;
    }
    return x.norm();
}

// Smallest enclosing ball of the balls B(c_i, rho_i). The optimum has an
// active set of at most d + 1 balls whose centre lies in their affine hull, so
// every candidate comes from solving |p - c_k| = R - rho_k on such a set.
inline MinimalCover minimal_cover_balls(const Family& family) {
    const auto& body = family.body().as_ball();
    const int d = family.dimension();
    std::vector<Vector> cs;
    std::vector<double> rho;
    for (const auto& m : family.members()) {
        cs.push_back(m.translation + m.scale * body.center);
        rho.push_back(m.scale * body.radius);
    }
    const int n = static_cast<int>(cs.size());
    double scale_ref = 0.0;
    for (int i = 0; i < n; ++i) scale_ref = std::max(scale_ref, cs[static_cast<std::size_t>(i)].norm() + rho[static_cast<std::size_t>(i)]);
    const double tol = 1e-12 * std::max(1.0, scale_ref);

    double best_r = std::numeric_limits<double>::infinity();
    Vector best_p;
    auto consider = [&](const Vector& p, double r) {
        if (!(r < best_r)) return;
        for (int i = 0; i < n; ++i)
            if ((cs[static_cast<std::size_t>(i)] - p).norm() + rho[static_cast<std::size_t>(i)] > r + tol) return;
        best_r = r;
        best_p = p;
    };

    std::vector<int> subset;
    auto solve_subset = [&]() {
        const auto k = static_cast<Eigen::Index>(subset.size());
        const Vector& c0 = cs[static_cast<std::size_t>(subset[0])];
        const double r0 = rho[static_cast<std::size_t>(subset[0])];
        if (k == 1) {
            consider(c0, r0);
            return;
        }
        Eigen::MatrixXd a(d, k - 1);
        Eigen::VectorXd h0(k - 1), h1(k - 1);
        for (Eigen::Index j = 1; j < k; ++j) {
            const auto idx = static_cast<std::size_t>(subset[static_cast<std::size_t>(j)]);
            const Vector e = cs[idx] - c0;
            a.col(j - 1) = e;
            h0(j - 1) = 0.5 * (e.squaredNorm() - (rho[idx] * rho[idx] - r0 * r0));
            h1(j - 1) = rho[idx] - r0;
        }
        const Eigen::MatrixXd g = a.transpose() * a;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
        if (lu.rank() < k - 1) return;
        // p = c0 + A y with y = y0 + R y1, then |A y|^2 = (R - r0)^2
        const Vector u0 = a * lu.solve(h0);
        const Vector u1 = a * lu.solve(h1);
        const double qa = u1.squaredNorm() - 1.0;
        const double qb = 2.0 * (u0.dot(u1) + r0);
        const double qc = u0.squaredNorm() - r0 * r0;
        std::vector<double> roots;
        if (std::abs(qa) < 1e-14) {
            if (std::abs(qb) > 1e-300) roots.push_back(-qc / qb);
        } else {
            const double disc = qb * qb - 4 * qa * qc;
            if (disc < 0) return;
            const double sq = std::sqrt(disc);
            roots.push_back((-qb + sq) / (2 * qa));
            roots.push_back((-qb - sq) / (2 * qa));
        }
        for (double r : roots) {
            if (!std::isfinite(r)) continue;
            consider(c0 + u0 + r * u1, r);
        }
    };
    // enumerate subsets of size 1 .. d + 1
    std::function<void(int)> rec = [&](int start) {
        if (!subset.empty()) solve_subset();
        if (static_cast<int>(subset.size()) == d + 1) return;
        for (int i = start; i < n; ++i) {
            subset.push_back(i);
            rec(i + 1);
            subset.pop_back();
        }
    };
    rec(0);
    if (!std::isfinite(best_r)) fail(ErrorKind::InternalError, "no enclosing ball candidate found");

    MinimalCover out;
    out.method = "ball-support-sets";
    out.scale = best_r / body.radius;
    out.translation = best_p - out.scale * body.center;
    std::vector<Vector> grads;
    bool interior_active = false;
    for (int i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        const Vector diff = best_p - cs[idx];
        if (diff.norm() + rho[idx] < best_r - 1e-9 * std::max(1.0, best_r)) continue;
        if (diff.norm() < 1e-12) {
            interior_active = true;
            continue;
        }
        grads.push_back(diff.normalized());
    }
    out.stationarity_gap = interior_active || grads.empty() ? 0.0 : min_norm_in_hull(grads);
    return out;
}

} // namespace detail

/// Smallest homothet T K + t containing every member.
inline MinimalCover minimal_cover(const Family& family) {
    if (family.size() == 1) {
        return {family.members()[0].scale, family.members()[0].translation, "single-member", 0.0};
    }
    if (family.body().is_ball()) return detail::minimal_cover_balls(family);
    if (family.body().is_simplex()) return detail::minimal_cover_simplex(family);
    return minimal_cover_vertex_lp(family);
}

/// Exact smallest covering scale for a simplex body with rational data.
inline Rational minimal_cover_scale_exact(const std::vector<std::vector<Rational>>& simplex,
                                          const std::vector<std::pair<std::vector<Rational>, Rational>>& members) {
    const std::size_t d = simplex.size() - 1;
    // Gauss-Jordan inverse of [v_0 .. v_d; 1 .. 1]
    std::vector<std::vector<Rational>> m(d + 1, std::vector<Rational>(2 * (d + 1)));
    for (std::size_t j = 0; j <= d; ++j) {
        if (simplex[j].size() != d) fail(ErrorKind::InvalidArgument, "simplex vertex has wrong dimension");
        for (std::size_t i = 0; i < d; ++i) m[i][j] = simplex[j][i];
        m[d][j] = 1;
    }
    for (std::size_t i = 0; i <= d; ++i) m[i][d + 1 + i] = 1;
    for (std::size_t col = 0; col <= d; ++col) {
        std::size_t piv = col;
        while (piv <= d && m[piv][col] == 0) ++piv;
        if (piv > d) fail(ErrorKind::InvalidArgument, "simplex is degenerate");
        std::swap(m[piv], m[col]);
        const Rational lead = m[col][col];
        for (auto& x : m[col]) x /= lead;
        for (std::size_t r = 0; r <= d; ++r) {
            if (r == col || m[r][col] == 0) continue;
            const Rational f = m[r][col];
            for (std::size_t k = 0; k < m[r].size(); ++k) m[r][k] -= f * m[col][k];
        }
    }
    Rational total = 0;
    for (std::size_t row = 0; row <= d; ++row) {
        std::optional<Rational> low;
        for (const auto& [o, tau] : members) {
            for (const auto& v : simplex) {
                Rational val = 0;
                for (std::size_t i = 0; i < d; ++i) val += m[row][d + 1 + i] * (o[i] + tau * v[i]);
                if (!low || val < *low) low = val;
            }
        }
        total -= *low;
    }
    return total;
}

} // namespace goodman
