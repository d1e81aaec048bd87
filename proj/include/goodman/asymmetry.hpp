#pragma once

// Minkowski's asymmetry parameter
//
//     sigma(K) = min over interior q of  min { mu > 0 : K - q  ⊆  -mu (K - q) }
//
// computed by bisection on mu, each level being an LP feasibility problem in
// the center q and convex-combination weights.

#include "goodman/error.hpp"
#include "goodman/geometry.hpp"
#include "goodman/lp.hpp"

#include <cmath>
#include <optional>

namespace goodman {

struct AsymmetryResult {
    double sigma = 1.0;
    Vector center;             // a point q* at which level `upper` is feasible
    int iterations = 0;
    double certified_gap = 0.0; // final bisection bracket width
    double upper = 1.0;         // smallest level proven feasible; sigma <= upper
};

namespace detail {

// Largest t >= 0 with q + t dir in conv(points), or nullopt when q is outside.
inline std::optional<double> radial_in_hull(const std::vector<Vector>& points, const Vector& q, const Vector& dir) {
    const auto d = q.size();
    const auto m = static_cast<Eigen::Index>(points.size());
    // columns: t, lambda_1..lambda_m
    Eigen::MatrixXd a(d + 1, m + 1);
    a.setZero();
    a.block(0, 0, d, 1) = -dir;
    for (Eigen::Index j = 0; j < m; ++j) {
        a.block(0, j + 1, d, 1) = points[static_cast<std::size_t>(j)];
        a(d, j + 1) = 1.0;
    }
    Eigen::VectorXd b(d + 1);
    b.head(d) = q;
    b(d) = 1.0;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(m + 1);
    c(0) = -1.0;
    const auto res = lp::solve(a, b, c);
    if (res.status != lp::Status::Optimal) return std::nullopt;
    return res.x(0);
}

// Largest t >= 0 with q + t dir in K, or nullopt when q is not in K.
inline std::optional<double> radial_raw(const ConvexBody& body, const Vector& q, const Vector& dir) {
    if (body.is_ball()) {
        const auto& b = body.as_ball();
        const Vector rel = q - b.center;
        const double a = dir.squaredNorm();
        const double hb = rel.dot(dir);
        const double c = rel.squaredNorm() - b.radius * b.radius;
        if (c > kTolerance) return std::nullopt;
        const double disc = std::max(hb * hb - a * c, 0.0);
        return std::max((-hb + std::sqrt(disc)) / a, 0.0);
    }
    return radial_in_hull(body.vertices(), q, dir);
}

} // namespace detail

inline bool is_interior(const ConvexBody& body, const Vector& q, double tol = kTolerance) {
    require_dimension(q, body.dimension(), "point");
    if (body.is_ball()) return (q - body.as_ball().center).norm() < body.as_ball().radius - tol;
    const int d = body.dimension();
    for (int i = 0; i < d; ++i) {
        for (double sign : {1.0, -1.0}) {
            Vector e = Vector::Zero(d);
            e(i) = sign;
            const auto t = detail::radial_raw(body, q, e);
            if (!t || *t <= tol) return false;
        }
    }
    return true;
}

/// Largest t >= 0 with q + t dir in K, for q strictly inside K.
inline double radial_scale(const ConvexBody& body, const Vector& q, const Vector& dir) {
    require_dimension(dir, body.dimension(), "direction");
    if (!(dir.norm() > 0)) fail(ErrorKind::InvalidArgument, "direction must be nonzero");
    if (!is_interior(body, q)) fail(ErrorKind::InvalidArgument, "point is not strictly interior");
    const auto t = detail::radial_raw(body, q, dir);
    if (!t) fail(ErrorKind::InternalError, "radial LP failed at an interior point");
    return *t;
}

/// Least mu with K - q ⊆ -mu (K - q).
inline double asymmetry_at_point(const ConvexBody& body, const Vector& q) {
    if (!is_interior(body, q)) fail(ErrorKind::InvalidArgument, "point is not strictly interior");
    if (body.is_ball()) {
        const auto& b = body.as_ball();
        const double off = (b.center - q).norm();
        return (b.radius + off) / (b.radius - off);
    }
    double mu = 0.0;
    for (const auto& v : body.vertices()) {
        const Vector out = v - q;
        const double len = out.norm();
        const auto back = detail::radial_raw(body, q, -out / len);
        if (!back || *back <= 0) fail(ErrorKind::InternalError, "radial LP failed at an interior point");
        mu = std::max(mu, len / *back);
    }
    return mu;
}

/// A center q with K - q ⊆ -mu (K - q), if one exists at this level.
inline std::optional<Vector> sigma_level_center(const ConvexBody& body, double mu) {
    if (body.is_ball()) {
        if (mu >= 1.0) return body.as_ball().center;
        return std::nullopt;
    }
    // (1 + mu) q - v_i = sum_j w_ij v_j,  sum_j w_ij = mu,  w >= 0, q free.
    const auto& vs = body.vertices();
    const Eigen::Index d = body.dimension();
    const auto m = static_cast<Eigen::Index>(vs.size());
    const Eigen::Index cols = 2 * d + m * m;
    const Eigen::Index rows = m * (d + 1);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, cols);
    Eigen::VectorXd b(rows);
    for (Eigen::Index i = 0; i < m; ++i) {
        const Eigen::Index r0 = i * (d + 1);
        a.block(r0, 0, d, d) = (1.0 + mu) * Eigen::MatrixXd::Identity(d, d);
        a.block(r0, d, d, d) = -(1.0 + mu) * Eigen::MatrixXd::Identity(d, d);
        for (Eigen::Index j = 0; j < m; ++j) {
            a.block(r0, 2 * d + i * m + j, d, 1) = -vs[static_cast<std::size_t>(j)];
            a(r0 + d, 2 * d + i * m + j) = 1.0;
        }
        b.segment(r0, d) = vs[static_cast<std::size_t>(i)];
        b(r0 + d) = mu;
    }
    const auto res = lp::feasible(a, b);
    if (res.status != lp::Status::Optimal) return std::nullopt;
    return Vector(res.x.head(d) - res.x.segment(d, d));
}

/// Bisection on mu over [1, d]; stops once the bracket is narrower than `bracket`.
inline AsymmetryResult minkowski_sigma(const ConvexBody& body, double bracket = 1e-9) {
    AsymmetryResult out;
    if (body.is_ball()) {
        out.center = body.as_ball().center;
        return out;
    }
    const double d = body.dimension();
    if (auto q = sigma_level_center(body, 1.0)) {
        out.center = *q;
        return out;
    }
    auto top = sigma_level_center(body, d);
    if (!top)
        fail(ErrorKind::InternalError, "asymmetry level d is infeasible; the body violates sigma <= d");
    double lo = 1.0;
    double hi = d;
    Vector center = *top;
    int iterations = 0;
    while (hi - lo >= bracket) {
        const double mid = 0.5 * (lo + hi);
        if (auto q = sigma_level_center(body, mid)) {
            hi = mid;
            center = *q;
        } else {
            lo = mid;
        }
        ++iterations;
    }
    out.sigma = 0.5 * (lo + hi);
    out.center = center;
    out.iterations = iterations;
    out.certified_gap = hi - lo;
    out.upper = hi;
    return out;
}

} // namespace goodman
