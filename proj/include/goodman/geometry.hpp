#pragma once

// Convex bodies, homothets and families, plus the support / projection /
// membership primitives the covering and separability code is built on.
//
// Predicates use an absolute tolerance (default 1e-9); bodies are closed, so
// boundary points count as inside.

#include "goodman/error.hpp"
#include "goodman/lp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

namespace goodman {

using Vector = Eigen::VectorXd;

inline constexpr double kTolerance = 1e-9;

inline Vector vec(std::initializer_list<double> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

inline bool all_finite(const Vector& v) { return v.allFinite(); }

struct Ball {
    Vector center;
    double radius = 1.0;
};

struct VPolytope {
    std::vector<Vector> vertices;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool contains(double x) const { return lo <= x && x <= hi; }
};

inline bool hull_contains_point(const Vector& p, const std::vector<Vector>& points, double tol = kTolerance);

/// The fixed body K: a Euclidean ball or a vertex-represented polytope.
class ConvexBody {
public:
    static ConvexBody ball(Vector center, double radius) {
        if (center.size() < 1) fail(ErrorKind::InvalidArgument, "ball dimension must be at least 1");
        if (!all_finite(center) || !std::isfinite(radius))
            fail(ErrorKind::InvalidArgument, "ball parameters must be finite");
        if (!(radius > 0)) fail(ErrorKind::InvalidArgument, "ball radius must be positive");
        ConvexBody b;
        b.shape_ = Ball{std::move(center), radius};
        return b;
    }

    static ConvexBody unit_ball(int d) { return ball(Vector::Zero(d), 1.0); }

    /// Vertex list must be minimal and affinely span R^d.
    static ConvexBody polytope(std::vector<Vector> vertices) {
        validate_vertices(vertices);
        ConvexBody b;
        b.shape_ = VPolytope{std::move(vertices)};
        return b;
    }

    /// Keeps only the extreme points of `points` before building the polytope.
    static ConvexBody hull_of(const std::vector<Vector>& points) {
        std::vector<Vector> unique;
        for (const auto& p : points)
            if (std::none_of(unique.begin(), unique.end(), [&](const Vector& q) { return q == p; }))
                unique.push_back(p);
        std::vector<Vector> extreme;
        for (std::size_t i = 0; i < unique.size(); ++i) {
            std::vector<Vector> others;
            for (std::size_t j = 0; j < unique.size(); ++j)
                if (j != i) others.push_back(unique[j]);
            if (others.empty() || !hull_contains_point(unique[i], others, 1e-12)) extreme.push_back(unique[i]);
        }
        return polytope(std::move(extreme));
    }

    bool is_ball() const { return std::holds_alternative<Ball>(shape_); }
    bool is_polytope() const { return std::holds_alternative<VPolytope>(shape_); }
    const Ball& as_ball() const { return std::get<Ball>(shape_); }
    const std::vector<Vector>& vertices() const { return std::get<VPolytope>(shape_).vertices; }

    int dimension() const {
        if (is_ball()) return static_cast<int>(as_ball().center.size());
        return static_cast<int>(vertices().front().size());
    }

    bool is_simplex() const { return is_polytope() && static_cast<int>(vertices().size()) == dimension() + 1; }

private:
    static void validate_vertices(const std::vector<Vector>& vs) {
        if (vs.empty()) fail(ErrorKind::InvalidArgument, "polytope needs vertices");
        const auto d = vs.front().size();
        if (d < 1) fail(ErrorKind::InvalidArgument, "polytope dimension must be at least 1");
        for (const auto& v : vs) {
            if (v.size() != d) fail(ErrorKind::InvalidArgument, "polytope vertices differ in dimension");
            if (!all_finite(v)) fail(ErrorKind::InvalidArgument, "polytope vertices must be finite");
        }
        if (static_cast<Eigen::Index>(vs.size()) < d + 1)
            fail(ErrorKind::InvalidArgument, "polytope needs at least d+1 vertices to be full-dimensional");
        Eigen::MatrixXd diffs(d, static_cast<Eigen::Index>(vs.size()) - 1);
        for (std::size_t i = 1; i < vs.size(); ++i) diffs.col(static_cast<Eigen::Index>(i) - 1) = vs[i] - vs[0];
        Eigen::FullPivLU<Eigen::MatrixXd> lu(diffs);
        lu.setThreshold(1e-12);
        if (lu.rank() < d) fail(ErrorKind::InvalidArgument, "polytope vertices do not affinely span the space");
        if (static_cast<Eigen::Index>(vs.size()) == d + 1) return;
        for (std::size_t i = 0; i < vs.size(); ++i) {
            std::vector<Vector> others;
            for (std::size_t j = 0; j < vs.size(); ++j)
                if (j != i) others.push_back(vs[j]);
            if (hull_contains_point(vs[i], others, 1e-12))
                fail(ErrorKind::InvalidArgument, "vertex " + std::to_string(i) + " is not extreme");
        }
    }

    std::variant<Ball, VPolytope> shape_;
};

/// One member o + tau K of a family.
struct Homothet {
    Vector translation;
    double scale = 1.0;
};

/// The body K together with its positive homothets.
class Family {
public:
    Family(ConvexBody body, std::vector<Homothet> members) : body_(std::move(body)), members_(std::move(members)) {
        if (members_.empty()) fail(ErrorKind::InvalidArgument, "family needs at least one member");
        for (std::size_t i = 0; i < members_.size(); ++i) {
            const auto& m = members_[i];
            if (m.translation.size() != body_.dimension())
                fail(ErrorKind::InvalidArgument, "member " + std::to_string(i) + " has wrong dimension");
            if (!all_finite(m.translation) || !std::isfinite(m.scale))
                fail(ErrorKind::InvalidArgument, "member " + std::to_string(i) + " is not finite");
            if (!(m.scale > 0)) fail(ErrorKind::InvalidArgument, "member " + std::to_string(i) + " has scale <= 0");
        }
    }

    const ConvexBody& body() const { return body_; }
    const std::vector<Homothet>& members() const { return members_; }
    int dimension() const { return body_.dimension(); }
    std::size_t size() const { return members_.size(); }

    double total_scale() const {
        return std::accumulate(members_.begin(), members_.end(), 0.0,
                               [](double s, const Homothet& h) { return s + h.scale; });
    }

    /// Scale-weighted mean of the translations.
    Vector weighted_center() const {
        Vector o = Vector::Zero(dimension());
        for (const auto& m : members_) o += m.scale * m.translation;
        return o / total_scale();
    }

private:
    ConvexBody body_;
    std::vector<Homothet> members_;
};

inline void require_dimension(const Vector& v, int d, const char* what) {
    if (v.size() != d) fail(ErrorKind::InvalidArgument, std::string(what) + " has wrong dimension");
}

/// h_K(u) = max over x in K of <x, u>.
inline double support(const ConvexBody& body, const Vector& u) {
    require_dimension(u, body.dimension(), "direction");
    if (!(u.norm() > 0)) fail(ErrorKind::InvalidArgument, "support direction must be nonzero");
    if (body.is_ball()) {
        const auto& b = body.as_ball();
        return b.center.dot(u) + b.radius * u.norm();
    }
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& v : body.vertices()) best = std::max(best, v.dot(u));
    return best;
}

/// Orthogonal projection of o + tau K onto the line spanned by the unit vector u.
inline Interval project_interval(const Homothet& member, const ConvexBody& body, const Vector& u) {
    if (std::abs(u.norm() - 1.0) > 1e-9) fail(ErrorKind::InvalidArgument, "projection direction must be a unit vector");
    const double c = member.translation.dot(u);
    return {c - member.scale * support(body, -u), c + member.scale * support(body, u)};
}

inline std::vector<Vector> member_vertices(const Homothet& member, const ConvexBody& body) {
    std::vector<Vector> out;
    out.reserve(body.vertices().size());
    for (const auto& v : body.vertices()) out.push_back(member.translation + member.scale * v);
    return out;
}

namespace detail {

// Phase-one test for p = sum w_j v_j, sum w_j = total, w >= 0.
inline bool convex_combination_feasible(const Vector& p, const std::vector<Vector>& points, double total,
                                        double tol) {
    const auto d = p.size();
    const auto n = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd a(d + 1, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        a.block(0, j, d, 1) = points[static_cast<std::size_t>(j)];
        a(d, j) = 1.0;
    }
    Eigen::VectorXd b(d + 1);
    b.head(d) = p;
    b(d) = total;
    lp::Options opt;
    opt.feasibility_tol = tol;
    return lp::feasible(a, b, opt).status == lp::Status::Optimal;
}

} // namespace detail

/// Is p in the closed convex hull of `points`?
inline bool hull_contains_point(const Vector& p, const std::vector<Vector>& points, double tol) {
    if (points.empty()) fail(ErrorKind::InvalidArgument, "hull of an empty point set");
    for (const auto& q : points) require_dimension(q, static_cast<int>(p.size()), "hull point");
    return detail::convex_combination_feasible(p, points, 1.0, tol);
}

/// Is p in c K (c >= 0)?
inline bool member_scaled(const Vector& p, double c, const ConvexBody& body, double tol = kTolerance) {
    require_dimension(p, body.dimension(), "point");
    if (c < 0) fail(ErrorKind::InvalidArgument, "scale must be nonnegative");
    if (c == 0) return p.cwiseAbs().maxCoeff() <= tol;
    if (body.is_ball()) {
        const auto& b = body.as_ball();
        return (p - c * b.center).norm() <= c * b.radius + tol;
    }
    return detail::convex_combination_feasible(p, body.vertices(), c, tol);
}

/// Counter-clockwise order of a planar vertex set around its vertex average.
inline std::vector<Vector> order_polygon_2d(std::vector<Vector> vs) {
    Vector avg = Vector::Zero(2);
    for (const auto& v : vs) avg += v;
    avg /= static_cast<double>(vs.size());
    std::sort(vs.begin(), vs.end(), [&](const Vector& a, const Vector& b) {
        return std::atan2(a(1) - avg(1), a(0) - avg(0)) < std::atan2(b(1) - avg(1), b(0) - avg(0));
    });
    return vs;
}

inline double cross2(const Vector& a, const Vector& b) { return a(0) * b(1) - a(1) * b(0); }

/// Center of mass. Supported for balls, simplices and planar polygons.
inline Vector centroid(const ConvexBody& body) {
    if (body.is_ball()) return body.as_ball().center;
    const auto& vs = body.vertices();
    if (body.is_simplex()) {
        Vector g = Vector::Zero(body.dimension());
        for (const auto& v : vs) g += v;
        return g / static_cast<double>(vs.size());
    }
    if (body.dimension() != 2)
        fail(ErrorKind::UnsupportedShape, "centroid needs a ball, a simplex or a planar polygon");
    const auto poly = order_polygon_2d(vs);
    double area = 0.0;
    Vector acc = Vector::Zero(2);
    for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
        const double a = 0.5 * cross2(poly[i] - poly[0], poly[i + 1] - poly[0]);
        area += a;
        acc += a * (poly[0] + poly[i] + poly[i + 1]) / 3.0;
    }
    return acc / area;
}

/// Polar of a planar polygon containing the origin strictly inside. Each edge
/// line {x : <n, x> = 1} becomes the polar vertex n.
inline ConvexBody polar_polygon_2d(const ConvexBody& body) {
    if (!body.is_polytope() || body.dimension() != 2)
        fail(ErrorKind::InvalidArgument, "polar_polygon_2d needs a planar polygon");
    const auto poly = order_polygon_2d(body.vertices());
    std::vector<Vector> out;
    out.reserve(poly.size());
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vector& a = poly[i];
        const Vector& b = poly[(i + 1) % poly.size()];
        if (cross2(b - a, -a) <= kTolerance)
            fail(ErrorKind::InvalidArgument, "origin is not strictly inside the polygon");
        Eigen::Matrix2d m;
        m << a(0), a(1), b(0), b(1);
        const Eigen::Vector2d n = m.partialPivLu().solve(Eigen::Vector2d(1.0, 1.0));
        out.push_back(Vector(n));
    }
    return ConvexBody::polytope(std::move(out));
}

/// Translated copy of a body.
inline ConvexBody translated(const ConvexBody& body, const Vector& shift) {
    if (body.is_ball()) return ConvexBody::ball(body.as_ball().center + shift, body.as_ball().radius);
    std::vector<Vector> vs;
    for (const auto& v : body.vertices()) vs.push_back(v + shift);
    return ConvexBody::polytope(std::move(vs));
}

/// Scaled copy c K with c > 0.
inline ConvexBody scaled(const ConvexBody& body, double c) {
    if (body.is_ball()) return ConvexBody::ball(c * body.as_ball().center, c * body.as_ball().radius);
    std::vector<Vector> vs;
    for (const auto& v : body.vertices()) vs.push_back(c * v);
    return ConvexBody::polytope(std::move(vs));
}

/// Returns true and sets `center` when the body is centrally symmetric.
inline bool symmetry_center(const ConvexBody& body, Vector& center, double tol = kTolerance) {
    if (body.is_ball()) {
        center = body.as_ball().center;
        return true;
    }
    const auto& vs = body.vertices();
    Vector avg = Vector::Zero(body.dimension());
    for (const auto& v : vs) avg += v;
    avg /= static_cast<double>(vs.size());
    for (const auto& v : vs) {
        const Vector mirrored = 2.0 * avg - v;
        const bool found = std::any_of(vs.begin(), vs.end(), [&](const Vector& w) {
            return (w - mirrored).cwiseAbs().maxCoeff() <= tol;
        });
        if (!found) return false;
    }
    center = avg;
    return true;
}

inline double diameter(const ConvexBody& body) {
    if (body.is_ball()) return 2.0 * body.as_ball().radius;
    double best = 0.0;
    const auto& vs = body.vertices();
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j) best = std::max(best, (vs[i] - vs[j]).norm());
    return best;
}

} // namespace goodman
