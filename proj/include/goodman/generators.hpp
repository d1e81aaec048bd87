#pragma once

// Instance generators: the sharp simplex families, touching chains and
// widely spaced rows of touching translates.

#include "goodman/asymmetry.hpp"
#include "goodman/error.hpp"
#include "goodman/geometry.hpp"
#include "goodman/interval_lemmas.hpp"
#include "goodman/separability.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace goodman {

/// A member with exact coordinates, kept alongside the floating-point family
/// so that integer constructions survive serialization unchanged.
struct ExactHomothet {
    std::vector<Rational> translation;
    Rational scale;
};

struct SharpSimplexInstance {
    int d = 0;
    int n_param = 0;
    long long side = 0;                       // K = {x >= 0, sum x <= side}
    std::vector<std::vector<long long>> corners; // b for each member
    std::vector<std::vector<Rational>> body_vertices;
    std::vector<ExactHomothet> exact_members;
    Rational exact_ratio;                     // side / (dN + 1)
    Family family;
};

namespace detail {

inline std::vector<Rational> to_rationals(const std::vector<long long>& xs) {
    return {xs.begin(), xs.end()};
}

inline Vector to_vector(const std::vector<Rational>& xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) v(static_cast<Eigen::Index>(i)) = to_double(xs[i]);
    return v;
}

} // namespace detail

/// Member i sits in the cell with lower corner b_j = (jN + i) mod (dN + 1);
/// each member is the lower-corner unit simplex {x >= b, sum (x - b) <= 1}.
inline SharpSimplexInstance gen_sharp_simplex(int d, int n) {
    if (d < 2) fail(ErrorKind::InvalidArgument, "d must be at least 2");
    if (n < 1) fail(ErrorKind::InvalidArgument, "N must be at least 1");
    const long long count = static_cast<long long>(d) * n + 1;
    const long long sum_bound = static_cast<long long>(d) * (d + 1) * n / 2;
    const long long side = sum_bound + 1;

    std::vector<std::vector<long long>> corners;
    for (long long i = 0; i < count; ++i) {
        std::vector<long long> b(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) b[static_cast<std::size_t>(j)] = (j * n + i) % count;
        corners.push_back(std::move(b));
    }

    // integer invariants
    for (int j = 0; j < d; ++j) {
        std::vector<long long> column;
        for (const auto& b : corners) column.push_back(b[static_cast<std::size_t>(j)]);
        std::sort(column.begin(), column.end());
        for (long long v = 0; v < count; ++v)
            if (column[static_cast<std::size_t>(v)] != v)
                fail(ErrorKind::InternalError, "coordinate " + std::to_string(j) + " does not range over 0..dN");
    }
    long long max_sum = 0;
    for (const auto& b : corners) {
        long long s = 0;
        for (long long x : b) s += x;
        if (s > sum_bound) fail(ErrorKind::InternalError, "member corner exceeds the sum bound");
        max_sum = std::max(max_sum, s);
    }
    if (max_sum != sum_bound) fail(ErrorKind::InternalError, "no member touches the slanted facet");

    std::vector<std::vector<Rational>> body_vertices;
    body_vertices.push_back(std::vector<Rational>(static_cast<std::size_t>(d), Rational(0)));
    for (int j = 0; j < d; ++j) {
        std::vector<Rational> v(static_cast<std::size_t>(d), Rational(0));
        v[static_cast<std::size_t>(j)] = side;
        body_vertices.push_back(std::move(v));
    }
    const Rational scale(1, side);
    std::vector<ExactHomothet> exact;
    for (const auto& b : corners) exact.push_back({detail::to_rationals(b), scale});

    std::vector<Vector> kv;
    for (const auto& v : body_vertices) kv.push_back(detail::to_vector(v));
    std::vector<Homothet> ms;
    for (const auto& m : exact) ms.push_back({detail::to_vector(m.translation), to_double(m.scale)});

    SharpSimplexInstance out{d,           n,     side, std::move(corners), std::move(body_vertices),
                             std::move(exact), Rational(side, count), Family(ConvexBody::polytope(kv), std::move(ms))};
    const auto v = check_nonseparable(out.family, DirectionMode::restricted(facet_normals(out.family.body())));
    if (!v.ok()) fail(ErrorKind::InternalError, "sharp family is separable by a facet-parallel hyperplane");
    return out;
}

/// Reserved back-off, towards overlap, from the exact touching distance.
inline constexpr double kTouchOverlap = 5e-11;

namespace detail {

// Largest s with o_a + tau_a K and o_a + base + s u + tau_b K still meeting,
// where base is a point of tau_a K - tau_b K. The difference body is a polytope
// (or ball) so the crossing comes from one LP instead of a tolerance-bound
// membership bisection.
inline double touching_distance(const ConvexBody& body, double tau_a, double tau_b, const Vector& base,
                                const Vector& u) {
    if (body.is_ball()) {
        const auto& b = body.as_ball();
        const Vector rel = base - (tau_a - tau_b) * b.center;
        const double r = (tau_a + tau_b) * b.radius;
        const double hb = rel.dot(u);
        return -hb + std::sqrt(std::max(hb * hb - (rel.squaredNorm() - r * r), 0.0));
    }
    std::vector<Vector> diffs;
    for (const auto& v : body.vertices())
        for (const auto& w : body.vertices()) diffs.push_back(tau_a * v - tau_b * w);
    const auto t = radial_in_hull(diffs, base, u);
    if (!t) fail(ErrorKind::InternalError, "touching distance LP failed");
    return *t;
}

// Smallest overlap, over the planar critical directions, between the
// projections of two members.
inline double min_projection_overlap(const ConvexBody& body, const Homothet& a, const Homothet& b) {
    const Family pair(body, {a, b});
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& u : critical_directions_2d(pair).directions) {
        const Interval ia = project_interval(a, body, u);
        const Interval ib = project_interval(b, body, u);
        worst = std::min(worst, std::min(ia.hi, ib.hi) - std::max(ia.lo, ib.lo));
    }
    return worst;
}

} // namespace detail

/// Homothets placed one after another, each touching its predecessor from a
/// pseudo-random direction (or from `direction` when given). Consecutive
/// members overlap by kTouchOverlap along the placement direction, so the
/// union is connected. The placement directions are appended to `placements`
/// when it is given.
inline Family gen_touching_chain(const ConvexBody& body, const std::vector<double>& scales, std::uint64_t seed,
                                 const std::optional<Vector>& direction = std::nullopt,
                                 std::vector<Vector>* placements = nullptr) {
    if (scales.empty()) fail(ErrorKind::InvalidArgument, "need at least one scale");
    for (double s : scales)
        if (!(s > 0) || !std::isfinite(s)) fail(ErrorKind::InvalidArgument, "scales must be positive");
    const int d = body.dimension();
    if (direction) {
        require_dimension(*direction, d, "direction");
        if (!(direction->norm() > 0)) fail(ErrorKind::InvalidArgument, "direction must be nonzero");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto draw = [&]() {
        Vector u(d);
        do {
            for (int i = 0; i < d; ++i) u(i) = normal(rng);
        } while (u.norm() < 1e-6);
        return Vector(u.normalized());
    };

    Vector g = Vector::Zero(d); // any point of K works as the alignment anchor
    if (body.is_ball()) {
        g = body.as_ball().center;
    } else {
        for (const auto& v : body.vertices()) g += v;
        g /= static_cast<double>(body.vertices().size());
    }
    std::vector<Homothet> members{{Vector::Zero(d), scales[0]}};
    for (std::size_t i = 1; i < scales.size(); ++i) {
        const Homothet& prev = members.back();
        const double ta = prev.scale;
        const double tb = scales[i];
        const Vector base = (ta - tb) * g; // tau_a g - tau_b g lies inside tau_a K - tau_b K
        Homothet next{};
        Vector used;
        for (int attempt = 0;; ++attempt) {
            const Vector u = direction ? Vector(direction->normalized()) : draw();
            const double s = detail::touching_distance(body, ta, tb, base, u);
            next = {prev.translation + base + std::max(s - kTouchOverlap, 0.0) * u, tb};
            used = u;
            if (d != 2 || direction || attempt >= 16) break;
            if (detail::min_projection_overlap(body, prev, next) >= 1e-11) break;
        }
        if (placements) placements->push_back(used);
        members.push_back(std::move(next));
    }
    return {body, std::move(members)};
}

inline Family gen_touching_chain(const ConvexBody& body, int n, double scale, std::uint64_t seed,
                                 const std::optional<Vector>& direction = std::nullopt) {
    if (n < 1) fail(ErrorKind::InvalidArgument, "n must be positive");
    return gen_touching_chain(body, std::vector<double>(static_cast<std::size_t>(n), scale), seed, direction);
}

namespace detail {

// Centre-to-centre offset along e1 at which two translates of a centrally
// symmetric body touch.
inline double touching_offset_e1(const ConvexBody& body, Vector& center) {
    if (!symmetry_center(body, center)) fail(ErrorKind::WrongTheorem, "row generator needs a symmetric body");
    return 2.0 * radial_scale(body, center, Vector::Unit(body.dimension(), 0));
}

} // namespace detail

/// `count` touching translates of a centrally symmetric body along e1.
inline Family gen_collinear_chain(const ConvexBody& body, int count) {
    if (count < 1) fail(ErrorKind::InvalidArgument, "count must be positive");
    Vector z;
    const double step = detail::touching_offset_e1(body, z);
    std::vector<Homothet> ms;
    for (int i = 0; i < count; ++i) ms.push_back({step * i * Vector::Unit(body.dimension(), 0), 1.0});
    return {body, std::move(ms)};
}

/// Rows of touching translates, stacked along e2 `row_gap` apart, for the
/// depth-k hypothesis. A hyperplane meeting three members of one row is nearly
/// parallel to the row and misses every other row, and a steeper one meets at
/// most two members per row, so the depth is at most max(per_row, 2 rows).
/// per_row = 1 gives k isolated translates; per_row >= 2 gives floor(k/2)
/// rows and needs per_row <= k.
inline Family gen_depth_k_grid(const ConvexBody& body, int k, int per_row, double row_gap) {
    if (k < 1) fail(ErrorKind::InvalidArgument, "k must be positive");
    if (per_row < 1) fail(ErrorKind::InvalidArgument, "per_row must be positive");
    if (body.dimension() < 2) fail(ErrorKind::UnsupportedDimension, "rows need dimension at least 2");
    if (per_row > 1 && per_row > k)
        fail(ErrorKind::PreconditionViolation,
             "a row of " + std::to_string(per_row) + " touching translates already has depth " +
                 std::to_string(per_row) + " > k=" + std::to_string(k));
    const double needed = 10.0 * per_row * diameter(body);
    if (!(row_gap >= needed))
        fail(ErrorKind::PreconditionViolation,
             "row_gap must be at least 10 * per_row * diameter = " + std::to_string(needed));
    const int rows = per_row == 1 ? k : k / 2;
    Vector z;
    const double step = detail::touching_offset_e1(body, z);
    const int d = body.dimension();
    std::vector<Homothet> ms;
    for (int r = 0; r < rows; ++r)
        for (int i = 0; i < per_row; ++i)
            ms.push_back({step * i * Vector::Unit(d, 0) + row_gap * r * Vector::Unit(d, 1), 1.0});
    return {body, std::move(ms)};
}

} // namespace goodman
