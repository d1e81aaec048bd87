#pragma once

// Hyperplane conditions on a family, decided through one-dimensional
// projections: non-separability (every hyperplane meeting the hull of the
// union meets a member) and the depth-k condition (no hyperplane meets more
// than k member interiors).
//
// Projected endpoints are snapped onto a 1e-12 grid before the exact sweep.
// Contiguity snaps outward and depth snaps inward, so members that touch up to
// rounding count as touching and never as overlapping.

#include "goodman/error.hpp"
#include "goodman/geometry.hpp"
#include "goodman/interval_lemmas.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <type_traits>
#include <vector>

namespace goodman {

enum class VerdictStatus { Satisfied, Violated, SatisfiedProbabilistic };
enum class CheckMode { Exact2d, Restricted, Sampled };
enum class DirectionSource { FacetNormals, Critical2d, Sampled, Given };

inline std::string to_string(VerdictStatus s) {
    switch (s) {
    case VerdictStatus::Satisfied: return "satisfied";
    case VerdictStatus::Violated: return "violated";
    default: return "satisfied-probabilistic";
    }
}

inline std::string to_string(CheckMode m) {
    switch (m) {
    case CheckMode::Exact2d: return "exact-2d";
    case CheckMode::Restricted: return "restricted";
    default: return "sampled";
    }
}

struct DirectionSet {
    std::vector<Vector> directions;
    DirectionSource source = DirectionSource::Given;
    std::uint64_t seed = 0;

    DirectionSet() = default;
    DirectionSet(std::vector<Vector> dirs, DirectionSource src, std::uint64_t sd = 0)
        : directions(std::move(dirs)), source(src), seed(sd) {
        for (auto& u : directions) {
            if (std::abs(u.norm() - 1.0) > 1e-9) fail(ErrorKind::InvalidArgument, "direction set entries must be unit");
        }
    }
};

/// A hyperplane {x : <x, direction> = offset}.
struct HyperplaneWitness {
    Vector direction;
    double offset = 0.0;
};

struct SeparationVerdict {
    VerdictStatus status = VerdictStatus::Satisfied;
    std::optional<HyperplaneWitness> witness;
    int directions_tested = 0;
    CheckMode mode = CheckMode::Exact2d;
    int max_depth = 0; // depth checks only: largest depth seen over tested directions
    // Non-separability checks only: the closed members pass, but along
    // `degenerate_direction` the open members leave a gap, so the verdict
    // rests on members that merely touch.
    bool degenerate = false;
    std::optional<Vector> degenerate_direction;

    bool ok() const { return status != VerdictStatus::Violated; }
};

/// How the all-directions quantifier is discharged.
struct DirectionMode {
    CheckMode kind = CheckMode::Exact2d;
    DirectionSet directions;   // restricted
    int count = 4096;          // sampled
    std::uint64_t seed = 0;    // sampled

    static DirectionMode exact_2d() { return {}; }
    static DirectionMode restricted(DirectionSet set) {
        DirectionMode m;
        m.kind = CheckMode::Restricted;
        m.directions = std::move(set);
        return m;
    }
    static DirectionMode sampled(int count, std::uint64_t seed) {
        DirectionMode m;
        m.kind = CheckMode::Sampled;
        m.count = count;
        m.seed = seed;
        return m;
    }
};

namespace detail {

// Grid snapping. Below 1e6 in magnitude the sweep runs on 64-bit integers
// holding twice the number of 1e-12 grid units, so cell midpoints stay exact;
// beyond that it falls back to rationals.
inline constexpr double kGridScale = 1e12;
inline constexpr double kIntegerGridLimit = 1e6;

inline long long grid_units_twice(double x, GridRounding mode) {
    const long double scaled = static_cast<long double>(x) * kGridScale;
    const long double units = mode == GridRounding::Down ? std::floor(scaled) : std::ceil(scaled);
    return 2 * static_cast<long long>(units);
}

inline double from_grid_units_twice(long long v) {
    return static_cast<double>(static_cast<long double>(v) / (2.0L * kGridScale));
}

template <class Number>
Number snap_endpoint(double x, GridRounding mode) {
    if constexpr (std::is_same_v<Number, long long>) {
        return grid_units_twice(x, mode);
    } else {
        return round_to_grid(x, mode);
    }
}

template <class Number>
double endpoint_to_double(const Number& v) {
    if constexpr (std::is_same_v<Number, long long>) {
        return from_grid_units_twice(v);
    } else {
        return to_double(v);
    }
}

inline std::vector<Interval> raw_projections(const Family& family, const Vector& u) {
    std::vector<Interval> out;
    out.reserve(family.size());
    for (const auto& m : family.members()) out.push_back(project_interval(m, family.body(), u));
    return out;
}

inline bool fits_integer_grid(const std::vector<Interval>& ivs) {
    return std::all_of(ivs.begin(), ivs.end(), [](const Interval& iv) {
        return std::abs(iv.lo) < kIntegerGridLimit && std::abs(iv.hi) < kIntegerGridLimit;
    });
}

// Outward snapping keeps touching members touching; inward snapping drops
// slivers thinner than the grid, which have no interior at this resolution.
template <class Number>
std::vector<WeightedInterval<Number>> snapped(const std::vector<Interval>& ivs, bool outward) {
    std::vector<WeightedInterval<Number>> out;
    out.reserve(ivs.size());
    for (const auto& iv : ivs) {
        Number lo = snap_endpoint<Number>(iv.lo, outward ? GridRounding::Down : GridRounding::Up);
        Number hi = snap_endpoint<Number>(iv.hi, outward ? GridRounding::Up : GridRounding::Down);
        if (lo < hi) out.emplace_back(std::move(lo), std::move(hi));
    }
    return out;
}

template <class Number>
std::optional<double> gap_midpoint(const std::vector<Interval>& ivs) {
    const auto cont = union_is_contiguous(snapped<Number>(ivs, true));
    if (cont.contiguous) return std::nullopt;
    return endpoint_to_double<Number>((cont.gap->first + cont.gap->second) / 2);
}

template <class Number>
bool open_union_connected(const std::vector<Interval>& ivs) {
    auto sn = snapped<Number>(ivs, false);
    if (sn.size() != ivs.size()) return false; // a sliver has no interior
    std::sort(sn.begin(), sn.end(), [](const auto& a, const auto& b) { return a.lo() < b.lo(); });
    Number reach = sn.front().hi();
    for (std::size_t i = 1; i < sn.size(); ++i) {
        if (!(sn[i].lo() < reach)) return false;
        if (reach < sn[i].hi()) reach = sn[i].hi();
    }
    return true;
}

template <class Number>
std::pair<int, double> deepest_point(const std::vector<Interval>& ivs) {
    const auto sn = snapped<Number>(ivs, false);
    if (sn.empty()) return {0, 0.0};
    const auto r = max_open_depth(sn);
    return {r.depth, endpoint_to_double<Number>(r.witness)};
}

inline void require_unit(const Vector& u, int d) {
    require_dimension(u, d, "direction");
    if (std::abs(u.norm() - 1.0) > 1e-9) fail(ErrorKind::InvalidArgument, "direction must be a unit vector");
}

inline Vector angle_direction(double theta) { return vec({std::cos(theta), std::sin(theta)}); }

} // namespace detail

/// Whether the closed projections onto u have a connected union; if not, the
/// hyperplane through the midpoint of the leftmost gap.
inline std::optional<HyperplaneWitness> separating_hyperplane_in_direction(const Family& family, const Vector& u) {
    detail::require_unit(u, family.dimension());
    const auto ivs = detail::raw_projections(family, u);
    const auto mid = detail::fits_integer_grid(ivs) ? detail::gap_midpoint<long long>(ivs)
                                                    : detail::gap_midpoint<Rational>(ivs);
    if (!mid) return std::nullopt;
    return HyperplaneWitness{u, *mid};
}

inline bool nonseparable_in_direction(const Family& family, const Vector& u) {
    return !separating_hyperplane_in_direction(family, u).has_value();
}

/// Largest number of open projections onto u sharing a point, with that point.
inline std::pair<int, double> depth_with_witness(const Family& family, const Vector& u) {
    detail::require_unit(u, family.dimension());
    const auto ivs = detail::raw_projections(family, u);
    return detail::fits_integer_grid(ivs) ? detail::deepest_point<long long>(ivs)
                                          : detail::deepest_point<Rational>(ivs);
}

inline int depth_in_direction(const Family& family, const Vector& u) { return depth_with_witness(family, u).first; }

/// Every planar direction at which the order of projected endpoints can
/// change, followed by one direction inside each arc between consecutive
/// events. Sorted by angle in [0, 2pi).
inline DirectionSet critical_directions_2d(const Family& family) {
    if (family.dimension() != 2) fail(ErrorKind::UnsupportedDimension, "critical directions need a planar family");
    constexpr double two_pi = 2 * std::numbers::pi;
    std::vector<double> events;
    auto add = [&](double theta) {
        theta = std::fmod(theta, two_pi);
        if (theta < 0) theta += two_pi;
        events.push_back(theta);
    };
    const auto& members = family.members();
    if (family.body().is_ball()) {
        const auto& b = family.body().as_ball();
        for (std::size_t i = 0; i < members.size(); ++i) {
            for (std::size_t j = i + 1; j < members.size(); ++j) {
                const Vector ci = members[i].translation + members[i].scale * b.center;
                const Vector cj = members[j].translation + members[j].scale * b.center;
                const Vector delta = ci - cj;
                const double len = delta.norm();
                if (len == 0.0) continue;
                const double phi = std::atan2(delta(1), delta(0));
                const double ri = members[i].scale * b.radius;
                const double rj = members[j].scale * b.radius;
                // <delta, u(theta)> = len cos(theta - phi) = c
                for (double c : {ri + rj, -(ri + rj), ri - rj, rj - ri}) {
                    if (std::abs(c) > len) continue;
                    const double a = std::acos(c / len);
                    add(phi + a);
                    add(phi - a);
                }
            }
        }
    } else {
        std::vector<Vector> pts;
        for (const auto& m : members)
            for (const auto& v : member_vertices(m, family.body())) pts.push_back(v);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                const Vector e = pts[i] - pts[j];
                if (e.norm() < 1e-15) continue;
                // u orthogonal to e
                const double phi = std::atan2(e(0), -e(1));
                add(phi);
                add(phi + std::numbers::pi);
            }
        }
    }
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end(), [](double a, double b) { return b - a < 1e-14; }),
                 events.end());

    std::vector<double> angles = events;
    if (events.empty()) {
        angles.push_back(0.0);
    } else {
        for (std::size_t i = 0; i < events.size(); ++i) {
            const double next = i + 1 < events.size() ? events[i + 1] : events.front() + two_pi;
            angles.push_back(std::fmod(0.5 * (events[i] + next), two_pi));
        }
        std::sort(angles.begin(), angles.end());
    }
    std::vector<Vector> dirs;
    dirs.reserve(angles.size());
    for (double a : angles) dirs.push_back(detail::angle_direction(a));
    return {std::move(dirs), DirectionSource::Critical2d};
}

/// Pseudo-random unit vectors from a fixed stream per seed.
inline DirectionSet sampled_directions(int d, int count, std::uint64_t seed) {
    if (count < 1) fail(ErrorKind::InvalidArgument, "direction count must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<Vector> dirs;
    dirs.reserve(static_cast<std::size_t>(count));
    while (static_cast<int>(dirs.size()) < count) {
        Vector v(d);
        for (int i = 0; i < d; ++i) v(i) = n(rng);
        if (v.norm() > 1e-9) dirs.push_back(v.normalized());
    }
    return {std::move(dirs), DirectionSource::Sampled, seed};
}

/// Outer facet normals of a simplex (any dimension) or a polygon.
inline DirectionSet facet_normals(const ConvexBody& body) {
    if (!body.is_polytope()) fail(ErrorKind::UnsupportedShape, "facet normals need a polytope");
    const int d = body.dimension();
    std::vector<Vector> dirs;
    if (body.is_simplex()) {
        // rows of the inverse of [v_0 .. v_d; 1 .. 1] are the barycentric
        // coordinate functionals; their linear parts are inward facet normals
        Eigen::MatrixXd m(d + 1, d + 1);
        for (int j = 0; j <= d; ++j) {
            m.block(0, j, d, 1) = body.vertices()[static_cast<std::size_t>(j)];
            m(d, j) = 1.0;
        }
        const Eigen::MatrixXd inv = m.inverse();
        for (int j = 0; j <= d; ++j) dirs.push_back(-inv.block(j, 0, 1, d).transpose().normalized());
    } else if (d == 2) {
        const auto poly = order_polygon_2d(body.vertices());
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const Vector e = poly[(i + 1) % poly.size()] - poly[i];
            dirs.push_back(vec({e(1), -e(0)}).normalized());
        }
    } else {
        fail(ErrorKind::UnsupportedShape, "facet normals are available for simplices and polygons");
    }
    return {std::move(dirs), DirectionSource::FacetNormals};
}

namespace detail {

inline DirectionSet directions_for(const Family& family, const DirectionMode& mode) {
    switch (mode.kind) {
    case CheckMode::Exact2d:
        if (family.dimension() != 2) fail(ErrorKind::UnsupportedDimension, "exact-2d mode needs a planar family");
        return critical_directions_2d(family);
    case CheckMode::Restricted:
        for (const auto& u : mode.directions.directions) require_unit(u, family.dimension());
        return mode.directions;
    default: return sampled_directions(family.dimension(), mode.count, mode.seed);
    }
}

inline VerdictStatus passing_status(CheckMode kind) {
    return kind == CheckMode::Sampled ? VerdictStatus::SatisfiedProbabilistic : VerdictStatus::Satisfied;
}

} // namespace detail

/// Hadwiger's condition over the directions selected by `mode`.
inline SeparationVerdict check_nonseparable(const Family& family, const DirectionMode& mode) {
    const auto dirs = detail::directions_for(family, mode);
    SeparationVerdict v;
    v.mode = mode.kind;
    for (const auto& u : dirs.directions) {
        ++v.directions_tested;
        if (auto w = separating_hyperplane_in_direction(family, u)) {
            v.status = VerdictStatus::Violated;
            v.witness = std::move(w);
            return v;
        }
        if (!v.degenerate) {
            const auto ivs = detail::raw_projections(family, u);
            const bool open_ok = detail::fits_integer_grid(ivs) ? detail::open_union_connected<long long>(ivs)
                                                                : detail::open_union_connected<Rational>(ivs);
            if (!open_ok && family.size() > 1) {
                v.degenerate = true;
                v.degenerate_direction = u;
            }
        }
    }
    v.status = detail::passing_status(mode.kind);
    return v;
}

/// The depth-k condition over the directions selected by `mode`.
inline SeparationVerdict check_depth_at_most_k(const Family& family, int k, const DirectionMode& mode) {
    if (k < 1) fail(ErrorKind::InvalidArgument, "k must be positive");
    const auto dirs = detail::directions_for(family, mode);
    SeparationVerdict v;
    v.mode = mode.kind;
    for (const auto& u : dirs.directions) {
        ++v.directions_tested;
        const auto [depth, point] = depth_with_witness(family, u);
        v.max_depth = std::max(v.max_depth, depth);
        if (depth > k) {
            v.status = VerdictStatus::Violated;
            v.witness = HyperplaneWitness{u, point};
            return v;
        }
    }
    v.status = detail::passing_status(mode.kind);
    return v;
}

/// Independent re-check of a separation witness: the hyperplane meets the
/// hull of the union but misses every closed member.
inline bool witness_separates(const Family& family, const HyperplaneWitness& w) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& m : family.members()) {
        const Interval iv = project_interval(m, family.body(), w.direction);
        if (iv.contains(w.offset)) return false;
        lo = std::min(lo, iv.lo);
        hi = std::max(hi, iv.hi);
    }
    return lo < w.offset && w.offset < hi;
}

/// Number of open members met by the hyperplane of a depth witness.
inline int witness_depth(const Family& family, const HyperplaneWitness& w) {
    int count = 0;
    for (const auto& m : family.members()) {
        const Interval iv = project_interval(m, family.body(), w.direction);
        count += iv.lo < w.offset && w.offset < iv.hi;
    }
    return count;
}

} // namespace goodman
