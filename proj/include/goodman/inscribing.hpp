#pragma once

// The dual statement: for a centrally symmetric K and a family in which no
// hyperplane meets more than k member interiors, the homothet
// (sum tau_i / k) K placed at the weighted centre fits in the hull of the union.

#include "goodman/error.hpp"
#include "goodman/geometry.hpp"
#include "goodman/separability.hpp"

#include <numbers>
#include <string>
#include <vector>

namespace goodman {

enum class InscribeCheck { ExactVertex, SampledSupport };

inline std::string to_string(InscribeCheck m) {
    return m == InscribeCheck::ExactVertex ? "exact-vertex" : "sampled-support";
}

struct InscribedVerdict {
    bool verified = false;
    InscribeCheck mode = InscribeCheck::ExactVertex;
    int directions = 0;                                            // sampled-support only
    double min_support_slack = std::numeric_limits<double>::infinity(); // sampled-support only
};

struct InscribeResult {
    Homothet inscribed;
    int k = 1;
    bool verified = false;
    InscribeCheck mode = InscribeCheck::ExactVertex;
    InscribedVerdict verdict;
};

/// Well-spread unit vectors: evenly spaced angles in the plane, a Fibonacci
/// lattice on the sphere, seeded pseudo-random vectors otherwise.
inline std::vector<Vector> spread_directions(int d, int count) {
    if (count < 1) fail(ErrorKind::InvalidArgument, "direction count must be positive");
    std::vector<Vector> out;
    out.reserve(static_cast<std::size_t>(count));
    if (d == 2) {
        for (int i = 0; i < count; ++i) {
            const double th = 2 * std::numbers::pi * i / count;
            out.push_back(vec({std::cos(th), std::sin(th)}));
        }
    } else if (d == 3) {
        const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (int i = 0; i < count; ++i) {
            const double z = 1.0 - (2.0 * i + 1.0) / count;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            out.push_back(vec({r * std::cos(golden * i), r * std::sin(golden * i), z}));
        }
    } else {
        out = sampled_directions(d, count, 0).directions;
    }
    return out;
}

/// max_i h_{member i}(u) - h_{inscribed}(u).
inline double support_slack(const Homothet& inscribed, const Family& family, const Vector& u) {
    double reach = -std::numeric_limits<double>::infinity();
    for (const auto& m : family.members())
        reach = std::max(reach, m.translation.dot(u) + m.scale * support(family.body(), u));
    return reach - (inscribed.translation.dot(u) + inscribed.scale * support(family.body(), u));
}

/// Does inscribed ⊆ conv of the union? Polytope bodies are decided exactly on
/// the inscribed vertices; ball bodies by support dominance over `directions`
/// well-spread directions within 1e-7.
inline InscribedVerdict verify_inscribed(const Homothet& inscribed, const Family& family, int directions = 4096,
                                         double tol = kTolerance) {
    InscribedVerdict v;
    const auto& body = family.body();
    require_dimension(inscribed.translation, body.dimension(), "inscribed translation");
    if (body.is_polytope()) {
        v.mode = InscribeCheck::ExactVertex;
        std::vector<Vector> pts;
        for (const auto& m : family.members())
            for (const auto& x : member_vertices(m, body)) pts.push_back(x);
        v.verified = true;
        for (const auto& x : member_vertices(inscribed, body)) {
            if (!hull_contains_point(x, pts, tol)) {
                v.verified = false;
                break;
            }
        }
        return v;
    }
    v.mode = InscribeCheck::SampledSupport;
    v.directions = directions;
    for (const auto& u : spread_directions(body.dimension(), directions))
        v.min_support_slack = std::min(v.min_support_slack, support_slack(inscribed, family, u));
    v.verified = v.min_support_slack >= -1e-7;
    return v;
}

/// (sum tau_i / k) K centred at the weighted centre of the members.
inline InscribeResult inscribe_dual(const Family& family, int k, int directions = 4096) {
    if (k < 1) fail(ErrorKind::InvalidArgument, "k must be positive");
    Vector z;
    if (!symmetry_center(family.body(), z))
        fail(ErrorKind::WrongTheorem, "the inscribing theorem needs a centrally symmetric body");
    Vector centre = Vector::Zero(family.dimension());
    for (const auto& m : family.members()) centre += m.scale * (m.translation + m.scale * z);
    centre /= family.total_scale();

    InscribeResult out;
    out.k = k;
    out.inscribed.scale = family.total_scale() / k;
    out.inscribed.translation = centre - out.inscribed.scale * z;
    out.verdict = verify_inscribed(out.inscribed, family, directions);
    out.verified = out.verdict.verified;
    out.mode = out.verdict.mode;
    return out;
}

} // namespace goodman
