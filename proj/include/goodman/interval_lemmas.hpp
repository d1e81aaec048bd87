#pragma once

// Exact one-dimensional segment lemmas and the endpoint sweeps they rely on.
//
// Conventions: contiguity treats segments as closed, depth counts open
// interiors. Both hold for any ordered field `Number`; the default is an
// exact rational.

#include "goodman/error.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace goodman {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline std::string to_string(const Rational& r) {
    std::ostringstream os;
    os << numerator(r) << '/' << denominator(r);
    return os.str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

enum class GridRounding { Nearest, Down, Up };

/// Rounds x onto the grid of multiples of `1 / scale` and returns it exactly.
inline Rational round_to_grid(double x, GridRounding mode, std::int64_t scale = 1'000'000'000'000LL) {
    if (!std::isfinite(x)) fail(ErrorKind::InvalidArgument, "cannot rationalize a non-finite value");
    auto pick = [mode](auto v) {
        switch (mode) {
        case GridRounding::Down: return std::floor(v);
        case GridRounding::Up: return std::ceil(v);
        default: return std::nearbyint(v);
        }
    };
    if (std::abs(x) < 1e6) {
        const long double units = pick(static_cast<long double>(x) * static_cast<long double>(scale));
        return Rational(BigInt(static_cast<long long>(units)), BigInt(scale));
    }
    // Large magnitudes: split off the integer part so the scaled fraction stays small.
    const double whole = std::floor(x);
    const long double frac_units =
        pick(static_cast<long double>(x - whole) * static_cast<long double>(scale));
    return Rational(BigInt(whole)) + Rational(BigInt(static_cast<long long>(frac_units)), BigInt(scale));
}

template <class Number = Rational>
class WeightedInterval {
public:
    WeightedInterval(Number lo, Number hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
        if (!(lo_ < hi_)) fail(ErrorKind::InvalidArgument, "interval must have positive length");
    }

    const Number& lo() const { return lo_; }
    const Number& hi() const { return hi_; }
    Number length() const { return hi_ - lo_; }
    Number midpoint() const { return (lo_ + hi_) / 2; }

    bool contains(const WeightedInterval& other) const { return lo_ <= other.lo_ && other.hi_ <= hi_; }
    bool operator==(const WeightedInterval&) const = default;

private:
    Number lo_;
    Number hi_;
};

template <class Number = Rational>
struct DepthResult {
    int depth = 0;
    Number witness{};
};

template <class Number = Rational>
struct Contiguity {
    bool contiguous = true;
    std::optional<std::pair<Number, Number>> gap;
};

template <class Number = Rational>
struct DepthProfile {
    std::vector<Number> breakpoints;
    std::vector<int> multiplicities;
};

namespace detail {

template <class Number>
struct Event {
    Number x;
    int delta;
};

template <class Number>
std::vector<Event<Number>> sorted_events(const std::vector<WeightedInterval<Number>>& intervals) {
    std::vector<Event<Number>> ev;
    ev.reserve(2 * intervals.size());
    for (const auto& iv : intervals) {
        ev.push_back({iv.lo(), +1});
        ev.push_back({iv.hi(), -1});
    }
    std::sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) { return a.x < b.x; });
    return ev;
}

template <class Number>
std::string describe(const Number& x) {
    if constexpr (std::is_same_v<Number, Rational>) {
        return to_string(x);
    } else {
        std::ostringstream os;
        os << x;
        return os.str();
    }
}

} // namespace detail

/// Subdivision of the line by all endpoints, with the number of open
/// interiors covering each cell.
template <class Number>
DepthProfile<Number> depth_profile(const std::vector<WeightedInterval<Number>>& intervals) {
    DepthProfile<Number> prof;
    const auto ev = detail::sorted_events(intervals);
    int depth = 0;
    for (std::size_t i = 0; i < ev.size();) {
        const Number x = ev[i].x;
        while (i < ev.size() && ev[i].x == x) depth += ev[i++].delta;
        prof.breakpoints.push_back(x);
        if (i < ev.size()) prof.multiplicities.push_back(depth);
    }
    return prof;
}

/// Largest number of open intervals sharing a point, and one such point.
template <class Number>
DepthResult<Number> max_open_depth(const std::vector<WeightedInterval<Number>>& intervals) {
    DepthResult<Number> best;
    const auto prof = depth_profile(intervals);
    for (std::size_t i = 0; i < prof.multiplicities.size(); ++i) {
        if (prof.multiplicities[i] > best.depth) {
            best.depth = prof.multiplicities[i];
            best.witness = (prof.breakpoints[i] + prof.breakpoints[i + 1]) / 2;
        }
    }
    return best;
}

/// Whether the union of the closed intervals is one segment; if not, the
/// leftmost maximal gap.
template <class Number>
Contiguity<Number> union_is_contiguous(const std::vector<WeightedInterval<Number>>& intervals) {
    Contiguity<Number> out;
    if (intervals.empty()) return out;
    std::vector<const WeightedInterval<Number>*> order;
    for (const auto& iv : intervals) order.push_back(&iv);
    std::sort(order.begin(), order.end(), [](auto a, auto b) { return a->lo() < b->lo(); });
    Number reach = order.front()->hi();
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (order[i]->lo() > reach) {
            out.contiguous = false;
            out.gap = std::make_pair(reach, order[i]->lo());
            return out;
        }
        if (order[i]->hi() > reach) reach = order[i]->hi();
    }
    return out;
}

namespace detail {

template <class Number>
std::pair<Number, Number> length_and_center(const std::vector<WeightedInterval<Number>>& intervals) {
    if (intervals.empty()) fail(ErrorKind::InvalidArgument, "need at least one interval");
    Number total{0};
    Number moment{0};
    for (const auto& iv : intervals) {
        total += iv.length();
        moment += iv.length() * iv.midpoint();
    }
    return {total, moment / total};
}

template <class Number>
WeightedInterval<Number> hull(const std::vector<WeightedInterval<Number>>& intervals) {
    Number lo = intervals.front().lo();
    Number hi = intervals.front().hi();
    for (const auto& iv : intervals) {
        if (iv.lo() < lo) lo = iv.lo();
        if (iv.hi() > hi) hi = iv.hi();
    }
    return {lo, hi};
}

} // namespace detail

/// Segment of length sum(l_i) centered at the length-weighted center of
/// mass. For a contiguous union it always contains the union; a failure of
/// that containment is reported as an internal error.
template <class Number>
WeightedInterval<Number> goodman_segment_cover(const std::vector<WeightedInterval<Number>>& intervals) {
    const auto cont = union_is_contiguous(intervals);
    if (!cont.contiguous)
        fail(ErrorKind::PreconditionViolation, "union of intervals is not contiguous",
             "gap (" + detail::describe(cont.gap->first) + ", " + detail::describe(cont.gap->second) + ")");
    const auto [total, center] = detail::length_and_center(intervals);
    WeightedInterval<Number> cover(center - total / 2, center + total / 2);
    if (!cover.contains(detail::hull(intervals)))
        fail(ErrorKind::InternalError, "segment cover misses part of the union");
    return cover;
}

/// Segment of length sum(l_i)/k centered at the center of mass. When no point
/// lies in more than k open interiors it fits inside the hull of the union.
template <class Number>
WeightedInterval<Number> dual_segment_fit(const std::vector<WeightedInterval<Number>>& intervals, int k) {
    if (k < 1) fail(ErrorKind::InvalidArgument, "k must be positive");
    const auto depth = max_open_depth(intervals);
    if (depth.depth > k)
        fail(ErrorKind::PreconditionViolation,
             "open depth " + std::to_string(depth.depth) + " exceeds k=" + std::to_string(k),
             "point " + detail::describe(depth.witness));
    const auto [total, center] = detail::length_and_center(intervals);
    const Number half = total / (2 * k);
    WeightedInterval<Number> fit(center - half, center + half);
    if (!detail::hull(intervals).contains(fit))
        fail(ErrorKind::InternalError, "fitted segment leaves the hull of the union");
    return fit;
}

} // namespace goodman
