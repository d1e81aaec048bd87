#pragma once

// Instance files: a JSON document holding the dimension, the body, the members
// and optional metadata. Reals are written as strings so that nothing is lost
// in transit. A string containing '/' or consisting only of digits is an exact
// rational ("3", "-7/2"); anything else is a double written in shortest
// round-trip form, always with a '.' or an exponent ("2.0", "1e-10").

#include "goodman/error.hpp"
#include "goodman/generators.hpp"
#include "goodman/geometry.hpp"
#include "goodman/interval_lemmas.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace goodman::io {

using Json = nlohmann::ordered_json;
using Number = std::variant<double, Rational>;

inline std::string format_double(double x) {
    if (!std::isfinite(x)) fail(ErrorKind::InvalidArgument, "cannot serialize a non-finite number");
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    std::string s(buf, res.ptr);
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

inline std::string format_rational(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

inline std::string format_number(const Number& n) {
    return std::holds_alternative<double>(n) ? format_double(std::get<double>(n)) : format_rational(std::get<Rational>(n));
}

inline double number_value(const Number& n) {
    return std::holds_alternative<double>(n) ? std::get<double>(n) : to_double(std::get<Rational>(n));
}

namespace detail {

inline bool is_integer_literal(std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    return !s.empty() && s.find_first_not_of("0123456789") == std::string_view::npos;
}

[[noreturn]] inline void parse_fail(const std::string& path, const std::string& message) {
    fail(ErrorKind::ParseError, path + ": " + message, path);
}

} // namespace detail

/// Parses a numeric token. JSON numbers are accepted too: integers become
/// exact rationals and floating literals doubles.
inline Number parse_number(const Json& node, const std::string& path) {
    if (node.is_number_integer()) {
        return node.is_number_unsigned() ? Rational(BigInt(node.get<std::uint64_t>()))
                                         : Rational(BigInt(node.get<std::int64_t>()));
    }
    if (node.is_number_float()) {
        const double x = node.get<double>();
        if (!std::isfinite(x)) detail::parse_fail(path, "number is not finite");
        return x;
    }
    if (!node.is_string()) detail::parse_fail(path, "expected a number or numeric string");
    const std::string s = node.get<std::string>();
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        const std::string_view p(s.data(), slash);
        const std::string_view q(s.data() + slash + 1, s.size() - slash - 1);
        if (!detail::is_integer_literal(p) || !detail::is_integer_literal(q) || q.front() == '-' || q.front() == '+')
            detail::parse_fail(path, "malformed rational \"" + s + "\"");
        const BigInt den{std::string(q)};
        if (den == 0) detail::parse_fail(path, "zero denominator in \"" + s + "\"");
        const std::string num_text(p.front() == '+' ? p.substr(1) : p);
        return Rational(BigInt(num_text), den);
    }
    if (detail::is_integer_literal(s)) return Rational(BigInt(s.front() == '+' ? s.substr(1) : s));
    double x = 0;
    const char* first = s.data();
    if (!s.empty() && s.front() == '+') ++first;
    const auto res = std::from_chars(first, s.data() + s.size(), x);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(x))
        detail::parse_fail(path, "malformed number \"" + s + "\"");
    return x;
}

struct BodyDescriptor {
    enum class Kind { Ball, Polytope };
    Kind kind = Kind::Ball;
    std::vector<Number> center; // ball
    Number radius = Rational(1);
    std::vector<std::vector<Number>> vertices; // polytope

    bool operator==(const BodyDescriptor&) const = default;
};

struct MemberRecord {
    std::vector<Number> translation;
    Number scale = Rational(1);

    bool operator==(const MemberRecord&) const = default;
};

struct Instance {
    int dimension = 0;
    BodyDescriptor body;
    std::vector<MemberRecord> members;
    Json metadata = Json::object();

    bool operator==(const Instance&) const = default;
};

inline Vector to_vector(const std::vector<Number>& xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) v(static_cast<Eigen::Index>(i)) = number_value(xs[i]);
    return v;
}

inline std::vector<Number> to_numbers(const Vector& v) {
    std::vector<Number> out;
    for (Eigen::Index i = 0; i < v.size(); ++i) out.emplace_back(v(i));
    return out;
}

inline ConvexBody body_of(const Instance& inst) {
    if (inst.body.kind == BodyDescriptor::Kind::Ball)
        return ConvexBody::ball(to_vector(inst.body.center), number_value(inst.body.radius));
    std::vector<Vector> vs;
    for (const auto& v : inst.body.vertices) vs.push_back(to_vector(v));
    return ConvexBody::polytope(std::move(vs));
}

inline Family family_of(const Instance& inst) {
    std::vector<Homothet> ms;
    for (const auto& m : inst.members) ms.push_back({to_vector(m.translation), number_value(m.scale)});
    return {body_of(inst), std::move(ms)};
}

inline Instance instance_of(const Family& family, Json metadata = Json::object()) {
    Instance out;
    out.dimension = family.dimension();
    const auto& body = family.body();
    if (body.is_ball()) {
        out.body.kind = BodyDescriptor::Kind::Ball;
        out.body.center = to_numbers(body.as_ball().center);
        out.body.radius = body.as_ball().radius;
    } else {
        out.body.kind = BodyDescriptor::Kind::Polytope;
        for (const auto& v : body.vertices()) out.body.vertices.push_back(to_numbers(v));
    }
    for (const auto& m : family.members()) out.members.push_back({to_numbers(m.translation), m.scale});
    out.metadata = std::move(metadata);
    return out;
}

/// The sharp simplex family with its exact integer and rational coordinates.
inline Instance instance_of(const SharpSimplexInstance& sharp, Json metadata) {
    Instance out;
    out.dimension = sharp.d;
    out.body.kind = BodyDescriptor::Kind::Polytope;
    for (const auto& v : sharp.body_vertices) out.body.vertices.emplace_back(v.begin(), v.end());
    for (const auto& m : sharp.exact_members)
        out.members.push_back({std::vector<Number>(m.translation.begin(), m.translation.end()), m.scale});
    out.metadata = std::move(metadata);
    return out;
}

/// Exact body vertices and members when the body is a simplex and every
/// coordinate is rational.
struct ExactSimplexData {
    std::vector<std::vector<Rational>> simplex;
    std::vector<std::pair<std::vector<Rational>, Rational>> members;
};

inline std::optional<ExactSimplexData> exact_simplex(const Instance& inst) {
    if (inst.body.kind != BodyDescriptor::Kind::Polytope ||
        static_cast<int>(inst.body.vertices.size()) != inst.dimension + 1)
        return std::nullopt;
    auto exact = [](const std::vector<Number>& xs) -> std::optional<std::vector<Rational>> {
        std::vector<Rational> out;
        for (const auto& x : xs) {
            if (!std::holds_alternative<Rational>(x)) return std::nullopt;
            out.push_back(std::get<Rational>(x));
        }
        return out;
    };
    ExactSimplexData out;
    for (const auto& v : inst.body.vertices) {
        auto r = exact(v);
        if (!r) return std::nullopt;
        out.simplex.push_back(std::move(*r));
    }
    for (const auto& m : inst.members) {
        auto t = exact(m.translation);
        if (!t || !std::holds_alternative<Rational>(m.scale)) return std::nullopt;
        out.members.emplace_back(std::move(*t), std::get<Rational>(m.scale));
    }
    return out;
}

namespace detail {

inline Json numbers_json(const std::vector<Number>& xs) {
    Json a = Json::array();
    for (const auto& x : xs) a.push_back(format_number(x));
    return a;
}

} // namespace detail

inline Json instance_json(const Instance& inst) {
    Json body;
    if (inst.body.kind == BodyDescriptor::Kind::Ball) {
        body["kind"] = "ball";
        body["center"] = detail::numbers_json(inst.body.center);
        body["radius"] = format_number(inst.body.radius);
    } else {
        body["kind"] = "polytope";
        body["vertices"] = Json::array();
        for (const auto& v : inst.body.vertices) body["vertices"].push_back(detail::numbers_json(v));
    }
    Json members = Json::array();
    for (const auto& m : inst.members) {
        Json j;
        j["translation"] = detail::numbers_json(m.translation);
        j["scale"] = format_number(m.scale);
        members.push_back(std::move(j));
    }
    Json doc;
    doc["dimension"] = inst.dimension;
    doc["body"] = std::move(body);
    doc["members"] = std::move(members);
    doc["metadata"] = inst.metadata;
    return doc;
}

/// Canonical text: two-space indentation, fixed key order, trailing newline.
inline std::string serialize_instance(const Instance& inst) { return instance_json(inst).dump(2) + "\n"; }

inline std::string serialize_instance(const Family& family) { return serialize_instance(instance_of(family)); }

struct ParseOptions {
    bool strict = true;                       // unknown fields are errors, otherwise warnings
    std::vector<std::string>* warnings = nullptr;
};

namespace detail {

class FieldChecker {
public:
    explicit FieldChecker(const ParseOptions& opts) : opts_(opts) {}

    void check(const Json& obj, const std::string& path, std::initializer_list<std::string_view> known) const {
        if (!obj.is_object()) parse_fail(path, "expected an object");
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            const bool ok = std::any_of(known.begin(), known.end(), [&](std::string_view k) { return k == it.key(); });
            if (ok) continue;
            const std::string where = path.empty() ? it.key() : path + "." + it.key();
            if (opts_.strict) parse_fail(where, "unknown field");
            if (opts_.warnings) opts_.warnings->push_back(where + ": unknown field ignored");
        }
    }

private:
    const ParseOptions& opts_;
};

inline const Json& required(const Json& obj, const std::string& key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) parse_fail(path.empty() ? key : path + "." + key, "missing field");
    return *it;
}

inline std::vector<Number> parse_point(const Json& node, int d, const std::string& path) {
    if (!node.is_array()) parse_fail(path, "expected an array of numbers");
    if (static_cast<int>(node.size()) != d)
        parse_fail(path, "has " + std::to_string(node.size()) + " coordinates, dimension is " + std::to_string(d));
    std::vector<Number> out;
    for (std::size_t i = 0; i < node.size(); ++i) out.push_back(parse_number(node[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

} // namespace detail

/// Parses and validates an instance document. Syntax errors carry the line and
/// column; schema errors name the offending field path, e.g. "members[2].scale".
inline Instance parse_instance(std::string_view text, const ParseOptions& opts = {}) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorKind::ParseError, std::string("malformed document: ") + e.what());
    }
    const detail::FieldChecker fields(opts);
    fields.check(doc, "", {"dimension", "body", "members", "metadata"});

    Instance inst;
    const Json& dim = detail::required(doc, "dimension", "");
    if (!dim.is_number_integer() || dim.get<long long>() < 1 || dim.get<long long>() > 1000)
        detail::parse_fail("dimension", "expected a positive integer");
    inst.dimension = dim.get<int>();
    const int d = inst.dimension;

    const Json& body = detail::required(doc, "body", "");
    if (!body.is_object()) detail::parse_fail("body", "expected an object");
    const Json& kind = detail::required(body, "kind", "body");
    if (kind == "ball") {
        fields.check(body, "body", {"kind", "center", "radius"});
        inst.body.kind = BodyDescriptor::Kind::Ball;
        inst.body.center = detail::parse_point(detail::required(body, "center", "body"), d, "body.center");
        inst.body.radius = parse_number(detail::required(body, "radius", "body"), "body.radius");
        if (!(number_value(inst.body.radius) > 0)) detail::parse_fail("body.radius", "radius must be positive");
    } else if (kind == "polytope") {
        fields.check(body, "body", {"kind", "vertices"});
        inst.body.kind = BodyDescriptor::Kind::Polytope;
        const Json& vs = detail::required(body, "vertices", "body");
        if (!vs.is_array()) detail::parse_fail("body.vertices", "expected an array of points");
        for (std::size_t i = 0; i < vs.size(); ++i)
            inst.body.vertices.push_back(detail::parse_point(vs[i], d, "body.vertices[" + std::to_string(i) + "]"));
    } else {
        detail::parse_fail("body.kind", "expected \"ball\" or \"polytope\"");
    }

    const Json& members = detail::required(doc, "members", "");
    if (!members.is_array() || members.empty()) detail::parse_fail("members", "expected a non-empty array");
    for (std::size_t i = 0; i < members.size(); ++i) {
        const std::string path = "members[" + std::to_string(i) + "]";
        fields.check(members[i], path, {"translation", "scale"});
        MemberRecord m;
        m.translation = detail::parse_point(detail::required(members[i], "translation", path), d, path + ".translation");
        m.scale = parse_number(detail::required(members[i], "scale", path), path + ".scale");
        if (!(number_value(m.scale) > 0))
            detail::parse_fail(path + ".scale", "member " + std::to_string(i) + " has scale <= 0");
        inst.members.push_back(std::move(m));
    }

    if (const auto it = doc.find("metadata"); it != doc.end()) {
        fields.check(*it, "metadata", {"generator", "seed", "theorem", "params", "description"});
        inst.metadata = *it;
    }

    try {
        (void)family_of(inst);
    } catch (const Error& e) {
        detail::parse_fail("body", e.what());
    }
    return inst;
}

inline Family parse_family(std::string_view text, const ParseOptions& opts = {}) {
    return family_of(parse_instance(text, opts));
}

/// Vectors in reports use the same string encoding as instance files.
inline Json vector_json(const Vector& v) { return detail::numbers_json(to_numbers(v)); }

inline Json homothet_json(const Homothet& h) {
    Json j;
    j["translation"] = vector_json(h.translation);
    j["scale"] = format_double(h.scale);
    return j;
}

} // namespace goodman::io
