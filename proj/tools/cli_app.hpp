#pragma once

// The `goodman` command line. Kept in a header so the test suite can drive it
// in-process with string streams.
//
// Exit codes: 0 success, 1 usage or library error, 2 hypothesis violated,
// 3 conclusion verification failed (takes precedence over 2), 4 I/O or parse
// error.

#include "goodman/goodman.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace goodman::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitHypothesis = 2;
inline constexpr int kExitVerification = 3;
inline constexpr int kExitIo = 4;

using io::Json;

struct IoFailure {
    std::string message;
};

struct Settings {
    std::uint64_t seed = 0;
    double tolerance = kTolerance;
    int directions = 4096;
    bool lax = false;
    std::string input;
    std::string output;
};

namespace detail {

inline std::string read_input(const Settings& s, std::istream& in) {
    if (s.input.empty() || s.input == "-") {
        return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    }
    std::ifstream f(s.input, std::ios::binary);
    if (!f) throw IoFailure{"cannot open " + s.input};
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline void write_output(const Settings& s, std::ostream& out, const std::string& text) {
    if (s.output.empty() || s.output == "-") {
        out << text;
        return;
    }
    std::ofstream f(s.output, std::ios::binary);
    if (!f || !(f << text)) throw IoFailure{"cannot write " + s.output};
}

inline io::Instance load(const Settings& s, std::istream& in, std::ostream& err) {
    std::vector<std::string> warnings;
    auto inst = io::parse_instance(read_input(s, in), {!s.lax, &warnings});
    for (const auto& w : warnings) err << "warning: " << w << "\n";
    return inst;
}

inline Json witness_json(const std::optional<HyperplaneWitness>& w) {
    if (!w) return nullptr;
    Json j;
    j["direction"] = io::vector_json(w->direction);
    j["offset"] = io::format_double(w->offset);
    return j;
}

inline Json verdict_json(const SeparationVerdict& v, const std::string& property, std::optional<int> k) {
    Json j;
    j["property"] = property;
    if (k) j["k"] = *k;
    j["status"] = to_string(v.status);
    j["mode"] = to_string(v.mode);
    j["directions_tested"] = v.directions_tested;
    if (k) j["max_depth"] = v.max_depth;
    j["witness"] = witness_json(v.witness);
    if (!k) {
        // members that only touch along some tested direction
        j["degenerate"] = v.degenerate;
        j["degenerate_direction"] = v.degenerate_direction ? io::vector_json(*v.degenerate_direction) : Json(nullptr);
    }
    return j;
}

// Exact in the plane, sampled otherwise.
inline DirectionMode default_mode(const Family& family, const Settings& s) {
    return family.dimension() == 2 ? DirectionMode::exact_2d() : DirectionMode::sampled(s.directions, s.seed);
}

inline DirectionMode parse_mode(const std::string& name, const Family& family, const Settings& s) {
    if (name.empty()) return default_mode(family, s);
    if (name == "exact2d") return DirectionMode::exact_2d();
    if (name == "restricted") return DirectionMode::restricted(facet_normals(family.body()));
    return DirectionMode::sampled(s.directions, s.seed);
}

// A point of the member lying outside the cover.
inline Vector uncovered_point(const Family& family, const Homothet& m, const Homothet& cover, double tol) {
    const auto& body = family.body();
    if (body.is_ball()) {
        const auto& b = body.as_ball();
        const Vector ci = m.translation + m.scale * b.center;
        const Vector c = cover.translation + cover.scale * b.center;
        Vector dir = ci - c;
        dir = dir.norm() > 0 ? Vector(dir.normalized()) : Vector(Vector::Unit(family.dimension(), 0));
        return ci + m.scale * b.radius * dir;
    }
    for (const auto& v : member_vertices(m, body))
        if (!member_scaled(v - cover.translation, cover.scale, body, tol)) return v;
    return m.translation;
}

inline CoverResult construct_cover(const Family& family, const std::string& theorem) {
    if (theorem == "balls") return cover_balls(family);
    if (theorem == "symmetric") return cover_symmetric(family);
    if (theorem == "general") return cover_general(family);
    return cover_simplex_facet_parallel(family);
}

inline Json tightness_json(const Family& family, const io::Instance& inst) {
    Json j;
    const auto minimal = minimal_cover(family);
    j["method"] = minimal.method;
    if (const auto exact = io::exact_simplex(inst); exact && family.body().is_simplex()) {
        const Rational t_star = minimal_cover_scale_exact(exact->simplex, exact->members);
        Rational total = 0;
        for (const auto& m : exact->members) total += m.second;
        const Rational ratio = t_star / total;
        j["exact"] = true;
        j["minimal_scale"] = io::format_rational(t_star);
        j["total_scale"] = io::format_rational(total);
        j["ratio"] = io::format_rational(ratio);
        j["ratio_value"] = io::format_double(to_double(ratio));
    } else {
        j["exact"] = false;
        j["minimal_scale"] = io::format_double(minimal.scale);
        j["total_scale"] = io::format_double(family.total_scale());
        j["ratio"] = io::format_double(minimal.scale / family.total_scale());
        j["ratio_value"] = j["ratio"];
    }
    j["minimal_translation"] = io::vector_json(minimal.translation);
    if (family.body().is_ball() && family.size() > 1) j["stationarity_gap"] = io::format_double(minimal.stationarity_gap);
    return j;
}

inline Json asymmetry_json(const AsymmetryResult& a) {
    Json j;
    j["sigma"] = io::format_double(a.sigma);
    j["upper"] = io::format_double(a.upper);
    j["center"] = io::vector_json(a.center);
    j["iterations"] = a.iterations;
    j["certified_gap"] = io::format_double(a.certified_gap);
    return j;
}

inline int finish(Json& report, bool hypothesis_ok, bool verified) {
    const int code = !verified ? kExitVerification : !hypothesis_ok ? kExitHypothesis : kExitOk;
    report["status"] = code == kExitOk ? "ok" : code == kExitHypothesis ? "hypothesis-violated" : "verification-failed";
    report["exit_code"] = code;
    return code;
}

using Clock = std::chrono::steady_clock;

inline void stamp(Json& report, Clock::time_point start) {
    report["timing_ms"] = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

inline int run_cover(const Settings& s, const std::string& theorem, bool tightness, std::istream& in, std::ostream& out,
                     std::ostream& err) {
    const auto start = Clock::now();
    const auto inst = load(s, in, err);
    const Family family = io::family_of(inst);

    const DirectionMode mode = theorem == "simplex" && family.body().is_simplex()
                                   ? DirectionMode::restricted(facet_normals(family.body()))
                                   : default_mode(family, s);
    const auto hypothesis = check_nonseparable(family, mode);
    const auto result = construct_cover(family, theorem);
    const bool verified = verify_cover(family, result.cover, s.tolerance);

    Json report;
    report["command"] = "cover";
    report["theorem"] = theorem;
    report["instance"] = {{"dimension", family.dimension()},
                          {"body", family.body().is_ball() ? "ball" : "polytope"},
                          {"members", family.size()}};
    report["hypothesis"] = verdict_json(hypothesis, "nonseparable", std::nullopt);

    Json construction;
    construction["cover"] = io::homothet_json(result.cover);
    construction["factor"] = io::format_double(result.factor);
    construction["normalization_offset"] = io::vector_json(result.normalization_offset);
    if (result.asymmetry) construction["asymmetry"] = asymmetry_json(*result.asymmetry);
    construction["warnings"] = result.warnings;
    report["construction"] = std::move(construction);

    Json verification;
    verification["verified"] = verified;
    verification["method"] = "erosion-membership";
    verification["tolerance"] = io::format_double(s.tolerance);
    if (family.body().is_ball()) verification["ball_slack"] = io::format_double(ball_cover_slack(family, result.cover));
    Json uncovered = Json::array();
    for (std::size_t i = 0; i < family.size(); ++i) {
        const auto& m = family.members()[i];
        if (verify_cover(Family(family.body(), {m}), result.cover, s.tolerance)) continue;
        uncovered.push_back({{"member", i},
                             {"point", io::vector_json(uncovered_point(family, m, result.cover, s.tolerance))}});
    }
    verification["uncovered"] = std::move(uncovered);
    report["verification"] = std::move(verification);
    if (tightness) report["tightness"] = tightness_json(family, inst);

    const int code = finish(report, hypothesis.ok(), verified);
    stamp(report, start);
    write_output(s, out, report.dump(2) + "\n");
    return code;
}

inline int run_inscribe(const Settings& s, int k, std::istream& in, std::ostream& out, std::ostream& err) {
    const auto start = Clock::now();
    const Family family = io::family_of(load(s, in, err));
    const auto hypothesis = check_depth_at_most_k(family, k, default_mode(family, s));
    auto result = inscribe_dual(family, k, s.directions);
    result.verdict = verify_inscribed(result.inscribed, family, s.directions, s.tolerance);

    Json report;
    report["command"] = "inscribe";
    report["theorem"] = "inscribe";
    report["k"] = k;
    report["instance"] = {{"dimension", family.dimension()},
                          {"body", family.body().is_ball() ? "ball" : "polytope"},
                          {"members", family.size()}};
    report["hypothesis"] = verdict_json(hypothesis, "depth-at-most-k", k);
    report["construction"] = {{"inscribed", io::homothet_json(result.inscribed)},
                              {"factor", io::format_rational(Rational(1, k))}};
    Json verification;
    verification["verified"] = result.verdict.verified;
    verification["mode"] = to_string(result.verdict.mode);
    if (result.verdict.mode == InscribeCheck::SampledSupport) {
        verification["directions"] = result.verdict.directions;
        verification["min_support_slack"] = io::format_double(result.verdict.min_support_slack);
    } else {
        verification["tolerance"] = io::format_double(s.tolerance);
    }
    report["verification"] = std::move(verification);

    const int code = finish(report, hypothesis.ok(), result.verdict.verified);
    stamp(report, start);
    write_output(s, out, report.dump(2) + "\n");
    return code;
}

inline int run_check(const Settings& s, const std::string& mode_name, std::optional<int> k, std::istream& in,
                     std::ostream& out, std::ostream& err) {
    const auto start = Clock::now();
    const Family family = io::family_of(load(s, in, err));
    const auto mode = parse_mode(mode_name, family, s);
    const auto v = k ? check_depth_at_most_k(family, *k, mode) : check_nonseparable(family, mode);
    Json report;
    report["command"] = "check";
    report["hypothesis"] = verdict_json(v, k ? "depth-at-most-k" : "nonseparable", k);
    if (mode.kind == CheckMode::Sampled) report["hypothesis"]["seed"] = s.seed;
    const int code = finish(report, v.ok(), true);
    stamp(report, start);
    write_output(s, out, report.dump(2) + "\n");
    return code;
}

inline int run_sigma(const Settings& s, std::istream& in, std::ostream& out, std::ostream& err) {
    const auto start = Clock::now();
    const Family family = io::family_of(load(s, in, err));
    Json report;
    report["command"] = "sigma";
    report["asymmetry"] = asymmetry_json(minkowski_sigma(family.body(), s.tolerance));
    stamp(report, start);
    write_output(s, out, report.dump(2) + "\n");
    return kExitOk;
}

struct GenParams {
    std::string kind;
    std::string shape = "ball";
    int d = 2;
    int big_n = 5; // sharp simplex N
    int n = 3;     // chain length
    double scale_min = 1.0;
    double scale_max = 1.0;
    int k = 2;
    int per_row = 1;
    std::optional<double> row_gap;
};

inline ConvexBody named_body(const std::string& shape, int d) {
    if (d < 1) fail(ErrorKind::InvalidArgument, "dimension must be positive");
    if (shape == "ball") return ConvexBody::unit_ball(d);
    std::vector<Vector> vs;
    if (shape == "simplex") {
        vs.push_back(Vector::Zero(d));
        for (int i = 0; i < d; ++i) vs.push_back(Vector::Unit(d, i));
    } else if (shape == "cube") {
        for (int mask = 0; mask < (1 << d); ++mask) {
            Vector v(d);
            for (int i = 0; i < d; ++i) v(i) = (mask >> i) & 1 ? 1.0 : -1.0;
            vs.push_back(v);
        }
    } else {
        for (int i = 0; i < d; ++i) {
            vs.push_back(Vector::Unit(d, i));
            vs.push_back(-Vector::Unit(d, i));
        }
    }
    return ConvexBody::polytope(std::move(vs));
}

inline int run_gen(const Settings& s, const GenParams& p, std::ostream& out) {
    std::string text;
    if (p.kind == "sharp-simplex") {
        const auto sharp = gen_sharp_simplex(p.d, p.big_n);
        Json meta;
        meta["generator"] = "sharp-simplex";
        meta["params"] = {{"d", p.d}, {"N", p.big_n}};
        meta["theorem"] = "simplex";
        text = io::serialize_instance(io::instance_of(sharp, std::move(meta)));
    } else if (p.kind == "chain") {
        if (!(p.scale_min > 0) || p.scale_max < p.scale_min)
            fail(ErrorKind::InvalidArgument, "need 0 < scale-min <= scale-max");
        const ConvexBody body = named_body(p.shape, p.d);
        std::mt19937_64 rng(s.seed);
        std::uniform_real_distribution<double> dist(p.scale_min, p.scale_max);
        std::vector<double> scales;
        for (int i = 0; i < p.n; ++i) scales.push_back(p.scale_min == p.scale_max ? p.scale_min : dist(rng));
        const Family f = gen_touching_chain(body, scales, s.seed);
        Json meta;
        meta["generator"] = "chain";
        meta["seed"] = s.seed;
        meta["params"] = {{"shape", p.shape},
                          {"d", p.d},
                          {"n", p.n},
                          {"scale_min", io::format_double(p.scale_min)},
                          {"scale_max", io::format_double(p.scale_max)}};
        meta["theorem"] = p.shape == "ball" ? "balls" : p.shape == "simplex" ? "general" : "symmetric";
        text = io::serialize_instance(io::instance_of(f, std::move(meta)));
    } else {
        const ConvexBody body = named_body(p.shape, p.d);
        const double gap = p.row_gap ? *p.row_gap : 10.0 * p.per_row * diameter(body);
        const Family f = gen_depth_k_grid(body, p.k, p.per_row, gap);
        Json meta;
        meta["generator"] = "depth-grid";
        meta["params"] = {{"shape", p.shape},
                          {"d", p.d},
                          {"k", p.k},
                          {"per_row", p.per_row},
                          {"row_gap", io::format_double(gap)}};
        meta["theorem"] = "inscribe";
        text = io::serialize_instance(io::instance_of(f, std::move(meta)));
    }
    write_output(s, out, text);
    return kExitOk;
}

struct RenderParams {
    std::string cover_theorem;
    std::optional<int> inscribe_k;
    bool minimal = false;
    bool no_body = false;
};

inline int run_render(const Settings& s, const RenderParams& p, std::istream& in, std::ostream& out,
                      std::ostream& err) {
    const Family family = io::family_of(load(s, in, err));
    std::vector<svg::Overlay> overlays;
    if (!p.cover_theorem.empty()) overlays.push_back({construct_cover(family, p.cover_theorem).cover, "cover"});
    if (p.minimal) {
        const auto m = minimal_cover(family);
        overlays.push_back({{m.translation, m.scale}, "minimal"});
    }
    if (p.inscribe_k) overlays.push_back({inscribe_dual(family, *p.inscribe_k, s.directions).inscribed, "inscribed"});
    svg::RenderOptions opts;
    opts.show_body = !p.no_body;
    write_output(s, out, svg::render(family, overlays, opts));
    return kExitOk;
}

} // namespace detail

/// Runs the command line given the arguments after the program name.
inline int run(std::vector<std::string> args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Covers, inscribed homothets and separability checks for families of homothets", "goodman"};
    app.require_subcommand(1);
    app.fallthrough();
    Settings s;
    app.add_option("--seed", s.seed, "Seed for sampled directions and generators")->capture_default_str();
    app.add_option("--tolerance", s.tolerance, "Membership tolerance")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--directions", s.directions, "Direction count for sampled checks")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_flag("--lax", s.lax, "Warn about unknown instance fields instead of rejecting them");
    app.add_option("-o,--output", s.output, "Write the result to a file instead of stdout");

    const std::vector<std::string> theorems{"balls", "symmetric", "general", "simplex"};

    auto* cover = app.add_subcommand("cover", "Construct and verify a cover of the family");
    std::string theorem;
    bool no_tightness = false;
    cover->add_option("--theorem", theorem, "Which covering theorem to apply")->required()->check(CLI::IsMember(theorems));
    cover->add_flag("--no-tightness", no_tightness, "Skip the minimal cover and the ratio T*/sum tau");
    cover->add_option("input", s.input, "Instance file (stdin when omitted)");

    auto* inscribe = app.add_subcommand("inscribe", "Inscribe (sum tau / k) K in the hull of the union");
    int k_inscribe = 1;
    inscribe->add_option("--k", k_inscribe, "Depth bound")->required()->check(CLI::PositiveNumber);
    inscribe->add_option("input", s.input, "Instance file (stdin when omitted)");

    auto* check = app.add_subcommand("check", "Check non-separability or the depth-k condition");
    std::string mode_name;
    std::optional<int> k_check;
    check->add_option("--mode", mode_name, "exact2d (default in the plane), restricted (facet normals) or sampled")
        ->check(CLI::IsMember({"exact2d", "restricted", "sampled"}));
    check->add_option("--k", k_check, "Check depth <= k instead of non-separability")->check(CLI::PositiveNumber);
    check->add_option("input", s.input, "Instance file (stdin when omitted)");

    auto* sigma = app.add_subcommand("sigma", "Minkowski asymmetry of the instance body");
    sigma->add_option("input", s.input, "Instance file (stdin when omitted)");

    auto* gen = app.add_subcommand("gen", "Write a generated instance");
    detail::GenParams gp;
    gen->add_option("--kind", gp.kind, "Generator")->required()->check(CLI::IsMember({"sharp-simplex", "chain", "depth-grid"}));
    gen->add_option("--shape", gp.shape, "Body for chain and depth-grid")
        ->capture_default_str()
        ->check(CLI::IsMember({"ball", "simplex", "cube", "cross"}));
    gen->add_option("--d", gp.d, "Dimension")->capture_default_str();
    gen->add_option("--N", gp.big_n, "Sharp simplex parameter N")->capture_default_str();
    gen->add_option("--n", gp.n, "Chain length")->capture_default_str()->check(CLI::PositiveNumber);
    gen->add_option("--scale-min", gp.scale_min, "Smallest chain scale")->capture_default_str();
    gen->add_option("--scale-max", gp.scale_max, "Largest chain scale")->capture_default_str();
    gen->add_option("--k", gp.k, "Depth bound for depth-grid")->capture_default_str();
    gen->add_option("--per-row", gp.per_row, "Translates per row for depth-grid")->capture_default_str();
    gen->add_option("--row-gap", gp.row_gap, "Row spacing (default 10 * per_row * diameter)");

    auto* render = app.add_subcommand("render", "Write an SVG picture of a planar instance");
    detail::RenderParams rp;
    render->add_option("--cover", rp.cover_theorem, "Overlay the cover from this theorem")->check(CLI::IsMember(theorems));
    render->add_option("--inscribe", rp.inscribe_k, "Overlay the inscribed homothet for this k")->check(CLI::PositiveNumber);
    render->add_flag("--minimal", rp.minimal, "Overlay the minimal cover");
    render->add_flag("--no-body", rp.no_body, "Do not draw K itself");
    render->add_option("input", s.input, "Instance file (stdin when omitted)");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*cover) return detail::run_cover(s, theorem, !no_tightness, in, out, err);
        if (*inscribe) return detail::run_inscribe(s, k_inscribe, in, out, err);
        if (*check) return detail::run_check(s, mode_name, k_check, in, out, err);
        if (*sigma) return detail::run_sigma(s, in, out, err);
        if (*gen) return detail::run_gen(s, gp, out);
        return detail::run_render(s, rp, in, out, err);
    } catch (const IoFailure& e) {
        err << "error: " << e.message << "\n";
        return kExitIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        if (e.kind() == ErrorKind::ParseError) return kExitIo;
        if (e.kind() == ErrorKind::WrongTheorem) return kExitHypothesis;
        return kExitError;
    }
}

} // namespace goodman::cli
