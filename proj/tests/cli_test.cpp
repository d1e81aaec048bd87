#include "cli_app.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

using namespace goodman;
using namespace goodman::testing;
using goodman::io::Json;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args, const std::string& stdin_text = "") {
    std::istringstream in(stdin_text);
    std::ostringstream out, err;
    Run r;
    r.code = cli::run(std::move(args), in, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string golden_path(const std::string& name) { return std::string(GOODMAN_GOLDEN_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

Json without_timing(const std::string& text) {
    Json j = Json::parse(text);
    j.erase("timing_ms");
    return j;
}

Vector parse_vector(const Json& a) {
    std::vector<io::Number> xs;
    for (const auto& x : a) xs.push_back(io::parse_number(x, "report"));
    return io::to_vector(xs);
}

Homothet parse_homothet(const Json& j) {
    return {parse_vector(j["translation"]), io::number_value(io::parse_number(j["scale"], "report"))};
}

const std::vector<std::string> kGoldens{"two_disk_chain.json", "sharp_simplex_d2_n5.json", "depth2_grid.json",
                                        "separable_two_disks.json"};

} // namespace

TEST(NumberCodec, DoublesRoundTripBitExactly) {
    std::mt19937_64 rng(91);
    std::uniform_int_distribution<int> expo(-300, 300);
    std::normal_distribution<double> mant(0, 1);
    for (int i = 0; i < 20000; ++i) {
        const double x = mant(rng) * std::pow(10.0, expo(rng) / 10.0);
        const auto n = io::parse_number(io::format_double(x), "x");
        ASSERT_TRUE(std::holds_alternative<double>(n));
        EXPECT_EQ(std::get<double>(n), x);
    }
    EXPECT_EQ(io::format_double(2.0), "2.0");
    EXPECT_EQ(io::format_double(-0.0), "-0.0");
    EXPECT_EQ(io::format_double(1e-10), "1e-10");
}

TEST(NumberCodec, Rationals) {
    EXPECT_EQ(std::get<Rational>(io::parse_number("6/4", "x")), Rational(3, 2));
    EXPECT_EQ(std::get<Rational>(io::parse_number("-7", "x")), Rational(-7));
    EXPECT_EQ(std::get<Rational>(io::parse_number(12, "x")), Rational(12));
    EXPECT_EQ(io::format_rational(Rational(-16, 11)), "-16/11");
    EXPECT_EQ(io::format_rational(Rational(5)), "5");
    const Rational huge(BigInt("123456789012345678901234567890"), BigInt(7));
    EXPECT_EQ(std::get<Rational>(io::parse_number(io::format_rational(huge), "x")), huge);
    for (const char* bad : {"1/0", "1/-2", "abc", "1.5/2", "", "nan", "inf", "1e400", "2/", "--1"})
        EXPECT_THROW(io::parse_number(bad, "x"), Error) << bad;
}

TEST(ParseInstance, Examples) {
    const auto two = io::parse_family(slurp(golden_path("separable_two_disks.json")));
    EXPECT_EQ(two.size(), 2u);
    EXPECT_TRUE(two.body().is_ball());

    const auto sharp = gen_sharp_simplex(2, 1);
    const auto inst = io::instance_of(sharp, Json::object());
    EXPECT_EQ(io::parse_instance(io::serialize_instance(inst)), inst);

    const std::string negative =
        R"({"dimension":2,"body":{"kind":"ball","center":["0","0"],"radius":"1"},
            "members":[{"translation":["0","0"],"scale":"1"},{"translation":["3","0"],"scale":"-1"}]})";
    try {
        io::parse_instance(negative);
        FAIL() << "negative scale accepted";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ParseError);
        EXPECT_NE(std::string(e.what()).find("members[1].scale"), std::string::npos) << e.what();
    }
}

TEST(ParseInstance, Diagnostics) {
    auto message = [](const std::string& text) -> std::string {
        try {
            io::parse_instance(text);
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::ParseError);
            return e.what();
        }
        return "";
    };
    const std::string ball = R"("body":{"kind":"ball","center":["0","0"],"radius":"1"})";
    EXPECT_NE(message("{\"dimension\":2,\n" + ball + ",\n\"members\":[}").find("line 3"), std::string::npos);
    EXPECT_NE(message(R"({"dimension":2,)" + ball + R"(,"members":[{"translation":["0"],"scale":"1"}]})")
                  .find("members[0].translation"),
              std::string::npos);
    EXPECT_NE(message(R"({"dimension":2,)" + ball + R"(,"members":[{"translation":["0","x1"],"scale":"1"}]})")
                  .find("members[0].translation[1]"),
              std::string::npos);
    EXPECT_NE(message(R"({"dimension":2,"body":{"kind":"ball","center":["0","0"],"radius":"0"},"members":[]})")
                  .find("body.radius"),
              std::string::npos);
    EXPECT_NE(message(R"({"dimension":2,)" + ball + R"(,"members":[{"translation":["0","0"],"scale":"1","w":1}]})")
                  .find("members[0].w"),
              std::string::npos);
    EXPECT_NE(message(R"({"dimension":2,"body":{"kind":"polytope","vertices":[["0","0"],["1","1"],["2","2"]]},)"
                      R"("members":[{"translation":["0","0"],"scale":"1"}]})")
                  .find("body"),
              std::string::npos);

    std::vector<std::string> warnings;
    const auto lax = io::parse_instance(R"({"dimension":2,)" + ball +
                                            R"(,"extra":true,"members":[{"translation":["0","0"],"scale":"1"}]})",
                                        {false, &warnings});
    EXPECT_EQ(lax.members.size(), 1u);
    ASSERT_EQ(warnings.size(), 1u);
    EXPECT_NE(warnings[0].find("extra"), std::string::npos);
}

TEST(ParseInstance, RandomFamiliesRoundTrip) {
    Rng rng(92);
    for (int trial = 0; trial < 50; ++trial) {
        const ConvexBody body = trial % 2 ? ConvexBody::ball(random_unit(rng, 3), uniform(rng, 0.1, 3))
                                          : random_polygon(rng, 3 + trial % 6);
        const auto f = gen_touching_chain(body, 1 + trial % 7, uniform(rng, 0.1, 5), rng());
        const std::string text = io::serialize_instance(f);
        const auto back = io::parse_family(text);
        ASSERT_EQ(back.size(), f.size());
        for (std::size_t i = 0; i < f.size(); ++i) {
            EXPECT_EQ(back.members()[i].translation, f.members()[i].translation);
            EXPECT_EQ(back.members()[i].scale, f.members()[i].scale);
        }
        EXPECT_EQ(io::serialize_instance(back), text);
    }
}

TEST(Golden, RoundTripsAreByteStable) {
    for (const auto& name : kGoldens) {
        const std::string text = slurp(golden_path(name));
        ASSERT_FALSE(text.empty()) << name;
        EXPECT_EQ(io::serialize_instance(io::parse_instance(text)), text) << name;
    }
}

TEST(Golden, GeneratorsReproduceCommittedFiles) {
    EXPECT_EQ(run({"gen", "--kind", "chain", "--shape", "ball", "--n", "2", "--seed", "1"}).out,
              slurp(golden_path("two_disk_chain.json")));
    EXPECT_EQ(run({"gen", "--kind", "sharp-simplex", "--d", "2", "--N", "5"}).out,
              slurp(golden_path("sharp_simplex_d2_n5.json")));
    EXPECT_EQ(run({"gen", "--kind", "depth-grid", "--k", "2"}).out, slurp(golden_path("depth2_grid.json")));
}

TEST(Pipeline, SharpSimplexCoverReportsExactRatio) {
    const auto inst = run({"gen", "--kind", "sharp-simplex", "--d", "2", "--N", "5"});
    ASSERT_EQ(inst.code, 0);
    const auto a = run({"cover", "--theorem", "simplex"}, inst.out);
    ASSERT_EQ(a.code, cli::kExitOk) << a.err;
    const Json report = Json::parse(a.out);
    EXPECT_EQ(report["verification"]["verified"], true);
    EXPECT_EQ(report["tightness"]["ratio"], "16/11");
    EXPECT_EQ(report["tightness"]["exact"], true);
    EXPECT_EQ(report["hypothesis"]["mode"], "restricted");
    EXPECT_EQ(report["hypothesis"]["status"], "satisfied");

    const auto b = run({"cover", "--theorem", "simplex"}, inst.out);
    EXPECT_EQ(without_timing(a.out), without_timing(b.out));
    EXPECT_EQ(a.out.substr(0, a.out.find("\"timing_ms\"")),
              b.out.substr(0, b.out.find("\"timing_ms\""))); // byte-identical up to the timing field
}

TEST(Pipeline, SeparableDisksFailTheBallCover) {
    const auto r = run({"cover", "--theorem", "balls", golden_path("separable_two_disks.json")});
    EXPECT_EQ(r.code, cli::kExitVerification);
    const Json report = Json::parse(r.out);
    EXPECT_EQ(report["verification"]["verified"], false);
    EXPECT_EQ(report["status"], "verification-failed");
    ASSERT_FALSE(report["verification"]["uncovered"].empty());
    ASSERT_FALSE(report["hypothesis"]["witness"].is_null());

    const Family family = io::parse_family(slurp(golden_path("separable_two_disks.json")));
    const HyperplaneWitness w{parse_vector(report["hypothesis"]["witness"]["direction"]),
                              io::number_value(io::parse_number(report["hypothesis"]["witness"]["offset"], "w"))};
    EXPECT_TRUE(witness_separates(family, w));
    const Homothet cover = parse_homothet(report["construction"]["cover"]);
    for (const auto& u : report["verification"]["uncovered"]) {
        const Vector p = parse_vector(u["point"]);
        EXPECT_FALSE(member_scaled(p - cover.translation, cover.scale, family.body()));
        const auto& m = family.members()[u["member"].get<std::size_t>()];
        EXPECT_TRUE(member_scaled(p - m.translation, m.scale, family.body()));
    }
    EXPECT_EQ(without_timing(r.out),
              without_timing(run({"cover", "--theorem", "balls", golden_path("separable_two_disks.json")}).out));
}

TEST(Pipeline, RenderShowsElevenTrianglesInsideTheBody) {
    const auto inst = run({"gen", "--kind", "sharp-simplex", "--d", "2", "--N", "5"});
    const auto r = run({"render"}, inst.out);
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("<?xml", 0), 0u);
    std::size_t members = 0, bodies = 0;
    for (std::size_t pos = 0; (pos = r.out.find("class=\"member\"", pos)) != std::string::npos; ++pos) ++members;
    for (std::size_t pos = 0; (pos = r.out.find("<polygon class=\"body\"", pos)) != std::string::npos; ++pos) ++bodies;
    EXPECT_EQ(members, 11u);
    EXPECT_EQ(bodies, 1u);
    EXPECT_NE(r.out.find("points=\"0,0 16,0 0,-16\""), std::string::npos) << r.out;
    EXPECT_EQ(r.out, run({"render"}, inst.out).out);

    const auto overlay = run({"render", "--cover", "simplex", "--minimal", golden_path("sharp_simplex_d2_n5.json")});
    EXPECT_NE(overlay.out.find("class=\"cover\""), std::string::npos);
    EXPECT_NE(overlay.out.find("class=\"minimal\""), std::string::npos);
    const auto disks = run({"render", "--inscribe", "2", golden_path("depth2_grid.json")});
    EXPECT_NE(disks.out.find("<circle class=\"inscribed\""), std::string::npos);
}

TEST(Reports, ClaimsReverifyThroughTheLibrary) {
    for (const char* theorem : {"balls", "symmetric", "general", "simplex"}) {
        std::string instance;
        if (std::string(theorem) == "balls") instance = run({"gen", "--kind", "chain", "--n", "6", "--seed", "3",
                                                            "--scale-min", "0.5", "--scale-max", "2"}).out;
        else if (std::string(theorem) == "symmetric")
            instance = run({"gen", "--kind", "chain", "--shape", "cube", "--d", "3", "--n", "5", "--seed", "4"}).out;
        else if (std::string(theorem) == "general")
            instance = run({"gen", "--kind", "chain", "--shape", "simplex", "--n", "5", "--seed", "5"}).out;
        else
            instance = run({"gen", "--kind", "sharp-simplex", "--d", "3", "--N", "2"}).out;
        const auto r = run({"cover", "--theorem", theorem}, instance);
        ASSERT_EQ(r.code, 0) << theorem << r.err;
        const Json report = Json::parse(r.out);
        const Family family = io::parse_family(instance);
        const Homothet cover = parse_homothet(report["construction"]["cover"]);
        EXPECT_TRUE(verify_cover(family, cover)) << theorem;
        EXPECT_NEAR(cover.scale, io::number_value(io::parse_number(report["construction"]["factor"], "f")) *
                                     family.total_scale(),
                    1e-12);
        const double t_star = io::number_value(io::parse_number(report["tightness"]["minimal_scale"], "t"));
        EXPECT_TRUE(verify_cover(family, {parse_vector(report["tightness"]["minimal_translation"]), t_star}, 1e-7))
            << theorem;
        EXPECT_LE(t_star, cover.scale + 1e-9);
    }

    const auto ins = run({"inscribe", "--k", "2", golden_path("depth2_grid.json")});
    ASSERT_EQ(ins.code, 0);
    const Json report = Json::parse(ins.out);
    const Family grid = io::parse_family(slurp(golden_path("depth2_grid.json")));
    EXPECT_TRUE(verify_inscribed(parse_homothet(report["construction"]["inscribed"]), grid).verified);
}

TEST(ExitCodes, Contract) {
    EXPECT_EQ(run({"check", "/nonexistent/instance.json"}).code, cli::kExitIo);
    EXPECT_EQ(run({"check"}, "{ not json").code, cli::kExitIo);
    EXPECT_EQ(run({"cover", "--theorem", "balls", golden_path("sharp_simplex_d2_n5.json")}).code, cli::kExitHypothesis);
    EXPECT_NE(run({"cover", "--theorem", "nonsense"}, "").code, 0);

    // three touching disks in a row have depth 3
    const std::string row = io::serialize_instance(gen_collinear_chain(ConvexBody::unit_ball(2), 3));
    const auto deep = run({"check", "--k", "2"}, row);
    EXPECT_EQ(deep.code, cli::kExitHypothesis);
    const Json report = Json::parse(deep.out);
    const Family family = io::parse_family(row);
    const HyperplaneWitness w{parse_vector(report["hypothesis"]["witness"]["direction"]),
                              io::number_value(io::parse_number(report["hypothesis"]["witness"]["offset"], "w"))};
    EXPECT_GT(witness_depth(family, w), 2);
    EXPECT_EQ(run({"check", "--k", "3"}, row).code, cli::kExitOk);

    // with the depth hypothesis broken the radius-3/2 disk no longer fits the
    // width-2 hull, and verification failure outranks the hypothesis code
    const auto ins = run({"inscribe", "--k", "2"}, row);
    EXPECT_EQ(ins.code, cli::kExitVerification);
    EXPECT_EQ(Json::parse(ins.out)["hypothesis"]["status"], "violated");
    // two short rows have depth 3, yet the factor-1/2 disk still fits: exit 2
    const Family rows(ConvexBody::unit_ball(2),
                      {{vec({0, 0}), 1.0}, {vec({2, 0}), 1.0}, {vec({0, 10}), 1.0}, {vec({2, 10}), 1.0}});
    EXPECT_EQ(run({"inscribe", "--k", "2"}, io::serialize_instance(rows)).code, cli::kExitHypothesis);
    // a single disk meets k = 1 and verifies
    EXPECT_EQ(run({"inscribe", "--k", "1"}, io::serialize_instance(gen_collinear_chain(ConvexBody::unit_ball(2), 1))).code,
              cli::kExitOk);
    EXPECT_EQ(run({"check", "--mode", "restricted"}, row).code, cli::kExitError); // balls have no facets
    EXPECT_EQ(run({"check", "--mode", "restricted", golden_path("sharp_simplex_d2_n5.json")}).code, cli::kExitOk);
}

TEST(Cli, SigmaAndSampledChecksAreSeeded) {
    const auto s = run({"sigma", golden_path("sharp_simplex_d2_n5.json")});
    ASSERT_EQ(s.code, 0);
    EXPECT_NEAR(io::number_value(io::parse_number(Json::parse(s.out)["asymmetry"]["sigma"], "s")), 2.0, 1e-6);

    const std::string chain =
        run({"gen", "--kind", "chain", "--shape", "cross", "--d", "3", "--n", "4", "--seed", "8"}).out;
    const auto a = run({"--seed", "11", "--directions", "500", "check", "--mode", "sampled"}, chain);
    const auto b = run({"check", "--mode", "sampled", "--seed", "11", "--directions", "500"}, chain);
    EXPECT_EQ(without_timing(a.out), without_timing(b.out));
    const Json j = Json::parse(a.out);
    EXPECT_EQ(j["hypothesis"]["directions_tested"], 500);
    EXPECT_EQ(j["hypothesis"]["seed"], 11);
    EXPECT_EQ(j["hypothesis"]["status"], "satisfied-probabilistic");
}

TEST(Cli, OutputFile) {
    const std::string path = ::testing::TempDir() + "goodman_cli_out.json";
    const auto r = run({"gen", "--kind", "sharp-simplex", "--d", "2", "--N", "1", "-o", path});
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(io::parse_instance(slurp(path)), io::instance_of(gen_sharp_simplex(2, 1), io::parse_instance(slurp(path)).metadata));
    EXPECT_EQ(run({"gen", "--kind", "sharp-simplex", "-o", "/nonexistent/dir/x.json"}).code, cli::kExitIo);
}
