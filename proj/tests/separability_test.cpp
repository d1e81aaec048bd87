#include "goodman/generators.hpp"
#include "goodman/separability.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace goodman;
using namespace goodman::testing;

namespace {

Family disks(std::vector<Vector> centers, double r = 1.0) {
    std::vector<Homothet> ms;
    for (auto& c : centers) ms.push_back({std::move(c), r});
    return {ConvexBody::unit_ball(2), std::move(ms)};
}

Family four_disk_rows() { return disks({vec({0, 0}), vec({2, 0}), vec({0, 10}), vec({2, 10})}); }

// Floating-point brute force: largest gap between closed projections, maximized
// over many evenly spaced directions. Positive means some direction separates.
double brute_max_gap(const Family& f, int count) {
    double best = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < count; ++s) {
        const double th = std::numbers::pi * s / count; // u and -u give the same verdict
        const Vector u = vec({std::cos(th), std::sin(th)});
        std::vector<Interval> ivs;
        for (const auto& m : f.members()) ivs.push_back(project_interval(m, f.body(), u));
        std::sort(ivs.begin(), ivs.end(), [](auto& a, auto& b) { return a.lo < b.lo; });
        double reach = ivs.front().hi;
        double gap = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < ivs.size(); ++i) {
            gap = std::max(gap, ivs[i].lo - reach);
            reach = std::max(reach, ivs[i].hi);
        }
        best = std::max(best, gap);
    }
    return best;
}

Family random_disk_family(Rng& rng, int n) {
    std::vector<Homothet> ms;
    for (int i = 0; i < n; ++i) ms.push_back({vec({uniform(rng, -3, 3), uniform(rng, -3, 3)}), uniform(rng, 0.3, 1.5)});
    return {ConvexBody::unit_ball(2), ms};
}

} // namespace

TEST(NonseparableInDirection, Examples) {
    const auto touching = disks({vec({0, 0}), vec({2, 0})});
    EXPECT_TRUE(nonseparable_in_direction(touching, vec({1, 0})));
    EXPECT_TRUE(nonseparable_in_direction(touching, vec({0, 1})));
    const auto apart = disks({vec({0, 0}), vec({4, 0})});
    EXPECT_FALSE(nonseparable_in_direction(apart, vec({1, 0})));
    const auto w = separating_hyperplane_in_direction(apart, vec({1, 0}));
    ASSERT_TRUE(w);
    EXPECT_DOUBLE_EQ(w->offset, 2.0);
    EXPECT_THROW(nonseparable_in_direction(apart, vec({1, 1})), Error);
}

TEST(DepthInDirection, Examples) {
    EXPECT_EQ(depth_in_direction(disks({vec({0, 0}), vec({4, 0})}), vec({1, 0})), 1);
    EXPECT_EQ(depth_in_direction(disks({vec({1, 1}), vec({1, 1}), vec({1, 1})}), vec({0.6, 0.8})), 3);
    EXPECT_EQ(depth_in_direction(four_disk_rows(), vec({0, 1})), 2);
    // touching members never overlap in the open sense
    EXPECT_EQ(depth_in_direction(disks({vec({0, 0}), vec({2, 0}), vec({4, 0})}), vec({1, 0})), 1);
}

TEST(CriticalDirections, Examples) {
    const auto dirs = critical_directions_2d(disks({vec({0, 0}), vec({2, 0})}));
    EXPECT_EQ(dirs.source, DirectionSource::Critical2d);
    const bool has_vertical = std::any_of(dirs.directions.begin(), dirs.directions.end(),
                                          [](const Vector& u) { return near(u, vec({0, 1}), 1e-12); });
    EXPECT_TRUE(has_vertical);
    for (const auto& u : dirs.directions) EXPECT_NEAR(u.norm(), 1.0, 1e-12);

    const auto single = critical_directions_2d(disks({vec({3, 3})}));
    EXPECT_EQ(single.directions.size(), 1u);

    EXPECT_THROW(ConvexBody::polytope({vec({0, 0}), vec({1, 0})}), Error);
    EXPECT_THROW(critical_directions_2d(Family(ConvexBody::unit_ball(3), {{vec({0, 0, 0}), 1.0}})), Error);
}

TEST(CheckNonseparable, Examples) {
    const auto chain = disks({vec({0, 0}), vec({2, 0}), vec({4, 0})});
    EXPECT_EQ(check_nonseparable(chain, DirectionMode::exact_2d()).status, VerdictStatus::Satisfied);

    const auto apart = disks({vec({0, 0}), vec({4, 0})});
    const auto v = check_nonseparable(apart, DirectionMode::exact_2d());
    ASSERT_EQ(v.status, VerdictStatus::Violated);
    ASSERT_TRUE(v.witness);
    EXPECT_TRUE(near(v.witness->direction, vec({1, 0}), 1e-12));
    EXPECT_NEAR(v.witness->offset, 2.0, 1e-12);
    EXPECT_TRUE(witness_separates(apart, *v.witness));

    // the smallest sharp simplex family, restricted to the facet normals
    const auto k = ConvexBody::polytope({vec({0, 0}), vec({4, 0}), vec({0, 4})});
    const Family sharp(k, {{vec({0, 1}), 0.25}, {vec({1, 2}), 0.25}, {vec({2, 0}), 0.25}});
    const auto normals = facet_normals(k);
    ASSERT_EQ(normals.directions.size(), 3u);
    const auto r = check_nonseparable(sharp, DirectionMode::restricted(normals));
    EXPECT_EQ(r.status, VerdictStatus::Satisfied);
    EXPECT_EQ(r.directions_tested, 3);
}

TEST(CheckNonseparable, FlagsMembersThatOnlyTouch) {
    // exactly touching disks: closed members pass, open members split along e1
    const auto exact = disks({vec({0, 0}), vec({2, 0}), vec({4, 0})});
    const auto v = check_nonseparable(exact, DirectionMode::exact_2d());
    EXPECT_EQ(v.status, VerdictStatus::Satisfied);
    EXPECT_TRUE(v.degenerate);
    ASSERT_TRUE(v.degenerate_direction.has_value());
    EXPECT_NEAR(std::abs((*v.degenerate_direction)(0)), 1.0, 1e-9);

    EXPECT_FALSE(check_nonseparable(disks({vec({0, 0}), vec({1.5, 0})}), DirectionMode::exact_2d()).degenerate);
    EXPECT_FALSE(check_nonseparable(disks({vec({0, 0})}), DirectionMode::exact_2d()).degenerate);
    Rng rng(45);
    for (int trial = 0; trial < 20; ++trial) {
        const auto chain = gen_touching_chain(random_polygon(rng, 3 + trial % 4), 4, 1.0, rng());
        EXPECT_FALSE(check_nonseparable(chain, DirectionMode::exact_2d()).degenerate) << trial;
    }
}

TEST(CheckNonseparable, SampledModeIsLabelled) {
    const auto chain = Family(ConvexBody::unit_ball(3), {{vec({0, 0, 0}), 1.0}, {vec({0, 0, 2}), 1.0}});
    const auto v = check_nonseparable(chain, DirectionMode::sampled(500, 7));
    EXPECT_EQ(v.status, VerdictStatus::SatisfiedProbabilistic);
    EXPECT_EQ(v.directions_tested, 500);
    EXPECT_THROW(check_nonseparable(chain, DirectionMode::exact_2d()), Error);
}

TEST(FacetNormals, SimplexNormalsAreOutward) {
    Rng rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        const auto body = trial % 2 ? random_triangle(rng) : random_tetrahedron(rng);
        const Vector g = centroid(body);
        const auto normals = facet_normals(body);
        ASSERT_EQ(static_cast<int>(normals.directions.size()), body.dimension() + 1);
        for (const auto& u : normals.directions) {
            // d of the vertices attain the support value: u is a facet normal
            const double h = support(body, u);
            int on = 0;
            for (const auto& v : body.vertices()) on += std::abs(v.dot(u) - h) < 1e-9;
            EXPECT_EQ(on, body.dimension());
            EXPECT_LT(g.dot(u), h);
        }
    }
    EXPECT_EQ(facet_normals(square()).directions.size(), 4u);
}

TEST(CheckDepth, Examples) {
    for (int k = 1; k <= 5; ++k) {
        std::vector<Vector> cs;
        for (int i = 0; i < k; ++i) cs.push_back(vec({2.0 * i, 0}));
        EXPECT_EQ(check_depth_at_most_k(disks(cs), k, DirectionMode::exact_2d()).status, VerdictStatus::Satisfied)
            << k;
    }
    const auto overlap = disks({vec({0, 0}), vec({1, 0})});
    const auto v = check_depth_at_most_k(overlap, 1, DirectionMode::exact_2d());
    ASSERT_EQ(v.status, VerdictStatus::Violated);
    EXPECT_TRUE(near(v.witness->direction, vec({1, 0}), 1e-12));
    EXPECT_EQ(witness_depth(overlap, *v.witness), 2);
}

TEST(CheckDepth, FourDiskRowsReachDepthThree) {
    // A steep line through (1, 0) and (1.1, 1) crosses both disks of the bottom
    // row and, near x = 2, the top-right disk: two rows of two give depth 3.
    const auto f = four_disk_rows();
    const auto v = check_depth_at_most_k(f, 2, DirectionMode::exact_2d());
    ASSERT_EQ(v.status, VerdictStatus::Violated);
    EXPECT_EQ(witness_depth(f, *v.witness), 3);
    EXPECT_EQ(check_depth_at_most_k(f, 3, DirectionMode::exact_2d()).status, VerdictStatus::Satisfied);
    const Vector n = vec({10, -1}).normalized();
    EXPECT_EQ(witness_depth(f, {n, n.dot(vec({1, 0}))}), 3);
}

TEST(CheckNonseparable, ExactAgreesWithBruteForce) {
    Rng rng(42);
    int violated = 0, satisfied = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const auto f = random_disk_family(rng, 2 + trial % 2);
        const double gap = brute_max_gap(f, 20000);
        if (std::abs(gap) <= 1e-6) continue;
        const auto v = check_nonseparable(f, DirectionMode::exact_2d());
        EXPECT_EQ(v.status == VerdictStatus::Violated, gap > 0) << trial;
        if (v.witness) {
            EXPECT_TRUE(witness_separates(f, *v.witness));
        }
        (gap > 0 ? violated : satisfied) += 1;
    }
    EXPECT_GT(violated, 5);
    EXPECT_GT(satisfied, 5);
}

TEST(CheckNonseparable, ExactAgreesWithBruteForceOnPolygons) {
    Rng rng(43);
    for (int trial = 0; trial < 30; ++trial) {
        const auto body = random_polygon(rng, 3 + trial % 4);
        std::vector<Homothet> ms;
        for (int i = 0; i < 3; ++i) ms.push_back({vec({uniform(rng, -3, 3), uniform(rng, -3, 3)}), uniform(rng, 0.5, 1.5)});
        const Family f(body, ms);
        const double gap = brute_max_gap(f, 20000);
        if (std::abs(gap) <= 1e-6) continue;
        const auto v = check_nonseparable(f, DirectionMode::exact_2d());
        EXPECT_EQ(v.status == VerdictStatus::Violated, gap > 0) << trial;
        if (v.witness) {
            EXPECT_TRUE(witness_separates(f, *v.witness));
        }
    }
}

TEST(CheckNonseparable, DirectionSymmetry) {
    Rng rng(44);
    for (int trial = 0; trial < 50; ++trial) {
        const auto f = random_disk_family(rng, 3);
        const Vector u = random_unit(rng, 2);
        EXPECT_EQ(nonseparable_in_direction(f, u), nonseparable_in_direction(f, -u));
        EXPECT_EQ(depth_in_direction(f, u), depth_in_direction(f, -u));
    }
}

TEST(CheckNonseparable, RestrictionIsMonotone) {
    Rng rng(45);
    for (int trial = 0; trial < 50; ++trial) {
        const auto f = random_disk_family(rng, 3);
        if (check_nonseparable(f, DirectionMode::exact_2d()).status != VerdictStatus::Satisfied) continue;
        std::vector<Vector> dirs;
        for (int i = 0; i < 5; ++i) dirs.push_back(random_unit(rng, 2));
        EXPECT_EQ(check_nonseparable(f, DirectionMode::restricted({dirs, DirectionSource::Given})).status,
                  VerdictStatus::Satisfied);
    }
}

TEST(CheckDepth, ExactAgreesWithBruteForce) {
    Rng rng(46);
    for (int trial = 0; trial < 40; ++trial) {
        const auto f = random_disk_family(rng, 3);
        int brute = 0;
        for (int s = 0; s < 20000; ++s) {
            const double th = std::numbers::pi * s / 20000;
            brute = std::max(brute, depth_in_direction(f, vec({std::cos(th), std::sin(th)})));
        }
        const auto v = check_depth_at_most_k(f, 3, DirectionMode::exact_2d());
        // exact search can only find more than the sampled search
        EXPECT_GE(v.max_depth, brute) << trial;
        for (int k = 1; k <= 3; ++k) {
            const auto vk = check_depth_at_most_k(f, k, DirectionMode::exact_2d());
            if (vk.witness) {
                EXPECT_GT(witness_depth(f, *vk.witness), k);
            }
        }
    }
}
