#include "oracle.hpp"

#include <ramcat/degrees.hpp>
#include <ramcat/generators.hpp>

#include <gtest/gtest.h>

using namespace ramcat;

namespace {

auto pools(std::vector<ObjectId> B, std::vector<ObjectId> C = {}, int k_max = 2) -> DegreePools
{
    return DegreePools{std::move(B), std::move(C), k_max};
}

auto sz(int n) -> ObjectId { return object_for_size(n); }

} // namespace

TEST(Degrees, LinearOrderPairIsRamsey)
{
    auto cat = generate({Family::lo, 6});
    auto d = degree_bounds(cat, sz(2), ColoringMode::morphism, pools({sz(3)}));
    ASSERT_TRUE(d.tight());
    EXPECT_EQ(*d.value(), 1);
    ASSERT_EQ(d.upper_witnesses.size(), 1u);
    EXPECT_EQ(d.upper_witnesses[0].C, sz(6));
}

TEST(Degrees, TwoSetInInjections)
{
    auto cat = generate({Family::inj, 4});
    auto m = degree_bounds(cat, sz(2), ColoringMode::morphism, pools({sz(2)}));
    auto s = degree_bounds(cat, sz(2), ColoringMode::subobject, pools({sz(2)}));
    EXPECT_EQ(m.value(), std::optional<int>(2));
    EXPECT_EQ(s.value(), std::optional<int>(1));
    auto bridge = verify_aut_bridge(cat, sz(2), m, s);
    EXPECT_EQ(bridge.status, ReportStatus::ok);
    EXPECT_EQ(bridge.aut_size, 2);
}

TEST(Degrees, ThreeSetPoolNeedsLargerUniverse)
{
    // With copies of a 3-set, the 2-set classes only become Ramsey once the universe
    // reaches 6 points.
    auto inj4 = generate({Family::inj, 4});
    auto inj6 = generate({Family::inj, 6});
    auto s4 = degree_bounds(inj4, sz(2), ColoringMode::subobject, pools({sz(3)}));
    auto s6 = degree_bounds(inj6, sz(2), ColoringMode::subobject, pools({sz(3)}));
    EXPECT_EQ(s4.value(), std::optional<int>(2));
    EXPECT_EQ(s6.value(), std::optional<int>(1));
    auto m6 = degree_bounds(inj6, sz(2), ColoringMode::morphism, pools({sz(3)}));
    EXPECT_EQ(m6.value(), std::optional<int>(2));
    EXPECT_EQ(verify_aut_bridge(inj6, sz(2), m6, s6).status, ReportStatus::ok);
}

TEST(Degrees, MatchBruteForceOracle)
{
    struct Case {
        UniverseSpec spec;
        ColoringMode mode;
        int k_max;
    };
    std::vector<Case> cases{{{Family::lo, 5}, ColoringMode::morphism, 2}, {{Family::inj, 3}, ColoringMode::morphism, 3},
        {{Family::inj, 3}, ColoringMode::subobject, 3}, {{Family::inj, 4}, ColoringMode::subobject, 2},
        {{Family::surj, 3}, ColoringMode::morphism, 2}};
    for (const auto& c : cases) {
        auto cat = generate(c.spec);
        bool sub = c.mode == ColoringMode::subobject;
        for (ObjectId A = 0; A < cat.object_count(); ++A)
            for (ObjectId B = 0; B < cat.object_count(); ++B) {
                if (cat.hom(A, B).empty())
                    continue;
                // keep brute force affordable
                if (cat.hom(A, sz(static_cast<int>(cat.object_count()))).size() > 12 && c.k_max > 2)
                    continue;
                auto d = degree_bounds(cat, A, c.mode, pools({B}, {}, c.k_max));
                auto expected = oracle::degree(cat, A, {B}, all_objects(cat), c.k_max, sub);
                EXPECT_EQ(d.upper, expected) << family_name(c.spec.family) << " A=" << A << " B=" << B;
                if (expected) {
                    EXPECT_TRUE(d.tight());
                }
                if (d.lower && d.upper) {
                    EXPECT_LE(*d.lower, *d.upper);
                }
            }
    }
}

TEST(Degrees, BridgeOnSmallObjects)
{
    auto inj = generate({Family::inj, 4});
    for (int n : {1, 2}) {
        // pools of sizes ≤ n + 1 fit inside the max-4 truncation
        std::vector<ObjectId> B;
        for (int b = n; b <= n + 1 && b <= 2; ++b)
            B.push_back(sz(b));
        auto m = degree_bounds(inj, sz(n), ColoringMode::morphism, pools(B));
        auto s = degree_bounds(inj, sz(n), ColoringMode::subobject, pools(B));
        auto r = verify_aut_bridge(inj, sz(n), m, s);
        EXPECT_EQ(r.status, ReportStatus::ok) << n << ": " << r.detail;
    }
    auto lo = generate({Family::lo, 6});
    for (int n : {1, 2, 3}) {
        auto m = degree_bounds(lo, sz(n), ColoringMode::morphism, pools({sz(n), sz(n + 1)}));
        auto s = degree_bounds(lo, sz(n), ColoringMode::subobject, pools({sz(n), sz(n + 1)}));
        auto r = verify_aut_bridge(lo, sz(n), m, s);
        EXPECT_EQ(r.status, ReportStatus::ok) << "lo" << n << ": " << r.detail;
        EXPECT_EQ(r.aut_size, 1);
        EXPECT_EQ(m.upper, s.upper);
    }
}

TEST(Degrees, BridgeNeedsTightBounds)
{
    auto inj = generate({Family::inj, 3});
    auto s = degree_bounds(inj, sz(2), ColoringMode::subobject, pools({sz(2)}));
    auto loose = s;
    loose.mode = ColoringMode::morphism;
    loose.lower.reset();
    EXPECT_EQ(verify_aut_bridge(inj, sz(2), loose, s).status, ReportStatus::inconclusive);
}

TEST(Degrees, AutLowerBound)
{
    auto inj = generate({Family::inj, 4});
    for (ObjectId A = 0; A < 3; ++A) {
        auto d = degree_bounds(inj, A, ColoringMode::morphism, pools({A}, {}, 3));
        auto status = check_aut_lower_bound(inj, d);
        EXPECT_NE(status, ReportStatus::violation);
        if (A < 2) {
            EXPECT_EQ(status, ReportStatus::ok);
        }
    }
}

TEST(Degrees, UniverseGrowthNeverRaisesUpper)
{
    for (auto family : {Family::lo, Family::inj}) {
        auto big = generate({family, 5});
        std::vector<ObjectId> small_universe{0, 1, 2, 3};
        for (ObjectId A = 0; A < 2; ++A)
            for (ObjectId B = A; B < 3; ++B) {
                auto narrow = degree_bounds(big, A, ColoringMode::morphism, pools({B}, small_universe));
                auto wide = degree_bounds(big, A, ColoringMode::morphism, pools({B}));
                ASSERT_TRUE(narrow.upper && wide.upper);
                EXPECT_LE(*wide.upper, *narrow.upper);
                // the truncation at 4 yields the same numbers as the narrowed universe
                auto cat4 = generate({family, 4});
                auto t4 = degree_bounds(cat4, A, ColoringMode::morphism, pools({B}));
                EXPECT_EQ(t4.upper, narrow.upper);
            }
    }
}

TEST(Degrees, Products)
{
    auto inj = generate({Family::inj, 3});
    auto lo = generate({Family::lo, 3});
    ProductPools pp;
    pp.first = pools({sz(2)});
    pp.second = pools({sz(1)});
    auto r = verify_product(inj, lo, sz(2), sz(1), pp);
    EXPECT_EQ(r.status, ReportStatus::ok) << r.detail;
    EXPECT_EQ(r.factor_product, std::optional<int>(2));

    // (lo2, lo2) needs a larger universe than the max-3 product, so it stays out of the pool
    std::vector<ObjectId> axis{product_object(lo, sz(1), sz(1)), product_object(lo, sz(1), sz(2)),
        product_object(lo, sz(2), sz(1))};
    auto lolo = verify_product(lo, lo, sz(1), sz(1), ProductPools{pools({sz(1), sz(2)}), pools({sz(1), sz(2)}), axis, 2});
    EXPECT_EQ(lolo.status, ReportStatus::ok) << lolo.detail;
    EXPECT_EQ(lolo.product.upper, std::optional<int>(1));

    auto unit = unit_category();
    auto with_unit = verify_product(inj, unit, sz(2), 0, ProductPools{pools({sz(2)}), pools({0}), {}, 2});
    EXPECT_EQ(with_unit.status, ReportStatus::ok);
    EXPECT_TRUE(with_unit.equality);
    auto direct = degree_bounds(inj, sz(2), ColoringMode::morphism, pools({sz(2)}));
    EXPECT_EQ(with_unit.product.upper, direct.upper);
}

TEST(Degrees, DualRoutesAgree)
{
    auto surj = generate({Family::surj, 3});
    for (ObjectId A = 0; A < 3; ++A)
        for (ObjectId B = 0; B < 3; ++B) {
            if (surj.hom(B, A).empty())
                continue;
            auto via_op = dual_degree_bounds(surj, A, ColoringMode::morphism, pools({B}));
            auto native = dual_degree_bounds_native(surj, A, ColoringMode::morphism, pools({B}));
            EXPECT_EQ(via_op.upper, native.upper);
            EXPECT_EQ(via_op.lower, native.lower);
            auto expected = oracle::degree(surj, A, {B}, all_objects(surj), 2, false, true);
            EXPECT_EQ(native.upper, expected);
        }
    // A one-object category with only the identity is self-dual.
    auto unit = unit_category();
    EXPECT_EQ(dual_degree_bounds(unit, 0, ColoringMode::morphism, pools({0})).upper,
        degree_bounds(unit, 0, ColoringMode::morphism, pools({0})).upper);
}

TEST(Degrees, Errors)
{
    auto cat = generate({Family::lo, 3});
    EXPECT_THROW((void)degree_bounds(cat, 7, ColoringMode::morphism, pools({0})), Error);
    EXPECT_THROW((void)degree_bounds(cat, 0, ColoringMode::morphism, pools({9})), Error);
    EXPECT_THROW((void)degree_bounds(cat, 0, ColoringMode::morphism, pools({0}, {}, 1)), Error);
    auto surj = generate({Family::surj, 3});
    EXPECT_THROW((void)degree_bounds(surj, 0, ColoringMode::subobject, pools({0})), Error);
}

TEST(Degrees, NoCopyMeansUnknownUpper)
{
    // B = 3 cannot be embedded anywhere in a universe of 1- and 2-element orders.
    auto cat = generate({Family::lo, 3});
    auto d = degree_bounds(cat, 0, ColoringMode::morphism, pools({2}, {0, 1}));
    EXPECT_FALSE(d.upper);
}
