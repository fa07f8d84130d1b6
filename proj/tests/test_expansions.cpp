#include "oracle.hpp"

#include <ramcat/expansions.hpp>
#include <ramcat/generators.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <sstream>

using namespace ramcat;

namespace {

auto sz(int n) -> ObjectId { return object_for_size(n); }

// An upstairs category whose objects sit over given downstairs objects; hom(u, v) is a full
// copy of hom(over[u], over[v]) when linked(u, v) and empty otherwise. linked must be
// reflexive and transitive.
auto copies_over(const FiniteCategory& down, const std::vector<ObjectId>& over,
    const std::function<bool(ObjectId, ObjectId)>& linked) -> ExpansionFunctor
{
    CategoryBuilder b;
    for (ObjectId u = 0; u < over.size(); ++u)
        b.add_object("u" + std::to_string(u));
    std::map<std::tuple<ObjectId, ObjectId, MorphismId>, MorphismId> up_of;
    std::vector<MorphismId> mm;
    for (ObjectId u = 0; u < over.size(); ++u)
        for (ObjectId v = 0; v < over.size(); ++v)
            if (linked(u, v))
                for (auto f : down.hom(over[u], over[v])) {
                    up_of[{u, v, f}] = b.add_morphism(u, v, down.morphism(f).label);
                    mm.push_back(f);
                }
    for (const auto& [key, g] : up_of)
        for (const auto& [key2, f] : up_of) {
            auto [gu, gv, gd] = key;
            auto [fu, fv, fd] = key2;
            if (fv == gu)
                b.set_compose(g, f, up_of.at({fu, gv, down.compose(gd, fd)}));
        }
    return ExpansionFunctor(std::move(b).build(), down, over, mm);
}

auto all_hold(const ExpansionFunctor& U, const std::vector<ObjectId>& small = {}) -> bool
{
    auto unique = check_unique_restrictions(U);
    return check_functor(U).holds && check_reasonable(U).holds && unique.axiom.holds
        && check_precompact(U).axiom.holds && check_separates_points(U, unique.table, small).holds;
}

} // namespace

TEST(Expansions, ForgetOrderSatisfiesAxioms)
{
    for (int max = 1; max <= 4; ++max) {
        auto U = forgetful_lo_to_inj(max);
        EXPECT_TRUE(validate(U.upstairs()).valid());
        EXPECT_TRUE(all_hold(U)) << max;
        auto unique = check_unique_restrictions(U);
        EXPECT_TRUE(unique.table.complete());
        EXPECT_TRUE(check_restriction_laws(U, unique.table).holds);
        EXPECT_TRUE(check_disjoint_union(U).holds);
        EXPECT_TRUE(check_aut_decomposition(U).holds);
        auto pc = check_precompact(U);
        for (auto [a, n] : pc.fiber_sizes)
            EXPECT_EQ(n, oracle::falling(static_cast<int>(a) + 1, static_cast<int>(a) + 1));
    }
}

TEST(Expansions, IdentityExpansionIsTrivial)
{
    auto cat = generate({Family::inj, 3});
    auto U = identity_expansion(cat);
    EXPECT_TRUE(all_hold(U));
    auto unique = check_unique_restrictions(U);
    EXPECT_TRUE(check_restriction_laws(U, unique.table).holds);
    EXPECT_TRUE(check_disjoint_union(U).holds);
    EXPECT_EQ(check_expansion_property(U).status, ReportStatus::ok);
    for (ObjectId a = 0; a < cat.object_count(); ++a)
        EXPECT_EQ(iso_class_in_fiber(U, a), std::vector<ObjectId>{a});
}

TEST(Expansions, RestrictionMatchesPulledBackOrder)
{
    // The restriction of an order along an injection e is the order induced on the domain.
    auto oe = forgetful_lo_to_inj_with_orders(3);
    const auto& U = oe.functor;
    auto down = generate_with_images({Family::inj, 3});
    RestrictionTable table(U);
    for (ObjectId b = 0; b < U.upstairs().object_count(); ++b)
        for (auto e : down.category.arrows_into(U.map_object(b))) {
            const auto& img = down.images[e];
            std::vector<int> rank(oe.orders[b].size());
            for (std::size_t i = 0; i < rank.size(); ++i)
                rank[oe.orders[b][i]] = static_cast<int>(i);
            Tuple induced(img.size());
            std::iota(induced.begin(), induced.end(), 0);
            std::sort(induced.begin(), induced.end(), [&](int x, int y) { return rank[img[x]] < rank[img[y]]; });
            auto a = restrict(table, b, e);
            EXPECT_EQ(oe.orders[a], induced);
        }
}

TEST(Expansions, PrunedFiberIsNotReasonable)
{
    auto U = forgetful_lo_to_inj(3);
    std::vector<ObjectId> keep;
    for (ObjectId a = 0; a < U.upstairs().object_count(); ++a)
        if (a != U.fiber(sz(2)).back())
            keep.push_back(a);
    auto pruned = restrict_upstairs(U, keep, false);
    EXPECT_FALSE(check_reasonable(pruned).holds);
    EXPECT_TRUE(check_functor(pruned).holds);
}

TEST(Expansions, ConnectedDuplicateBreaksUniqueness)
{
    auto down = generate({Family::inj, 2});
    auto U = copies_over(down, {sz(1), sz(2), sz(2)}, [](ObjectId, ObjectId) { return true; });
    EXPECT_TRUE(validate(U.upstairs()).valid());
    EXPECT_TRUE(check_functor(U).holds);
    auto unique = check_unique_restrictions(U);
    EXPECT_FALSE(unique.axiom.holds);
    EXPECT_FALSE(unique.table.complete());
    EXPECT_EQ(unique.table.multiplicity(1, down.identity(sz(2))), 2u);
    EXPECT_THROW((void)restrict(unique.table, 1, down.identity(sz(2))), Error);
    EXPECT_FALSE(check_restriction_laws(U, unique.table).holds);
    EXPECT_FALSE(check_disjoint_union(U).holds);
}

TEST(Expansions, DisconnectedDuplicateIsNotSeparated)
{
    auto down = generate({Family::inj, 2});
    auto U = copies_over(down, {sz(1), sz(2), sz(2)}, [](ObjectId u, ObjectId v) { return u == v || u == 0; });
    EXPECT_TRUE(validate(U.upstairs()).valid());
    EXPECT_TRUE(check_reasonable(U).holds);
    auto unique = check_unique_restrictions(U);
    EXPECT_TRUE(unique.axiom.holds);
    EXPECT_FALSE(check_separates_points(U, unique.table, {sz(1)}).holds);
    EXPECT_TRUE(check_separates_points(U, unique.table).holds);
    // each copy of the 2-set misses the other, so no B can receive both
    EXPECT_EQ(check_expansion_property(U).status, ReportStatus::violation);
}

TEST(Expansions, ColoringExpansionWithOneColorIsIdentityLike)
{
    auto base = generate({Family::lo, 2});
    auto ce = build_coloring_expansion({base, {sz(1), sz(2)}, {{sz(1), 1}, {sz(2), 1}}});
    const auto& U = ce.functor;
    ASSERT_EQ(U.upstairs().object_count(), base.object_count());
    for (ObjectId a = 0; a < base.object_count(); ++a)
        for (ObjectId b = 0; b < base.object_count(); ++b)
            EXPECT_EQ(U.upstairs().hom(U.fiber(a)[0], U.fiber(b)[0]).size(), base.hom(a, b).size());
    EXPECT_TRUE(all_hold(U));
}

TEST(Expansions, ColoringExpansionFiberCounts)
{
    auto base = generate({Family::inj, 2});
    std::vector<ObjectId> small{sz(1), sz(2)};
    std::map<ObjectId, int> degrees{{sz(1), 1}, {sz(2), 2}};
    auto ce = build_coloring_expansion({base, small, degrees});
    const auto& U = ce.functor;
    EXPECT_TRUE(validate(U.upstairs()).valid());
    for (ObjectId c = 0; c < base.object_count(); ++c) {
        double expected = 1;
        for (auto x : small)
            expected *= std::pow(degrees[x], static_cast<double>(base.hom(x, c).size()));
        EXPECT_EQ(static_cast<double>(U.fiber(c).size()), expected);
    }
    EXPECT_EQ(U.fiber(sz(1)).size(), 1u);
    EXPECT_EQ(U.fiber(sz(2)).size(), 4u);
    EXPECT_TRUE(all_hold(U, small));
    auto unique = check_unique_restrictions(U);
    EXPECT_TRUE(check_restriction_laws(U, unique.table).holds);
    EXPECT_TRUE(check_disjoint_union(U).holds);
    // morphisms are exactly the color-preserving base morphisms
    for (const auto& u : U.upstairs().morphisms()) {
        auto f = U.map_morphism(u.id);
        if (base.dom(f) != sz(2))
            continue;
        const auto& src = ce.theta[u.dom].at(sz(2));
        const auto& dst = ce.theta[u.cod].at(sz(2));
        auto h = base.hom(sz(2), sz(2));
        for (std::size_t i = 0; i < h.size(); ++i)
            EXPECT_EQ(dst[base.hom_position(base.compose(f, h[i]))], src[i]);
    }
}

TEST(Expansions, ColoringExpansionErrors)
{
    auto base = generate({Family::inj, 3});
    EXPECT_THROW((void)build_coloring_expansion({base, {sz(1)}, {{sz(1), 0}}}), Error);
    EXPECT_THROW((void)build_coloring_expansion({base, {sz(1), sz(2)}, {{sz(1), 3}, {sz(2), 3}}}, 50), Error);
}

TEST(Expansions, MinExpansions)
{
    auto base = generate({Family::inj, 2});
    auto ce = build_coloring_expansion({base, {sz(1), sz(2)}, {{sz(1), 1}, {sz(2), 2}}});
    auto r = check_min_expansions(ce, sz(2), 2);
    EXPECT_EQ(r.status, ReportStatus::ok) << r.detail;
    EXPECT_EQ(r.distinct, 2u);
    auto one = check_min_expansions(ce, sz(1), 1);
    EXPECT_EQ(one.status, ReportStatus::ok);
    EXPECT_EQ(one.distinct, 1u);
    // a single color on the 1-set can never be surjective onto two colors
    auto none = check_min_expansions(ce, sz(1), 2);
    EXPECT_EQ(none.status, ReportStatus::inconclusive);
    EXPECT_FALSE(none.ambient);
}

TEST(Expansions, ExpansionPropertyOnOrders)
{
    for (int max : {3, 4}) {
        auto r = check_expansion_property(forgetful_lo_to_inj(max));
        EXPECT_EQ(r.status, ReportStatus::ok) << max << ": " << r.detail;
        EXPECT_TRUE(r.directed);
        EXPECT_TRUE(r.routes_agree);
        EXPECT_FALSE(r.minimal_failing);
        // every order of A maps onto every other order of A by a permutation
        for (auto [a, b] : r.witnesses) {
            ASSERT_TRUE(b);
            EXPECT_EQ(*b, a);
        }
    }
}

TEST(Expansions, ExpansionPropertyFailsForPointColorings)
{
    // Two colors on points: the monochromatic decorations of any B reject the other color.
    auto base = generate({Family::inj, 3});
    auto ce = build_coloring_expansion({base, {sz(1)}, {{sz(1), 2}}});
    EXPECT_TRUE(all_hold(ce.functor, {sz(1)}));
    auto r = check_expansion_property(ce.functor);
    EXPECT_EQ(r.status, ReportStatus::violation);
    EXPECT_FALSE(r.holds);
    EXPECT_FALSE(r.single_object);
    EXPECT_TRUE(r.routes_agree);
    EXPECT_EQ(r.minimal_failing, std::optional<ObjectId>(sz(1)));
}

TEST(Expansions, AdditivityAndRatioOnOrders)
{
    auto U = forgetful_lo_to_inj(3);
    auto add2 = verify_additivity(U, sz(2), DegreePools{{sz(2)}, {}, 2});
    EXPECT_EQ(add2.status, ReportStatus::ok) << add2.detail;
    EXPECT_TRUE(add2.equality_expected);
    EXPECT_EQ(add2.downstairs.value(), std::optional<int>(2));
    EXPECT_EQ(add2.fiber_sum, std::optional<int>(2));
    ASSERT_EQ(add2.fibers.size(), 2u);
    for (const auto& f : add2.fibers)
        EXPECT_EQ(f.bound.value(), std::optional<int>(1));

    auto add1 = verify_additivity(U, sz(1), DegreePools{{sz(1), sz(2)}, {}, 2});
    EXPECT_EQ(add1.status, ReportStatus::ok) << add1.detail;
    EXPECT_EQ(add1.fiber_sum, std::optional<int>(1));

    auto ratio = verify_object_ratio(U, sz(2), DegreePools{{sz(2)}, {}, 2});
    EXPECT_EQ(ratio.status, ReportStatus::ok) << ratio.detail;
    EXPECT_EQ(ratio.aut_size, 2);
    EXPECT_EQ(ratio.representatives.size(), 1u);
    EXPECT_EQ(ratio.representative_sum, std::optional<int>(1));
}

TEST(Expansions, AgeOfTopOrderIsEverything)
{
    auto U = forgetful_lo_to_inj(3);
    RestrictionTable table(U);
    auto top = U.fiber(sz(3)).front();
    auto age = age_of(U, table, top);
    EXPECT_EQ(age.size(), U.upstairs().object_count());
    auto small = age_of(U, table, U.fiber(sz(1)).front());
    EXPECT_EQ(small, std::vector<ObjectId>{U.fiber(sz(1)).front()});
}

TEST(Expansions, FunctorFileRoundTrip)
{
    for (const auto& U : {forgetful_lo_to_inj(3), identity_expansion(generate({Family::surj, 2}))}) {
        auto text = format_functor(U);
        std::istringstream in(text);
        auto again = read_functor(in);
        EXPECT_EQ(format_functor(again), text);
        EXPECT_TRUE(structurally_equal(again.upstairs(), U.upstairs()));
        EXPECT_EQ(std::vector<ObjectId>(again.object_map().begin(), again.object_map().end()),
            std::vector<ObjectId>(U.object_map().begin(), U.object_map().end()));
    }
    std::istringstream broken("upstairs\nobjects: 1\nobj 0 x\nmor 0 0 0\nend\n");
    EXPECT_THROW((void)read_functor(broken), Error);
}
