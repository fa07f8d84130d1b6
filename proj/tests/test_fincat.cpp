#include "oracle.hpp"

#include <ramcat/category_io.hpp>
#include <ramcat/fincat.hpp>
#include <ramcat/generators.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

using namespace ramcat;

namespace {

// Two objects, one non-identity arrow, table complete.
const char* arrow_category = R"(
objects: 2
obj 0 x
obj 1 y
mor 0 0 0 idx
mor 1 1 1 idy
mor 2 0 1 f
cmp 0 0 0
cmp 1 1 1
cmp 2 0 2
cmp 1 2 2
)";

// The monoid {1, e} with e.e = e.
const char* idempotent_monoid = R"(
objects: 1
obj 0 m
mor 0 0 0 one
mor 1 0 0 e
cmp 0 0 0
cmp 0 1 1
cmp 1 0 1
cmp 1 1 1
)";

auto has_violation(const ValidationReport& r, const std::string& needle) -> bool
{
    return std::any_of(r.violations.begin(), r.violations.end(),
        [&](const std::string& v) { return v.find(needle) != std::string::npos; });
}

auto families() -> std::vector<UniverseSpec>
{
    return {{Family::lo, 4}, {Family::inj, 3}, {Family::surj, 3}};
}

} // namespace

TEST(Fincat, ParsesSmallCategory)
{
    auto cat = parse_category(arrow_category);
    ASSERT_EQ(cat.object_count(), 2u);
    ASSERT_EQ(cat.morphism_count(), 3u);
    EXPECT_EQ(cat.identity(0), 0u);
    EXPECT_EQ(cat.identity(1), 1u);
    EXPECT_EQ(cat.hom(0, 1).size(), 1u);
    EXPECT_TRUE(cat.hom(1, 0).empty());
    EXPECT_EQ(cat.compose(1, 2), 2u);
    EXPECT_TRUE(validate(cat).valid());
    EXPECT_TRUE(cat.all_mono());
}

TEST(Fincat, IdempotentIsNotMono)
{
    auto cat = parse_category(idempotent_monoid);
    auto r = validate(cat);
    EXPECT_TRUE(r.valid());
    EXPECT_FALSE(r.all_mono);
    EXPECT_EQ(r.non_mono, std::vector<MorphismId>{1});
}

TEST(Fincat, ReportsMissingComposition)
{
    std::string text = arrow_category;
    text.erase(text.find("cmp 1 2 2"));
    auto r = validate(parse_category(text));
    EXPECT_FALSE(r.valid());
    EXPECT_TRUE(has_violation(r, "composition missing for (1, 2)"));
}

TEST(Fincat, ReportsIdentityLaw)
{
    // Nothing in the endomorphism monoid of m acts as a two-sided unit.
    auto r = validate(parse_category(R"(
objects: 1
obj 0 m
mor 0 0 0 a
mor 1 0 0 b
cmp 0 0 0
cmp 0 1 0
cmp 1 0 1
cmp 1 1 1
)"));
    EXPECT_FALSE(r.valid());
    EXPECT_TRUE(has_violation(r, "identity law"));
}

TEST(Fincat, ReportsAssociativity)
{
    // Endomorphisms 1, a, b with a.a = b, a.b = 1, b.a = b, b.b = a. Then (b.a).a = b
    // while b.(a.a) = a.
    auto r = validate(parse_category(R"(
objects: 1
obj 0 m
mor 0 0 0 one
mor 1 0 0 a
mor 2 0 0 b
cmp 0 0 0
cmp 0 1 1
cmp 0 2 2
cmp 1 0 1
cmp 2 0 2
cmp 1 1 2
cmp 1 2 0
cmp 2 1 2
cmp 2 2 1
)"));
    EXPECT_FALSE(r.valid());
    EXPECT_TRUE(has_violation(r, "associativity"));
}

TEST(Fincat, ParseErrorsCarryLineNumbers)
{
    auto line_of = [](const std::string& text) -> std::size_t {
        try {
            (void)parse_category(text);
        }
        catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    EXPECT_EQ(line_of("objects: 1\nobj 3 x\n"), 2u);
    EXPECT_EQ(line_of("obj 0 x\n"), 1u);
    EXPECT_EQ(line_of("objects: 1\nobj 0 x\nmor 0 0 0\nmor 0 0 0\n"), 4u);
    EXPECT_EQ(line_of("objects: 1\nobj 0 x\nmor 0 0 zero\n"), 3u);
    EXPECT_GT(line_of("objects: 2\nobj 0 x\nobj 1 y\nmor 0 0 0\nmor 1 1 1\nmor 2 0 1\ncmp 2 2 2\n"), 0u);
}

TEST(Fincat, TextRoundTrip)
{
    for (const auto& spec : families()) {
        auto cat = generate(spec);
        auto again = parse_category(format_category(cat));
        EXPECT_EQ(format_category(again), format_category(cat)) << family_name(spec.family);
        EXPECT_TRUE(structurally_equal(cat, again));
    }
    auto path = std::filesystem::temp_directory_path() / "ramcat_fincat_roundtrip.txt";
    {
        std::ofstream out(path);
        write_category(out, generate({Family::inj, 3}));
    }
    EXPECT_TRUE(structurally_equal(load_category(path.string()), generate({Family::inj, 3})));
    std::filesystem::remove(path);
    EXPECT_THROW((void)load_category("/nonexistent/ramcat/category.txt"), Error);
}

TEST(Fincat, GeneratedCategoriesAreValid)
{
    for (const auto& spec : families()) {
        auto cat = generate(spec);
        auto r = validate(cat);
        EXPECT_TRUE(r.valid()) << family_name(spec.family);
        EXPECT_EQ(r.all_mono, spec.family != Family::surj);
    }
}

TEST(Fincat, AutomorphismsFormAGroup)
{
    for (const auto& spec : families()) {
        auto cat = generate(spec);
        for (ObjectId a = 0; a < cat.object_count(); ++a) {
            auto aut = automorphisms(cat, a);
            EXPECT_EQ(aut, oracle::automorphisms(cat, a));
            EXPECT_TRUE(is_group(cat, a, aut));
            auto n = static_cast<int>(a) + 1;
            auto expected = spec.family == Family::lo ? 1 : oracle::falling(n, n);
            EXPECT_EQ(aut.size(), expected);
            for (auto f : aut) {
                auto g = inverse(cat, f);
                ASSERT_TRUE(g);
                EXPECT_EQ(cat.compose(*g, f), cat.identity(a));
            }
        }
    }
}

TEST(Fincat, SubobjectClassesPartitionHom)
{
    for (const auto& spec : families()) {
        auto cat = generate(spec);
        if (!cat.all_mono()) {
            EXPECT_THROW((void)subobject_classes(cat, 0, 0), Error);
            continue;
        }
        for (ObjectId a = 0; a < cat.object_count(); ++a)
            for (ObjectId b = 0; b < cat.object_count(); ++b) {
                auto classes = subobject_classes(cat, a, b);
                auto aut = automorphisms(cat, a);
                std::set<MorphismId> covered;
                for (const auto& c : classes) {
                    EXPECT_EQ(c.members.front(), c.representative);
                    EXPECT_EQ(c.members.size(), aut.size());
                    for (auto f : c.members) {
                        EXPECT_TRUE(covered.insert(f).second);
                        // f ~ representative via some automorphism
                        bool related = std::any_of(aut.begin(), aut.end(),
                            [&](MorphismId alpha) { return cat.compose(c.representative, alpha) == f; });
                        EXPECT_TRUE(related);
                    }
                }
                EXPECT_EQ(covered.size(), cat.hom(a, b).size());
            }
    }
}

TEST(Fincat, OppositeIsAnInvolution)
{
    auto cat = generate({Family::surj, 3});
    auto op = opposite(cat);
    EXPECT_TRUE(validate(op).valid());
    for (ObjectId a = 0; a < cat.object_count(); ++a)
        for (ObjectId b = 0; b < cat.object_count(); ++b)
            EXPECT_EQ(op.hom(a, b).size(), cat.hom(b, a).size());
    EXPECT_TRUE(structurally_equal(opposite(op), cat));
    // Surjections become monos in the opposite.
    EXPECT_TRUE(op.all_mono());
}

TEST(Fincat, ProductHomsMultiply)
{
    auto c1 = generate({Family::inj, 2});
    auto c2 = generate({Family::lo, 3});
    auto p = product(c1, c2);
    EXPECT_TRUE(validate(p).valid());
    ASSERT_EQ(p.object_count(), c1.object_count() * c2.object_count());
    auto n2 = static_cast<ObjectId>(c2.object_count());
    for (ObjectId a = 0; a < p.object_count(); ++a) {
        EXPECT_EQ(p.object_label(a), "(" + c1.object_label(a / n2) + "," + c2.object_label(a % n2) + ")");
        EXPECT_EQ(automorphisms(p, a).size(),
            automorphisms(c1, a / n2).size() * automorphisms(c2, a % n2).size());
        for (ObjectId b = 0; b < p.object_count(); ++b)
            EXPECT_EQ(p.hom(a, b).size(), c1.hom(a / n2, b / n2).size() * c2.hom(a % n2, b % n2).size());
    }
    auto unit = unit_category();
    EXPECT_EQ(unit.object_label(0), "*");
    auto uu = product(unit, unit);
    EXPECT_EQ(uu.object_count(), 1u);
    EXPECT_EQ(uu.morphism_count(), 1u);
    EXPECT_TRUE(structurally_equal(product(c2, unit_category()), product(c2, unit_category())));
}

TEST(Fincat, FullSubcategoryKeepsHoms)
{
    auto cat = generate({Family::inj, 4});
    std::vector<ObjectId> keep{1, 3};
    auto sub = full_subcategory(cat, keep);
    EXPECT_TRUE(validate(sub.category).valid());
    ASSERT_EQ(sub.category.object_count(), 2u);
    EXPECT_EQ(sub.category.hom(0, 1).size(), cat.hom(1, 3).size());
    for (const auto& m : sub.category.morphisms())
        EXPECT_EQ(sub.category.morphism(m.id).label, cat.morphism(sub.morphism_to_parent[m.id]).label);
}

TEST(Fincat, Directedness)
{
    EXPECT_TRUE(is_directed(generate({Family::lo, 4})));
    EXPECT_TRUE(is_directed(generate({Family::surj, 3})));
    // Two objects with no arrows between them and no common target.
    auto disjoint = parse_category("objects: 2\nobj 0 x\nobj 1 y\nmor 0 0 0\nmor 1 1 1\n");
    EXPECT_FALSE(is_directed(disjoint));
}

TEST(Fincat, ResolveObjectByLabelOrId)
{
    auto cat = generate({Family::lo, 3});
    EXPECT_EQ(resolve_object(cat, "lo2"), 1u);
    EXPECT_EQ(resolve_object(cat, "2"), 2u);
    EXPECT_THROW((void)resolve_object(cat, "lo9"), Error);
}
