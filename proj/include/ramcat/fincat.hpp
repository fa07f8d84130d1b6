#pragma once

// Explicit finite categories: objects, morphisms and a composition table.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ramcat {

using ObjectId = std::uint32_t;
using MorphismId = std::uint32_t;

inline constexpr ObjectId no_object = std::numeric_limits<ObjectId>::max();
inline constexpr MorphismId no_morphism = std::numeric_limits<MorphismId>::max();

/// Composition is stored as a dense table while the morphism count stays within this cap.
inline constexpr std::size_t default_dense_compose_cap = 20'000;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MorphismRecord {
    MorphismId id = no_morphism;
    ObjectId dom = no_object;
    ObjectId cod = no_object;
    std::string label;
};

/// All arrows dom -> cod, in ascending id order. Views into the owning category.
struct HomSet {
    ObjectId dom = no_object;
    ObjectId cod = no_object;
    std::span<const MorphismId> arrows;

    [[nodiscard]] auto size() const -> std::size_t { return arrows.size(); }
    [[nodiscard]] auto empty() const -> bool { return arrows.empty(); }
    [[nodiscard]] auto begin() const { return arrows.begin(); }
    [[nodiscard]] auto end() const { return arrows.end(); }
    [[nodiscard]] auto operator[](std::size_t i) const -> MorphismId { return arrows[i]; }
};

struct SubobjectClass {
    MorphismId representative = no_morphism;
    std::vector<MorphismId> members;
};

class FiniteCategory;

class CategoryBuilder {
public:
    auto add_object(std::string label) -> ObjectId
    {
        object_labels_.push_back(std::move(label));
        return static_cast<ObjectId>(object_labels_.size() - 1);
    }

    auto add_morphism(ObjectId dom, ObjectId cod, std::string label) -> MorphismId
    {
        if (dom >= object_labels_.size() || cod >= object_labels_.size())
            throw Error("add_morphism: unknown object");
        auto id = static_cast<MorphismId>(morphisms_.size());
        morphisms_.push_back(MorphismRecord{id, dom, cod, std::move(label)});
        return id;
    }

    /// Records compose(g, f) = gf. Only the shape cod(f) == dom(g) is checked here;
    /// everything else is left to validate().
    void set_compose(MorphismId g, MorphismId f, MorphismId gf)
    {
        if (g >= morphisms_.size() || f >= morphisms_.size() || gf >= morphisms_.size())
            throw Error("set_compose: unknown morphism");
        if (morphisms_[f].cod != morphisms_[g].dom)
            throw Error("set_compose: morphisms " + std::to_string(g) + " and " + std::to_string(f) + " are not composable");
        compositions_.emplace_back(g, f, gf);
    }

    void set_identity(ObjectId a, MorphismId id)
    {
        if (identities_.size() < object_labels_.size())
            identities_.resize(object_labels_.size(), no_morphism);
        identities_.at(a) = id;
    }

    [[nodiscard]] auto object_count() const -> std::size_t { return object_labels_.size(); }
    [[nodiscard]] auto morphism_count() const -> std::size_t { return morphisms_.size(); }

    auto build(std::size_t dense_cap = default_dense_compose_cap) && -> FiniteCategory;

private:
    friend class FiniteCategory;
    std::vector<std::string> object_labels_;
    std::vector<MorphismRecord> morphisms_;
    std::vector<std::tuple<MorphismId, MorphismId, MorphismId>> compositions_;
    std::vector<MorphismId> identities_;
};

/// Immutable after construction; any number of threads may read it.
class FiniteCategory {
public:
    FiniteCategory() = default;

    [[nodiscard]] auto object_count() const -> std::size_t { return object_labels_.size(); }
    [[nodiscard]] auto morphism_count() const -> std::size_t { return morphisms_.size(); }
    [[nodiscard]] auto object_label(ObjectId a) const -> const std::string& { return object_labels_.at(a); }
    [[nodiscard]] auto morphism(MorphismId f) const -> const MorphismRecord& { return morphisms_.at(f); }
    [[nodiscard]] auto morphisms() const -> std::span<const MorphismRecord> { return morphisms_; }
    [[nodiscard]] auto dom(MorphismId f) const -> ObjectId { return morphisms_[f].dom; }
    [[nodiscard]] auto cod(MorphismId f) const -> ObjectId { return morphisms_[f].cod; }
    [[nodiscard]] auto has_object(ObjectId a) const -> bool { return a < object_labels_.size(); }
    [[nodiscard]] auto uses_dense_composition() const -> bool { return dense_; }

    /// The identity of a, or no_morphism when no endomorphism satisfies the identity laws.
    [[nodiscard]] auto identity(ObjectId a) const -> MorphismId { return identities_.at(a); }

    [[nodiscard]] auto hom(ObjectId a, ObjectId b) const -> HomSet
    {
        if (!has_object(a) || !has_object(b))
            throw Error("hom: unknown object id");
        auto cell = static_cast<std::size_t>(a) * object_count() + b;
        auto first = hom_offsets_[cell];
        auto last = hom_offsets_[cell + 1];
        return HomSet{a, b, std::span<const MorphismId>(hom_arrows_.data() + first, last - first)};
    }

    /// Position of f inside hom(dom f, cod f).
    [[nodiscard]] auto hom_position(MorphismId f) const -> std::size_t { return hom_pos_[f]; }

    /// compose(g, f) = g . f; defined exactly when cod(f) == dom(g). Returns no_morphism if
    /// the table has no entry for the pair.
    [[nodiscard]] auto compose(MorphismId g, MorphismId f) const -> MorphismId
    {
        if (morphisms_[f].cod != morphisms_[g].dom)
            throw Error("compose: cod(" + std::to_string(f) + ") != dom(" + std::to_string(g) + ")");
        return compose_unchecked(g, f);
    }

    [[nodiscard]] auto compose_unchecked(MorphismId g, MorphismId f) const -> MorphismId
    {
        if (dense_)
            return dense_table_[dense_offset_[g] + in_pos_[f]];
        auto it = sparse_table_.find(pair_key(g, f));
        return it == sparse_table_.end() ? no_morphism : it->second;
    }

    /// Morphisms with codomain a, ascending id order.
    [[nodiscard]] auto arrows_into(ObjectId a) const -> std::span<const MorphismId>
    {
        return {into_lists_.data() + into_offsets_[a], into_offsets_[a + 1] - into_offsets_[a]};
    }

    [[nodiscard]] auto is_mono(MorphismId f) const -> bool { return mono_[f] != 0; }
    [[nodiscard]] auto all_mono() const -> bool { return all_mono_; }

    /// Visits every pair (g, f) with cod(f) == dom(g).
    template <typename Fn>
    void for_each_composable(Fn&& fn) const
    {
        for (const auto& g : morphisms_)
            for (auto f : arrows_into(g.dom))
                fn(g.id, f);
    }

private:
    friend class CategoryBuilder;

    static auto pair_key(MorphismId g, MorphismId f) -> std::uint64_t
    {
        return (static_cast<std::uint64_t>(g) << 32) | f;
    }

    void index_and_fill(std::vector<std::tuple<MorphismId, MorphismId, MorphismId>>&& entries, std::size_t dense_cap);
    void infer_identities(const std::vector<MorphismId>& declared);
    void compute_mono_flags();

    std::vector<std::string> object_labels_;
    std::vector<MorphismRecord> morphisms_;
    std::vector<std::size_t> hom_offsets_;
    std::vector<MorphismId> hom_arrows_;
    std::vector<std::size_t> hom_pos_;
    std::vector<std::size_t> into_offsets_;
    std::vector<MorphismId> into_lists_;
    std::vector<std::size_t> in_pos_;
    bool dense_ = true;
    std::vector<std::size_t> dense_offset_;
    std::vector<MorphismId> dense_table_;
    std::unordered_map<std::uint64_t, MorphismId> sparse_table_;
    std::vector<MorphismId> identities_;
    std::vector<char> mono_;
    bool all_mono_ = false;
};

inline auto CategoryBuilder::build(std::size_t dense_cap) && -> FiniteCategory
{
    FiniteCategory cat;
    cat.object_labels_ = std::move(object_labels_);
    cat.morphisms_ = std::move(morphisms_);
    cat.index_and_fill(std::move(compositions_), dense_cap);
    identities_.resize(cat.object_count(), no_morphism);
    cat.infer_identities(identities_);
    cat.compute_mono_flags();
    return cat;
}

inline void FiniteCategory::index_and_fill(std::vector<std::tuple<MorphismId, MorphismId, MorphismId>>&& entries,
    std::size_t dense_cap)
{
    const auto n = object_count();
    const auto m = morphism_count();

    hom_offsets_.assign(n * n + 1, 0);
    for (const auto& f : morphisms_)
        ++hom_offsets_[static_cast<std::size_t>(f.dom) * n + f.cod + 1];
    std::partial_sum(hom_offsets_.begin(), hom_offsets_.end(), hom_offsets_.begin());
    hom_arrows_.resize(m);
    hom_pos_.resize(m);
    {
        auto fill = hom_offsets_;
        for (const auto& f : morphisms_) {
            auto cell = static_cast<std::size_t>(f.dom) * n + f.cod;
            hom_pos_[f.id] = fill[cell] - hom_offsets_[cell];
            hom_arrows_[fill[cell]++] = f.id;
        }
    }

    into_offsets_.assign(n + 1, 0);
    for (const auto& f : morphisms_)
        ++into_offsets_[f.cod + 1];
    std::partial_sum(into_offsets_.begin(), into_offsets_.end(), into_offsets_.begin());
    into_lists_.resize(m);
    in_pos_.resize(m);
    {
        auto fill = into_offsets_;
        for (const auto& f : morphisms_) {
            in_pos_[f.id] = fill[f.cod] - into_offsets_[f.cod];
            into_lists_[fill[f.cod]++] = f.id;
        }
    }

    dense_ = m <= dense_cap;
    if (dense_) {
        dense_offset_.resize(m);
        std::size_t total = 0;
        for (const auto& g : morphisms_) {
            dense_offset_[g.id] = total;
            total += into_offsets_[g.dom + 1] - into_offsets_[g.dom];
        }
        dense_table_.assign(total, no_morphism);
        for (auto [g, f, gf] : entries)
            dense_table_[dense_offset_[g] + in_pos_[f]] = gf;
    }
    else {
        sparse_table_.reserve(entries.size());
        for (auto [g, f, gf] : entries)
            sparse_table_[pair_key(g, f)] = gf;
    }
    entries.clear();
    entries.shrink_to_fit();
}

inline void FiniteCategory::infer_identities(const std::vector<MorphismId>& declared)
{
    identities_.assign(object_count(), no_morphism);
    for (ObjectId a = 0; a < object_count(); ++a) {
        auto acts_as_identity = [&](MorphismId e) {
            if (dom(e) != a || cod(e) != a)
                return false;
            for (auto f : arrows_into(a))
                if (compose_unchecked(e, f) != f)
                    return false;
            for (ObjectId b = 0; b < object_count(); ++b)
                for (auto g : hom(a, b))
                    if (compose_unchecked(g, e) != g)
                        return false;
            return true;
        };
        if (declared[a] != no_morphism) {
            if (acts_as_identity(declared[a]))
                identities_[a] = declared[a];
            continue;
        }
        for (auto e : hom(a, a))
            if (acts_as_identity(e)) {
                identities_[a] = e;
                break;
            }
    }
}

inline void FiniteCategory::compute_mono_flags()
{
    mono_.assign(morphism_count(), 1);
    std::vector<MorphismId> seen(morphism_count(), no_morphism);
    for (const auto& f : morphisms_) {
        // f is mono iff u |-> f.u is injective on hom(x, dom f) for every x.
        for (auto u : arrows_into(f.dom)) {
            auto fu = compose_unchecked(f.id, u);
            if (fu == no_morphism || seen[fu] == f.id) {
                mono_[f.id] = 0;
                break;
            }
            seen[fu] = f.id;
        }
        for (auto u : arrows_into(f.dom)) {
            auto fu = compose_unchecked(f.id, u);
            if (fu != no_morphism)
                seen[fu] = no_morphism;
        }
    }
    all_mono_ = std::all_of(mono_.begin(), mono_.end(), [](char c) { return c != 0; });
}

// ---------------------------------------------------------------------------
// Validation

struct ValidationReport {
    std::vector<std::string> violations;
    bool all_mono = false;
    std::vector<MorphismId> non_mono;

    [[nodiscard]] auto valid() const -> bool { return violations.empty(); }
};

/// Checks composition totality and closure, the identity laws and associativity, and
/// separately records which morphisms are mono. Associativity is checked on every
/// composable triple, so this is meant for desk-scale categories.
inline auto validate(const FiniteCategory& cat, std::size_t max_reported = 50) -> ValidationReport
{
    ValidationReport report;
    auto flag = [&](std::string what) {
        if (report.violations.size() < max_reported)
            report.violations.push_back(std::move(what));
    };

    bool table_complete = true;
    cat.for_each_composable([&](MorphismId g, MorphismId f) {
        auto gf = cat.compose_unchecked(g, f);
        if (gf == no_morphism) {
            table_complete = false;
            flag("composition missing for (" + std::to_string(g) + ", " + std::to_string(f) + ")");
        }
        else if (cat.dom(gf) != cat.dom(f) || cat.cod(gf) != cat.cod(g)) {
            table_complete = false;
            flag("closure: compose(" + std::to_string(g) + ", " + std::to_string(f) + ") = " + std::to_string(gf)
                + " has the wrong domain or codomain");
        }
    });

    for (ObjectId a = 0; a < cat.object_count(); ++a)
        if (cat.identity(a) == no_morphism)
            flag("identity law: no endomorphism of object " + std::to_string(a) + " (" + cat.object_label(a)
                + ") satisfies compose(id, f) = f = compose(g, id)");

    if (table_complete) {
        for (const auto& h : cat.morphisms()) {
            for (auto g : cat.arrows_into(h.dom)) {
                auto hg = cat.compose_unchecked(h.id, g);
                for (auto f : cat.arrows_into(cat.dom(g))) {
                    auto lhs = cat.compose_unchecked(h.id, cat.compose_unchecked(g, f));
                    auto rhs = cat.compose_unchecked(hg, f);
                    if (lhs != rhs)
                        flag("associativity fails on (" + std::to_string(h.id) + ", " + std::to_string(g) + ", "
                            + std::to_string(f) + ")");
                }
            }
        }
    }

    for (const auto& f : cat.morphisms())
        if (!cat.is_mono(f.id))
            report.non_mono.push_back(f.id);
    report.all_mono = report.non_mono.empty();
    return report;
}

// ---------------------------------------------------------------------------
// Automorphisms and the ~_A quotient

[[nodiscard]] inline auto inverse(const FiniteCategory& cat, MorphismId f) -> std::optional<MorphismId>
{
    auto a = cat.dom(f);
    auto b = cat.cod(f);
    for (auto g : cat.hom(b, a))
        if (cat.compose_unchecked(g, f) == cat.identity(a) && cat.compose_unchecked(f, g) == cat.identity(b))
            return g;
    return std::nullopt;
}

[[nodiscard]] inline auto is_isomorphism(const FiniteCategory& cat, MorphismId f) -> bool
{
    return inverse(cat, f).has_value();
}

/// Invertible endomorphisms of a, ascending id order.
[[nodiscard]] inline auto automorphisms(const FiniteCategory& cat, ObjectId a) -> std::vector<MorphismId>
{
    if (!cat.has_object(a))
        throw Error("automorphisms: unknown object id");
    std::vector<MorphismId> result;
    for (auto e : cat.hom(a, a))
        if (is_isomorphism(cat, e))
            result.push_back(e);
    return result;
}

/// Closure, identity and inverses for a set of endomorphisms of one object.
[[nodiscard]] inline auto is_group(const FiniteCategory& cat, ObjectId a, std::span<const MorphismId> elements) -> bool
{
    auto contains = [&](MorphismId x) { return std::find(elements.begin(), elements.end(), x) != elements.end(); };
    if (!contains(cat.identity(a)))
        return false;
    for (auto x : elements) {
        auto inv = inverse(cat, x);
        if (!inv || !contains(*inv))
            return false;
        for (auto y : elements)
            if (!contains(cat.compose_unchecked(x, y)))
                return false;
    }
    return true;
}

/// Partition of hom(a, b) into classes f.Aut(a). Class order and representatives follow the
/// smallest member id.
[[nodiscard]] inline auto subobject_classes(const FiniteCategory& cat, ObjectId a, ObjectId b) -> std::vector<SubobjectClass>
{
    if (!cat.all_mono())
        throw Error("subobject_classes: the category has morphisms that are not mono");
    auto arrows = cat.hom(a, b);
    auto aut = automorphisms(cat, a);
    std::vector<char> assigned(arrows.size(), 0);
    std::vector<SubobjectClass> classes;
    for (std::size_t i = 0; i < arrows.size(); ++i) {
        if (assigned[i])
            continue;
        SubobjectClass cls;
        cls.representative = arrows[i];
        for (auto alpha : aut) {
            auto member = cat.compose_unchecked(arrows[i], alpha);
            auto pos = cat.hom_position(member);
            if (!assigned[pos]) {
                assigned[pos] = 1;
                cls.members.push_back(member);
            }
        }
        std::sort(cls.members.begin(), cls.members.end());
        classes.push_back(std::move(cls));
    }
    return classes;
}

[[nodiscard]] inline auto is_directed(const FiniteCategory& cat, std::span<const ObjectId> objects) -> bool
{
    for (auto x : objects)
        for (auto y : objects) {
            bool found = false;
            for (auto z : objects)
                if (!cat.hom(x, z).empty() && !cat.hom(y, z).empty()) {
                    found = true;
                    break;
                }
            if (!found)
                return false;
        }
    return true;
}

[[nodiscard]] inline auto all_objects(const FiniteCategory& cat) -> std::vector<ObjectId>
{
    std::vector<ObjectId> ids(cat.object_count());
    std::iota(ids.begin(), ids.end(), ObjectId{0});
    return ids;
}

[[nodiscard]] inline auto is_directed(const FiniteCategory& cat) -> bool
{
    auto ids = all_objects(cat);
    return is_directed(cat, ids);
}

// ---------------------------------------------------------------------------
// Constructions

/// Same objects and morphism ids, arrows reversed: compose_op(g, f) = compose(f, g).
[[nodiscard]] inline auto opposite(const FiniteCategory& cat) -> FiniteCategory
{
    CategoryBuilder b;
    for (ObjectId a = 0; a < cat.object_count(); ++a)
        b.add_object(cat.object_label(a));
    for (const auto& f : cat.morphisms())
        b.add_morphism(f.cod, f.dom, f.label);
    cat.for_each_composable([&](MorphismId g, MorphismId f) {
        auto gf = cat.compose_unchecked(g, f);
        if (gf != no_morphism)
            b.set_compose(f, g, gf);
    });
    for (ObjectId a = 0; a < cat.object_count(); ++a)
        if (cat.identity(a) != no_morphism)
            b.set_identity(a, cat.identity(a));
    return std::move(b).build();
}

/// Objects (a1, a2) get id a1 * |Ob(c2)| + a2; morphisms (f1, f2) get id f1 * |Mor(c2)| + f2.
[[nodiscard]] inline auto product(const FiniteCategory& c1, const FiniteCategory& c2) -> FiniteCategory
{
    CategoryBuilder b;
    const auto n2 = static_cast<ObjectId>(c2.object_count());
    const auto m2 = static_cast<MorphismId>(c2.morphism_count());
    for (ObjectId a1 = 0; a1 < c1.object_count(); ++a1)
        for (ObjectId a2 = 0; a2 < n2; ++a2)
            b.add_object("(" + c1.object_label(a1) + "," + c2.object_label(a2) + ")");
    for (const auto& f1 : c1.morphisms())
        for (const auto& f2 : c2.morphisms())
            b.add_morphism(f1.dom * n2 + f2.dom, f1.cod * n2 + f2.cod, "(" + f1.label + "," + f2.label + ")");
    c1.for_each_composable([&](MorphismId g1, MorphismId f1) {
        auto gf1 = c1.compose_unchecked(g1, f1);
        c2.for_each_composable([&](MorphismId g2, MorphismId f2) {
            auto gf2 = c2.compose_unchecked(g2, f2);
            if (gf1 != no_morphism && gf2 != no_morphism)
                b.set_compose(g1 * m2 + g2, f1 * m2 + f2, gf1 * m2 + gf2);
        });
    });
    for (ObjectId a1 = 0; a1 < c1.object_count(); ++a1)
        for (ObjectId a2 = 0; a2 < n2; ++a2)
            if (c1.identity(a1) != no_morphism && c2.identity(a2) != no_morphism)
                b.set_identity(a1 * n2 + a2, c1.identity(a1) * m2 + c2.identity(a2));
    return std::move(b).build();
}

/// The one-object category with only the identity.
[[nodiscard]] inline auto unit_category() -> FiniteCategory
{
    CategoryBuilder b;
    auto o = b.add_object("*");
    auto id = b.add_morphism(o, o, "id");
    b.set_compose(id, id, id);
    b.set_identity(o, id);
    return std::move(b).build();
}

struct Subcategory {
    FiniteCategory category;
    std::vector<ObjectId> object_to_parent;
    std::vector<MorphismId> morphism_to_parent;
    std::vector<ObjectId> parent_to_object;     // no_object outside the subcategory
    std::vector<MorphismId> parent_to_morphism; // no_morphism outside the subcategory
};

/// Full subcategory spanned by the given objects, kept in the given order.
[[nodiscard]] inline auto full_subcategory(const FiniteCategory& cat, std::span<const ObjectId> objects) -> Subcategory
{
    Subcategory sub;
    sub.parent_to_object.assign(cat.object_count(), no_object);
    sub.parent_to_morphism.assign(cat.morphism_count(), no_morphism);
    CategoryBuilder b;
    for (auto a : objects) {
        if (!cat.has_object(a))
            throw Error("full_subcategory: unknown object id");
        if (sub.parent_to_object[a] != no_object)
            throw Error("full_subcategory: duplicate object id");
        sub.parent_to_object[a] = b.add_object(cat.object_label(a));
        sub.object_to_parent.push_back(a);
    }
    for (auto x : objects)
        for (auto y : objects)
            for (auto f : cat.hom(x, y)) {
                sub.parent_to_morphism[f] = b.add_morphism(
                    sub.parent_to_object[x], sub.parent_to_object[y], cat.morphism(f).label);
                sub.morphism_to_parent.push_back(f);
            }
    for (auto g : sub.morphism_to_parent)
        for (auto f : cat.arrows_into(cat.dom(g))) {
            if (sub.parent_to_morphism[f] == no_morphism)
                continue;
            auto gf = cat.compose_unchecked(g, f);
            if (gf != no_morphism)
                b.set_compose(sub.parent_to_morphism[g], sub.parent_to_morphism[f], sub.parent_to_morphism[gf]);
        }
    for (auto a : objects)
        if (cat.identity(a) != no_morphism)
            b.set_identity(sub.parent_to_object[a], sub.parent_to_morphism[cat.identity(a)]);
    sub.category = std::move(b).build();
    return sub;
}

// ---------------------------------------------------------------------------
// Structural equality

/// The category after renumbering objects by label and morphisms by (dom, cod, label).
/// Ties keep the original id order.
struct CanonicalForm {
    std::vector<std::string> object_labels;
    std::vector<std::tuple<ObjectId, ObjectId, std::string>> morphisms;
    std::vector<std::tuple<MorphismId, MorphismId, MorphismId>> compositions;
    std::vector<MorphismId> identities;

    auto operator==(const CanonicalForm&) const -> bool = default;
};

[[nodiscard]] inline auto canonical_form(const FiniteCategory& cat) -> CanonicalForm
{
    CanonicalForm form;
    std::vector<ObjectId> objs = all_objects(cat);
    std::stable_sort(objs.begin(), objs.end(),
        [&](ObjectId x, ObjectId y) { return cat.object_label(x) < cat.object_label(y); });
    std::vector<ObjectId> obj_rank(cat.object_count());
    for (std::size_t i = 0; i < objs.size(); ++i) {
        obj_rank[objs[i]] = static_cast<ObjectId>(i);
        form.object_labels.push_back(cat.object_label(objs[i]));
    }

    std::vector<MorphismId> mors(cat.morphism_count());
    std::iota(mors.begin(), mors.end(), MorphismId{0});
    std::stable_sort(mors.begin(), mors.end(), [&](MorphismId x, MorphismId y) {
        const auto& fx = cat.morphism(x);
        const auto& fy = cat.morphism(y);
        return std::tie(obj_rank[fx.dom], obj_rank[fx.cod], fx.label)
            < std::tie(obj_rank[fy.dom], obj_rank[fy.cod], fy.label);
    });
    std::vector<MorphismId> mor_rank(cat.morphism_count());
    for (std::size_t i = 0; i < mors.size(); ++i) {
        mor_rank[mors[i]] = static_cast<MorphismId>(i);
        const auto& f = cat.morphism(mors[i]);
        form.morphisms.emplace_back(obj_rank[f.dom], obj_rank[f.cod], f.label);
    }
    auto rank_of = [&](MorphismId f) { return f == no_morphism ? no_morphism : mor_rank[f]; };
    cat.for_each_composable([&](MorphismId g, MorphismId f) {
        form.compositions.emplace_back(mor_rank[g], mor_rank[f], rank_of(cat.compose_unchecked(g, f)));
    });
    std::sort(form.compositions.begin(), form.compositions.end());
    for (auto a : objs)
        form.identities.push_back(rank_of(cat.identity(a)));
    return form;
}

[[nodiscard]] inline auto structurally_equal(const FiniteCategory& x, const FiniteCategory& y) -> bool
{
    if (x.object_count() != y.object_count() || x.morphism_count() != y.morphism_count())
        return false;
    return canonical_form(x) == canonical_form(y);
}

} // namespace ramcat
