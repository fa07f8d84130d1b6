#pragma once

// Expansion functors U: C* -> C given by explicit tables. Axiom checks, the restriction
// operator, the additivity identities and the coloring-expansion construction.

#include <ramcat/category_io.hpp>
#include <ramcat/degrees.hpp>
#include <ramcat/expansion_functor.hpp>
#include <ramcat/fincat.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace ramcat {

struct AxiomReport {
    AxiomReport() = default;
    explicit AxiomReport(std::string n) : name(std::move(n)) {}

    std::string name;
    bool holds = true;
    std::size_t checked = 0;
    std::vector<std::string> violations;

    void flag(std::string what, std::size_t cap = 50)
    {
        holds = false;
        if (violations.size() < cap)
            violations.push_back(std::move(what));
    }
};

namespace detail {

inline auto obj_name(const FiniteCategory& c, ObjectId a) -> std::string
{
    return c.object_label(a) + "#" + std::to_string(a);
}

} // namespace detail

/// The identity functor on a category.
[[nodiscard]] inline auto identity_expansion(const FiniteCategory& cat) -> ExpansionFunctor
{
    std::vector<ObjectId> om(cat.object_count());
    std::iota(om.begin(), om.end(), ObjectId{0});
    std::vector<MorphismId> mm(cat.morphism_count());
    std::iota(mm.begin(), mm.end(), MorphismId{0});
    return ExpansionFunctor(cat, cat, std::move(om), std::move(mm));
}

/// Functoriality, surjectivity on objects and injectivity on hom-sets.
[[nodiscard]] inline auto check_functor(const ExpansionFunctor& U) -> AxiomReport
{
    AxiomReport r{"functor"};
    const auto& up = U.upstairs();
    const auto& down = U.downstairs();
    for (const auto& u : up.morphisms()) {
        ++r.checked;
        auto d = U.map_morphism(u.id);
        if (down.dom(d) != U.map_object(u.dom) || down.cod(d) != U.map_object(u.cod))
            r.flag("morphism " + std::to_string(u.id) + " maps to an arrow with the wrong ends");
    }
    if (!r.holds)
        return r;
    up.for_each_composable([&](MorphismId v, MorphismId u) {
        ++r.checked;
        auto vu = up.compose_unchecked(v, u);
        if (vu == no_morphism || U.map_morphism(vu) != down.compose_unchecked(U.map_morphism(v), U.map_morphism(u)))
            r.flag("composition not preserved on (" + std::to_string(v) + ", " + std::to_string(u) + ")");
    });
    for (ObjectId a = 0; a < up.object_count(); ++a) {
        ++r.checked;
        if (up.identity(a) == no_morphism || U.map_morphism(up.identity(a)) != down.identity(U.map_object(a)))
            r.flag("identity of " + detail::obj_name(up, a) + " not preserved");
    }
    for (ObjectId a = 0; a < down.object_count(); ++a)
        if (U.fiber(a).empty())
            r.flag("not surjective on objects: empty fiber over " + detail::obj_name(down, a));
    for (ObjectId x = 0; x < up.object_count(); ++x)
        for (ObjectId y = 0; y < up.object_count(); ++y) {
            std::set<MorphismId> images;
            for (auto u : up.hom(x, y))
                if (!images.insert(U.map_morphism(u)).second)
                    r.flag("not injective on hom(" + detail::obj_name(up, x) + ", " + detail::obj_name(up, y) + ")");
        }
    return r;
}

/// Every e: A -> B and every decoration of A extend to some decoration of B.
[[nodiscard]] inline auto check_reasonable(const ExpansionFunctor& U) -> AxiomReport
{
    AxiomReport r{"reasonable"};
    const auto& down = U.downstairs();
    for (const auto& e : down.morphisms())
        for (auto a : U.fiber(e.dom)) {
            ++r.checked;
            bool found = false;
            for (auto b : U.fiber(e.cod))
                if (U.lift(a, b, e.id)) {
                    found = true;
                    break;
                }
            if (!found)
                r.flag("no decoration of " + detail::obj_name(down, e.cod) + " receives " + detail::obj_name(U.upstairs(), a)
                    + " along " + std::to_string(e.id));
        }
    return r;
}

/// restr(B*, e) for every upstairs B* and every downstairs e into U(B*); no_object where the
/// restriction is missing or not unique.
class RestrictionTable {
public:
    RestrictionTable() = default;

    explicit RestrictionTable(const ExpansionFunctor& U) : U_(&U)
    {
        const auto& up = U.upstairs();
        const auto& down = U.downstairs();
        offset_.resize(up.object_count() + 1, 0);
        for (ObjectId b = 0; b < up.object_count(); ++b)
            offset_[b + 1] = offset_[b] + down.arrows_into(U.map_object(b)).size();
        entries_.assign(offset_.back(), no_object);
        count_.assign(offset_.back(), 0);
        for (ObjectId b = 0; b < up.object_count(); ++b) {
            auto into = down.arrows_into(U.map_object(b));
            for (std::size_t i = 0; i < into.size(); ++i) {
                auto e = into[i];
                for (auto a : U.fiber(down.dom(e)))
                    if (U.lift(a, b, e)) {
                        if (count_[offset_[b] + i]++ == 0)
                            entries_[offset_[b] + i] = a;
                    }
                if (count_[offset_[b] + i] != 1)
                    entries_[offset_[b] + i] = no_object;
            }
        }
    }

    /// The restriction, or no_object.
    [[nodiscard]] auto at(ObjectId b_up, MorphismId e) const -> ObjectId
    {
        return entries_[slot(b_up, e)];
    }

    /// How many decorations of dom(e) receive e into b_up.
    [[nodiscard]] auto multiplicity(ObjectId b_up, MorphismId e) const -> std::size_t { return count_[slot(b_up, e)]; }

    [[nodiscard]] auto complete() const -> bool
    {
        return std::all_of(count_.begin(), count_.end(), [](std::size_t c) { return c == 1; });
    }

private:
    [[nodiscard]] auto slot(ObjectId b_up, MorphismId e) const -> std::size_t
    {
        const auto& down = U_->downstairs();
        if (down.cod(e) != U_->map_object(b_up))
            throw Error("restriction: e does not end at U(B)");
        auto into = down.arrows_into(down.cod(e));
        auto pos = static_cast<std::size_t>(std::lower_bound(into.begin(), into.end(), e) - into.begin());
        return offset_[b_up] + pos;
    }

    const ExpansionFunctor* U_ = nullptr;
    std::vector<std::size_t> offset_;
    std::vector<ObjectId> entries_;
    std::vector<std::size_t> count_;
};

struct UniqueRestrictionsReport {
    AxiomReport axiom{"unique restrictions"};
    RestrictionTable table;
};

[[nodiscard]] inline auto check_unique_restrictions(const ExpansionFunctor& U) -> UniqueRestrictionsReport
{
    UniqueRestrictionsReport r;
    r.table = RestrictionTable(U);
    const auto& up = U.upstairs();
    const auto& down = U.downstairs();
    for (ObjectId b = 0; b < up.object_count(); ++b)
        for (auto e : down.arrows_into(U.map_object(b))) {
            ++r.axiom.checked;
            auto m = r.table.multiplicity(b, e);
            if (m != 1)
                r.axiom.flag(std::to_string(m) + " decorations of " + detail::obj_name(down, down.dom(e)) + " receive "
                    + std::to_string(e) + " into " + detail::obj_name(up, b));
        }
    return r;
}

/// The unique decoration of dom(e) that maps into b_up along e.
[[nodiscard]] inline auto restrict(const RestrictionTable& table, ObjectId b_up, MorphismId e) -> ObjectId
{
    auto a = table.at(b_up, e);
    if (a == no_object)
        throw Error("restrict: no unique restriction of upstairs object " + std::to_string(b_up) + " along "
            + std::to_string(e));
    return a;
}

struct PrecompactReport {
    AxiomReport axiom{"precompact"};
    std::vector<std::pair<ObjectId, std::size_t>> fiber_sizes;
};

/// Fiber sizes over the designated objects (default: all). Finite tables always pass; an
/// empty fiber is reported as a violation of surjectivity.
[[nodiscard]] inline auto check_precompact(const ExpansionFunctor& U, std::vector<ObjectId> designated = {}) -> PrecompactReport
{
    PrecompactReport r;
    if (designated.empty())
        designated = all_objects(U.downstairs());
    for (auto a : designated) {
        ++r.axiom.checked;
        r.fiber_sizes.emplace_back(a, U.fiber(a).size());
        if (U.fiber(a).empty())
            r.axiom.flag("empty fiber over " + detail::obj_name(U.downstairs(), a));
    }
    return r;
}

/// Distinct decorations of the same object must differ in some restriction to a small object.
[[nodiscard]] inline auto check_separates_points(const ExpansionFunctor& U, const RestrictionTable& table,
    std::vector<ObjectId> small = {}) -> AxiomReport
{
    AxiomReport r{"separates points"};
    const auto& down = U.downstairs();
    if (small.empty())
        small = all_objects(down);
    for (ObjectId f = 0; f < down.object_count(); ++f) {
        auto fib = U.fiber(f);
        for (std::size_t i = 0; i < fib.size(); ++i)
            for (std::size_t j = i + 1; j < fib.size(); ++j) {
                ++r.checked;
                bool separated = false;
                for (auto a : small) {
                    for (auto e : down.hom(a, f))
                        if (table.at(fib[i], e) != table.at(fib[j], e)) {
                            separated = true;
                            break;
                        }
                    if (separated)
                        break;
                }
                if (!separated)
                    r.flag(detail::obj_name(U.upstairs(), fib[i]) + " and " + detail::obj_name(U.upstairs(), fib[j])
                        + " have the same restrictions to every small object");
            }
    }
    return r;
}

/// Every law of the restriction calculus, checked exhaustively.
[[nodiscard]] inline auto check_restriction_laws(const ExpansionFunctor& U, const RestrictionTable& table) -> AxiomReport
{
    AxiomReport r{"restriction laws"};
    const auto& up = U.upstairs();
    const auto& down = U.downstairs();
    if (!table.complete()) {
        r.flag("restrictions are not unique");
        return r;
    }
    // restr(A*, id) = A*; U(f) = id forces f = id.
    for (ObjectId a = 0; a < up.object_count(); ++a) {
        ++r.checked;
        if (table.at(a, down.identity(U.map_object(a))) != a)
            r.flag("identity law fails at " + detail::obj_name(up, a));
    }
    for (const auto& u : up.morphisms())
        if (U.map_morphism(u.id) == down.identity(U.map_object(u.dom)) && u.id != up.identity(u.dom)) {
            if (u.dom != u.cod || u.id != up.identity(u.dom))
                r.flag("morphism " + std::to_string(u.id) + " lies over an identity but is not one");
        }
    // f in hom(A*, B*) iff A* = restr(B*, f).
    for (ObjectId b = 0; b < up.object_count(); ++b)
        for (auto e : down.arrows_into(U.map_object(b)))
            for (auto a : U.fiber(down.dom(e))) {
                ++r.checked;
                if (U.lift(a, b, e).has_value() != (table.at(b, e) == a))
                    r.flag("membership law fails for " + std::to_string(e) + " into " + detail::obj_name(up, b));
            }
    // restr(restr(C*, g), f) = restr(C*, g . f).
    for (ObjectId c = 0; c < up.object_count(); ++c)
        for (auto g : down.arrows_into(U.map_object(c)))
            for (auto f : down.arrows_into(down.dom(g))) {
                ++r.checked;
                if (table.at(table.at(c, g), f) != table.at(c, down.compose_unchecked(g, f)))
                    r.flag("composition law fails for (" + std::to_string(g) + ", " + std::to_string(f) + ") at "
                        + detail::obj_name(up, c));
            }
    // Restricting along an isomorphism gives an isomorphism upstairs.
    for (const auto& f : down.morphisms()) {
        if (!is_isomorphism(down, f.id))
            continue;
        for (auto b : U.fiber(f.cod)) {
            ++r.checked;
            auto a = table.at(b, f.id);
            auto lifted = U.lift(a, b, f.id);
            if (!lifted || !is_isomorphism(up, *lifted))
                r.flag("isomorphism " + std::to_string(f.id) + " does not lift to an isomorphism into "
                    + detail::obj_name(up, b));
        }
    }
    return r;
}

/// hom(A, U(B*)) is the disjoint union of U(hom(A*, B*)) over the fiber of A.
[[nodiscard]] inline auto check_disjoint_union(const ExpansionFunctor& U) -> AxiomReport
{
    AxiomReport r{"disjoint union"};
    const auto& up = U.upstairs();
    const auto& down = U.downstairs();
    for (ObjectId b = 0; b < up.object_count(); ++b)
        for (ObjectId a = 0; a < down.object_count(); ++a) {
            ++r.checked;
            std::map<MorphismId, int> hits;
            for (auto e : down.hom(a, U.map_object(b)))
                hits[e] = 0;
            for (auto x : U.fiber(a))
                for (auto u : up.hom(x, b))
                    ++hits[U.map_morphism(u)];
            for (const auto& [e, n] : hits)
                if (n != 1)
                    r.flag("arrow " + std::to_string(e) + " into " + detail::obj_name(up, b) + " is covered " + std::to_string(n)
                        + " times");
        }
    return r;
}

/// Decorations of A isomorphic to A*, in ascending id order (A* included).
[[nodiscard]] inline auto iso_class_in_fiber(const ExpansionFunctor& U, ObjectId a_up) -> std::vector<ObjectId>
{
    std::vector<ObjectId> out;
    const auto& up = U.upstairs();
    for (auto x : U.fiber(U.map_object(a_up))) {
        bool iso = x == a_up;
        for (auto u : up.hom(x, a_up))
            if (!iso && is_isomorphism(up, u))
                iso = true;
        if (iso)
            out.push_back(x);
    }
    return out;
}

/// |Aut(A)| = |I| * |Aut(A*)| where I is the iso class of A* inside the fiber.
[[nodiscard]] inline auto check_aut_decomposition(const ExpansionFunctor& U) -> AxiomReport
{
    AxiomReport r{"automorphism decomposition"};
    const auto& up = U.upstairs();
    const auto& down = U.downstairs();
    for (ObjectId a = 0; a < up.object_count(); ++a) {
        ++r.checked;
        auto down_aut = automorphisms(down, U.map_object(a)).size();
        auto cls = iso_class_in_fiber(U, a);
        auto up_aut = automorphisms(up, a).size();
        if (down_aut != cls.size() * up_aut)
            r.flag("|Aut| = " + std::to_string(down_aut) + " but |I| * |Aut*| = " + std::to_string(cls.size()) + " * "
                + std::to_string(up_aut) + " at " + detail::obj_name(up, a));
    }
    return r;
}

struct ExpansionPropertyReport {
    ReportStatus status = ReportStatus::inconclusive;
    bool directed = false;
    bool holds = false;          // per-object route
    bool single_object = false;  // per-decoration route
    bool routes_agree = false;
    std::vector<std::pair<ObjectId, std::optional<ObjectId>>> witnesses;         // A -> B
    std::vector<std::pair<ObjectId, std::optional<ObjectId>>> decoration_witnesses; // D* -> B
    std::optional<ObjectId> minimal_failing;
    std::string detail;
};

/// For every A, looks for a B in the truncation such that every decoration of A maps into
/// every decoration of B. Also runs the criterion that quantifies over single decorations
/// D*, which is equivalent when the upstairs category is directed.
[[nodiscard]] inline auto check_expansion_property(const ExpansionFunctor& U) -> ExpansionPropertyReport
{
    ExpansionPropertyReport r;
    const auto& up = U.upstairs();
    const auto& down = U.downstairs();
    r.directed = is_directed(up);
    auto all_into_fiber = [&](std::span<const ObjectId> sources, ObjectId B) {
        for (auto x : sources)
            for (auto y : U.fiber(B))
                if (up.hom(x, y).empty())
                    return false;
        return !U.fiber(B).empty();
    };
    r.holds = true;
    for (ObjectId a = 0; a < down.object_count(); ++a) {
        std::optional<ObjectId> found;
        for (ObjectId b = 0; b < down.object_count() && !found; ++b)
            if (all_into_fiber(U.fiber(a), b))
                found = b;
        r.witnesses.emplace_back(a, found);
        if (!found && r.holds) {
            r.holds = false;
            r.minimal_failing = a;
        }
    }
    r.single_object = true;
    for (ObjectId d = 0; d < up.object_count(); ++d) {
        std::optional<ObjectId> found;
        std::array<ObjectId, 1> one{d};
        for (ObjectId b = 0; b < down.object_count() && !found; ++b)
            if (all_into_fiber(one, b))
                found = b;
        r.decoration_witnesses.emplace_back(d, found);
        if (!found)
            r.single_object = false;
    }
    r.routes_agree = r.holds == r.single_object;
    if (!r.routes_agree && r.directed)
        r.status = ReportStatus::violation;
    else
        r.status = r.holds ? ReportStatus::ok : ReportStatus::violation;
    r.detail = std::string(r.holds ? "expansion property holds" : "expansion property fails")
        + (r.directed ? "; upstairs directed" : "; upstairs not directed")
        + (r.routes_agree ? "; routes agree" : "; routes disagree");
    return r;
}

/// Keeps the given upstairs objects. The downstairs category is kept whole, or cut down to
/// the images of the kept objects.
[[nodiscard]] inline auto restrict_upstairs(const ExpansionFunctor& U, std::vector<ObjectId> keep, bool shrink_downstairs)
    -> ExpansionFunctor
{
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    auto up = full_subcategory(U.upstairs(), keep);
    std::vector<ObjectId> down_keep;
    for (auto x : keep)
        down_keep.push_back(U.map_object(x));
    std::sort(down_keep.begin(), down_keep.end());
    down_keep.erase(std::unique(down_keep.begin(), down_keep.end()), down_keep.end());
    if (!shrink_downstairs)
        down_keep = all_objects(U.downstairs());
    auto down = full_subcategory(U.downstairs(), down_keep);
    std::vector<ObjectId> om;
    for (auto x : up.object_to_parent)
        om.push_back(down.parent_to_object[U.map_object(x)]);
    std::vector<MorphismId> mm;
    for (auto u : up.morphism_to_parent)
        mm.push_back(down.parent_to_morphism[U.map_morphism(u)]);
    return ExpansionFunctor(std::move(up.category), std::move(down.category), std::move(om), std::move(mm));
}

/// All restrictions of one upstairs object, itself included.
[[nodiscard]] inline auto age_of(const ExpansionFunctor& U, const RestrictionTable& table, ObjectId f_up) -> std::vector<ObjectId>
{
    std::set<ObjectId> age;
    for (auto e : U.downstairs().arrows_into(U.map_object(f_up)))
        age.insert(restrict(table, f_up, e));
    return {age.begin(), age.end()};
}

// ---------------------------------------------------------------------------
// Additivity

struct FiberDegree {
    ObjectId object = 0;
    DegreeBound bound;
    int aut_size = 0;
};

struct AdditivityReport {
    ReportStatus status = ReportStatus::inconclusive;
    ObjectId object = 0;
    bool reasonable = false;
    bool unique_restrictions = false;
    bool expansion_property = false;
    bool directed = false;
    DegreeBound downstairs;
    std::vector<FiberDegree> fibers;
    std::optional<int> fiber_sum;
    bool equality_expected = false;
    std::string detail;
};

namespace detail {

inline auto upstairs_pools(const ExpansionFunctor& U, const DegreeBound& down, int k_max) -> DegreePools
{
    DegreePools p;
    p.k_max = k_max;
    p.B_pool = U.preimage(down.B_pool);
    p.C_universe = U.preimage(down.C_universe);
    return p;
}

} // namespace detail

/// Downstairs degree against the sum of the fiber degrees, with upstairs pools taken as
/// preimages of the downstairs pools. Asserts <= when the functor is reasonable with unique
/// restrictions, and = when it also has the expansion property and a directed upstairs.
[[nodiscard]] inline auto verify_additivity(const ExpansionFunctor& U, ObjectId A, const DegreePools& pools,
    const SearchOptions& opts = {}) -> AdditivityReport
{
    AdditivityReport r;
    r.object = A;
    r.reasonable = check_reasonable(U).holds;
    r.unique_restrictions = check_unique_restrictions(U).axiom.holds;
    auto ep = check_expansion_property(U);
    r.expansion_property = ep.holds;
    r.directed = ep.directed;
    r.equality_expected = r.reasonable && r.unique_restrictions && r.expansion_property && r.directed;

    r.downstairs = degree_bounds(U.downstairs(), A, ColoringMode::morphism, pools, opts);
    auto up_pools = detail::upstairs_pools(U, r.downstairs, pools.k_max);
    bool known = r.downstairs.tight();
    int sum = 0;
    for (auto a : U.fiber(A)) {
        FiberDegree fd;
        fd.object = a;
        fd.aut_size = static_cast<int>(automorphisms(U.upstairs(), a).size());
        fd.bound = degree_bounds(U.upstairs(), a, ColoringMode::morphism, up_pools, opts);
        if (fd.bound.tight())
            sum += *fd.bound.upper;
        else
            known = false;
        r.fibers.push_back(std::move(fd));
    }
    if (!r.reasonable || !r.unique_restrictions) {
        r.detail = "hypotheses not met (reasonable, unique restrictions)";
        return r;
    }
    if (!known) {
        r.detail = "some degree is not tight";
        return r;
    }
    r.fiber_sum = sum;
    int t = *r.downstairs.upper;
    bool ok = t <= sum && (!r.equality_expected || t == sum);
    r.status = ok ? ReportStatus::ok : ReportStatus::violation;
    r.detail = std::to_string(t) + (t == sum ? " == " : t < sum ? " < " : " > ") + std::to_string(sum)
        + (r.equality_expected ? " (equality expected)" : " (inequality expected)");
    return r;
}

struct RatioReport {
    ReportStatus status = ReportStatus::inconclusive;
    ObjectId object = 0;
    int aut_size = 0;
    DegreeBound downstairs;
    std::vector<FiberDegree> fibers;
    std::vector<ObjectId> representatives; // one per iso class in the fiber
    std::optional<std::pair<int, int>> weighted_sum; // numerator / |Aut(A)|
    std::optional<int> representative_sum;
    std::string detail;
};

/// Object-coloring degree downstairs against the weighted fiber sum
/// sum |Aut(A*)| / |Aut(A)| * t~(A*) and against the sum over iso-class representatives.
[[nodiscard]] inline auto verify_object_ratio(const ExpansionFunctor& U, ObjectId A, const DegreePools& pools,
    const SearchOptions& opts = {}) -> RatioReport
{
    RatioReport r;
    r.object = A;
    r.aut_size = static_cast<int>(automorphisms(U.downstairs(), A).size());
    r.downstairs = degree_bounds(U.downstairs(), A, ColoringMode::subobject, pools, opts);
    auto up_pools = detail::upstairs_pools(U, r.downstairs, pools.k_max);
    bool known = r.downstairs.tight();
    int numerator = 0;
    std::set<ObjectId> covered;
    int rep_sum = 0;
    for (auto a : U.fiber(A)) {
        FiberDegree fd;
        fd.object = a;
        fd.aut_size = static_cast<int>(automorphisms(U.upstairs(), a).size());
        fd.bound = degree_bounds(U.upstairs(), a, ColoringMode::subobject, up_pools, opts);
        bool rep = !covered.count(a);
        if (rep) {
            r.representatives.push_back(a);
            for (auto x : iso_class_in_fiber(U, a))
                covered.insert(x);
        }
        if (fd.bound.tight()) {
            numerator += fd.aut_size * *fd.bound.upper;
            if (rep)
                rep_sum += *fd.bound.upper;
        }
        else
            known = false;
        r.fibers.push_back(std::move(fd));
    }
    if (!known) {
        r.detail = "some degree is not tight";
        return r;
    }
    r.weighted_sum = std::pair{numerator, r.aut_size};
    r.representative_sum = rep_sum;
    int t = *r.downstairs.upper;
    bool ok = numerator == t * r.aut_size && rep_sum == t;
    r.status = ok ? ReportStatus::ok : ReportStatus::violation;
    r.detail = std::to_string(t) + " vs weighted " + std::to_string(numerator) + "/" + std::to_string(r.aut_size)
        + " and representatives " + std::to_string(rep_sum);
    return r;
}

// ---------------------------------------------------------------------------
// Coloring expansion

struct ColoringExpansionSpec {
    FiniteCategory base;
    std::vector<ObjectId> small_objects;
    std::map<ObjectId, int> degree_map;
};

struct ColoringExpansion {
    ExpansionFunctor functor;
    std::vector<ObjectId> small_objects;
    std::map<ObjectId, int> degree_map;
    /// Per upstairs object, theta restricted to each relevant small object: theta[a][X] is
    /// the coloring of hom(X, U(a)) in hom order.
    std::vector<std::map<ObjectId, std::vector<int>>> theta;
};

inline constexpr std::size_t default_fiber_cap = 100'000;

/// Objects (C, theta) with theta_X: hom(X, C) -> t_X for every small X with A -> C;
/// morphisms are base morphisms f with delta(f . e) = theta(e).
[[nodiscard]] inline auto build_coloring_expansion(const ColoringExpansionSpec& spec, std::size_t fiber_cap = default_fiber_cap)
    -> ColoringExpansion
{
    const auto& base = spec.base;
    ColoringExpansion ce;
    ce.small_objects = spec.small_objects;
    std::sort(ce.small_objects.begin(), ce.small_objects.end());
    ce.degree_map = spec.degree_map;
    for (auto x : ce.small_objects) {
        if (!base.has_object(x))
            throw Error("coloring expansion: unknown small object " + std::to_string(x));
        auto it = spec.degree_map.find(x);
        if (it == spec.degree_map.end() || it->second < 1)
            throw Error("coloring expansion: small object " + std::to_string(x) + " needs a degree >= 1");
    }

    CategoryBuilder b;
    std::vector<ObjectId> object_map;
    for (ObjectId c = 0; c < base.object_count(); ++c) {
        std::vector<ObjectId> relevant;
        std::size_t positions = 0;
        double count = 1;
        for (auto x : ce.small_objects)
            if (!base.hom(x, c).empty()) {
                relevant.push_back(x);
                positions += base.hom(x, c).size();
                for (std::size_t i = 0; i < base.hom(x, c).size(); ++i)
                    count *= ce.degree_map.at(x);
            }
        if (count > static_cast<double>(fiber_cap))
            throw Error("coloring expansion: fiber over " + base.object_label(c) + " would have "
                + std::to_string(static_cast<std::uint64_t>(count)) + " objects (cap " + std::to_string(fiber_cap) + ")");
        std::vector<int> radix;
        for (auto x : relevant)
            for (std::size_t i = 0; i < base.hom(x, c).size(); ++i)
                radix.push_back(ce.degree_map.at(x));
        std::vector<int> digits(positions, 0);
        for (;;) {
            std::map<ObjectId, std::vector<int>> th;
            std::string label = base.object_label(c) + "{";
            std::size_t p = 0;
            for (std::size_t r = 0; r < relevant.size(); ++r) {
                auto x = relevant[r];
                auto n = base.hom(x, c).size();
                th[x].assign(digits.begin() + static_cast<std::ptrdiff_t>(p), digits.begin() + static_cast<std::ptrdiff_t>(p + n));
                p += n;
                if (r)
                    label += ";";
                label += base.object_label(x) + ":";
                for (auto d : th[x])
                    label += std::to_string(d);
            }
            label += "}";
            b.add_object(label);
            object_map.push_back(c);
            ce.theta.push_back(std::move(th));
            // odometer, last position fastest
            std::size_t i = positions;
            while (i > 0) {
                --i;
                if (++digits[i] < radix[i])
                    break;
                digits[i] = 0;
                if (i == 0) {
                    i = positions + 1;
                    break;
                }
            }
            if (positions == 0 || i == positions + 1)
                break;
        }
    }

    std::vector<std::vector<ObjectId>> fibers(base.object_count());
    for (ObjectId a = 0; a < object_map.size(); ++a)
        fibers[object_map[a]].push_back(a);
    std::vector<MorphismId> morphism_map;
    std::map<std::tuple<ObjectId, ObjectId, MorphismId>, MorphismId> lift;
    for (ObjectId x = 0; x < object_map.size(); ++x)
        for (ObjectId y = 0; y < object_map.size(); ++y)
            for (auto f : base.hom(object_map[x], object_map[y])) {
                bool preserves = true;
                for (const auto& [s, colors] : ce.theta[x]) {
                    auto h = base.hom(s, object_map[x]);
                    const auto& target = ce.theta[y].at(s);
                    for (std::size_t i = 0; i < h.size() && preserves; ++i)
                        preserves = target[base.hom_position(base.compose_unchecked(f, h[i]))] == colors[i];
                    if (!preserves)
                        break;
                }
                if (!preserves)
                    continue;
                auto u = b.add_morphism(x, y, base.morphism(f).label);
                morphism_map.push_back(f);
                lift[{x, y, f}] = u;
            }
    std::vector<std::pair<ObjectId, ObjectId>> ends(morphism_map.size());
    for (const auto& [key, u] : lift)
        ends[u] = {std::get<0>(key), std::get<1>(key)};
    std::vector<std::vector<MorphismId>> into(object_map.size());
    for (MorphismId u = 0; u < ends.size(); ++u)
        into[ends[u].second].push_back(u);
    for (MorphismId v = 0; v < ends.size(); ++v)
        for (auto u : into[ends[v].first]) {
            auto gf = base.compose_unchecked(morphism_map[v], morphism_map[u]);
            b.set_compose(v, u, lift.at({ends[u].first, ends[v].second, gf}));
        }
    for (ObjectId x = 0; x < object_map.size(); ++x)
        b.set_identity(x, lift.at({x, x, base.identity(object_map[x])}));
    ce.functor = ExpansionFunctor(std::move(b).build(), base, std::move(object_map), std::move(morphism_map));
    return ce;
}

struct MinExpansionsReport {
    ReportStatus status = ReportStatus::inconclusive;
    ObjectId object = 0;
    int t = 1;
    std::optional<ObjectId> ambient;
    std::size_t distinct = 0;
    std::vector<ObjectId> restrictions;
    std::string detail;
};

/// Counts the distinct decorations of A obtained by restricting one decorated ambient
/// object. When the ambient's A-coloring uses all t colors there must be at least t.
[[nodiscard]] inline auto check_min_expansions(const ColoringExpansion& ce, ObjectId A, int t,
    std::optional<ObjectId> ambient = std::nullopt) -> MinExpansionsReport
{
    MinExpansionsReport r;
    r.object = A;
    r.t = t;
    const auto& U = ce.functor;
    const auto& base = U.downstairs();
    auto surjective = [&](ObjectId a) {
        auto it = ce.theta[a].find(A);
        if (it == ce.theta[a].end())
            return false;
        std::set<int> used(it->second.begin(), it->second.end());
        return static_cast<int>(used.size()) >= t;
    };
    if (!ambient) {
        auto top = static_cast<ObjectId>(base.object_count() - 1);
        for (auto a : U.fiber(top))
            if (surjective(a)) {
                ambient = a;
                break;
            }
        if (!ambient) {
            r.detail = "no decoration of the largest object colors hom(A, -) with all t colors";
            return r;
        }
    }
    r.ambient = ambient;
    if (!surjective(*ambient)) {
        r.detail = "the ambient coloring does not use all t colors; not applicable";
        return r;
    }
    RestrictionTable table(U);
    std::set<ObjectId> seen;
    for (auto e : base.hom(A, U.map_object(*ambient)))
        seen.insert(restrict(table, *ambient, e));
    r.restrictions.assign(seen.begin(), seen.end());
    r.distinct = seen.size();
    r.status = static_cast<int>(r.distinct) >= t ? ReportStatus::ok : ReportStatus::violation;
    r.detail = std::to_string(r.distinct) + " distinct decorations of A for t = " + std::to_string(t);
    return r;
}

// ---------------------------------------------------------------------------
// Functor file format:
//
//   upstairs
//   <category>
//   end
//   downstairs
//   <category>
//   end
//   umap obj <upstairs id> <downstairs id>
//   umap mor <upstairs id> <downstairs id>

[[nodiscard]] inline auto read_functor(std::istream& in) -> ExpansionFunctor
{
    std::size_t line_no = 0;
    std::optional<FiniteCategory> up, down;
    std::map<ObjectId, ObjectId> om;
    std::map<MorphismId, MorphismId> mm;
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        auto tokens = detail::split_tokens(raw);
        if (tokens.empty() || tokens[0].front() == '#')
            continue;
        if (tokens.size() == 1 && tokens[0] == "upstairs") {
            if (up)
                throw ParseError(line_no, "duplicate upstairs block");
            up = detail::read_category_block(in, line_no, "end");
        }
        else if (tokens.size() == 1 && tokens[0] == "downstairs") {
            if (down)
                throw ParseError(line_no, "duplicate downstairs block");
            down = detail::read_category_block(in, line_no, "end");
        }
        else if (tokens[0] == "umap") {
            if (tokens.size() != 4 || (tokens[1] != "obj" && tokens[1] != "mor"))
                throw ParseError(line_no, "expected 'umap obj|mor <upstairs id> <downstairs id>'");
            auto u = static_cast<std::uint32_t>(detail::parse_index(tokens[2], line_no, "upstairs id"));
            auto d = static_cast<std::uint32_t>(detail::parse_index(tokens[3], line_no, "downstairs id"));
            auto& table = tokens[1] == "obj" ? om : mm;
            if (!table.emplace(u, d).second)
                throw ParseError(line_no, "duplicate umap entry for " + std::string(tokens[1]) + " " + std::to_string(u));
        }
        else
            throw ParseError(line_no, "unknown directive '" + std::string(tokens[0]) + "'");
    }
    if (!up || !down)
        throw ParseError(line_no, "functor file needs both an upstairs and a downstairs block");
    std::vector<ObjectId> object_map(up->object_count(), no_object);
    std::vector<MorphismId> morphism_map(up->morphism_count(), no_morphism);
    for (auto [u, d] : om) {
        if (u >= object_map.size())
            throw Error("umap obj: unknown upstairs object " + std::to_string(u));
        object_map[u] = d;
    }
    for (auto [u, d] : mm) {
        if (u >= morphism_map.size())
            throw Error("umap mor: unknown upstairs morphism " + std::to_string(u));
        morphism_map[u] = d;
    }
    for (std::size_t i = 0; i < object_map.size(); ++i)
        if (object_map[i] == no_object)
            throw Error("umap obj: upstairs object " + std::to_string(i) + " is not mapped");
    for (std::size_t i = 0; i < morphism_map.size(); ++i)
        if (morphism_map[i] == no_morphism)
            throw Error("umap mor: upstairs morphism " + std::to_string(i) + " is not mapped");
    return ExpansionFunctor(std::move(*up), std::move(*down), std::move(object_map), std::move(morphism_map));
}

[[nodiscard]] inline auto load_functor(const std::string& path) -> ExpansionFunctor
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open functor file '" + path + "'");
    return read_functor(in);
}

inline void write_functor(std::ostream& out, const ExpansionFunctor& U)
{
    out << "upstairs\n";
    write_category(out, U.upstairs());
    out << "end\ndownstairs\n";
    write_category(out, U.downstairs());
    out << "end\n";
    for (ObjectId a = 0; a < U.upstairs().object_count(); ++a)
        out << "umap obj " << a << ' ' << U.map_object(a) << '\n';
    for (MorphismId u = 0; u < U.upstairs().morphism_count(); ++u)
        out << "umap mor " << u << ' ' << U.map_morphism(u) << '\n';
}

[[nodiscard]] inline auto format_functor(const ExpansionFunctor& U) -> std::string
{
    std::ostringstream out;
    write_functor(out, U);
    return out.str();
}

} // namespace ramcat
