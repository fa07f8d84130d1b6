#pragma once

// Built-in truncated categories: linear orders with embeddings (LO), finite sets with
// injections (Inj) and finite sets with surjections (Surj). Objects are the sizes
// 1..max_size with object id = size - 1. Morphisms are functions encoded by their image
// tuples and numbered in (dom, cod, lexicographic tuple) order.

#include <ramcat/expansion_functor.hpp>
#include <ramcat/fincat.hpp>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

namespace ramcat {

enum class Family { lo, inj, surj };

[[nodiscard]] inline auto family_name(Family f) -> std::string
{
    switch (f) {
    case Family::lo: return "lo";
    case Family::inj: return "inj";
    case Family::surj: return "surj";
    }
    return "?";
}

[[nodiscard]] inline auto parse_family(const std::string& name) -> Family
{
    if (name == "lo")
        return Family::lo;
    if (name == "inj")
        return Family::inj;
    if (name == "surj")
        return Family::surj;
    throw Error("unknown family '" + name + "' (expected lo, inj or surj)");
}

struct UniverseSpec {
    Family family = Family::lo;
    int max_size = 1;
};

struct GeneratorCaps {
    int lo = 7;
    int inj = 7;
    int surj = 5;
};

using Tuple = std::vector<std::uint8_t>;

/// A generated category together with the function behind each morphism.
struct FunctionCategory {
    FiniteCategory category;
    std::vector<Tuple> images; // images[f][i] = f(i)
};

[[nodiscard]] inline auto object_for_size(int size) -> ObjectId { return static_cast<ObjectId>(size - 1); }

namespace detail {

inline auto tuple_label(const Tuple& t) -> std::string
{
    std::string s = "[";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i)
            s += ',';
        s += std::to_string(t[i]);
    }
    return s + "]";
}

inline auto tuple_key(ObjectId dom, ObjectId cod, const Tuple& t) -> std::uint64_t
{
    std::uint64_t code = 0;
    for (auto it = t.rbegin(); it != t.rend(); ++it)
        code = code * 8 + *it;
    return (static_cast<std::uint64_t>(dom) << 40) | (static_cast<std::uint64_t>(cod) << 32) | code;
}

/// All maps [a] -> [b] of the given kind, lexicographic order.
inline auto enumerate_maps(Family family, int a, int b) -> std::vector<Tuple>
{
    std::vector<Tuple> out;
    Tuple t(static_cast<std::size_t>(a), 0);
    std::vector<int> used(static_cast<std::size_t>(b), 0);
    auto rec = [&](auto&& self, int i) -> void {
        if (i == a) {
            if (family == Family::surj && std::find(used.begin(), used.end(), 0) != used.end())
                return;
            out.push_back(t);
            return;
        }
        for (int v = 0; v < b; ++v) {
            if (family != Family::surj && used[v])
                continue;
            if (family == Family::lo && i > 0 && v <= t[i - 1])
                continue;
            t[i] = static_cast<std::uint8_t>(v);
            ++used[v];
            self(self, i + 1);
            --used[v];
        }
    };
    rec(rec, 0);
    return out;
}

} // namespace detail

[[nodiscard]] inline auto generate_with_images(const UniverseSpec& spec, const GeneratorCaps& caps = {})
    -> FunctionCategory
{
    int cap = spec.family == Family::lo ? caps.lo : spec.family == Family::inj ? caps.inj : caps.surj;
    if (spec.max_size < 1)
        throw Error("generate: max_size must be at least 1");
    if (spec.max_size > cap)
        throw Error("generate: max_size " + std::to_string(spec.max_size) + " exceeds the cap "
            + std::to_string(cap) + " for family " + family_name(spec.family));

    std::string prefix = family_name(spec.family);
    CategoryBuilder b;
    for (int n = 1; n <= spec.max_size; ++n)
        b.add_object(prefix + std::to_string(n));

    FunctionCategory result;
    std::unordered_map<std::uint64_t, MorphismId> by_tuple;
    for (int a = 1; a <= spec.max_size; ++a)
        for (int c = 1; c <= spec.max_size; ++c)
            for (auto& t : detail::enumerate_maps(spec.family, a, c)) {
                auto id = b.add_morphism(object_for_size(a), object_for_size(c), detail::tuple_label(t));
                by_tuple[detail::tuple_key(object_for_size(a), object_for_size(c), t)] = id;
                result.images.push_back(std::move(t));
            }

    // Compose through the tuples: (g . f)(i) = g(f(i)).
    std::vector<std::vector<MorphismId>> into(static_cast<std::size_t>(spec.max_size));
    std::vector<ObjectId> dom_of(result.images.size()), cod_of(result.images.size());
    {
        MorphismId id = 0;
        for (int a = 1; a <= spec.max_size; ++a)
            for (int c = 1; c <= spec.max_size; ++c)
                for (auto count = detail::enumerate_maps(spec.family, a, c).size(); count > 0; --count) {
                    dom_of[id] = object_for_size(a);
                    cod_of[id] = object_for_size(c);
                    into[cod_of[id]].push_back(id);
                    ++id;
                }
    }
    Tuple gf;
    for (MorphismId g = 0; g < result.images.size(); ++g)
        for (auto f : into[dom_of[g]]) {
            const auto& ft = result.images[f];
            gf.resize(ft.size());
            for (std::size_t i = 0; i < ft.size(); ++i)
                gf[i] = result.images[g][ft[i]];
            b.set_compose(g, f, by_tuple.at(detail::tuple_key(dom_of[f], cod_of[g], gf)));
        }
    for (int n = 1; n <= spec.max_size; ++n) {
        Tuple id(static_cast<std::size_t>(n));
        std::iota(id.begin(), id.end(), std::uint8_t{0});
        b.set_identity(object_for_size(n), by_tuple.at(detail::tuple_key(object_for_size(n), object_for_size(n), id)));
    }
    result.category = std::move(b).build();
    return result;
}

[[nodiscard]] inline auto generate(const UniverseSpec& spec, const GeneratorCaps& caps = {}) -> FiniteCategory
{
    return generate_with_images(spec, caps).category;
}

/// Ordered finite sets over Inj: one upstairs object per linear order on {0..n-1}, n <= max_size,
/// with the order-preserving injections as morphisms. U forgets the order.
///
/// An order is stored as the list of elements from smallest to largest.
struct OrderExpansion {
    ExpansionFunctor functor;
    std::vector<Tuple> orders; // per upstairs object
};

[[nodiscard]] inline auto forgetful_lo_to_inj_with_orders(int max_size, const GeneratorCaps& caps = {}) -> OrderExpansion
{
    auto down = generate_with_images(UniverseSpec{Family::inj, max_size}, caps);
    const auto& inj = down.category;

    OrderExpansion result;
    std::vector<std::vector<int>> ranks; // ranks[up][x] = position of x in the order
    std::vector<ObjectId> object_map;
    CategoryBuilder b;
    for (int n = 1; n <= max_size; ++n) {
        Tuple perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), std::uint8_t{0});
        do {
            b.add_object("ord" + detail::tuple_label(perm));
            std::vector<int> rank(perm.size());
            for (std::size_t i = 0; i < perm.size(); ++i)
                rank[perm[i]] = static_cast<int>(i);
            ranks.push_back(std::move(rank));
            result.orders.push_back(perm);
            object_map.push_back(object_for_size(n));
        } while (std::next_permutation(perm.begin(), perm.end()));
    }

    const auto up_count = static_cast<ObjectId>(object_map.size());
    std::vector<MorphismId> morphism_map;
    std::unordered_map<std::uint64_t, MorphismId> up_id; // (dom, cod, down) -> upstairs id
    auto up_key = [](ObjectId p, ObjectId q, MorphismId f) {
        return (static_cast<std::uint64_t>(p) << 48) | (static_cast<std::uint64_t>(q) << 32) | f;
    };
    for (ObjectId p = 0; p < up_count; ++p)
        for (ObjectId q = 0; q < up_count; ++q)
            for (auto f : inj.hom(object_map[p], object_map[q])) {
                const auto& img = down.images[f];
                const auto& order_p = result.orders[p];
                bool preserves = true;
                for (std::size_t i = 1; i < order_p.size() && preserves; ++i)
                    preserves = ranks[q][img[order_p[i - 1]]] < ranks[q][img[order_p[i]]];
                if (!preserves)
                    continue;
                auto u = b.add_morphism(p, q, inj.morphism(f).label);
                morphism_map.push_back(f);
                up_id[up_key(p, q, f)] = u;
            }

    std::vector<std::vector<MorphismId>> into(up_count);
    std::vector<std::pair<ObjectId, ObjectId>> ends(morphism_map.size());
    for (const auto& [k, u] : up_id)
        ends[u] = {static_cast<ObjectId>(k >> 48), static_cast<ObjectId>((k >> 32) & 0xffff)};
    for (MorphismId u = 0; u < ends.size(); ++u)
        into[ends[u].second].push_back(u);
    for (MorphismId v = 0; v < ends.size(); ++v)
        for (auto u : into[ends[v].first]) {
            auto down_gf = inj.compose_unchecked(morphism_map[v], morphism_map[u]);
            b.set_compose(v, u, up_id.at(up_key(ends[u].first, ends[v].second, down_gf)));
        }
    for (ObjectId p = 0; p < up_count; ++p)
        b.set_identity(p, up_id.at(up_key(p, p, inj.identity(object_map[p]))));

    result.functor = ExpansionFunctor(std::move(b).build(), inj, std::move(object_map), std::move(morphism_map));
    return result;
}

[[nodiscard]] inline auto forgetful_lo_to_inj(int max_size, const GeneratorCaps& caps = {}) -> ExpansionFunctor
{
    return forgetful_lo_to_inj_with_orders(max_size, caps).functor;
}

} // namespace ramcat
