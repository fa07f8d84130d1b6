#pragma once

// Brute-force reference implementations used by the tests. They only read hom-sets and the
// composition table and enumerate everything.

#include <ramcat/fincat.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

namespace oracle {

using ramcat::FiniteCategory;
using ramcat::MorphismId;
using ramcat::ObjectId;

inline auto binomial(int n, int k) -> std::uint64_t
{
    if (k < 0 || k > n)
        return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i)
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

inline auto falling(int n, int k) -> std::uint64_t
{
    if (k > n)
        return 0;
    std::uint64_t r = 1;
    for (int i = 0; i < k; ++i)
        r *= static_cast<std::uint64_t>(n - i);
    return r;
}

/// Surjections from an a-set onto a b-set by inclusion-exclusion.
inline auto surjections(int a, int b) -> std::uint64_t
{
    std::int64_t total = 0;
    for (int j = 0; j <= b; ++j) {
        std::int64_t term = static_cast<std::int64_t>(binomial(b, j));
        for (int i = 0; i < a; ++i)
            term *= (b - j);
        total += (j % 2 ? -term : term);
    }
    return static_cast<std::uint64_t>(total);
}

/// Invertible endomorphisms, found by trying every pair.
inline auto automorphisms(const FiniteCategory& cat, ObjectId a) -> std::vector<MorphismId>
{
    std::vector<MorphismId> out;
    auto id = cat.identity(a);
    for (auto f : cat.hom(a, a))
        for (auto g : cat.hom(a, a))
            if (cat.compose(g, f) == id && cat.compose(f, g) == id) {
                out.push_back(f);
                break;
            }
    return out;
}

/// Calls fn on every function {0..n-1} -> {0..k-1}; stops when fn returns false.
inline void each_function(std::size_t n, int k, const std::function<bool(const std::vector<int>&)>& fn)
{
    std::vector<int> c(n, 0);
    for (;;) {
        if (!fn(c))
            return;
        std::size_t i = 0;
        while (i < n && ++c[i] == k)
            c[i++] = 0;
        if (i == n)
            return;
    }
}

/// The positions being colored: hom(A, C) arrows, or their classes under the automorphisms
/// of A. Each arrow is mapped to its position index.
struct Positions {
    std::vector<MorphismId> arrows;
    std::map<MorphismId, std::size_t> index;
    std::size_t count = 0;
};

inline auto positions(const FiniteCategory& cat, ObjectId A, ObjectId C, bool subobject, bool reversed) -> Positions
{
    Positions p;
    auto hom = reversed ? cat.hom(C, A) : cat.hom(A, C);
    p.arrows.assign(hom.begin(), hom.end());
    if (!subobject) {
        for (std::size_t i = 0; i < p.arrows.size(); ++i)
            p.index[p.arrows[i]] = i;
        p.count = p.arrows.size();
        return p;
    }
    auto aut = oracle::automorphisms(cat, A);
    for (auto f : p.arrows) {
        if (p.index.count(f))
            continue;
        for (auto alpha : aut)
            p.index[reversed ? cat.compose(alpha, f) : cat.compose(f, alpha)] = p.count;
        ++p.count;
    }
    return p;
}

struct ArrowOutcome {
    bool holds = false;
    std::optional<std::vector<int>> bad_coloring; // by position index
};

/// Tries every k-coloring of the positions; the relation holds if each one admits a w whose
/// copy sees at most t colors.
inline auto arrow(const FiniteCategory& cat, ObjectId A, ObjectId B, ObjectId C, int k, int t, bool subobject = false,
    bool reversed = false) -> ArrowOutcome
{
    auto pos = positions(cat, A, C, subobject, reversed);
    auto ws = reversed ? cat.hom(C, B) : cat.hom(B, C);
    auto fs = reversed ? cat.hom(B, A) : cat.hom(A, B);
    std::vector<std::vector<std::size_t>> copies;
    for (auto w : ws) {
        std::vector<std::size_t> copy;
        for (auto f : fs)
            copy.push_back(pos.index.at(reversed ? cat.compose(f, w) : cat.compose(w, f)));
        copies.push_back(copy);
    }
    ArrowOutcome out;
    out.holds = true;
    each_function(pos.count, k, [&](const std::vector<int>& chi) {
        for (const auto& copy : copies) {
            std::set<int> seen;
            for (auto i : copy)
                seen.insert(chi[i]);
            if (static_cast<int>(seen.size()) <= t)
                return true;
        }
        out.holds = false;
        out.bad_coloring = chi;
        return false;
    });
    return out;
}

/// Least t making the relation hold for every B in the pool and every k <= k_max with some C
/// in the universe; nullopt when some cell never holds.
inline auto degree(const FiniteCategory& cat, ObjectId A, const std::vector<ObjectId>& B_pool,
    const std::vector<ObjectId>& universe, int k_max, bool subobject = false, bool reversed = false) -> std::optional<int>
{
    int worst = 1;
    for (auto B : B_pool)
        for (int k = 2; k <= k_max; ++k) {
            std::optional<int> least;
            for (int t = 1; t <= 64 && !least; ++t) {
                for (auto C : universe)
                    if (arrow(cat, A, B, C, k, t, subobject, reversed).holds) {
                        least = t;
                        break;
                    }
                auto copy = reversed ? cat.hom(B, A).size() : cat.hom(A, B).size();
                if (!least && static_cast<std::size_t>(t) > copy)
                    break;
            }
            if (!least)
                return std::nullopt;
            worst = std::max(worst, *least);
        }
    return worst;
}

/// Set partitions of {0..n-1} as restricted-growth strings.
inline void each_partition(std::size_t n, const std::function<void(const std::vector<int>&)>& fn)
{
    std::vector<int> c(n, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int top) {
        if (i == n) {
            fn(c);
            return;
        }
        for (int v = 0; v <= top + 1; ++v) {
            c[i] = v;
            rec(i + 1, std::max(top, v));
        }
    };
    rec(0, -1);
}

/// Is lambda essential at B: every partition of hom(A, F) has a w with ker lambda inside
/// ker chi^(w).
inline auto essential(const FiniteCategory& cat, ObjectId A, ObjectId B, ObjectId F, const std::vector<int>& lambda) -> bool
{
    auto hab = cat.hom(A, B);
    auto haf = cat.hom(A, F);
    std::map<MorphismId, std::size_t> at;
    for (std::size_t i = 0; i < haf.size(); ++i)
        at[haf[i]] = i;
    bool all = true;
    each_partition(haf.size(), [&](const std::vector<int>& chi) {
        if (!all)
            return;
        bool some = false;
        for (auto w : cat.hom(B, F)) {
            bool ok = true;
            for (std::size_t i = 0; i < hab.size() && ok; ++i)
                for (std::size_t j = 0; j < hab.size() && ok; ++j)
                    if (lambda[i] == lambda[j] && chi[at[cat.compose(w, hab[i])]] != chi[at[cat.compose(w, hab[j])]])
                        ok = false;
            if (ok) {
                some = true;
                break;
            }
        }
        all = some;
    });
    return all;
}

inline auto essential_exists(const FiniteCategory& cat, ObjectId A, ObjectId B, ObjectId F, int t) -> bool
{
    bool found = false;
    each_function(cat.hom(A, B).size(), t, [&](const std::vector<int>& lambda) {
        found = essential(cat, A, B, F, lambda);
        return !found;
    });
    return found;
}

} // namespace oracle
