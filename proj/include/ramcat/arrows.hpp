#pragma once

// Exhaustive search for the arrow relation C -> (B)^A_{k,t}.
//
// The relation fails exactly when some k-coloring of hom(A, C) (or of the ~_A classes in
// subobject mode) gives every copy w . hom(A, B), w in hom(B, C), more than t colors. The
// search looks for such a coloring. Each copy is a "bundle" of positions; a bundle is
// killed once it sees t + 1 colors, and a branch is cut as soon as some bundle can no
// longer be killed. Colorings are enumerated as restricted-growth strings and reduced by
// a lex-leader test under the permutations f -> s . f . a for s in Aut(C), a in Aut(A).

#include <ramcat/fincat.hpp>
#include <ramcat/worker_pool.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ramcat {

inline constexpr std::uint64_t default_node_budget = 100'000'000;

enum class ColoringMode { morphism, subobject };

[[nodiscard]] inline auto mode_name(ColoringMode m) -> std::string
{
    return m == ColoringMode::morphism ? "morphism" : "subobject";
}

[[nodiscard]] inline auto parse_mode(const std::string& s) -> ColoringMode
{
    if (s == "morphism" || s == "m")
        return ColoringMode::morphism;
    if (s == "subobject" || s == "s")
        return ColoringMode::subobject;
    throw Error("unknown mode '" + s + "' (expected morphism or subobject)");
}

/// direct: color hom(A, C), copies w . hom(A, B). reversed: color hom(C, A), copies
/// hom(B, A) . w. The reversed orientation is the arrow relation of the opposite category
/// computed without building it.
enum class Orientation { direct, reversed };

struct ArrowQuery {
    ObjectId A = 0;
    ObjectId B = 0;
    ObjectId C = 0;
    int k = 2;
    int t = 1;
    ColoringMode mode = ColoringMode::morphism;

    auto operator==(const ArrowQuery&) const -> bool = default;
};

enum class ArrowStatus { holds, fails, inconclusive };

[[nodiscard]] inline auto status_name(ArrowStatus s) -> std::string
{
    switch (s) {
    case ArrowStatus::holds: return "holds";
    case ArrowStatus::fails: return "fails";
    case ArrowStatus::inconclusive: return "inconclusive";
    }
    return "?";
}

/// A coloring of hom(A, C) (morphism mode) or of its ~_A classes (subobject mode).
struct Coloring {
    ColoringMode mode = ColoringMode::morphism;
    int k = 2;
    std::vector<MorphismId> domain;               // arrows, or class representatives
    std::vector<std::vector<MorphismId>> classes; // subobject mode only
    std::vector<int> colors;                      // colors[i] colors domain[i]

    /// Color of an individual arrow of hom(A, C), or -1.
    [[nodiscard]] auto color_of(MorphismId f) const -> int
    {
        if (mode == ColoringMode::morphism) {
            auto it = std::find(domain.begin(), domain.end(), f);
            return it == domain.end() ? -1 : colors[static_cast<std::size_t>(it - domain.begin())];
        }
        for (std::size_t i = 0; i < classes.size(); ++i)
            if (std::find(classes[i].begin(), classes[i].end(), f) != classes[i].end())
                return colors[i];
        return -1;
    }

    auto operator==(const Coloring&) const -> bool = default;
};

struct ArrowVerdict {
    ArrowStatus status = ArrowStatus::inconclusive;
    std::optional<Coloring> witness;
    std::uint64_t nodes = 0;
    double elapsed_ms = 0;
    std::string note;

    [[nodiscard]] auto holds() const -> bool { return status == ArrowStatus::holds; }
    [[nodiscard]] auto fails() const -> bool { return status == ArrowStatus::fails; }
    [[nodiscard]] auto conclusive() const -> bool { return status != ArrowStatus::inconclusive; }
};

struct SearchOptions {
    std::uint64_t node_budget = default_node_budget;
    WorkerPool* pool = nullptr;
    std::size_t split_target = 64;
    bool symmetry_breaking = true;
    std::size_t symmetry_cap = 20'000;
};

/// The bare combinatorial problem: find a k-coloring of `positions` items that gives every
/// bundle more than t colors. Bundles and symmetries are sorted, so two constructions of
/// the same problem compare equal.
struct ColoringProblem {
    std::size_t positions = 0;
    int k = 2;
    int t = 1;
    std::vector<std::vector<std::uint32_t>> bundles;
    std::vector<std::vector<std::uint32_t>> symmetries; // non-identity permutations of positions

    auto operator==(const ColoringProblem&) const -> bool = default;
};

struct SolveResult {
    ArrowStatus status = ArrowStatus::inconclusive;
    std::vector<int> colors; // one per position when status == fails
    std::uint64_t nodes = 0;
};

namespace detail {

class ColoringSearch {
public:
    ColoringSearch(const ColoringProblem& p, bool use_symmetry) : p_(p), k_(p.k), t_(p.t)
    {
        order_bundles();
        bundle_size_.resize(p_.bundles.size());
        pos_bundles_.resize(p_.positions);
        for (std::size_t b = 0; b < p_.bundles.size(); ++b) {
            bundle_size_[b] = static_cast<std::uint32_t>(p_.bundles[b].size());
            for (auto x : p_.bundles[b])
                pos_bundles_[rank_[x]].push_back(static_cast<std::uint32_t>(b));
        }
        if (use_symmetry)
            for (const auto& s : p_.symmetries) {
                std::vector<std::uint32_t> in_dfs(p_.positions);
                for (std::size_t i = 0; i < p_.positions; ++i)
                    in_dfs[i] = rank_[s[order_[i]]];
                syms_.push_back(std::move(in_dfs));
            }
    }

    struct State {
        std::vector<int> assign;
        std::vector<std::uint32_t> counts;
        std::vector<std::uint32_t> distinct;
        std::vector<std::uint32_t> uncolored;
        std::size_t killed = 0;
        std::vector<std::uint32_t> stamp;
        std::vector<int> relabel;
        std::uint32_t stamp_id = 0;
        std::uint64_t nodes = 0;
        std::uint64_t budget = 0;
        bool out_of_budget = false;
        bool cancelled = false;
        std::vector<int> witness;
        const std::function<bool()>* should_stop = nullptr;
    };

    struct Prefix {
        std::vector<int> colors;
        int max_used = -1;
    };

    [[nodiscard]] auto make_state(std::uint64_t budget) const -> State
    {
        State s;
        s.assign.assign(p_.positions, -1);
        s.counts.assign(p_.bundles.size() * static_cast<std::size_t>(k_), 0);
        s.distinct.assign(p_.bundles.size(), 0);
        s.uncolored = bundle_size_;
        s.stamp.assign(static_cast<std::size_t>(k_), 0);
        s.relabel.assign(static_cast<std::size_t>(k_), 0);
        s.budget = budget;
        return s;
    }

    /// True when some bundle can never reach t + 1 colors, so no witness exists at all.
    [[nodiscard]] auto root_infeasible() const -> bool
    {
        return std::any_of(bundle_size_.begin(), bundle_size_.end(),
            [&](std::uint32_t size) { return std::min<std::uint32_t>(size, static_cast<std::uint32_t>(k_)) <= static_cast<std::uint32_t>(t_); });
    }

    /// Enumerates surviving prefixes of length `depth` (shorter ones when they already
    /// kill every bundle). Returns false when the budget runs out.
    auto frontier(State& s, std::size_t depth, std::vector<Prefix>& out) const -> bool
    {
        out.clear();
        return collect(s, 0, -1, depth, out) >= 0;
    }

    /// Replays a prefix and searches below it. 1 = witness in s.witness, 0 = exhausted,
    /// -1 = stopped (budget or cancellation).
    auto run_branch(State& s, const Prefix& prefix) const -> int
    {
        for (std::size_t d = 0; d < prefix.colors.size(); ++d)
            place(s, d, prefix.colors[d]);
        return dfs(s, prefix.colors.size(), prefix.max_used);
    }

    [[nodiscard]] auto to_positions(const std::vector<int>& dfs_colors) const -> std::vector<int>
    {
        std::vector<int> out(p_.positions, 0);
        for (std::size_t i = 0; i < p_.positions; ++i)
            out[order_[i]] = dfs_colors[i];
        return out;
    }

    [[nodiscard]] auto positions() const -> std::size_t { return p_.positions; }

private:
    // Positions are visited bundle by bundle, always continuing with the bundle that has the
    // most positions already placed, so bundles complete (and get killed) early.
    void order_bundles()
    {
        const auto n = p_.positions;
        rank_.assign(n, std::numeric_limits<std::uint32_t>::max());
        std::vector<char> bundle_done(p_.bundles.size(), 0);
        std::vector<std::uint32_t> placed(p_.bundles.size(), 0);
        std::vector<std::vector<std::uint32_t>> containing(n);
        for (std::size_t b = 0; b < p_.bundles.size(); ++b)
            for (auto x : p_.bundles[b])
                containing[x].push_back(static_cast<std::uint32_t>(b));
        auto append = [&](std::uint32_t x) {
            if (rank_[x] != std::numeric_limits<std::uint32_t>::max())
                return;
            rank_[x] = static_cast<std::uint32_t>(order_.size());
            order_.push_back(x);
            for (auto b : containing[x])
                ++placed[b];
        };
        for (;;) {
            std::size_t best = p_.bundles.size();
            for (std::size_t b = 0; b < p_.bundles.size(); ++b) {
                if (bundle_done[b] || placed[b] == p_.bundles[b].size())
                    continue;
                if (best == p_.bundles.size() || placed[b] > placed[best])
                    best = b;
            }
            if (best == p_.bundles.size())
                break;
            bundle_done[best] = 1;
            for (auto x : p_.bundles[best])
                append(x);
        }
        for (std::uint32_t x = 0; x < n; ++x)
            append(x);
    }

    auto place(State& s, std::size_t d, int c) const -> bool
    {
        s.assign[d] = c;
        bool feasible = true;
        const auto t = static_cast<std::uint32_t>(t_);
        for (auto b : pos_bundles_[d]) {
            --s.uncolored[b];
            if (s.counts[b * static_cast<std::size_t>(k_) + static_cast<std::size_t>(c)]++ == 0 && ++s.distinct[b] == t + 1)
                ++s.killed;
            auto dist = s.distinct[b];
            if (dist <= t && dist + std::min(s.uncolored[b], static_cast<std::uint32_t>(k_) - dist) <= t)
                feasible = false;
        }
        return feasible;
    }

    void unplace(State& s, std::size_t d, int c) const
    {
        const auto t = static_cast<std::uint32_t>(t_);
        for (auto b : pos_bundles_[d]) {
            ++s.uncolored[b];
            if (--s.counts[b * static_cast<std::size_t>(k_) + static_cast<std::size_t>(c)] == 0 && s.distinct[b]-- == t + 1)
                --s.killed;
        }
        s.assign[d] = -1;
    }

    /// Rejects the prefix of length p when some symmetry maps it to a lexicographically
    /// smaller restricted-growth string on the part it determines.
    auto lex_leader(State& s, std::size_t p) const -> bool
    {
        for (const auto& sigma : syms_) {
            ++s.stamp_id;
            int next = 0;
            for (std::size_t i = 0; i < p; ++i) {
                auto j = sigma[i];
                if (j >= p)
                    break;
                auto c = static_cast<std::size_t>(s.assign[j]);
                if (s.stamp[c] != s.stamp_id) {
                    s.stamp[c] = s.stamp_id;
                    s.relabel[c] = next++;
                }
                auto m = s.relabel[c];
                if (m < s.assign[i])
                    return false;
                if (m > s.assign[i])
                    break;
            }
        }
        return true;
    }

    auto tick(State& s) const -> bool
    {
        if (++s.nodes > s.budget) {
            s.out_of_budget = true;
            return false;
        }
        if ((s.nodes & 1023) == 0 && s.should_stop && (*s.should_stop)()) {
            s.cancelled = true;
            return false;
        }
        return true;
    }

    auto dfs(State& s, std::size_t d, int max_used) const -> int
    {
        if (!tick(s))
            return -1;
        if (s.killed == p_.bundles.size()) {
            s.witness.assign(p_.positions, 0);
            for (std::size_t i = 0; i < d; ++i)
                s.witness[i] = s.assign[i];
            return 1;
        }
        if (d == p_.positions)
            return 0;
        int limit = std::min(max_used + 1, k_ - 1);
        for (int c = 0; c <= limit; ++c) {
            bool ok = place(s, d, c) && lex_leader(s, d + 1);
            int r = ok ? dfs(s, d + 1, std::max(max_used, c)) : 0;
            unplace(s, d, c);
            if (r != 0)
                return r;
        }
        return 0;
    }

    auto collect(State& s, std::size_t d, int max_used, std::size_t depth, std::vector<Prefix>& out) const -> int
    {
        if (!tick(s))
            return -1;
        if (s.killed == p_.bundles.size() || d == depth) {
            out.push_back(Prefix{std::vector<int>(s.assign.begin(), s.assign.begin() + static_cast<std::ptrdiff_t>(d)), max_used});
            return 0;
        }
        if (d == p_.positions)
            return 0;
        int limit = std::min(max_used + 1, k_ - 1);
        for (int c = 0; c <= limit; ++c) {
            bool ok = place(s, d, c) && lex_leader(s, d + 1);
            int r = ok ? collect(s, d + 1, std::max(max_used, c), depth, out) : 0;
            unplace(s, d, c);
            if (r < 0)
                return r;
        }
        return 0;
    }

    const ColoringProblem& p_;
    int k_;
    int t_;
    std::vector<std::uint32_t> order_; // dfs index -> position
    std::vector<std::uint32_t> rank_;  // position -> dfs index
    std::vector<std::uint32_t> bundle_size_;
    std::vector<std::vector<std::uint32_t>> pos_bundles_; // by dfs index
    std::vector<std::vector<std::uint32_t>> syms_;        // in dfs index space
};

} // namespace detail

/// Searches for a coloring that kills every bundle. The work is split into branches by a
/// fixed rule that ignores the thread count, and branch results are folded in branch order,
/// so status, witness and node count do not depend on scheduling.
[[nodiscard]] inline auto solve(const ColoringProblem& problem, const SearchOptions& opts = {}) -> SolveResult
{
    if (problem.k < 2 || problem.t < 1)
        throw Error("solve: need k >= 2 and t >= 1");
    SolveResult result;
    detail::ColoringSearch search(problem, opts.symmetry_breaking);
    if (search.root_infeasible()) {
        result.status = ArrowStatus::holds;
        result.nodes = 1;
        return result;
    }

    auto root = search.make_state(opts.node_budget);
    std::vector<detail::ColoringSearch::Prefix> branches;
    std::uint64_t frontier_nodes = 0;
    for (std::size_t depth = 1;; ++depth) {
        root = search.make_state(opts.node_budget - std::min(frontier_nodes, opts.node_budget));
        if (!search.frontier(root, depth, branches)) {
            result.nodes = frontier_nodes + root.nodes;
            return result;
        }
        frontier_nodes += root.nodes;
        bool all_short = std::all_of(branches.begin(), branches.end(), [&](const auto& b) { return b.colors.size() < depth; });
        if (branches.size() >= opts.split_target || depth >= search.positions() || all_short)
            break;
    }
    if (frontier_nodes > opts.node_budget) {
        result.nodes = frontier_nodes;
        return result;
    }

    struct Branch {
        int outcome = 0;
        bool out_of_budget = false;
        std::uint64_t nodes = 0;
        std::vector<int> witness;
    };
    std::vector<Branch> outcomes(branches.size());
    std::atomic<std::size_t> first_stop{branches.size()};
    const auto branch_budget = opts.node_budget - frontier_nodes;

    auto run = [&](std::size_t i) {
        if (first_stop.load() < i)
            return;
        std::function<bool()> stop = [&first_stop, i] { return first_stop.load() < i; };
        auto s = search.make_state(branch_budget);
        s.should_stop = &stop;
        int r = search.run_branch(s, branches[i]);
        if (s.cancelled)
            return;
        auto& out = outcomes[i];
        out.nodes = s.nodes;
        out.outcome = r;
        out.out_of_budget = s.out_of_budget;
        if (r == 1)
            out.witness = search.to_positions(s.witness);
        if (r != 0) {
            auto cur = first_stop.load();
            while (i < cur && !first_stop.compare_exchange_weak(cur, i)) {
            }
        }
    };
    if (opts.pool)
        opts.pool->parallel_for(branches.size(), run);
    else
        for (std::size_t i = 0; i < branches.size(); ++i)
            run(i);

    std::uint64_t total = frontier_nodes;
    for (std::size_t i = 0; i < branches.size(); ++i) {
        const auto& b = outcomes[i];
        total += b.nodes;
        if (b.outcome == 1) {
            result.status = ArrowStatus::fails;
            result.colors = b.witness;
            result.nodes = total;
            return result;
        }
        if (b.outcome < 0 || total > opts.node_budget) {
            result.status = ArrowStatus::inconclusive;
            result.nodes = total;
            return result;
        }
    }
    result.status = ArrowStatus::holds;
    result.nodes = total;
    return result;
}

// ---------------------------------------------------------------------------
// From categories to coloring problems

/// f is epi iff u -> u . f is injective on the arrows out of cod(f).
[[nodiscard]] inline auto all_epi(const FiniteCategory& cat) -> bool
{
    for (const auto& f : cat.morphisms())
        for (ObjectId x = 0; x < cat.object_count(); ++x) {
            std::set<MorphismId> seen;
            for (auto u : cat.hom(f.cod, x))
                if (!seen.insert(cat.compose_unchecked(u, f.id)).second)
                    return false;
        }
    return true;
}

/// Positions of a query: the arrows to color and, in subobject mode, their classes.
struct ArrowDomain {
    std::vector<MorphismId> arrows;               // hom(A, C) or hom(C, A), ascending id
    std::vector<std::vector<MorphismId>> classes; // subobject mode, ordered by smallest member
    std::vector<std::uint32_t> position;          // by local arrow index
    std::map<MorphismId, std::uint32_t> index;    // arrow -> local arrow index
};

namespace detail {

inline void check_query(const FiniteCategory& cat, const ArrowQuery& q, Orientation o)
{
    for (auto x : {q.A, q.B, q.C})
        if (!cat.has_object(x))
            throw Error("arrow query: unknown object id " + std::to_string(x));
    if (q.k < 2)
        throw Error("arrow query: k must be at least 2");
    if (q.t < 1)
        throw Error("arrow query: t must be at least 1");
    if (q.mode == ColoringMode::subobject) {
        bool ok = o == Orientation::direct ? cat.all_mono() : all_epi(cat);
        if (!ok)
            throw Error(o == Orientation::direct ? "subobject mode needs a category whose morphisms are all mono"
                                                 : "dual subobject mode needs a category whose morphisms are all epi");
    }
}

// compose in the orientation: direct a.b, reversed b.a
inline auto oriented(const FiniteCategory& cat, Orientation o, MorphismId outer, MorphismId inner) -> MorphismId
{
    return o == Orientation::direct ? cat.compose_unchecked(outer, inner) : cat.compose_unchecked(inner, outer);
}

} // namespace detail

[[nodiscard]] inline auto arrow_domain(const FiniteCategory& cat, ObjectId A, ObjectId C, ColoringMode mode, Orientation o)
    -> ArrowDomain
{
    ArrowDomain dom;
    auto h = o == Orientation::direct ? cat.hom(A, C) : cat.hom(C, A);
    dom.arrows.assign(h.begin(), h.end());
    for (std::uint32_t i = 0; i < dom.arrows.size(); ++i)
        dom.index[dom.arrows[i]] = i;
    dom.position.resize(dom.arrows.size());
    if (mode == ColoringMode::morphism) {
        for (std::uint32_t i = 0; i < dom.arrows.size(); ++i)
            dom.position[i] = i;
        return dom;
    }
    auto aut = automorphisms(cat, A);
    std::vector<char> assigned(dom.arrows.size(), 0);
    for (std::uint32_t i = 0; i < dom.arrows.size(); ++i) {
        if (assigned[i])
            continue;
        std::vector<MorphismId> members;
        for (auto alpha : aut) {
            auto m = detail::oriented(cat, o, dom.arrows[i], alpha);
            auto j = dom.index.at(m);
            if (!assigned[j]) {
                assigned[j] = 1;
                members.push_back(m);
                dom.position[j] = static_cast<std::uint32_t>(dom.classes.size());
            }
        }
        std::sort(members.begin(), members.end());
        dom.classes.push_back(std::move(members));
    }
    return dom;
}

[[nodiscard]] inline auto build_problem(const FiniteCategory& cat, const ArrowQuery& q, Orientation o,
    const SearchOptions& opts, ArrowDomain* domain_out = nullptr) -> ColoringProblem
{
    detail::check_query(cat, q, o);
    auto dom = arrow_domain(cat, q.A, q.C, q.mode, o);
    ColoringProblem p;
    p.k = q.k;
    p.t = q.t;
    p.positions = q.mode == ColoringMode::morphism ? dom.arrows.size() : dom.classes.size();

    auto pos_of = [&](MorphismId f) { return dom.position[dom.index.at(f)]; };
    auto inner_arrows = o == Orientation::direct ? cat.hom(q.A, q.B) : cat.hom(q.B, q.A);
    auto copies = o == Orientation::direct ? cat.hom(q.B, q.C) : cat.hom(q.C, q.B);
    std::set<std::vector<std::uint32_t>> bundles;
    for (auto w : copies) {
        std::vector<std::uint32_t> b;
        for (auto f : inner_arrows)
            b.push_back(pos_of(detail::oriented(cat, o, w, f)));
        std::sort(b.begin(), b.end());
        b.erase(std::unique(b.begin(), b.end()), b.end());
        bundles.insert(std::move(b));
    }
    p.bundles.assign(bundles.begin(), bundles.end());

    std::set<std::vector<std::uint32_t>> syms;
    auto aut_c = automorphisms(cat, q.C);
    auto aut_a = q.mode == ColoringMode::morphism ? automorphisms(cat, q.A) : std::vector<MorphismId>{cat.identity(q.A)};
    std::vector<std::uint32_t> identity(p.positions);
    std::iota(identity.begin(), identity.end(), 0u);
    for (auto sigma : aut_c) {
        for (auto alpha : aut_a) {
            if (syms.size() >= opts.symmetry_cap)
                break;
            std::vector<std::uint32_t> perm(p.positions);
            if (q.mode == ColoringMode::morphism)
                for (std::uint32_t i = 0; i < p.positions; ++i)
                    perm[i] = pos_of(detail::oriented(cat, o, sigma, detail::oriented(cat, o, dom.arrows[i], alpha)));
            else
                for (std::uint32_t i = 0; i < p.positions; ++i)
                    perm[i] = pos_of(detail::oriented(cat, o, sigma, dom.classes[i].front()));
            if (perm != identity)
                syms.insert(std::move(perm));
        }
    }
    p.symmetries.assign(syms.begin(), syms.end());
    if (domain_out)
        *domain_out = std::move(dom);
    return p;
}

namespace detail {

inline auto arrows_between(const FiniteCategory& cat, ObjectId x, ObjectId y) -> std::vector<MorphismId>
{
    std::vector<MorphismId> out;
    for (const auto& f : cat.morphisms())
        if (f.dom == x && f.cod == y)
            out.push_back(f.id);
    return out;
}

} // namespace detail

/// Checks a claimed witness directly from the category: the coloring must cover the right
/// hom-set (and, in subobject mode, its true ~_A classes), and every copy must see more
/// than t colors. Does not reuse any of the search structures.
[[nodiscard]] inline auto replay_witness(const FiniteCategory& cat, const ArrowQuery& q, const Coloring& chi,
    Orientation o = Orientation::direct, std::string* why = nullptr) -> bool
{
    auto fail = [&](std::string msg) {
        if (why)
            *why = std::move(msg);
        return false;
    };
    auto compose = [&](MorphismId outer, MorphismId inner) {
        return o == Orientation::direct ? cat.compose(outer, inner) : cat.compose(inner, outer);
    };
    auto target = o == Orientation::direct ? detail::arrows_between(cat, q.A, q.C) : detail::arrows_between(cat, q.C, q.A);
    if (chi.k != q.k || chi.mode != q.mode)
        return fail("coloring has the wrong k or mode");
    if (chi.colors.size() != chi.domain.size())
        return fail("coloring has the wrong length");
    for (auto c : chi.colors)
        if (c < 0 || c >= q.k)
            return fail("color out of range");

    std::map<MorphismId, int> color;
    if (q.mode == ColoringMode::morphism) {
        for (std::size_t i = 0; i < chi.domain.size(); ++i)
            if (!color.emplace(chi.domain[i], chi.colors[i]).second)
                return fail("arrow colored twice");
    }
    else {
        if (chi.classes.size() != chi.domain.size())
            return fail("class list does not match the representatives");
        std::vector<MorphismId> auts;
        for (auto e : detail::arrows_between(cat, q.A, q.A))
            for (auto g : detail::arrows_between(cat, q.A, q.A))
                if (cat.compose(g, e) == cat.identity(q.A) && cat.compose(e, g) == cat.identity(q.A)) {
                    auts.push_back(e);
                    break;
                }
        for (std::size_t i = 0; i < chi.classes.size(); ++i) {
            std::set<MorphismId> expected;
            for (auto alpha : auts)
                expected.insert(compose(chi.domain[i], alpha));
            if (std::set<MorphismId>(chi.classes[i].begin(), chi.classes[i].end()) != expected)
                return fail("class " + std::to_string(i) + " is not an orbit of Aut(A)");
            for (auto f : chi.classes[i])
                if (!color.emplace(f, chi.colors[i]).second)
                    return fail("classes overlap");
        }
    }
    if (color.size() != target.size())
        return fail("coloring does not cover the hom-set");
    for (auto f : target)
        if (!color.count(f))
            return fail("arrow " + std::to_string(f) + " is not colored");

    auto inner = o == Orientation::direct ? detail::arrows_between(cat, q.A, q.B) : detail::arrows_between(cat, q.B, q.A);
    auto copies = o == Orientation::direct ? detail::arrows_between(cat, q.B, q.C) : detail::arrows_between(cat, q.C, q.B);
    for (auto w : copies) {
        std::set<int> seen;
        for (auto f : inner)
            seen.insert(color.at(compose(w, f)));
        if (static_cast<int>(seen.size()) <= q.t)
            return fail("copy " + std::to_string(w) + " sees only " + std::to_string(seen.size()) + " colors");
    }
    return true;
}

/// Runs the search for one query in the given orientation, without any cache.
[[nodiscard]] inline auto compute_arrow(const FiniteCategory& cat, const ArrowQuery& q, Orientation o,
    const SearchOptions& opts = {}) -> ArrowVerdict
{
    auto start = std::chrono::steady_clock::now();
    ArrowDomain dom;
    auto problem = build_problem(cat, q, o, opts, &dom);
    auto solved = solve(problem, opts);
    ArrowVerdict v;
    v.status = solved.status;
    v.nodes = solved.nodes;
    if (solved.status == ArrowStatus::fails) {
        Coloring chi;
        chi.mode = q.mode;
        chi.k = q.k;
        chi.colors = solved.colors;
        if (q.mode == ColoringMode::morphism)
            chi.domain = dom.arrows;
        else {
            chi.classes = dom.classes;
            for (const auto& cls : dom.classes)
                chi.domain.push_back(cls.front());
        }
        std::string why;
        if (!replay_witness(cat, q, chi, o, &why))
            throw Error("internal error: witness failed replay: " + why);
        v.witness = std::move(chi);
    }
    if (solved.status == ArrowStatus::inconclusive)
        v.note = "node budget of " + std::to_string(opts.node_budget) + " exhausted";
    v.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return v;
}

/// Answers arrow queries on one category in one orientation. An optional memo (for
/// example the on-disk cache) may intercept queries.
class ArrowEngine {
public:
    using Memo = std::function<ArrowVerdict(const ArrowQuery&, const std::function<ArrowVerdict()>& compute)>;

    ArrowEngine(const FiniteCategory& cat, Orientation o = Orientation::direct, SearchOptions opts = {}) :
        cat_(&cat), orientation_(o), opts_(opts)
    {
    }

    void set_memo(Memo memo) { memo_ = std::move(memo); }

    [[nodiscard]] auto category() const -> const FiniteCategory& { return *cat_; }
    [[nodiscard]] auto orientation() const -> Orientation { return orientation_; }
    [[nodiscard]] auto options() const -> const SearchOptions& { return opts_; }

    [[nodiscard]] auto check(const ArrowQuery& q) const -> ArrowVerdict
    {
        auto compute = [&] { return compute_arrow(*cat_, q, orientation_, opts_); };
        if (memo_)
            return memo_(q, compute);
        return compute();
    }

    /// Source and target of the colored arrows: hom(A, C) directly, hom(C, A) reversed.
    [[nodiscard]] auto colored(ObjectId A, ObjectId C) const -> HomSet
    {
        return orientation_ == Orientation::direct ? cat_->hom(A, C) : cat_->hom(C, A);
    }

    /// hom(A, B) directly, hom(B, A) reversed.
    [[nodiscard]] auto through(ObjectId A, ObjectId B) const -> HomSet
    {
        return orientation_ == Orientation::direct ? cat_->hom(A, B) : cat_->hom(B, A);
    }

private:
    const FiniteCategory* cat_;
    Orientation orientation_;
    SearchOptions opts_;
    Memo memo_;
};

[[nodiscard]] inline auto check_arrow(const FiniteCategory& cat, const ArrowQuery& q, const SearchOptions& opts = {})
    -> ArrowVerdict
{
    return compute_arrow(cat, q, Orientation::direct, opts);
}

/// The dual relation, decided on an explicitly constructed opposite category.
[[nodiscard]] inline auto check_arrow_dual(const FiniteCategory& cat, const ArrowQuery& q, const SearchOptions& opts = {})
    -> ArrowVerdict
{
    auto op = opposite(cat);
    return compute_arrow(op, q, Orientation::direct, opts);
}

/// The dual relation, decided on the category itself with reversed composition.
[[nodiscard]] inline auto check_arrow_dual_native(const FiniteCategory& cat, const ArrowQuery& q,
    const SearchOptions& opts = {}) -> ArrowVerdict
{
    return compute_arrow(cat, q, Orientation::reversed, opts);
}

// ---------------------------------------------------------------------------
// Ramsey property over a truncation

struct RamseyEntry {
    ObjectId A = 0;
    ObjectId B = 0;
    int k = 2;
    std::optional<ObjectId> witness; // first C in the universe with C -> (B)^A_k
    bool inconclusive = false;
};

struct RamseyReport {
    std::vector<RamseyEntry> entries;
    [[nodiscard]] auto all_witnessed() const -> bool
    {
        return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.witness.has_value(); });
    }
};

[[nodiscard]] inline auto ramsey_property_check(const ArrowEngine& engine, const std::vector<std::pair<ObjectId, ObjectId>>& pairs,
    int k_max, const std::vector<ObjectId>& universe) -> RamseyReport
{
    RamseyReport report;
    for (auto [a, b] : pairs)
        for (int k = 2; k <= k_max; ++k) {
            RamseyEntry e{a, b, k, std::nullopt, false};
            for (auto c : universe) {
                auto v = engine.check(ArrowQuery{a, b, c, k, 1, ColoringMode::morphism});
                if (v.holds()) {
                    e.witness = c;
                    break;
                }
                if (!v.conclusive())
                    e.inconclusive = true;
            }
            report.entries.push_back(e);
        }
    return report;
}

} // namespace ramcat
