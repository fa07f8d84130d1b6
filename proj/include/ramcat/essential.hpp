#pragma once

// Colorings essential at B relative to a finite ambient object F. A coloring lambda of
// hom(A, B) is essential when every coloring chi of hom(A, F) has some w in hom(B, F) with
// ker lambda contained in ker chi^(w), where chi^(w)(f) = chi(w . f). The condition depends
// on chi only through its kernel, so chi ranges over set partitions of hom(A, F).

#include <ramcat/arrows.hpp>
#include <ramcat/degrees.hpp>
#include <ramcat/fincat.hpp>
#include <ramcat/worker_pool.hpp>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace ramcat {

struct EssentialQuery {
    ObjectId A = 0;
    ObjectId B = 0;
    ObjectId ambient = 0;
    int t = 2;
};

struct EssentialOptions {
    std::size_t hom_cap = 12;        // largest |hom(A, ambient)| accepted
    std::size_t full_replay_cap = 10; // replay over every partition up to this size
    std::uint64_t node_budget = default_node_budget;
    WorkerPool* pool = nullptr;
};

enum class EssentialStatus { found, none, inconclusive };

[[nodiscard]] inline auto essential_status_name(EssentialStatus s) -> std::string
{
    switch (s) {
    case EssentialStatus::found: return "found";
    case EssentialStatus::none: return "none";
    case EssentialStatus::inconclusive: return "inconclusive";
    }
    return "?";
}

struct EssentialResult {
    EssentialStatus status = EssentialStatus::inconclusive;
    std::vector<MorphismId> domain; // hom(A, B)
    std::optional<std::vector<int>> lambda;
    std::size_t candidates = 0; // lambdas examined, up to color permutation
    std::uint64_t nodes = 0;
    std::string replay; // how the returned lambda was re-verified
    std::string note;

    [[nodiscard]] auto exists() const -> bool { return status == EssentialStatus::found; }
};

namespace detail {

/// For a fixed lambda, searches for a partition of hom(A, F) that defeats every w. w is
/// defeated once two arrows w.f, w.g with lambda(f) = lambda(g) land in different blocks.
class KernelSearch {
public:
    KernelSearch(const FiniteCategory& cat, const EssentialQuery& q, const std::vector<int>& lambda)
    {
        auto hom_ab = cat.hom(q.A, q.B);
        auto hom_af = cat.hom(q.A, q.ambient);
        n_ = hom_af.size();
        std::vector<std::uint32_t> pos(cat.morphism_count(), 0);
        for (std::uint32_t i = 0; i < n_; ++i)
            pos[hom_af[i]] = i;
        at_pos_.resize(n_);
        for (auto w : cat.hom(q.B, q.ambient)) {
            auto wi = static_cast<std::uint32_t>(undecided_.size());
            std::uint32_t pairs = 0;
            for (std::size_t i = 0; i < hom_ab.size(); ++i)
                for (std::size_t j = i + 1; j < hom_ab.size(); ++j)
                    if (lambda[i] >= 0 && lambda[i] == lambda[j]) {
                        auto x = pos[cat.compose_unchecked(w, hom_ab[i])];
                        auto y = pos[cat.compose_unchecked(w, hom_ab[j])];
                        if (x == y)
                            continue;
                        // Attach the pair to whichever end is colored later.
                        at_pos_[std::max(x, y)].push_back(Pair{std::min(x, y), wi});
                        ++pairs;
                    }
            undecided_.push_back(pairs);
        }
        defeated_.assign(undecided_.size(), 0);
        colors_.assign(n_, -1);
    }

    /// 1: a defeating partition exists (lambda not essential); 0: none; -1: budget.
    auto run(std::uint64_t budget) -> int
    {
        budget_ = budget;
        for (auto u : undecided_)
            if (u == 0)
                return 0; // this w is never defeated
        if (undecided_.empty())
            return 1;
        return dfs(0, -1);
    }

    [[nodiscard]] auto nodes() const -> std::uint64_t { return nodes_; }

private:
    struct Pair {
        std::uint32_t other;
        std::uint32_t w;
    };

    auto dfs(std::size_t d, int max_used) -> int
    {
        if (++nodes_ > budget_)
            return -1;
        if (defeated_count_ == undecided_.size())
            return 1;
        if (d == n_)
            return 0;
        // Fresh block first: the finest partition is tried before anything coarser.
        for (int c = max_used + 1; c >= 0; --c) {
            colors_[d] = c;
            bool feasible = true;
            for (const auto& p : at_pos_[d]) {
                --undecided_[p.w];
                if (colors_[p.other] != c && defeated_[p.w]++ == 0)
                    ++defeated_count_;
                if (defeated_[p.w] == 0 && undecided_[p.w] == 0)
                    feasible = false;
            }
            int r = feasible ? dfs(d + 1, std::max(max_used, c)) : 0;
            for (const auto& p : at_pos_[d]) {
                ++undecided_[p.w];
                if (colors_[p.other] != c && --defeated_[p.w] == 0)
                    --defeated_count_;
            }
            colors_[d] = -1;
            if (r != 0)
                return r;
        }
        return 0;
    }

    std::size_t n_ = 0;
    std::vector<std::vector<Pair>> at_pos_;
    std::vector<std::uint32_t> undecided_;
    std::vector<std::uint32_t> defeated_;
    std::size_t defeated_count_ = 0;
    std::vector<int> colors_;
    std::uint64_t nodes_ = 0;
    std::uint64_t budget_ = 0;
};

inline void all_rgs(std::size_t n, int colors, std::vector<std::vector<int>>& out)
{
    std::vector<int> cur(n, 0);
    auto rec = [&](auto&& self, std::size_t i, int max_used) -> void {
        if (i == n) {
            out.push_back(cur);
            return;
        }
        for (int c = 0; c <= std::min(max_used + 1, colors - 1); ++c) {
            cur[i] = c;
            self(self, i + 1, std::max(max_used, c));
        }
    };
    rec(rec, 0, -1);
}

struct LambdaOutcome {
    int r = 0; // 1: essential lambda found, 0: none in this subtree, -1: budget
    std::vector<int> lambda;
    std::uint64_t nodes = 0;
    std::size_t candidates = 0;
};

/// Depth-first over restricted-growth lambdas extending a prefix. A partial lambda (-1 for
/// unassigned) that some partition already defeats has no essential extension, since
/// assigning more arrows only adds equal-colored pairs.
class LambdaSearch {
public:
    LambdaSearch(const FiniteCategory& cat, const EssentialQuery& q, std::uint64_t budget) :
        cat_(cat), q_(q), n_(cat.hom(q.A, q.B).size()), budget_(budget)
    {
    }

    auto run(const std::vector<int>& prefix) -> LambdaOutcome
    {
        lambda_.assign(n_, -1);
        int max_used = -1;
        for (std::size_t i = 0; i < prefix.size(); ++i) {
            lambda_[i] = prefix[i];
            max_used = std::max(max_used, prefix[i]);
        }
        out_ = LambdaOutcome{};
        out_.r = visit(prefix.size(), max_used);
        if (out_.r == 1)
            out_.lambda = lambda_;
        return out_;
    }

private:
    auto visit(std::size_t d, int max_used) -> int
    {
        ++out_.candidates;
        KernelSearch ks(cat_, q_, lambda_);
        int defeated = ks.run(budget_ > out_.nodes ? budget_ - out_.nodes : 0);
        out_.nodes += ks.nodes();
        if (defeated < 0)
            return -1;
        if (defeated == 1)
            return 0;
        if (d == n_)
            return 1;
        for (int c = 0; c <= std::min(max_used + 1, q_.t - 1); ++c) {
            lambda_[d] = c;
            int r = visit(d + 1, std::max(max_used, c));
            if (r != 0)
                return r;
        }
        lambda_[d] = -1;
        return 0;
    }

    const FiniteCategory& cat_;
    const EssentialQuery& q_;
    std::size_t n_;
    std::uint64_t budget_;
    std::vector<int> lambda_;
    LambdaOutcome out_;
};

/// Direct definition: is there a w with chi^(w) constant on every lambda block?
inline auto some_w_refines(const FiniteCategory& cat, const EssentialQuery& q, const std::vector<int>& lambda,
    const std::vector<int>& chi) -> bool
{
    auto hom_ab = cat.hom(q.A, q.B);
    for (auto w : cat.hom(q.B, q.ambient)) {
        bool ok = true;
        for (std::size_t i = 0; i < hom_ab.size() && ok; ++i)
            for (std::size_t j = i + 1; j < hom_ab.size() && ok; ++j)
                if (lambda[i] == lambda[j]
                    && chi[cat.hom_position(cat.compose(w, hom_ab[i]))] != chi[cat.hom_position(cat.compose(w, hom_ab[j]))])
                    ok = false;
        if (ok)
            return true;
    }
    return false;
}

} // namespace detail

inline void check_essential_query(const FiniteCategory& cat, const EssentialQuery& q)
{
    for (auto x : {q.A, q.B, q.ambient})
        if (!cat.has_object(x))
            throw Error("essential query: unknown object id " + std::to_string(x));
    if (q.t < 2)
        throw Error("essential query: t must be at least 2");
    if (cat.hom(q.A, q.B).empty())
        throw Error("essential query: hom(A, B) is empty");
    if (cat.hom(q.B, q.ambient).empty())
        throw Error("essential query: hom(B, ambient) is empty");
}

/// Re-verifies that lambda is essential. Returns a description of what was checked, or
/// nothing when a defeating partition was found.
[[nodiscard]] inline auto replay_essential(const FiniteCategory& cat, const EssentialQuery& q, const std::vector<int>& lambda,
    std::size_t full_replay_cap) -> std::optional<std::string>
{
    auto n = cat.hom(q.A, q.ambient).size();
    std::vector<int> finest(n);
    std::iota(finest.begin(), finest.end(), 0);
    if (!detail::some_w_refines(cat, q, lambda, finest))
        return std::nullopt;
    if (n <= full_replay_cap) {
        std::vector<std::vector<int>> partitions;
        detail::all_rgs(n, static_cast<int>(std::max<std::size_t>(n, 1)), partitions);
        for (const auto& chi : partitions)
            if (!detail::some_w_refines(cat, q, lambda, chi))
                return std::nullopt;
        return "all " + std::to_string(partitions.size()) + " partitions";
    }
    // An injective lambda has the diagonal as kernel, which every kernel contains.
    std::vector<int> sorted = lambda;
    std::sort(sorted.begin(), sorted.end());
    bool injective = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
    return injective ? std::optional<std::string>("finest partition; lambda injective")
                     : std::optional<std::string>("finest partition only");
}

[[nodiscard]] inline auto find_essential_at_B(const FiniteCategory& cat, const EssentialQuery& q, const EssentialOptions& opts = {})
    -> EssentialResult
{
    check_essential_query(cat, q);
    EssentialResult result;
    auto hom_ab = cat.hom(q.A, q.B);
    result.domain.assign(hom_ab.begin(), hom_ab.end());
    auto n = cat.hom(q.A, q.ambient).size();
    if (n > opts.hom_cap) {
        result.note = "|hom(A, ambient)| = " + std::to_string(n) + " exceeds the cap " + std::to_string(opts.hom_cap);
        return result;
    }

    // Prefixes of length `depth` are independent subtrees; the lowest one containing an
    // essential lambda wins, which makes the answer independent of scheduling.
    const std::size_t depth = std::min<std::size_t>(hom_ab.size(), 4);
    std::vector<std::vector<int>> prefixes;
    detail::all_rgs(depth, q.t, prefixes);
    std::vector<detail::LambdaOutcome> outcomes(prefixes.size());
    std::atomic<std::size_t> first_stop{prefixes.size()};
    auto run = [&](std::size_t i) {
        if (first_stop.load() < i)
            return;
        detail::LambdaSearch search(cat, q, opts.node_budget);
        outcomes[i] = search.run(prefixes[i]);
        if (outcomes[i].r != 0) {
            auto cur = first_stop.load();
            while (i < cur && !first_stop.compare_exchange_weak(cur, i)) {
            }
        }
    };
    if (opts.pool)
        opts.pool->parallel_for(prefixes.size(), run);
    else
        for (std::size_t i = 0; i < prefixes.size(); ++i)
            run(i);

    for (const auto& o : outcomes) {
        result.nodes += o.nodes;
        result.candidates += o.candidates;
        if (o.r == 1) {
            auto replay = replay_essential(cat, q, o.lambda, opts.full_replay_cap);
            if (!replay)
                throw Error("internal error: essential coloring failed replay");
            result.status = EssentialStatus::found;
            result.lambda = o.lambda;
            result.replay = *replay;
            return result;
        }
        if (o.r < 0 || result.nodes > opts.node_budget) {
            result.note = "node budget exhausted";
            return result;
        }
    }
    result.status = EssentialStatus::none;
    return result;
}

/// Does this particular lambda satisfy the definition? Uses the kernel search.
[[nodiscard]] inline auto is_essential(const FiniteCategory& cat, const EssentialQuery& q, const std::vector<int>& lambda,
    std::uint64_t budget = default_node_budget) -> std::optional<bool>
{
    check_essential_query(cat, q);
    detail::KernelSearch search(cat, q, lambda);
    int r = search.run(budget);
    if (r < 0)
        return std::nullopt;
    return r == 0;
}

struct EssentialArrowReport {
    ReportStatus status = ReportStatus::inconclusive;
    EssentialQuery query;
    int k_sufficient = 2;
    EssentialResult essential;
    ArrowVerdict arrow;
    std::string detail;
};

/// Essential lambda at t exists iff ambient -> (B)^A_{k,t} for every k. Larger k only add
/// finer kernels, so the arrow side is decided at k = |hom(A, ambient)|.
[[nodiscard]] inline auto crosscheck_essential_arrow(const FiniteCategory& cat, const EssentialQuery& q, const EssentialOptions& eopts = {},
    const SearchOptions& aopts = {}) -> EssentialArrowReport
{
    EssentialArrowReport r;
    r.query = q;
    r.essential = find_essential_at_B(cat, q, eopts);
    r.k_sufficient = static_cast<int>(std::max<std::size_t>(2, cat.hom(q.A, q.ambient).size()));
    r.arrow = check_arrow(cat, ArrowQuery{q.A, q.B, q.ambient, r.k_sufficient, q.t, ColoringMode::morphism}, aopts);
    if (r.essential.status == EssentialStatus::inconclusive || !r.arrow.conclusive()) {
        r.detail = "one side is inconclusive";
        return r;
    }
    bool agree = r.essential.exists() == r.arrow.holds();
    r.status = agree ? ReportStatus::ok : ReportStatus::violation;
    r.detail = std::string("essential ") + (r.essential.exists() ? "exists" : "absent") + ", arrow "
        + status_name(r.arrow.status);
    return r;
}

} // namespace ramcat
