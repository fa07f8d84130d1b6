#pragma once

// Ramsey degrees relative to a finite truncation. All quantifiers over objects range over an
// explicit B pool and C universe and over k <= k_max, so every bound is universe-relative.

#include <ramcat/arrows.hpp>
#include <ramcat/fincat.hpp>

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ramcat {

inline const std::string universe_relative = "universe-relative";

struct DegreePools {
    std::vector<ObjectId> B_pool;     // empty: every B with A -> B
    std::vector<ObjectId> C_universe; // empty: every object
    int k_max = 2;
};

struct UpperWitness {
    ObjectId B = 0;
    int k = 2;
    ObjectId C = 0;
};

struct LowerWitness {
    ObjectId B = 0;
    int k = 2;
    int t = 1; // every C in the universe fails at this t
    std::vector<std::pair<ObjectId, Coloring>> failures;
};

/// One (B, k) cell: the least t at which some C in the universe works, and how far up
/// every C was proven to fail.
struct DegreeCell {
    ObjectId B = 0;
    int k = 2;
    std::optional<int> least_t;
    std::optional<ObjectId> witness_C;
    int failed_below = 1; // every C fails at each t < failed_below (t >= 1)
    std::vector<std::pair<ObjectId, Coloring>> last_failures;
    bool inconclusive = false;
};

struct DegreeBound {
    ObjectId object = 0;
    ColoringMode mode = ColoringMode::morphism;
    std::optional<int> lower;
    std::optional<int> upper;
    int k_max = 2;
    std::vector<ObjectId> B_pool;
    std::vector<ObjectId> C_universe;
    std::vector<UpperWitness> upper_witnesses;
    std::optional<LowerWitness> lower_witness;
    std::vector<DegreeCell> cells;
    std::vector<std::string> notes;

    [[nodiscard]] auto tight() const -> bool { return lower && upper && *lower == *upper; }
    [[nodiscard]] auto value() const -> std::optional<int> { return tight() ? upper : std::nullopt; }
};

/// Every B with hom(A, B) nonempty in the engine's orientation.
[[nodiscard]] inline auto default_B_pool(const ArrowEngine& engine, ObjectId A) -> std::vector<ObjectId>
{
    std::vector<ObjectId> pool;
    for (ObjectId b = 0; b < engine.category().object_count(); ++b)
        if (!engine.through(A, b).empty())
            pool.push_back(b);
    return pool;
}

[[nodiscard]] inline auto degree_bounds(const ArrowEngine& engine, ObjectId A, ColoringMode mode, const DegreePools& pools)
    -> DegreeBound
{
    const auto& cat = engine.category();
    if (!cat.has_object(A))
        throw Error("degree_bounds: unknown object id");
    if (pools.k_max < 2)
        throw Error("degree_bounds: k_max must be at least 2");
    DegreeBound d;
    d.object = A;
    d.mode = mode;
    d.k_max = pools.k_max;
    d.B_pool = pools.B_pool.empty() ? default_B_pool(engine, A) : pools.B_pool;
    d.C_universe = pools.C_universe.empty() ? all_objects(cat) : pools.C_universe;
    if (d.B_pool.empty() || d.C_universe.empty())
        throw Error("degree_bounds: empty B pool or C universe");
    for (auto x : d.B_pool)
        if (!cat.has_object(x))
            throw Error("degree_bounds: B pool refers to unknown object " + std::to_string(x));
    for (auto x : d.C_universe)
        if (!cat.has_object(x))
            throw Error("degree_bounds: C universe refers to unknown object " + std::to_string(x));

    for (auto B : d.B_pool) {
        // Beyond this t every copy trivially sees few enough colors.
        auto copy_size = static_cast<int>(mode == ColoringMode::morphism
                ? engine.through(A, B).size()
                : arrow_domain(cat, A, B, mode, engine.orientation()).classes.size());
        for (int k = 2; k <= pools.k_max; ++k) {
            DegreeCell cell;
            cell.B = B;
            cell.k = k;
            const int t_cap = std::max(1, std::min(copy_size, k));
            bool chain_proven = true;
            for (int t = 1; t <= t_cap && !cell.least_t; ++t) {
                bool all_failed = true;
                std::vector<std::pair<ObjectId, Coloring>> failures;
                for (auto C : d.C_universe) {
                    auto v = engine.check(ArrowQuery{A, B, C, k, t, mode});
                    if (v.holds()) {
                        cell.least_t = t;
                        cell.witness_C = C;
                        all_failed = false;
                        break;
                    }
                    if (!v.conclusive()) {
                        all_failed = false;
                        cell.inconclusive = true;
                    }
                    else
                        failures.emplace_back(C, *v.witness);
                }
                if (all_failed && chain_proven) {
                    cell.failed_below = t + 1;
                    cell.last_failures = std::move(failures);
                }
                else
                    chain_proven = false;
            }
            d.cells.push_back(std::move(cell));
        }
    }

    bool upper_known = true;
    int upper = 1;
    int lower = 1;
    const DegreeCell* lower_cell = nullptr;
    for (const auto& cell : d.cells) {
        if (cell.least_t) {
            upper = std::max(upper, *cell.least_t);
            d.upper_witnesses.push_back(UpperWitness{cell.B, cell.k, *cell.witness_C});
        }
        else {
            upper_known = false;
            if (!cell.inconclusive)
                d.notes.push_back("no C in the universe admits B=" + std::to_string(cell.B) + " at k="
                    + std::to_string(cell.k) + " for any t");
        }
        if (cell.failed_below > lower) {
            lower = cell.failed_below;
            lower_cell = &cell;
        }
    }
    if (upper_known)
        d.upper = upper;
    d.lower = lower;
    if (lower_cell)
        d.lower_witness = LowerWitness{lower_cell->B, lower_cell->k, lower - 1, lower_cell->last_failures};
    return d;
}

[[nodiscard]] inline auto degree_bounds(const FiniteCategory& cat, ObjectId A, ColoringMode mode, const DegreePools& pools,
    const SearchOptions& opts = {}) -> DegreeBound
{
    return degree_bounds(ArrowEngine(cat, Orientation::direct, opts), A, mode, pools);
}

enum class ReportStatus { ok, violation, inconclusive };

[[nodiscard]] inline auto report_status_name(ReportStatus s) -> std::string
{
    switch (s) {
    case ReportStatus::ok: return "ok";
    case ReportStatus::violation: return "violation";
    case ReportStatus::inconclusive: return "inconclusive";
    }
    return "?";
}

/// Worst of two statuses: violation beats inconclusive beats ok.
[[nodiscard]] inline auto combine(ReportStatus a, ReportStatus b) -> ReportStatus
{
    if (a == ReportStatus::violation || b == ReportStatus::violation)
        return ReportStatus::violation;
    if (a == ReportStatus::inconclusive || b == ReportStatus::inconclusive)
        return ReportStatus::inconclusive;
    return ReportStatus::ok;
}

/// The tight value must be at least |Aut(A)| whenever k_max can separate all of Aut(A).
[[nodiscard]] inline auto check_aut_lower_bound(const FiniteCategory& cat, const DegreeBound& d) -> ReportStatus
{
    if (d.mode != ColoringMode::morphism || !d.tight())
        return ReportStatus::inconclusive;
    auto aut = static_cast<int>(automorphisms(cat, d.object).size());
    if (d.k_max < aut)
        return ReportStatus::inconclusive;
    return *d.upper >= aut ? ReportStatus::ok : ReportStatus::violation;
}

struct AutBridgeReport {
    ReportStatus status = ReportStatus::inconclusive;
    ObjectId object = 0;
    std::optional<int> t_morphism;
    std::optional<int> t_subobject;
    int aut_size = 0;
    std::string detail;
};

[[nodiscard]] inline auto verify_aut_bridge(const FiniteCategory& cat, ObjectId A, const DegreeBound& m, const DegreeBound& s)
    -> AutBridgeReport
{
    AutBridgeReport r;
    r.object = A;
    r.aut_size = static_cast<int>(automorphisms(cat, A).size());
    r.t_morphism = m.value();
    r.t_subobject = s.value();
    if (m.mode != ColoringMode::morphism || s.mode != ColoringMode::subobject || m.object != A || s.object != A)
        throw Error("verify_aut_bridge: expected a morphism-mode and a subobject-mode bound for the same object");
    if (m.B_pool != s.B_pool || m.C_universe != s.C_universe || m.k_max != s.k_max)
        throw Error("verify_aut_bridge: the two bounds use different pools");
    if (!m.tight() || !s.tight()) {
        r.detail = "bounds are not tight";
        return r;
    }
    bool eq = *m.upper == r.aut_size * *s.upper;
    r.status = eq ? ReportStatus::ok : ReportStatus::violation;
    r.detail = std::to_string(*m.upper) + (eq ? " == " : " != ") + std::to_string(r.aut_size) + " * "
        + std::to_string(*s.upper);
    return r;
}

struct ProductPools {
    DegreePools first;
    DegreePools second;
    std::vector<ObjectId> product_B_pool; // empty: pairs of the factor pools
    int product_k_max = 2;
};

struct ProductReport {
    ReportStatus status = ReportStatus::inconclusive;
    DegreeBound first;
    DegreeBound second;
    DegreeBound product;
    std::optional<int> factor_product;
    bool equality = false;
    std::string detail;
};

[[nodiscard]] inline auto product_object(const FiniteCategory& second, ObjectId a1, ObjectId a2) -> ObjectId
{
    return a1 * static_cast<ObjectId>(second.object_count()) + a2;
}

[[nodiscard]] inline auto verify_product(const FiniteCategory& c1, const FiniteCategory& c2, ObjectId A1, ObjectId A2,
    const ProductPools& pools, const SearchOptions& opts = {}) -> ProductReport
{
    ProductReport r;
    r.first = degree_bounds(c1, A1, ColoringMode::morphism, pools.first, opts);
    r.second = degree_bounds(c2, A2, ColoringMode::morphism, pools.second, opts);

    auto prod = product(c1, c2);
    DegreePools pp;
    pp.k_max = pools.product_k_max;
    for (auto x : r.first.C_universe)
        for (auto y : r.second.C_universe)
            pp.C_universe.push_back(product_object(c2, x, y));
    if (pools.product_B_pool.empty()) {
        for (auto x : r.first.B_pool)
            for (auto y : r.second.B_pool)
                pp.B_pool.push_back(product_object(c2, x, y));
    }
    else
        pp.B_pool = pools.product_B_pool;
    r.product = degree_bounds(prod, product_object(c2, A1, A2), ColoringMode::morphism, pp, opts);

    if (!r.first.tight() || !r.second.tight()) {
        r.detail = "factor bounds are not tight";
        return r;
    }
    r.factor_product = *r.first.upper * *r.second.upper;
    if (!r.product.upper) {
        r.detail = "product upper bound unknown";
        return r;
    }
    r.equality = r.product.tight() && *r.product.upper == *r.factor_product;
    bool ok = *r.product.upper <= *r.factor_product;
    r.status = ok ? ReportStatus::ok : ReportStatus::violation;
    r.detail = std::to_string(*r.product.upper) + (ok ? " <= " : " > ") + std::to_string(*r.first.upper) + " * "
        + std::to_string(*r.second.upper);
    return r;
}

/// Degrees of the opposite category, through the constructed opposite.
[[nodiscard]] inline auto dual_degree_bounds(const FiniteCategory& cat, ObjectId A, ColoringMode mode, const DegreePools& pools,
    const SearchOptions& opts = {}) -> DegreeBound
{
    auto op = opposite(cat);
    return degree_bounds(ArrowEngine(op, Orientation::direct, opts), A, mode, pools);
}

/// Degrees of the opposite category, computed on the category itself.
[[nodiscard]] inline auto dual_degree_bounds_native(const FiniteCategory& cat, ObjectId A, ColoringMode mode,
    const DegreePools& pools, const SearchOptions& opts = {}) -> DegreeBound
{
    return degree_bounds(ArrowEngine(cat, Orientation::reversed, opts), A, mode, pools);
}

} // namespace ramcat
