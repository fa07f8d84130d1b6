#pragma once

// The verification driver. A config lists cells; each cell runs one family of checks and
// contributes one JSON entry. The report contains no timings or thread counts, so equal
// configs give byte-identical reports.

#include <ramcat/arrows.hpp>
#include <ramcat/cache.hpp>
#include <ramcat/degrees.hpp>
#include <ramcat/digest.hpp>
#include <ramcat/essential.hpp>
#include <ramcat/expansions.hpp>
#include <ramcat/generators.hpp>
#include <ramcat/json_io.hpp>
#include <ramcat/worker_pool.hpp>

#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ramcat {

struct MatrixOptions {
    std::size_t threads = 1;
    std::uint64_t node_budget = default_node_budget;
    ResultCache* cache = nullptr;
    std::string command = "matrix";
    std::optional<std::uint64_t> seed;
};

struct RunReport {
    ReportStatus status = ReportStatus::ok;
    Json report;
    double elapsed_ms = 0;
    std::optional<CacheStats> cache;

    [[nodiscard]] auto dump() const -> std::string { return report.dump(2) + "\n"; }
};

/// Process exit code for a status: 0 ok, 1 violation, 2 inconclusive.
[[nodiscard]] inline auto exit_code(ReportStatus s) -> int
{
    switch (s) {
    case ReportStatus::ok: return 0;
    case ReportStatus::violation: return 1;
    case ReportStatus::inconclusive: return 2;
    }
    return 2;
}

namespace detail {

struct CellContext {
    const MatrixOptions& opts;
    WorkerPool& pool;

    [[nodiscard]] auto search() const -> SearchOptions
    {
        SearchOptions s;
        s.node_budget = opts.node_budget;
        s.pool = &pool;
        return s;
    }

    [[nodiscard]] auto engine(const FiniteCategory& cat, Orientation o = Orientation::direct) const -> ArrowEngine
    {
        ArrowEngine e(cat, o, search());
        if (opts.cache)
            attach_cache(e, *opts.cache);
        return e;
    }
};

/// {"family": "lo"|"inj"|"surj", "max": n} or {"family": "unit"}.
inline auto make_category(const Json& spec) -> FiniteCategory
{
    auto family = spec.at("family").get<std::string>();
    if (family == "unit")
        return unit_category();
    return generate(UniverseSpec{parse_family(family), spec.at("max").get<int>()});
}

inline auto objects(const FiniteCategory& cat, const Json& spec, const char* key) -> std::vector<ObjectId>
{
    std::vector<ObjectId> out;
    if (spec.contains(key))
        for (const auto& ref : spec.at(key))
            out.push_back(resolve_object(cat, ref.get<std::string>()));
    return out;
}

inline auto object(const FiniteCategory& cat, const Json& spec, const char* key) -> ObjectId
{
    return resolve_object(cat, spec.at(key).get<std::string>());
}

inline auto pools_from(const FiniteCategory& cat, const Json& spec) -> DegreePools
{
    DegreePools p;
    p.B_pool = objects(cat, spec, "B_pool");
    p.C_universe = objects(cat, spec, "C_universe");
    p.k_max = spec.value("k_max", 2);
    return p;
}

inline auto expect_int(ReportStatus& status, std::string& detail, const Json& spec, const char* key, std::optional<int> got)
{
    if (!spec.contains(key))
        return;
    auto want = spec.at(key).get<int>();
    if (!got || *got != want) {
        status = combine(status, got ? ReportStatus::violation : ReportStatus::inconclusive);
        detail += std::string(detail.empty() ? "" : "; ") + key + ": expected " + std::to_string(want) + ", got "
            + (got ? std::to_string(*got) : std::string("unknown"));
    }
}

struct Functor {
    ExpansionFunctor functor;
    std::optional<ColoringExpansion> coloring;
    std::vector<ObjectId> small; // objects that separate points
};

/// {"kind": "lo_to_inj", "max": n} | {"kind": "identity", "base": cat}
/// | {"kind": "coloring", "base": cat, "degrees": {"label": t, ...}}
inline auto make_functor(const Json& spec) -> Functor
{
    auto kind = spec.at("kind").get<std::string>();
    if (kind == "lo_to_inj") {
        auto f = forgetful_lo_to_inj(spec.at("max").get<int>());
        auto small = all_objects(f.downstairs());
        return Functor{std::move(f), std::nullopt, std::move(small)};
    }
    auto base = make_category(spec.at("base"));
    if (kind == "identity") {
        auto small = all_objects(base);
        return Functor{identity_expansion(base), std::nullopt, std::move(small)};
    }
    if (kind == "coloring") {
        ColoringExpansionSpec cs{base, {}, {}};
        for (const auto& [label, t] : spec.at("degrees").items()) {
            auto x = resolve_object(base, label);
            cs.small_objects.push_back(x);
            cs.degree_map[x] = t.get<int>();
        }
        auto ce = build_coloring_expansion(cs, spec.value("fiber_cap", default_fiber_cap));
        auto f = ce.functor;
        auto small = ce.small_objects;
        return Functor{std::move(f), std::move(ce), std::move(small)};
    }
    throw Error("unknown functor kind '" + kind + "'");
}

inline auto axiom_status(const AxiomReport& r) -> ReportStatus
{
    return r.holds ? ReportStatus::ok : ReportStatus::violation;
}

/// Fiber sizes predicted by counting colorings: prod over small X of t_X^|hom(X, B)|.
inline auto predicted_fiber(const ColoringExpansion& ce, ObjectId B) -> std::size_t
{
    std::size_t n = 1;
    const auto& base = ce.functor.downstairs();
    for (auto x : ce.small_objects)
        for (std::size_t i = 0; i < base.hom(x, B).size(); ++i)
            n *= static_cast<std::size_t>(ce.degree_map.at(x));
    return n;
}

inline auto run_axioms(const Functor& F, Json& out) -> ReportStatus
{
    const auto& U = F.functor;
    auto status = ReportStatus::ok;
    auto fn = check_functor(U);
    status = combine(status, axiom_status(fn));
    out["functor"] = fn;
    if (!fn.holds)
        return status;
    auto reasonable = check_reasonable(U);
    auto unique = check_unique_restrictions(U);
    auto pre = check_precompact(U);
    out["reasonable"] = reasonable;
    out["unique_restrictions"] = unique.axiom;
    out["precompact"] = pre;
    status = combine(status, axiom_status(reasonable));
    status = combine(status, axiom_status(unique.axiom));
    status = combine(status, axiom_status(pre.axiom));
    if (F.coloring) {
        AxiomReport count("fiber counting formula");
        for (auto [a, n] : pre.fiber_sizes) {
            ++count.checked;
            auto want = predicted_fiber(*F.coloring, a);
            if (want != n)
                count.flag("fiber over " + std::to_string(a) + " has " + std::to_string(n) + " objects, formula gives "
                    + std::to_string(want));
        }
        out["fiber_count"] = count;
        status = combine(status, axiom_status(count));
    }
    if (unique.axiom.holds) {
        auto sep = check_separates_points(U, unique.table, F.small);
        auto laws = check_restriction_laws(U, unique.table);
        auto du = check_disjoint_union(U);
        auto ad = check_aut_decomposition(U);
        out["separates_points"] = sep;
        out["restriction_laws"] = laws;
        out["disjoint_union"] = du;
        out["aut_decomposition"] = ad;
        for (const auto* r : {&sep, &laws, &du, &ad})
            status = combine(status, axiom_status(*r));
    }
    return status;
}

using CellFn = std::function<ReportStatus(const Json& spec, const CellContext& ctx, Json& out, std::string& detail)>;

inline auto cell_arrow(const Json& spec, const CellContext& ctx, Json& out, std::string& detail) -> ReportStatus
{
    auto cat = make_category(spec.at("category"));
    ArrowQuery q{object(cat, spec, "A"), object(cat, spec, "B"), object(cat, spec, "C"), spec.value("k", 2), spec.value("t", 1),
        parse_mode(spec.value("mode", std::string("morphism")))};
    auto v = ctx.engine(cat).check(q);
    out["category_digest"] = category_digest(cat);
    out["query"] = q;
    out["verdict"] = v;
    if (!v.conclusive()) {
        detail = "search budget exhausted";
        return ReportStatus::inconclusive;
    }
    if (v.fails() && !replay_witness(cat, q, *v.witness)) {
        detail = "witness does not replay";
        return ReportStatus::violation;
    }
    detail = status_name(v.status);
    if (spec.contains("expect") && spec.at("expect").get<std::string>() != status_name(v.status)) {
        detail = "expected " + spec.at("expect").get<std::string>() + ", got " + status_name(v.status)
            + (v.witness ? " (witness coloring attached)" : "");
        return ReportStatus::violation;
    }
    return ReportStatus::ok;
}

inline auto cell_degree(const Json& spec, const CellContext& ctx, Json& out, std::string& detail) -> ReportStatus
{
    auto cat = make_category(spec.at("category"));
    auto A = object(cat, spec, "A");
    auto mode = parse_mode(spec.value("mode", std::string("morphism")));
    auto d = degree_bounds(ctx.engine(cat), A, mode, pools_from(cat, spec));
    out["category_digest"] = category_digest(cat);
    out["degree"] = d;
    auto status = d.tight() ? ReportStatus::ok : ReportStatus::inconclusive;
    detail = d.tight() ? "degree " + std::to_string(*d.upper) : "bounds not tight";
    if (mode == ColoringMode::morphism && check_aut_lower_bound(cat, d) == ReportStatus::violation) {
        detail += "; below |Aut(A)|";
        status = ReportStatus::violation;
    }
    expect_int(status, detail, spec, "expect", d.value());
    return status;
}

inline auto cell_aut_bridge(const Json& spec, const CellContext& ctx, Json& out, std::string& detail) -> ReportStatus
{
    auto cat = make_category(spec.at("category"));
    auto A = object(cat, spec, "A");
    auto pools = pools_from(cat, spec);
    auto engine = ctx.engine(cat);
    auto m = degree_bounds(engine, A, ColoringMode::morphism, pools);
    auto s = degree_bounds(engine, A, ColoringMode::subobject, pools);
    auto r = verify_aut_bridge(cat, A, m, s);
    out["category_digest"] = category_digest(cat);
    out["bridge"] = r;
    out["morphism_degree"] = m;
    out["subobject_degree"] = s;
    auto status = r.status;
    detail = r.detail;
    if (check_aut_lower_bound(cat, m) == ReportStatus::violation) {
        detail += "; below |Aut(A)|";
        status = ReportStatus::violation;
    }
    expect_int(status, detail, spec, "expect_morphism", m.value());
    expect_int(status, detail, spec, "expect_subobject", s.value());
    expect_int(status, detail, spec, "expect_aut", r.aut_size);
    return status;
}

inline auto cell_product(const Json& spec, const CellContext& ctx, Json& out, std::string& detail) -> ReportStatus
{
    const auto& f1 = spec.at("first");
    const auto& f2 = spec.at("second");
    auto c1 = make_category(f1.at("category"));
    auto c2 = make_category(f2.at("category"));
    ProductPools pp;
    pp.first = pools_from(c1, f1);
    pp.second = pools_from(c2, f2);
    pp.product_k_max = spec.value("k_max", 2);
    if (spec.contains("product_B_pool")) {
        auto prod = product(c1, c2);
        pp.product_B_pool = objects(prod, spec, "product_B_pool");
    }
    auto r = verify_product(c1, c2, object(c1, f1, "A"), object(c2, f2, "A"), pp, ctx.search());
    out["product"] = r;
    auto status = r.status;
    detail = r.detail;
    if (spec.value("expect_exact", false) && status == ReportStatus::ok && !r.equality) {
        status = ReportStatus::violation;
        detail += "; equality expected";
    }
    return status;
}

inline auto cell_dual(const Json& spec, const CellContext& ctx, Json& out, std::string& detail) -> ReportStatus
{
    auto cat = make_category(spec.at("category"));
    auto op = opposite(cat);
    auto native = ctx.engine(cat, Orientation::reversed);
    auto via_op = ctx.engine(op, Orientation::direct);
    const int t_max = spec.value("t_max", 2);
    const int k = spec.value("k", 2);
    std::vector<ColoringMode> modes{ColoringMode::morphism};
    if (all_epi(cat))
        modes.push_back(ColoringMode::subobject);
    std::size_t arrows = 0;
    std::size_t mismatches = 0;
    Json bad = Json::array();
    std::map<std::string, std::size_t> tally;
    for (auto mode : modes)
        for (ObjectId A = 0; A < cat.object_count(); ++A)
            for (ObjectId B = 0; B < cat.object_count(); ++B)
                for (ObjectId C = 0; C < cat.object_count(); ++C)
                    for (int t = 1; t <= t_max; ++t) {
                        ArrowQuery q{A, B, C, k, t, mode};
                        auto a = native.check(q);
                        auto b = via_op.check(q);
                        ++arrows;
                        ++tally[status_name(a.status)];
                        if (a.status != b.status || a.witness != b.witness || a.nodes != b.nodes) {
                            ++mismatches;
                            bad.push_back(Json{{"query", q}, {"native", a}, {"opposite", b}});
                        }
                    }
    Json degrees = Json::array();
    for (auto mode : modes)
        for (ObjectId A = 0; A < cat.object_count(); ++A) {
            DegreePools pools;
            pools.k_max = spec.value("k_max", 2);
            auto a = degree_bounds(native, A, mode, pools);
            auto b = degree_bounds(via_op, A, mode, pools);
            bool same = Json(a).dump() == Json(b).dump();
            if (!same)
                ++mismatches;
            degrees.push_back(Json{{"object", A}, {"mode", mode_name(mode)}, {"lower", opt(a.lower)},
                {"upper", opt(a.upper)}, {"identical", same}});
        }
    out["category_digest"] = category_digest(cat);
    out["arrow_checks"] = arrows;
    out["verdicts"] = tally;
    out["degrees"] = degrees;
    out["mismatches"] = bad;
    detail = std::to_string(arrows) + " arrow checks and " + std::to_string(degrees.size()) + " degree bounds, "
        + std::to_string(mismatches) + " mismatches";
    return mismatches ? ReportStatus::violation : ReportStatus::ok;
}

inline auto cell_essential_arrow(const Json& spec, const CellContext& ctx, Json& out, std::string& detail) -> ReportStatus
{
    auto cat = make_category(spec.at("category"));
    EssentialOptions eo;
    eo.hom_cap = spec.value("hom_cap", std::size_t{20});
    eo.node_budget = ctx.opts.node_budget;
    eo.pool = &ctx.pool;
    auto status = ReportStatus::ok;
    std::size_t cells = 0;
    std::map<std::string, std::size_t> tally;
    Json bad = Json::array();
    for (ObjectId A = 0; A < cat.object_count(); ++A)
        for (ObjectId B = 0; B < cat.object_count(); ++B)
            for (ObjectId F = 0; F < cat.object_count(); ++F) {
                if (cat.hom(A, B).empty() || cat.hom(B, F).empty())
                    continue;
                const int t_top = static_cast<int>(cat.hom(A, B).size()) + 1;
                for (int t = 2; t <= std::max(2, t_top); ++t) {
                    auto r = crosscheck_essential_arrow(cat, EssentialQuery{A, B, F, t}, eo, ctx.search());
                    ++cells;
                    ++tally[r.essential.exists() ? "essential" : "no essential"];
                    status = combine(status, r.status);
                    if (r.status != ReportStatus::ok)
                        bad.push_back(r);
                }
            }
    out["category_digest"] = category_digest(cat);
    out["cells"] = cells;
    out["outcomes"] = tally;
    out["failures"] = bad;
    detail = std::to_string(cells) + " (A, B, ambient, t) cells";
    return status;
}

inline auto cell_expansion(const Json& spec, const CellContext&, Json& out, std::string& detail) -> ReportStatus
{
    auto F = make_functor(spec.at("functor"));
    auto status = run_axioms(F, out);
    if (spec.value("expansion_property", false)) {
        auto ep = check_expansion_property(F.functor);
        out["expansion_property"] = ep;
        status = combine(status, ep.status);
        if (!ep.directed)
            status = combine(status, ReportStatus::violation);
    }
    detail = status == ReportStatus::ok ? "all checks pass" : "some check fails";
    return status;
}

inline auto cell_additivity(const Json& spec, const CellContext& ctx, Json& out, std::string& detail) -> ReportStatus
{
    auto F = make_functor(spec.at("functor"));
    const auto& down = F.functor.downstairs();
    auto A = object(down, spec, "A");
    auto pools = pools_from(down, spec);
    auto r = verify_additivity(F.functor, A, pools, ctx.search());
    out["additivity"] = r;
    auto status = r.status;
    detail = r.detail;
    if (spec.value("require_equality", true) && !r.equality_expected) {
        status = combine(status, ReportStatus::violation);
        detail += "; hypotheses for equality not verified";
    }
    expect_int(status, detail, spec, "expect", r.downstairs.value());
    return status;
}

inline auto cell_ratio(const Json& spec, const CellContext& ctx, Json& out, std::string& detail) -> ReportStatus
{
    auto F = make_functor(spec.at("functor"));
    const auto& down = F.functor.downstairs();
    auto A = object(down, spec, "A");
    auto r = verify_object_ratio(F.functor, A, pools_from(down, spec), ctx.search());
    out["ratio"] = r;
    auto status = r.status;
    detail = r.detail;
    expect_int(status, detail, spec, "expect", r.downstairs.value());
    return status;
}

/// Degrees downstairs, the coloring expansion they define, its axioms, an ambient
/// decoration with surjective colorings, and the collapse of every fiber degree to 1 on the
/// age of that ambient.
inline auto cell_pipeline(const Json& spec, const CellContext& ctx, Json& out, std::string& detail) -> ReportStatus
{
    auto base = make_category(spec.at("base"));
    auto status = ReportStatus::ok;
    ColoringExpansionSpec cs{base, {}, {}};
    Json degrees = Json::array();
    for (ObjectId a = 0; a < base.object_count(); ++a) {
        DegreePools pools;
        pools.B_pool = {a};
        pools.k_max = spec.value("k_max", 2);
        auto d = degree_bounds(ctx.engine(base), a, ColoringMode::morphism, pools);
        degrees.push_back(d);
        if (!d.tight()) {
            out["degrees"] = degrees;
            detail = "degree of " + base.object_label(a) + " not tight";
            return ReportStatus::inconclusive;
        }
        cs.small_objects.push_back(a);
        cs.degree_map[a] = *d.upper;
    }
    out["degrees"] = degrees;
    auto ce = build_coloring_expansion(cs, spec.value("fiber_cap", default_fiber_cap));
    Functor F{ce.functor, ce, ce.small_objects};
    Json axioms;
    status = combine(status, run_axioms(F, axioms));
    out["axioms"] = axioms;

    // Ambient: first decoration of the largest object whose colorings use every color.
    const auto& U = ce.functor;
    auto top = static_cast<ObjectId>(base.object_count() - 1);
    std::optional<ObjectId> ambient;
    for (auto a : U.fiber(top)) {
        bool all = true;
        for (const auto& [x, colors] : ce.theta[a]) {
            std::set<int> used(colors.begin(), colors.end());
            all = all && static_cast<int>(used.size()) == ce.degree_map.at(x);
        }
        if (all) {
            ambient = a;
            break;
        }
    }
    if (!ambient) {
        detail = "no ambient decoration uses every color";
        return combine(status, ReportStatus::inconclusive);
    }
    out["ambient"] = U.upstairs().object_label(*ambient);
    Json mins = Json::array();
    for (auto x : ce.small_objects) {
        if (base.hom(x, top).empty())
            continue;
        auto m = check_min_expansions(ce, x, ce.degree_map.at(x), ambient);
        status = combine(status, m.status);
        mins.push_back(m);
    }
    out["min_expansions"] = mins;

    RestrictionTable table(U);
    auto age = age_of(U, table, *ambient);
    auto aged = restrict_upstairs(U, age, true);
    Json age_labels = Json::array();
    for (auto a : age)
        age_labels.push_back(U.upstairs().object_label(a));
    out["age"] = age_labels;
    auto ep = check_expansion_property(aged);
    out["age_expansion_property"] = ep;
    status = combine(status, ep.status);
    Json adds = Json::array();
    for (ObjectId a = 0; a < aged.downstairs().object_count(); ++a) {
        DegreePools pools;
        pools.B_pool = {a};
        pools.k_max = spec.value("k_max", 2);
        auto r = verify_additivity(aged, a, pools, ctx.search());
        status = combine(status, r.status);
        if (!r.equality_expected)
            status = combine(status, ReportStatus::violation);
        for (const auto& f : r.fibers)
            if (f.bound.value() != std::optional<int>(1))
                status = combine(status, ReportStatus::violation);
        adds.push_back(r);
    }
    out["age_additivity"] = adds;
    detail = status == ReportStatus::ok ? "degrees, axioms, expansion property and additivity all verified" : "pipeline check fails";
    return status;
}

inline auto cell_kinds() -> const std::map<std::string, CellFn>&
{
    static const std::map<std::string, CellFn> kinds{
        {"arrow", cell_arrow},
        {"degree", cell_degree},
        {"aut_bridge", cell_aut_bridge},
        {"product", cell_product},
        {"dual", cell_dual},
        {"essential_arrow", cell_essential_arrow},
        {"expansion", cell_expansion},
        {"additivity", cell_additivity},
        {"ratio", cell_ratio},
        {"pipeline", cell_pipeline},
    };
    return kinds;
}

} // namespace detail

/// The default acceptance matrix.
[[nodiscard]] inline auto default_matrix_config() -> Json
{
    auto cat = [](const char* family, int max) { return Json{{"family", family}, {"max", max}}; };
    auto lo_to_inj = Json{{"kind", "lo_to_inj"}, {"max", 3}};
    Json cells = Json::array();
    auto add = [&](const char* id, int criterion, const char* kind, Json body) {
        Json cell{{"id", id}, {"criterion", criterion}, {"kind", kind}};
        for (auto& [k, v] : body.items())
            cell[k] = v;
        cells.push_back(cell);
    };
    add("arrow-lo6", 1, "arrow", {{"category", cat("lo", 6)}, {"A", "lo2"}, {"B", "lo3"}, {"C", "lo6"}, {"k", 2}, {"t", 1}, {"expect", "holds"}});
    add("arrow-lo5", 1, "arrow", {{"category", cat("lo", 6)}, {"A", "lo2"}, {"B", "lo3"}, {"C", "lo5"}, {"k", 2}, {"t", 1}, {"expect", "fails"}});
    add("degree-lo-2", 1, "degree", {{"category", cat("lo", 6)}, {"A", "lo2"}, {"B_pool", {"lo3"}}, {"expect", 1}});

    add("bridge-inj4-2set", 2, "aut_bridge",
        {{"category", cat("inj", 4)}, {"A", "inj2"}, {"B_pool", {"inj2"}}, {"expect_morphism", 2}, {"expect_subobject", 1}, {"expect_aut", 2}});
    add("bridge-inj6-2set", 2, "aut_bridge",
        {{"category", cat("inj", 6)}, {"A", "inj2"}, {"B_pool", {"inj3"}}, {"expect_morphism", 2}, {"expect_subobject", 1}});
    add("bridge-inj3-1set", 2, "aut_bridge",
        {{"category", cat("inj", 3)}, {"A", "inj1"}, {"B_pool", {"inj1", "inj2"}}, {"expect_morphism", 1}, {"expect_subobject", 1}});
    add("bridge-lo6-2", 2, "aut_bridge",
        {{"category", cat("lo", 6)}, {"A", "lo2"}, {"B_pool", {"lo2", "lo3"}}, {"expect_morphism", 1}, {"expect_subobject", 1}});

    add("additivity-2set", 3, "additivity", {{"functor", lo_to_inj}, {"A", "inj2"}, {"B_pool", {"inj2"}}, {"expect", 2}});
    add("additivity-1set", 3, "additivity", {{"functor", lo_to_inj}, {"A", "inj1"}, {"B_pool", {"inj1", "inj2"}}, {"expect", 1}});
    add("expansion-property-lo-inj", 3, "expansion", {{"functor", lo_to_inj}, {"expansion_property", true}});

    add("ratio-2set", 4, "ratio", {{"functor", lo_to_inj}, {"A", "inj2"}, {"B_pool", {"inj2"}}, {"expect", 1}});
    add("ratio-1set", 4, "ratio", {{"functor", lo_to_inj}, {"A", "inj1"}, {"B_pool", {"inj1", "inj2"}}, {"expect", 1}});

    add("product-inj-lo", 5, "product",
        {{"first", {{"category", cat("inj", 3)}, {"A", "inj2"}, {"B_pool", {"inj2", "inj3"}}}},
            {"second", {{"category", cat("lo", 3)}, {"A", "lo1"}, {"B_pool", {"lo1", "lo2"}}}}});
    add("product-lo-lo", 5, "product",
        {{"first", {{"category", cat("lo", 3)}, {"A", "lo1"}, {"B_pool", {"lo1", "lo2"}}}},
            {"second", {{"category", cat("lo", 3)}, {"A", "lo1"}, {"B_pool", {"lo1", "lo2"}}}},
            {"product_B_pool", {"(lo1,lo1)", "(lo1,lo2)", "(lo2,lo1)"}}});
    add("product-inj-unit", 5, "product",
        {{"first", {{"category", cat("inj", 4)}, {"A", "inj2"}, {"B_pool", {"inj2"}}}},
            {"second", {{"category", Json{{"family", "unit"}}}, {"A", "*"}}}, {"expect_exact", true}});
    add("product-unit-unit", 5, "product",
        {{"first", {{"category", Json{{"family", "unit"}}}, {"A", "*"}}},
            {"second", {{"category", Json{{"family", "unit"}}}, {"A", "*"}}}, {"expect_exact", true}});

    add("dual-surj3", 6, "dual", {{"category", cat("surj", 3)}, {"t_max", 2}});
    add("dual-inj3", 6, "dual", {{"category", cat("inj", 3)}, {"t_max", 2}});

    add("essential-arrow-lo6", 7, "essential_arrow", {{"category", cat("lo", 6)}});
    add("essential-arrow-inj3", 7, "essential_arrow", {{"category", cat("inj", 3)}});

    add("coloring-inj2", 8, "expansion",
        {{"functor", {{"kind", "coloring"}, {"base", cat("inj", 2)}, {"degrees", {{"inj1", 1}, {"inj2", 2}}}}}});
    add("coloring-lo2", 8, "expansion",
        {{"functor", {{"kind", "coloring"}, {"base", cat("lo", 2)}, {"degrees", {{"lo1", 1}, {"lo2", 1}}}}}});
    add("pipeline-inj2", 8, "pipeline", {{"base", cat("inj", 2)}});

    add("restriction-lo-inj3", 9, "expansion", {{"functor", lo_to_inj}});
    add("restriction-identity-inj3", 9, "expansion", {{"functor", {{"kind", "identity"}, {"base", cat("inj", 3)}}}});
    return Json{{"cells", cells}};
}

/// Runs every cell of the config. An exception inside a cell marks that cell inconclusive.
[[nodiscard]] inline auto run_matrix(const Json& config, const MatrixOptions& opts = {}) -> RunReport
{
    auto t0 = std::chrono::steady_clock::now();
    WorkerPool pool(opts.threads);
    detail::CellContext ctx{opts, pool};
    RunReport run;
    Json cells = Json::array();
    std::map<std::string, std::size_t> counts{{"ok", 0}, {"violation", 0}, {"inconclusive", 0}};
    std::map<std::string, ReportStatus> by_criterion;
    const Json empty = Json::array();
    const Json& list = config.contains("cells") ? config.at("cells") : empty;
    for (const auto& spec : list) {
        Json cell{{"id", spec.value("id", std::string{})}, {"criterion", spec.value("criterion", 0)},
            {"kind", spec.value("kind", std::string{})}};
        Json body = Json::object();
        std::string note;
        auto status = ReportStatus::inconclusive;
        try {
            const auto& kinds = detail::cell_kinds();
            auto it = kinds.find(spec.at("kind").get<std::string>());
            if (it == kinds.end())
                throw Error("unknown cell kind '" + spec.at("kind").get<std::string>() + "'");
            status = it->second(spec, ctx, body, note);
        }
        catch (const std::exception& e) {
            status = ReportStatus::inconclusive;
            note = std::string("error: ") + e.what();
        }
        cell["status"] = report_status_name(status);
        cell["detail"] = note;
        cell["result"] = body;
        cells.push_back(cell);
        ++counts[report_status_name(status)];
        auto key = std::to_string(spec.value("criterion", 0));
        by_criterion[key] = by_criterion.count(key) ? combine(by_criterion[key], status) : status;
        run.status = combine(run.status, status);
    }
    Json criteria = Json::object();
    for (const auto& [k, s] : by_criterion)
        criteria[k] = report_status_name(s);
    run.report = Json{{"command", opts.command}, {"seed", detail::opt(opts.seed)}, {"inputs_digest", sha256_hex(config.dump())},
        {"status", report_status_name(run.status)}, {"summary", {{"cells", list.size()}, {"ok", counts["ok"]},
            {"violation", counts["violation"]}, {"inconclusive", counts["inconclusive"]}}},
        {"criteria", criteria}, {"cells", cells}};
    run.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (opts.cache)
        run.cache = opts.cache->stats();
    return run;
}

} // namespace ramcat
