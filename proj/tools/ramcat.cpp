// ramcat: command-line front end. Every command prints one JSON document on stdout.
// Exit codes: 0 ok, 1 violation, 2 inconclusive, 3 usage or input error.

#include <ramcat/ramcat.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

using namespace ramcat;

namespace {

constexpr int exit_usage = 3;

struct Globals {
    std::size_t threads = 1;
    std::optional<std::uint64_t> seed;
    std::uint64_t budget = default_node_budget;
    bool timing = false;
    std::string out;
};

struct Loaded {
    FiniteCategory cat;
    std::string digest;
};

/// A category file, or a generator shorthand such as "inj:4".
auto load(const std::string& ref) -> Loaded
{
    static const std::regex shorthand(R"((lo|inj|surj):(\d+))");
    std::smatch m;
    FiniteCategory cat;
    if (!std::filesystem::exists(ref) && std::regex_match(ref, m, shorthand))
        cat = generate(UniverseSpec{parse_family(m[1]), std::stoi(m[2])});
    else if (ref == "unit")
        cat = unit_category();
    else
        cat = load_category(ref);
    auto digest = category_digest(cat);
    return {std::move(cat), std::move(digest)};
}

auto split_list(const std::string& s) -> std::vector<std::string>
{
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty())
            out.push_back(item);
    return out;
}

auto resolve_list(const FiniteCategory& cat, const std::string& s) -> std::vector<ObjectId>
{
    std::vector<ObjectId> out;
    for (const auto& r : split_list(s))
        out.push_back(resolve_object(cat, r));
    return out;
}

void write_out(const std::string& path, const std::string& text)
{
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f)
        throw Error("cannot write " + path);
    f << text;
}

class Runner {
public:
    explicit Runner(const Globals& g) : g_(g) {}

    auto search(WorkerPool& pool) const -> SearchOptions
    {
        SearchOptions s;
        s.node_budget = g_.budget;
        s.pool = &pool;
        return s;
    }

    /// Wraps a result in the common envelope and prints it.
    auto emit(const std::string& command, const Json& inputs, ReportStatus status, Json result, double ms) const -> int
    {
        Json j{{"command", command}, {"seed", g_.seed ? Json(*g_.seed) : Json(nullptr)}, {"inputs_digest", inputs},
            {"status", report_status_name(status)}, {"result", std::move(result)}};
        if (g_.timing)
            j["timing"] = Json{{"elapsed_ms", ms}, {"threads", g_.threads}};
        write_out(g_.out, j.dump(2) + "\n");
        return exit_code(status);
    }

private:
    const Globals& g_;
};

auto ms_since(std::chrono::steady_clock::time_point t0) -> double
{
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Finite-category Ramsey toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1, 256));
    app.add_option("--seed", g.seed, "Accepted and echoed; every computation is exhaustive");
    app.add_option("--budget", g.budget, "Search node budget");
    app.add_flag("--timing", g.timing, "Include wall-clock time in the report");
    app.add_option("--out", g.out, "Write the report to a file instead of stdout");
    Runner runner(g);
    std::function<int()> action;
    auto t0 = std::chrono::steady_clock::now();

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a truncated category");
    std::string family;
    int max_size = 0;
    gen->add_option("--family", family, "lo, inj or surj")->required();
    gen->add_option("--max", max_size, "Largest set size")->required();
    gen->callback([&] {
        action = [&] {
            auto cat = generate(UniverseSpec{parse_family(family), max_size});
            if (g.out.empty())
                write_category(std::cout, cat);
            else {
                std::ofstream f(g.out);
                write_category(f, cat);
            }
            return 0;
        };
    });

    std::string cat_ref;
    auto add_cat = [&](CLI::App* sub) { sub->add_option("--cat", cat_ref, "Category file, or lo:N / inj:N / surj:N")->required(); };

    // validate
    auto* validate_cmd = app.add_subcommand("validate", "Check the category axioms");
    add_cat(validate_cmd);
    validate_cmd->callback([&] {
        action = [&] {
            auto in = load(cat_ref);
            auto r = validate(in.cat);
            Json res{{"valid", r.valid()}, {"violations", r.violations}, {"all_mono", r.all_mono}, {"non_mono", r.non_mono},
                {"summary", category_summary(in.cat)}};
            return runner.emit("validate", in.digest, r.valid() ? ReportStatus::ok : ReportStatus::violation, res, ms_since(t0));
        };
    });

    // hom
    auto* hom_cmd = app.add_subcommand("hom", "List hom(a, b)");
    add_cat(hom_cmd);
    std::string from, to;
    hom_cmd->add_option("--from", from)->required();
    hom_cmd->add_option("--to", to)->required();
    hom_cmd->callback([&] {
        action = [&] {
            auto in = load(cat_ref);
            Json arrows = Json::array();
            for (auto f : in.cat.hom(resolve_object(in.cat, from), resolve_object(in.cat, to)))
                arrows.push_back(Json{{"id", f}, {"label", in.cat.morphism(f).label}});
            Json res{{"size", arrows.size()}, {"morphisms", arrows}};
            return runner.emit("hom", in.digest, ReportStatus::ok, res, ms_since(t0));
        };
    });

    // aut
    auto* aut_cmd = app.add_subcommand("aut", "Automorphism group of an object");
    add_cat(aut_cmd);
    std::string obj;
    aut_cmd->add_option("--object", obj)->required();
    aut_cmd->callback([&] {
        action = [&] {
            auto in = load(cat_ref);
            auto a = resolve_object(in.cat, obj);
            auto aut = automorphisms(in.cat, a);
            Json labels = Json::array();
            for (auto f : aut)
                labels.push_back(in.cat.morphism(f).label);
            Json res{{"object", a}, {"size", aut.size()}, {"automorphisms", aut}, {"labels", labels}, {"rigid", aut.size() == 1}};
            return runner.emit("aut", in.digest, ReportStatus::ok, res, ms_since(t0));
        };
    });

    // arrow
    auto* arrow_cmd = app.add_subcommand("arrow", "Decide C -> (B)^A_{k,t}");
    add_cat(arrow_cmd);
    std::string A, B, C, mode = "morphism", expect, route = "direct";
    int k = 2, t = 1;
    arrow_cmd->add_option("--A", A)->required();
    arrow_cmd->add_option("--B", B)->required();
    arrow_cmd->add_option("--C", C)->required();
    arrow_cmd->add_option("--k", k)->check(CLI::PositiveNumber);
    arrow_cmd->add_option("--t", t)->check(CLI::PositiveNumber);
    arrow_cmd->add_option("--mode", mode)->check(CLI::IsMember({"morphism", "subobject", "m", "s"}));
    arrow_cmd->add_option("--route", route, "direct, dual (opposite category) or dual-native")
        ->check(CLI::IsMember({"direct", "dual", "dual-native"}));
    arrow_cmd->add_option("--expect", expect, "Report a violation unless the verdict matches")
        ->check(CLI::IsMember({"holds", "fails"}));
    arrow_cmd->callback([&] {
        action = [&] {
            auto in = load(cat_ref);
            WorkerPool pool(g.threads);
            ArrowQuery q{resolve_object(in.cat, A), resolve_object(in.cat, B), resolve_object(in.cat, C), k, t, parse_mode(mode)};
            auto opts = runner.search(pool);
            ArrowVerdict v = route == "direct" ? check_arrow(in.cat, q, opts)
                : route == "dual"              ? check_arrow_dual(in.cat, q, opts)
                                               : check_arrow_dual_native(in.cat, q, opts);
            auto status = v.conclusive() ? ReportStatus::ok : ReportStatus::inconclusive;
            if (!expect.empty() && v.conclusive() && status_name(v.status) != expect)
                status = ReportStatus::violation;
            Json res{{"query", q}, {"route", route}, {"verdict", v}};
            return runner.emit("arrow", in.digest, status, res, ms_since(t0));
        };
    });

    // degree
    auto* degree_cmd = app.add_subcommand("degree", "Universe-relative Ramsey degree bounds");
    add_cat(degree_cmd);
    std::string b_pool, c_universe;
    int k_max = 2;
    bool dual = false;
    degree_cmd->add_option("--A", A)->required();
    degree_cmd->add_option("--mode", mode)->check(CLI::IsMember({"morphism", "subobject", "m", "s"}));
    degree_cmd->add_option("--B-pool", b_pool, "Comma-separated objects");
    degree_cmd->add_option("--C-universe", c_universe, "Comma-separated objects");
    degree_cmd->add_option("--k-max", k_max)->check(CLI::Range(2, 64));
    degree_cmd->add_flag("--dual", dual, "Degrees of the opposite category");
    degree_cmd->callback([&] {
        action = [&] {
            auto in = load(cat_ref);
            WorkerPool pool(g.threads);
            DegreePools pools{resolve_list(in.cat, b_pool), resolve_list(in.cat, c_universe), k_max};
            auto a = resolve_object(in.cat, A);
            auto d = dual ? dual_degree_bounds_native(in.cat, a, parse_mode(mode), pools, runner.search(pool))
                          : degree_bounds(in.cat, a, parse_mode(mode), pools, runner.search(pool));
            return runner.emit("degree", in.digest, d.tight() ? ReportStatus::ok : ReportStatus::inconclusive, d, ms_since(t0));
        };
    });

    // essential
    auto* ess_cmd = app.add_subcommand("essential", "Search for a coloring essential at B");
    add_cat(ess_cmd);
    std::string ambient;
    std::size_t hom_cap = 12;
    bool crosscheck = false;
    ess_cmd->add_option("--A", A)->required();
    ess_cmd->add_option("--B", B)->required();
    ess_cmd->add_option("--ambient", ambient)->required();
    ess_cmd->add_option("--t", t)->check(CLI::Range(2, 64));
    ess_cmd->add_option("--hom-cap", hom_cap, "Largest |hom(A, ambient)| searched");
    ess_cmd->add_flag("--crosscheck", crosscheck, "Also decide the arrow relation and compare");
    ess_cmd->callback([&] {
        action = [&] {
            auto in = load(cat_ref);
            WorkerPool pool(g.threads);
            EssentialQuery q{resolve_object(in.cat, A), resolve_object(in.cat, B), resolve_object(in.cat, ambient), std::max(t, 2)};
            EssentialOptions eo;
            eo.hom_cap = hom_cap;
            eo.node_budget = g.budget;
            eo.pool = &pool;
            if (crosscheck) {
                auto r = crosscheck_essential_arrow(in.cat, q, eo, runner.search(pool));
                return runner.emit("essential", in.digest, r.status, r, ms_since(t0));
            }
            auto r = find_essential_at_B(in.cat, q, eo);
            Json res = r;
            res["exists"] = r.exists();
            res["query"] = q;
            auto status = r.status == EssentialStatus::inconclusive ? ReportStatus::inconclusive : ReportStatus::ok;
            return runner.emit("essential", in.digest, status, res, ms_since(t0));
        };
    });

    // expansion
    auto* exp_cmd = app.add_subcommand("expansion", "Expansion functors");
    exp_cmd->require_subcommand(1);
    std::string functor_file, small_list;
    bool with_ep = false;
    auto* exp_check = exp_cmd->add_subcommand("check", "Run every axiom check on a functor file");
    exp_check->add_option("--functor", functor_file)->required()->check(CLI::ExistingFile);
    exp_check->add_option("--small", small_list, "Downstairs objects used to separate points (default all)");
    exp_check->add_flag("--expansion-property", with_ep);
    exp_check->callback([&] {
        action = [&] {
            auto U = load_functor(functor_file);
            auto digest = sha256_hex(format_functor(U));
            detail::Functor F{U, std::nullopt, resolve_list(U.downstairs(), small_list)};
            if (F.small.empty())
                F.small = all_objects(U.downstairs());
            Json res;
            auto status = detail::run_axioms(F, res);
            if (with_ep) {
                auto ep = check_expansion_property(U);
                res["expansion_property"] = ep;
                status = combine(status, ep.status);
            }
            return runner.emit("expansion check", digest, status, res, ms_since(t0));
        };
    });

    auto* exp_build = exp_cmd->add_subcommand("build-coloring", "Build the coloring expansion of a base category");
    std::string base_ref, degree_list, functor_out;
    std::size_t fiber_cap = default_fiber_cap;
    exp_build->add_option("--base", base_ref, "Category file, or lo:N / inj:N / surj:N")->required();
    exp_build->add_option("--degrees", degree_list, "object=t,... for each small object")->required();
    exp_build->add_option("--fiber-cap", fiber_cap);
    exp_build->add_option("--functor-out", functor_out, "Also write the functor file");
    exp_build->callback([&] {
        action = [&] {
            auto in = load(base_ref);
            ColoringExpansionSpec cs{in.cat, {}, {}};
            for (const auto& item : split_list(degree_list)) {
                auto eq = item.find('=');
                if (eq == std::string::npos)
                    throw Error("--degrees expects object=t, got '" + item + "'");
                auto x = resolve_object(in.cat, item.substr(0, eq));
                cs.small_objects.push_back(x);
                cs.degree_map[x] = std::stoi(item.substr(eq + 1));
            }
            auto ce = build_coloring_expansion(cs, fiber_cap);
            if (!functor_out.empty()) {
                std::ofstream f(functor_out);
                write_functor(f, ce.functor);
            }
            detail::Functor F{ce.functor, ce, ce.small_objects};
            Json res;
            auto status = detail::run_axioms(F, res);
            res["upstairs"] = category_summary(ce.functor.upstairs());
            return runner.emit("expansion build-coloring", in.digest, status, res, ms_since(t0));
        };
    });

    auto* exp_add = exp_cmd->add_subcommand("verify-additivity", "Downstairs degree against the fiber degrees");
    bool objects_version = false;
    exp_add->add_option("--functor", functor_file)->required()->check(CLI::ExistingFile);
    exp_add->add_option("--A", A)->required();
    exp_add->add_option("--B-pool", b_pool);
    exp_add->add_option("--C-universe", c_universe);
    exp_add->add_option("--k-max", k_max)->check(CLI::Range(2, 64));
    exp_add->add_flag("--objects", objects_version, "Object-coloring version with the automorphism ratio");
    exp_add->callback([&] {
        action = [&] {
            auto U = load_functor(functor_file);
            auto digest = sha256_hex(format_functor(U));
            WorkerPool pool(g.threads);
            const auto& down = U.downstairs();
            DegreePools pools{resolve_list(down, b_pool), resolve_list(down, c_universe), k_max};
            auto a = resolve_object(down, A);
            if (objects_version) {
                auto r = verify_object_ratio(U, a, pools, runner.search(pool));
                return runner.emit("expansion verify-additivity", digest, r.status, r, ms_since(t0));
            }
            auto r = verify_additivity(U, a, pools, runner.search(pool));
            return runner.emit("expansion verify-additivity", digest, r.status, r, ms_since(t0));
        };
    });

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "Degree identities on concrete instances");
    verify_cmd->require_subcommand(1);
    auto* v_bridge = verify_cmd->add_subcommand("aut-bridge", "t(A) = |Aut(A)| * t~(A)");
    add_cat(v_bridge);
    v_bridge->add_option("--A", A)->required();
    v_bridge->add_option("--B-pool", b_pool);
    v_bridge->add_option("--C-universe", c_universe);
    v_bridge->add_option("--k-max", k_max)->check(CLI::Range(2, 64));
    v_bridge->callback([&] {
        action = [&] {
            auto in = load(cat_ref);
            WorkerPool pool(g.threads);
            DegreePools pools{resolve_list(in.cat, b_pool), resolve_list(in.cat, c_universe), k_max};
            auto a = resolve_object(in.cat, A);
            auto m = degree_bounds(in.cat, a, ColoringMode::morphism, pools, runner.search(pool));
            auto s = degree_bounds(in.cat, a, ColoringMode::subobject, pools, runner.search(pool));
            auto r = verify_aut_bridge(in.cat, a, m, s);
            Json res = r;
            res["morphism_degree"] = m;
            res["subobject_degree"] = s;
            return runner.emit("verify aut-bridge", in.digest, r.status, res, ms_since(t0));
        };
    });

    auto* v_product = verify_cmd->add_subcommand("product", "Product degree against the factor product");
    std::string cat2_ref, A2, pool1, pool2, product_pool;
    v_product->add_option("--cat1", cat_ref)->required();
    v_product->add_option("--cat2", cat2_ref)->required();
    v_product->add_option("--A1", A)->required();
    v_product->add_option("--A2", A2)->required();
    v_product->add_option("--pool1", pool1);
    v_product->add_option("--pool2", pool2);
    v_product->add_option("--product-pool", product_pool, "Product objects, labels like (a,b) separated by ;");
    v_product->callback([&] {
        action = [&] {
            auto c1 = load(cat_ref);
            auto c2 = load(cat2_ref);
            WorkerPool pool(g.threads);
            ProductPools pp;
            pp.first.B_pool = resolve_list(c1.cat, pool1);
            pp.second.B_pool = resolve_list(c2.cat, pool2);
            if (!product_pool.empty()) {
                auto prod = product(c1.cat, c2.cat);
                std::stringstream in(product_pool);
                std::string item;
                while (std::getline(in, item, ';'))
                    if (!item.empty())
                        pp.product_B_pool.push_back(resolve_object(prod, item));
            }
            auto r = verify_product(c1.cat, c2.cat, resolve_object(c1.cat, A), resolve_object(c2.cat, A2), pp, runner.search(pool));
            return runner.emit("verify product", Json{c1.digest, c2.digest}, r.status, r, ms_since(t0));
        };
    });

    auto* v_dual = verify_cmd->add_subcommand("dual", "Opposite-category route against the native dual route");
    add_cat(v_dual);
    v_dual->add_option("--A", A)->required();
    v_dual->add_option("--B", B);
    v_dual->add_option("--C", C);
    v_dual->add_option("--k", k)->check(CLI::PositiveNumber);
    v_dual->add_option("--t", t)->check(CLI::PositiveNumber);
    v_dual->add_option("--mode", mode)->check(CLI::IsMember({"morphism", "subobject", "m", "s"}));
    v_dual->callback([&] {
        action = [&] {
            auto in = load(cat_ref);
            WorkerPool pool(g.threads);
            auto a = resolve_object(in.cat, A);
            Json res;
            bool same = false;
            if (!B.empty() && !C.empty()) {
                ArrowQuery q{a, resolve_object(in.cat, B), resolve_object(in.cat, C), k, t, parse_mode(mode)};
                auto x = check_arrow_dual(in.cat, q, runner.search(pool));
                auto y = check_arrow_dual_native(in.cat, q, runner.search(pool));
                same = x.status == y.status && x.witness == y.witness;
                res = Json{{"query", q}, {"opposite", x}, {"native", y}, {"identical", same}};
            }
            else {
                DegreePools pools;
                auto x = dual_degree_bounds(in.cat, a, parse_mode(mode), pools, runner.search(pool));
                auto y = dual_degree_bounds_native(in.cat, a, parse_mode(mode), pools, runner.search(pool));
                same = Json(x).dump() == Json(y).dump();
                res = Json{{"opposite", x}, {"native", y}, {"identical", same}};
            }
            return runner.emit("verify dual", in.digest, same ? ReportStatus::ok : ReportStatus::violation, res, ms_since(t0));
        };
    });

    // matrix
    auto* matrix_cmd = app.add_subcommand("matrix", "Run the verification matrix");
    std::string config_file;
    bool print_default = false;
    double recheck = 0.05;
    matrix_cmd->add_option("--config", config_file, "JSON config (default: built-in matrix)")->check(CLI::ExistingFile);
    matrix_cmd->add_flag("--print-default", print_default, "Print the built-in config and exit");
    matrix_cmd->add_option("--cache-recheck", recheck, "Fraction of cached holding verdicts recomputed")->check(CLI::Range(0.0, 1.0));
    matrix_cmd->callback([&] {
        action = [&] {
            if (print_default) {
                write_out(g.out, default_matrix_config().dump(2) + "\n");
                return 0;
            }
            Json config = default_matrix_config();
            if (!config_file.empty()) {
                std::ifstream f(config_file);
                config = Json::parse(f);
            }
            auto cache = ResultCache::from_env(recheck);
            MatrixOptions mo;
            mo.threads = g.threads;
            mo.node_budget = g.budget;
            mo.cache = cache ? &*cache : nullptr;
            mo.seed = g.seed;
            auto run = run_matrix(config, mo);
            if (g.timing) {
                run.report["timing"] = Json{{"elapsed_ms", run.elapsed_ms}, {"threads", g.threads}};
                if (run.cache)
                    run.report["cache"] = Json{{"hits", run.cache->hits}, {"misses", run.cache->misses},
                        {"writes", run.cache->writes}, {"evictions", run.cache->evictions}, {"replays", run.cache->replays}};
            }
            std::cerr << "matrix: " << report_status_name(run.status) << " in " << run.elapsed_ms << " ms\n";
            write_out(g.out, run.dump());
            return exit_code(run.status);
        };
    });

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }
    try {
        return action ? action() : exit_usage;
    }
    catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
}
