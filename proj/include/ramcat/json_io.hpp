#pragma once

// JSON forms of every report type. Keys appear in a fixed order, so equal reports serialize
// to equal bytes.

#include <ramcat/arrows.hpp>
#include <ramcat/degrees.hpp>
#include <ramcat/essential.hpp>
#include <ramcat/expansions.hpp>

#include <json.hpp>

#include <optional>
#include <string>

namespace ramcat {

using Json = nlohmann::ordered_json;

namespace detail {

template <class T>
auto opt(const std::optional<T>& v) -> Json
{
    return v ? Json(*v) : Json(nullptr);
}

} // namespace detail

inline void to_json(Json& j, const Coloring& c)
{
    j = Json{{"mode", mode_name(c.mode)}, {"k", c.k}, {"domain", c.domain}, {"colors", c.colors}};
    if (c.mode == ColoringMode::subobject)
        j["classes"] = c.classes;
}

inline void from_json(const Json& j, Coloring& c)
{
    c.mode = parse_mode(j.at("mode").get<std::string>());
    c.k = j.at("k").get<int>();
    c.domain = j.at("domain").get<std::vector<MorphismId>>();
    c.colors = j.at("colors").get<std::vector<int>>();
    c.classes.clear();
    if (j.contains("classes"))
        c.classes = j.at("classes").get<std::vector<std::vector<MorphismId>>>();
}

inline void to_json(Json& j, const ArrowQuery& q)
{
    j = Json{{"A", q.A}, {"B", q.B}, {"C", q.C}, {"k", q.k}, {"t", q.t}, {"mode", mode_name(q.mode)}};
}

/// Verdict without wall-clock time.
inline void to_json(Json& j, const ArrowVerdict& v)
{
    j = Json{{"status", status_name(v.status)}, {"nodes", v.nodes}};
    if (v.witness)
        j["witness"] = *v.witness;
    if (!v.note.empty())
        j["note"] = v.note;
}

inline void from_json(const Json& j, ArrowVerdict& v)
{
    auto s = j.at("status").get<std::string>();
    v.status = s == "holds" ? ArrowStatus::holds : s == "fails" ? ArrowStatus::fails : ArrowStatus::inconclusive;
    v.nodes = j.at("nodes").get<std::uint64_t>();
    v.witness.reset();
    if (j.contains("witness"))
        v.witness = j.at("witness").get<Coloring>();
    v.note = j.value("note", std::string{});
}

inline void to_json(Json& j, const DegreeCell& c)
{
    j = Json{{"B", c.B}, {"k", c.k}, {"least_t", detail::opt(c.least_t)}, {"witness_C", detail::opt(c.witness_C)},
        {"failed_below", c.failed_below}, {"inconclusive", c.inconclusive}};
}

inline void to_json(Json& j, const DegreeBound& d)
{
    j = Json{{"object", d.object}, {"mode", mode_name(d.mode)}, {"lower", detail::opt(d.lower)},
        {"upper", detail::opt(d.upper)}, {"tight", d.tight()}, {"bound", universe_relative}, {"k_max", d.k_max},
        {"B_pool", d.B_pool}, {"C_universe", d.C_universe}};
    Json up = Json::array();
    for (const auto& w : d.upper_witnesses)
        up.push_back(Json{{"B", w.B}, {"k", w.k}, {"C", w.C}});
    j["upper_witnesses"] = up;
    if (d.lower_witness) {
        Json fails = Json::array();
        for (const auto& [C, chi] : d.lower_witness->failures)
            fails.push_back(Json{{"C", C}, {"coloring", chi}});
        j["lower_witness"] = Json{{"B", d.lower_witness->B}, {"k", d.lower_witness->k}, {"t", d.lower_witness->t},
            {"failures", fails}};
    }
    else
        j["lower_witness"] = nullptr;
    j["cells"] = d.cells;
    j["notes"] = d.notes;
}

inline void to_json(Json& j, const AutBridgeReport& r)
{
    j = Json{{"status", report_status_name(r.status)}, {"object", r.object}, {"t_morphism", detail::opt(r.t_morphism)},
        {"t_subobject", detail::opt(r.t_subobject)}, {"aut_size", r.aut_size}, {"detail", r.detail}};
}

inline void to_json(Json& j, const ProductReport& r)
{
    j = Json{{"status", report_status_name(r.status)}, {"first", r.first}, {"second", r.second}, {"product", r.product},
        {"factor_product", detail::opt(r.factor_product)}, {"equality", r.equality}, {"detail", r.detail}};
}

inline void to_json(Json& j, const EssentialQuery& q)
{
    j = Json{{"A", q.A}, {"B", q.B}, {"ambient", q.ambient}, {"t", q.t}};
}

inline void to_json(Json& j, const EssentialResult& r)
{
    j = Json{{"status", essential_status_name(r.status)}, {"domain", r.domain}, {"lambda", detail::opt(r.lambda)},
        {"candidates", r.candidates}, {"nodes", r.nodes}, {"replay", r.replay}};
    if (!r.note.empty())
        j["note"] = r.note;
}

inline void to_json(Json& j, const EssentialArrowReport& r)
{
    j = Json{{"status", report_status_name(r.status)}, {"query", r.query}, {"k_sufficient", r.k_sufficient},
        {"essential", r.essential}, {"arrow", r.arrow}, {"detail", r.detail}};
}

inline void to_json(Json& j, const AxiomReport& r)
{
    j = Json{{"axiom", r.name}, {"holds", r.holds}, {"checked", r.checked}, {"violations", r.violations}};
}

inline void to_json(Json& j, const PrecompactReport& r)
{
    j = r.axiom;
    Json sizes = Json::array();
    for (auto [a, n] : r.fiber_sizes)
        sizes.push_back(Json{{"object", a}, {"fiber", n}});
    j["fiber_sizes"] = sizes;
}

inline void to_json(Json& j, const ExpansionPropertyReport& r)
{
    auto pairs = [](const auto& v, const char* from) {
        Json a = Json::array();
        for (const auto& [x, b] : v)
            a.push_back(Json{{from, x}, {"B", detail::opt(b)}});
        return a;
    };
    j = Json{{"status", report_status_name(r.status)}, {"holds", r.holds}, {"single_object_route", r.single_object},
        {"routes_agree", r.routes_agree}, {"directed", r.directed}, {"minimal_failing", detail::opt(r.minimal_failing)},
        {"witnesses", pairs(r.witnesses, "A")}, {"decoration_witnesses", pairs(r.decoration_witnesses, "D")},
        {"detail", r.detail}};
}

inline void to_json(Json& j, const FiberDegree& f)
{
    j = Json{{"object", f.object}, {"aut_size", f.aut_size}, {"degree", f.bound}};
}

inline void to_json(Json& j, const AdditivityReport& r)
{
    j = Json{{"status", report_status_name(r.status)}, {"object", r.object}, {"reasonable", r.reasonable},
        {"unique_restrictions", r.unique_restrictions}, {"expansion_property", r.expansion_property},
        {"directed", r.directed}, {"equality_expected", r.equality_expected}, {"downstairs", r.downstairs},
        {"fibers", r.fibers}, {"fiber_sum", detail::opt(r.fiber_sum)}, {"detail", r.detail}};
}

inline void to_json(Json& j, const RatioReport& r)
{
    Json ws = nullptr;
    if (r.weighted_sum)
        ws = Json{{"numerator", r.weighted_sum->first}, {"denominator", r.weighted_sum->second}};
    j = Json{{"status", report_status_name(r.status)}, {"object", r.object}, {"aut_size", r.aut_size},
        {"downstairs", r.downstairs}, {"fibers", r.fibers}, {"representatives", r.representatives}, {"weighted_sum", ws},
        {"representative_sum", detail::opt(r.representative_sum)}, {"detail", r.detail}};
}

inline void to_json(Json& j, const MinExpansionsReport& r)
{
    j = Json{{"status", report_status_name(r.status)}, {"object", r.object}, {"t", r.t}, {"ambient", detail::opt(r.ambient)},
        {"distinct", r.distinct}, {"restrictions", r.restrictions}, {"detail", r.detail}};
}

/// Objects and morphism counts; enough to identify a generated category in a report.
[[nodiscard]] inline auto category_summary(const FiniteCategory& cat) -> Json
{
    Json objs = Json::array();
    for (ObjectId a = 0; a < cat.object_count(); ++a)
        objs.push_back(cat.object_label(a));
    return Json{{"objects", objs}, {"morphisms", cat.morphism_count()}};
}

} // namespace ramcat
