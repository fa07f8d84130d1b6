#pragma once

// Line-oriented text format for finite categories:
//
//   objects: <n>
//   obj <id> <label>
//   mor <id> <dom> <cod> <label>
//   cmp <g> <f> <gf>
//
// Object ids are 0..n-1 and morphism ids 0..m-1, each used exactly once. Identities are
// inferred. Blank lines and lines starting with '#' are ignored. Labels are single tokens
// and may be omitted.

#include <ramcat/fincat.hpp>

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace ramcat {

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what) :
        Error("line " + std::to_string(line) + ": " + what), line_(line)
    {
    }

    [[nodiscard]] auto line() const -> std::size_t { return line_; }

private:
    std::size_t line_;
};

namespace detail {

inline auto split_tokens(std::string_view line) -> std::vector<std::string_view>
{
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
            ++i;
        auto start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r')
            ++i;
        if (i > start)
            tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

inline auto parse_index(std::string_view token, std::size_t line, const char* what) -> std::uint64_t
{
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw ParseError(line, std::string("expected a non-negative integer for ") + what + ", got '"
                + std::string(token) + "'");
    return value;
}

/// Reads category lines until EOF or a line equal to `terminator`. `line_no` is advanced.
inline auto read_category_block(std::istream& in, std::size_t& line_no, std::string_view terminator = {})
    -> FiniteCategory
{
    struct PendingMorphism {
        MorphismId id;
        ObjectId dom;
        ObjectId cod;
        std::string label;
        std::size_t line;
    };
    struct PendingCmp {
        std::uint64_t g, f, gf;
        std::size_t line;
    };

    std::optional<std::size_t> object_total;
    std::map<ObjectId, std::string> objects;
    std::map<MorphismId, PendingMorphism> morphisms;
    std::vector<PendingCmp> cmps;
    std::map<std::pair<MorphismId, MorphismId>, std::size_t> cmp_seen;

    std::string raw;
    bool terminated = terminator.empty();
    while (std::getline(in, raw)) {
        ++line_no;
        auto tokens = split_tokens(raw);
        if (tokens.empty() || tokens[0].front() == '#')
            continue;
        if (!terminator.empty() && tokens.size() == 1 && tokens[0] == terminator) {
            terminated = true;
            break;
        }
        auto head = tokens[0];
        if (head == "objects:") {
            if (tokens.size() != 2)
                throw ParseError(line_no, "expected 'objects: <n>'");
            if (object_total)
                throw ParseError(line_no, "duplicate 'objects:' header");
            object_total = parse_index(tokens[1], line_no, "object count");
        }
        else if (head == "obj") {
            if (!object_total)
                throw ParseError(line_no, "'obj' before the 'objects:' header");
            if (tokens.size() < 2 || tokens.size() > 3)
                throw ParseError(line_no, "expected 'obj <id> [label]'");
            auto id = parse_index(tokens[1], line_no, "object id");
            if (id >= *object_total)
                throw ParseError(line_no, "object id " + std::to_string(id) + " out of range (objects: "
                        + std::to_string(*object_total) + ")");
            if (objects.count(static_cast<ObjectId>(id)))
                throw ParseError(line_no, "duplicate object id " + std::to_string(id));
            objects[static_cast<ObjectId>(id)] = tokens.size() == 3 ? std::string(tokens[2]) : "o" + std::to_string(id);
        }
        else if (head == "mor") {
            if (tokens.size() < 4 || tokens.size() > 5)
                throw ParseError(line_no, "expected 'mor <id> <dom> <cod> [label]'");
            auto id = parse_index(tokens[1], line_no, "morphism id");
            auto dom = parse_index(tokens[2], line_no, "domain");
            auto cod = parse_index(tokens[3], line_no, "codomain");
            if (morphisms.count(static_cast<MorphismId>(id)))
                throw ParseError(line_no, "duplicate morphism id " + std::to_string(id));
            for (auto end : {dom, cod})
                if (!objects.count(static_cast<ObjectId>(end)))
                    throw ParseError(line_no, "morphism " + std::to_string(id) + " refers to undeclared object "
                            + std::to_string(end));
            morphisms[static_cast<MorphismId>(id)] = PendingMorphism{static_cast<MorphismId>(id),
                static_cast<ObjectId>(dom), static_cast<ObjectId>(cod),
                tokens.size() == 5 ? std::string(tokens[4]) : "m" + std::to_string(id), line_no};
        }
        else if (head == "cmp") {
            if (tokens.size() != 4)
                throw ParseError(line_no, "expected 'cmp <g> <f> <gf>'");
            PendingCmp c{parse_index(tokens[1], line_no, "g"), parse_index(tokens[2], line_no, "f"),
                parse_index(tokens[3], line_no, "gf"), line_no};
            auto key = std::pair{static_cast<MorphismId>(c.g), static_cast<MorphismId>(c.f)};
            if (auto it = cmp_seen.find(key); it != cmp_seen.end())
                throw ParseError(line_no, "duplicate composition entry for (" + std::to_string(c.g) + ", "
                        + std::to_string(c.f) + "), first given on line " + std::to_string(it->second));
            cmp_seen[key] = line_no;
            cmps.push_back(c);
        }
        else
            throw ParseError(line_no, "unknown directive '" + std::string(head) + "'");
    }
    if (!terminated)
        throw ParseError(line_no, "missing '" + std::string(terminator) + "'");
    if (!object_total)
        throw ParseError(line_no, "missing 'objects:' header");
    if (objects.size() != *object_total)
        throw ParseError(line_no, "declared " + std::to_string(*object_total) + " objects but found "
                + std::to_string(objects.size()));

    CategoryBuilder b;
    for (const auto& [id, label] : objects)
        b.add_object(label);
    MorphismId expected = 0;
    for (const auto& [id, m] : morphisms) {
        if (id != expected)
            throw ParseError(m.line, "morphism ids must be 0..m-1; id " + std::to_string(expected) + " is missing");
        b.add_morphism(m.dom, m.cod, m.label);
        ++expected;
    }
    for (const auto& c : cmps) {
        for (auto ref : {c.g, c.f, c.gf})
            if (ref >= morphisms.size())
                throw ParseError(c.line, "composition refers to undeclared morphism " + std::to_string(ref));
        const auto& g = morphisms.at(static_cast<MorphismId>(c.g));
        const auto& f = morphisms.at(static_cast<MorphismId>(c.f));
        if (f.cod != g.dom)
            throw ParseError(c.line, "composition (" + std::to_string(c.g) + ", " + std::to_string(c.f)
                    + ") is not composable");
        b.set_compose(static_cast<MorphismId>(c.g), static_cast<MorphismId>(c.f), static_cast<MorphismId>(c.gf));
    }
    return std::move(b).build();
}

} // namespace detail

[[nodiscard]] inline auto read_category(std::istream& in) -> FiniteCategory
{
    std::size_t line_no = 0;
    return detail::read_category_block(in, line_no);
}

[[nodiscard]] inline auto parse_category(const std::string& text) -> FiniteCategory
{
    std::istringstream in(text);
    return read_category(in);
}

[[nodiscard]] inline auto load_category(const std::string& path) -> FiniteCategory
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open category file '" + path + "'");
    return read_category(in);
}

inline void write_category(std::ostream& out, const FiniteCategory& cat)
{
    out << "objects: " << cat.object_count() << '\n';
    for (ObjectId a = 0; a < cat.object_count(); ++a)
        out << "obj " << a << ' ' << cat.object_label(a) << '\n';
    for (const auto& f : cat.morphisms())
        out << "mor " << f.id << ' ' << f.dom << ' ' << f.cod << ' ' << f.label << '\n';
    cat.for_each_composable([&](MorphismId g, MorphismId f) {
        auto gf = cat.compose_unchecked(g, f);
        if (gf != no_morphism)
            out << "cmp " << g << ' ' << f << ' ' << gf << '\n';
    });
}

[[nodiscard]] inline auto format_category(const FiniteCategory& cat) -> std::string
{
    std::ostringstream out;
    write_category(out, cat);
    return out.str();
}

/// Resolves a command-line object reference: a label first, then a numeric id.
[[nodiscard]] inline auto resolve_object(const FiniteCategory& cat, const std::string& ref) -> ObjectId
{
    for (ObjectId a = 0; a < cat.object_count(); ++a)
        if (cat.object_label(a) == ref)
            return a;
    std::uint64_t id = 0;
    auto [ptr, ec] = std::from_chars(ref.data(), ref.data() + ref.size(), id);
    if (ec == std::errc{} && ptr == ref.data() + ref.size() && id < cat.object_count())
        return static_cast<ObjectId>(id);
    throw Error("unknown object '" + ref + "'");
}

} // namespace ramcat
