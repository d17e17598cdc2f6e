#pragma once
// JSON instance files: arrangements with their base ring, and region exports.

#include "acyc/apartment.hpp"
#include "acyc/building.hpp"
#include "acyc/orlik_solomon.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace acyc::io {

using json = nlohmann::json;

/// Schema violation; `line` is 0 when no source position is known.
struct SchemaError : std::invalid_argument {
    std::size_t line;
    std::string field;
    SchemaError(std::size_t l, std::string f, const std::string& msg)
        : std::invalid_argument((l ? "line " + std::to_string(l) + ", " : std::string()) + "field '" + f + "': " + msg),
          line(l), field(std::move(f))
    {
    }
};

struct ArrangementFile {
    os::Arrangement arr;
    Ring ring = Ring::integers();
};

namespace detail {

    inline std::size_t line_of(const std::string& text, std::size_t pos)
    {
        return 1 + std::count(text.begin(), text.begin() + std::min(pos, text.size()), '\n');
    }

    inline std::size_t key_pos(const std::string& text, const std::string& key)
    {
        auto at = text.find("\"" + key + "\"");
        return at == std::string::npos ? text.size() : at;
    }

    /// Position of the i-th element array inside "lines": [[...], [...]].
    inline std::size_t element_pos(const std::string& text, std::size_t i)
    {
        std::size_t at = key_pos(text, "lines");
        if (at == text.size())
            return at;
        at = text.find('[', at);
        std::size_t seen = 0;
        for (std::size_t k = at + 1; k < text.size(); ++k)
            if (text[k] == '[' && seen++ == i)
                return k;
        return text.size();
    }

    inline long get_int(const json& j, const std::string& field, std::size_t line)
    {
        if (!j.is_number_integer())
            throw SchemaError(line, field, "expected an integer, got " + std::string(j.type_name()));
        return j.get<long>();
    }

} // namespace detail

inline ArrangementFile parse_arrangement(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(detail::line_of(text, e.byte ? e.byte - 1 : 0), "", e.what());
    }
    if (!j.is_object())
        throw SchemaError(1, "", "expected an object");
    auto line = [&](const std::string& k) { return detail::line_of(text, detail::key_pos(text, k)); };
    for (auto& [k, v] : j.items())
        if (k != "p" && k != "d" && k != "precision" && k != "ring" && k != "lines")
            throw SchemaError(line(k), k, "unknown field");
    for (const char* k : {"p", "d", "precision", "lines"})
        if (!j.contains(k))
            throw SchemaError(0, k, "missing");
    ArrangementFile f;
    auto& ctx = f.arr.ctx;
    ctx.p = detail::get_int(j["p"], "p", line("p"));
    long d = detail::get_int(j["d"], "d", line("d"));
    if (d < 1 || d > 6)
        throw SchemaError(line("d"), "d", "must be between 1 and 6");
    ctx.d = static_cast<std::size_t>(d);
    ctx.precision = static_cast<int>(detail::get_int(j["precision"], "precision", line("precision")));
    try {
        ctx.validate();
    } catch (const std::exception& e) {
        throw SchemaError(line("p"), "p/precision", e.what());
    }
    if (j.contains("ring")) {
        if (!j["ring"].is_string())
            throw SchemaError(line("ring"), "ring", "expected a string");
        try {
            f.ring = Ring::parse(j["ring"].get<std::string>());
        } catch (const std::exception& e) {
            throw SchemaError(line("ring"), "ring", e.what());
        }
    }
    const json& lines = j["lines"];
    if (!lines.is_array() || lines.empty())
        throw SchemaError(line("lines"), "lines", "expected a non-empty array");
    if (lines.size() > 20)
        throw SchemaError(line("lines"), "lines", "at most 20 lines");
    for (std::size_t a = 0; a < lines.size(); ++a) {
        std::string field = "lines[" + std::to_string(a) + "]";
        std::size_t ln = detail::line_of(text, detail::element_pos(text, a));
        if (!lines[a].is_array() || lines[a].size() != ctx.n())
            throw SchemaError(ln, field, "expected " + std::to_string(ctx.n()) + " integers");
        IntVector v;
        Integer g = 0;
        for (std::size_t i = 0; i < ctx.n(); ++i) {
            v.push_back(Integer(detail::get_int(lines[a][i], field + "[" + std::to_string(i) + "]", ln)));
            g = gcd(g, v.back());
        }
        if (g != 1)
            throw SchemaError(ln, field, "not primitive (gcd " + g.get_str() + ")");
        for (std::size_t b = 0; b < f.arr.lines.size(); ++b) {
            IntMatrix m(ctx.n(), 2);
            for (std::size_t i = 0; i < ctx.n(); ++i) {
                m(i, 0) = f.arr.lines[b][i];
                m(i, 1) = v[i];
            }
            if (la::rank(m, Ring::rationals()) < 2)
                throw SchemaError(ln, field, "duplicates lines[" + std::to_string(b) + "] (proportional vectors)");
        }
        f.arr.lines.push_back(std::move(v));
    }
    f.arr.validate();
    return f;
}

inline json to_json(const os::Arrangement& arr)
{
    json lines = json::array();
    for (auto& v : arr.lines) {
        json row = json::array();
        for (auto& x : v)
            row.push_back(x.get_si());
        lines.push_back(row);
    }
    return {{"p", arr.ctx.p}, {"d", arr.ctx.d}, {"precision", arr.ctx.precision}, {"lines", lines}};
}

inline json to_json(const ArrangementFile& f)
{
    json j = to_json(f.arr);
    j["ring"] = f.ring.name();
    return j;
}

/// Canonical text: compact, keys sorted, trailing newline.
inline std::string dump_arrangement(const ArrangementFile& f) { return to_json(f).dump() + "\n"; }

inline ArrangementFile read_arrangement(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_arrangement(ss.str());
}

inline json region_json(const Region& r)
{
    json simplices = json::array();
    for (auto& layer : r.simplices)
        simplices.push_back(layer);
    return {{"d", r.d}, {"bound", r.bound}, {"z0", r.z0}, {"vertices", r.name}, {"i", r.ivalue},
            {"labels", r.label}, {"simplices", simplices}};
}

inline json to_json(const apt::ApartmentRegion& ar)
{
    json j = region_json(ar.region);
    json coords = json::array();
    for (auto& v : ar.vertex)
        coords.push_back(v.c);
    j["coords"] = coords;
    return j;
}

inline json to_json(const bt::BuildingRegion& br)
{
    json j = region_json(br.region);
    j["p"] = br.ctx.p;
    j["precision"] = br.ctx.precision;
    json bases = json::array();
    for (auto& v : br.vertex) {
        json m = json::array();
        for (std::size_t i = 0; i < v.basis.rows(); ++i) {
            json row = json::array();
            for (std::size_t k = 0; k < v.basis.cols(); ++k)
                row.push_back(v.basis(i, k).get_str());
            m.push_back(row);
        }
        bases.push_back(m);
    }
    j["bases"] = bases;
    return j;
}

} // namespace acyc::io
