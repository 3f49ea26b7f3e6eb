#include "lorentz/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json_out.hpp"

namespace lorentz {

namespace {

using nlohmann::json;

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

const json& field(const json& obj, const char* key) {
    if (!obj.is_object() || !obj.contains(key))
        throw ParseError(std::string("missing field '") + key + "'");
    return obj.at(key);
}

std::string string_of(const json& v, const char* what) {
    if (!v.is_string()) throw ParseError(std::string(what) + " must be a string");
    return v.get<std::string>();
}

double number_of(const json& v, const char* what) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "inf") return kInf;
        if (s == "-inf") return -kInf;
    }
    throw ParseError(std::string(what) + " must be a number or \"inf\"");
}

std::map<std::string, double> value_map(const json& obj) {
    if (!obj.is_object()) throw ParseError("'values' must be an object");
    std::map<std::string, double> m;
    for (const auto& [k, v] : obj.items()) m[k] = number_of(v, "value");
    return m;
}

}  // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

FunctionDocument parse_function_document(const std::string& text) {
    const json doc = parse(text);
    const json& atoms = field(doc, "atoms");
    if (!atoms.is_array()) throw ParseError("'atoms' must be an array");
    std::vector<Atom> list;
    for (const json& a : atoms) list.push_back({string_of(field(a, "id"), "atom id"), number_of(field(a, "mu"), "mu")});
    FunctionDocument out{DiscreteMeasureSpace(std::move(list)), {}};
    out.f = MeasurableFunction::from_map(out.space, value_map(field(doc, "values")));
    return out;
}

MetricMeasureGraph parse_graph_document(const std::string& text) {
    const json doc = parse(text);
    const json& vs = field(doc, "vertices");
    const json& es = field(doc, "edges");
    if (!vs.is_array() || !es.is_array()) throw ParseError("'vertices' and 'edges' must be arrays");
    std::vector<Vertex> vertices;
    for (const json& v : vs)
        vertices.push_back({string_of(field(v, "id"), "vertex id"), number_of(field(v, "mu"), "mu")});
    std::vector<EdgeSpec> edges;
    for (const json& e : es) {
        EdgeSpec s{string_of(field(e, "id"), "edge id"), string_of(field(e, "u"), "u"),
                   string_of(field(e, "v"), "v"), number_of(field(e, "length"), "length"), std::nullopt};
        if (e.contains("weight")) s.weight = number_of(e.at("weight"), "weight");
        edges.push_back(std::move(s));
    }
    return MetricMeasureGraph(std::move(vertices), edges);
}

CurveFamily parse_family_document(const std::string& text, const MetricMeasureGraph& g) {
    const json doc = parse(text);
    const json& paths = field(doc, "paths");
    if (!paths.is_array()) throw ParseError("'paths' must be an array");
    CurveFamily family;
    for (const json& p : paths) {
        if (!p.is_array()) throw ParseError("each path must be an array of edge ids");
        std::vector<std::string> ids;
        for (const json& e : p) ids.push_back(string_of(e, "edge id"));
        family.push_back(CurvePath::from_ids(g, ids));
    }
    return family;
}

std::set<std::string> parse_set_document(const std::string& text) {
    const json doc = parse(text);
    const json& vs = field(doc, "vertices");
    if (!vs.is_array()) throw ParseError("'vertices' must be an array");
    std::set<std::string> out;
    for (const json& v : vs) out.insert(string_of(v, "vertex id"));
    return out;
}

std::map<std::string, double> parse_values_document(const std::string& text) {
    return value_map(field(parse(text), "values"));
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

namespace {

void write(const nlohmann::ordered_json& j, std::string& out) {
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
            out += '{';
            bool first = true;
            for (const auto& [k, v] : j.items()) {
                if (!first) out += ',';
                first = false;
                out += nlohmann::json(k).dump();
                out += ':';
                write(v, out);
            }
            out += '}';
            break;
        }
        case nlohmann::json::value_t::array: {
            out += '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ',';
                write(j[i], out);
            }
            out += ']';
            break;
        }
        case nlohmann::json::value_t::number_float: {
            const double v = j.get<double>();
            out += std::isfinite(v) ? format_number(v) : '"' + format_number(v) + '"';
            break;
        }
        default:
            out += j.dump();
    }
}

}  // namespace

std::string write_json(const nlohmann::ordered_json& j) {
    std::string out;
    write(j, out);
    return out;
}

}  // namespace detail

}  // namespace lorentz
