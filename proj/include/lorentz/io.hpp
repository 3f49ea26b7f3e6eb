#pragma once
// Input documents (JSON text) and number formatting for outputs.
//
//   function:  {"atoms":[{"id":..,"mu":..}], "values":{id: number | "inf"}}
//   graph:     {"vertices":[{"id","mu"}], "edges":[{"id","u","v","length","weight"?}]}
//   family:    {"paths":[["e1","e2",...], ...]}
//   set:       {"vertices":[ids]}
//   values:    {"values":{id: number}}   (vertex function or edge density)

#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "lorentz/graph.hpp"
#include "lorentz/lorentz_core.hpp"

namespace lorentz {

// Malformed document text or schema.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FunctionDocument {
    DiscreteMeasureSpace space;
    MeasurableFunction f;
};

std::string read_text_file(const std::string& path);

FunctionDocument parse_function_document(const std::string& text);
MetricMeasureGraph parse_graph_document(const std::string& text);
CurveFamily parse_family_document(const std::string& text, const MetricMeasureGraph& g);
std::set<std::string> parse_set_document(const std::string& text);
std::map<std::string, double> parse_values_document(const std::string& text);

// "%.17g"; infinities as "inf" / "-inf", NaN as "nan".
std::string format_number(double v);

}  // namespace lorentz
