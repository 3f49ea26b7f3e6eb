#include "lorentz/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json_out.hpp"
#include "lorentz/capacity.hpp"
#include "lorentz/errors.hpp"
#include "lorentz/io.hpp"
#include "lorentz/maximal.hpp"
#include "lorentz/newtonian.hpp"
#include "lorentz/radial.hpp"

namespace lorentz {

namespace {

using ojson = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A finished document plus the exit code it implies.
struct Output {
    std::string text;
    int code = kExitOk;
};

double parse_number(const std::string& s, const std::string& what) {
    if (s == "inf") return kInf;
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw UsageError(what + " is not a number: '" + s + "'");
        return v;
    } catch (const std::logic_error&) {
        throw UsageError(what + " is not a number: '" + s + "'");
    }
}

LorentzExponents exponents(const Scenario& s) { return LorentzExponents(s.p, parse_number(s.q, "--q")); }

std::string input(const Scenario& s, const std::string& role) {
    auto it = s.inputs.find(role);
    if (it == s.inputs.end() || it->second.empty()) throw UsageError("missing --" + role);
    return read_text_file(it->second);
}

std::optional<std::string> optional_input(const Scenario& s, const std::string& role) {
    auto it = s.inputs.find(role);
    if (it == s.inputs.end() || it->second.empty()) return std::nullopt;
    return read_text_file(it->second);
}

std::optional<std::string> param(const Scenario& s, const std::string& key) {
    auto it = s.params.find(key);
    if (it == s.params.end() || it->second.empty()) return std::nullopt;
    return it->second;
}

double number_param(const Scenario& s, const std::string& key, double fallback) {
    const auto v = param(s, key);
    return v ? parse_number(*v, "--" + key) : fallback;
}

std::set<std::string> list_param(const Scenario& s, const std::string& key) {
    std::set<std::string> out;
    const auto v = param(s, key);
    if (!v) return out;
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.insert(item);
    return out;
}

std::string format_of(const Scenario& s) {
    const std::string f = s.format.value_or(s.subcommand == "counterexample" ? "csv" : "json");
    if (f != "json" && f != "csv") throw UsageError("--format must be json or csv");
    return f;
}

NormVariant variant_of(const Scenario& s) { return parse_variant(s.variant.value_or("pq")); }

ojson header(const Scenario& s) {
    ojson j;
    j["p"] = s.p;
    j["q"] = parse_number(s.q, "--q");
    return j;
}

std::string csv_row(std::initializer_list<std::string> cells) {
    std::string out;
    bool first = true;
    for (const auto& c : cells) {
        if (!first) out += ',';
        first = false;
        out += c;
    }
    return out + "\n";
}

std::string num(double v) { return format_number(v); }

ojson by_id(const std::vector<double>& values, const std::function<std::string(std::size_t)>& id) {
    ojson m = ojson::object();
    for (std::size_t i = 0; i < values.size(); ++i) m[id(i)] = values[i];
    return m;
}

// ---- selftests -------------------------------------------------------------

struct Checks {
    std::vector<std::string> failed;
    int count = 0;

    void expect(bool ok, const std::string& name) {
        ++count;
        if (!ok) failed.push_back(name);
    }
    void near(double a, double b, const std::string& name, double tol = 1e-12) {
        expect(std::fabs(a - b) <= tol * std::max(1.0, std::fabs(b)), name);
    }
};

MetricMeasureGraph single_edge(double length) {
    return MetricMeasureGraph({{"x", 1.0}, {"y", 1.0}}, {{"e", "x", "y", length, std::nullopt}});
}

void selftest_norm(Checks& c) {
    const DiscreteMeasureSpace two({{"a", 1.0}, {"b", 1.0}});
    const DistributionCurve d = distribution_function({{3.0, -1.0}}, two);
    c.expect(d(0.0) == 2.0 && d(1.0) == 1.0 && d(2.5) == 1.0 && d(3.0) == 0.0, "distribution of (3,-1)");
    c.expect(distribution_function({{0.0, 0.0}}, two)(0.0) == 0.0, "distribution of zero");
    const DiscreteMeasureSpace w23({{"a", 2.0}, {"b", 3.0}});
    const DistributionCurve d5 = distribution_function({{5.0, 5.0}}, w23);
    c.expect(d5(0.0) == 5.0 && d5(4.9) == 5.0 && d5(5.0) == 0.0, "single level distribution");
    const StepRearrangement r = rearrangement({{3.0, 1.0}}, two);
    c.expect(r.levels == std::vector<double>{3.0, 1.0} && r.breakpoints == std::vector<double>{0.0, 1.0, 2.0},
             "rearrangement of (3,1)");
    const DiscreteMeasureSpace w21({{"a", 2.0}, {"b", 1.0}});
    const StepRearrangement r2 = rearrangement({{1.0, 4.0}}, w21);
    c.expect(r2.levels == std::vector<double>{4.0, 1.0} && r2.breakpoints == std::vector<double>{0.0, 1.0, 3.0},
             "weighted rearrangement");
    const StepRearrangement rneg = rearrangement({{-3.0, 1.0}}, two);
    const StepRearrangement rabs = rearrangement({{3.0, 1.0}}, two);
    c.expect(rneg.levels == rabs.levels && rneg.breakpoints == rabs.breakpoints, "rearrangement of |f|");
    const DiscreteMeasureSpace one({{"a", 1.0}});
    const StepRearrangement unit = rearrangement({{1.0}}, one);
    c.near(double_star(unit, 0.5), 1.0, "f** on the constant piece");
    c.near(double_star(unit, 2.0), 0.5, "f** beyond the support");
    const DiscreteMeasureSpace nine({{"a", 9.0}});
    c.near(lorentz_norm(rearrangement({{1.0}}, nine), LorentzExponents(2, kInf), NormVariant::PQ), 3.0,
           "indicator of mass 9, q = inf");
    const DiscreteMeasureSpace four({{"a", 4.0}});
    c.near(lorentz_norm(rearrangement({{1.0}}, four), LorentzExponents(2, 2), NormVariant::PQ), 2.0,
           "indicator of mass 4, p = q = 2");
    c.expect(norm_via_distribution(distribution_function({{0.0, 0.0}}, two), LorentzExponents(2, 2)) == 0.0,
             "distribution norm of zero");
}

void selftest_modulus(Checks& c) {
    const LorentzExponents e(2, 2);
    const MetricMeasureGraph g1 = single_edge(2.0);
    const CurveFamily fam{CurvePath(g1, {0})};
    c.near(path_integral({{0.5}}, fam[0], g1), 1.0, "rho = 1/len integrates to 1");
    c.expect(path_integral({{0.0}}, fam[0], g1) == 0.0, "zero density");
    const MetricMeasureGraph path(
        {{"a", 1.0}, {"b", 1.0}, {"c", 1.0}},
        {{"e1", "a", "b", 1.0, std::nullopt}, {"e2", "b", "c", 2.0, std::nullopt}});
    const CurvePath two = CurvePath::from_ids(path, {"e1", "e2"});
    c.near(path_integral({{0.5, 0.25}}, two, path), 1.0, "two-edge weighted sum");
    c.near(*admissibility_deficit({{0.5}}, fam, g1), 0.0, "admissible equality deficit");
    c.near(*admissibility_deficit({{0.0}}, fam, g1), -1.0, "zero density deficit");
    c.near(*admissibility_deficit({{1.0}}, fam, g1), 1.0, "doubled density deficit");
    c.expect(modulus(g1, {}, e).value == 0.0, "empty family modulus");
    c.expect(modulus_bruteforce(g1, {}, e) == 0.0, "empty family oracle");
    c.expect(enumerate_paths(g1, {"x"}, {"y"}, 1).size() == 1, "one edge, one path");
    const MetricMeasureGraph apart({{"x", 1.0}, {"y", 1.0}}, {});
    c.expect(enumerate_paths(apart, {"x"}, {"y"}, 3).empty(), "disconnected pair");
    const MetricMeasureGraph tri({{"a", 1.0}, {"b", 1.0}, {"c", 1.0}},
                                 {{"ab", "a", "b", 1.0, std::nullopt},
                                  {"bc", "b", "c", 1.0, std::nullopt},
                                  {"ac", "a", "c", 1.0, std::nullopt}});
    c.expect(enumerate_paths(tri, {"a"}, {"c"}, 2).size() == 2, "triangle paths");
}

void selftest_newtonian(Checks& c) {
    const MetricMeasureGraph g = single_edge(2.0);
    const VertexFunction u{{1.0, 0.0}};
    c.near(minimal_upper_gradient(u, g).values[0], 0.5, "difference quotient");
    c.expect(minimal_upper_gradient({{3.0, 3.0}}, g).values[0] == 0.0, "constant function");
    const MetricMeasureGraph tri({{"0", 1.0}, {"1", 1.0}, {"2", 1.0}},
                                 {{"01", "0", "1", 1.0, std::nullopt},
                                  {"12", "1", "2", 1.0, std::nullopt},
                                  {"02", "0", "2", 1.0, std::nullopt}});
    c.expect(minimal_upper_gradient({{0.0, 1.0, 3.0}}, tri).values == std::vector<double>{1.0, 2.0, 3.0},
             "triangle gradients");
    c.near(is_upper_gradient(u, minimal_upper_gradient(u, g), g), 0.0, "minimal gradient deficit");
    c.expect(is_upper_gradient(u, {{0.0}}, g) < 0.0, "zero gradient fails");
    c.near(is_upper_gradient(u, {{0.6}}, g), 0.2, "shifted gradient deficit");
    c.expect(newtonian_norm({{0.0, 0.0}}, g, LorentzExponents(2, 2), NormVariant::PQ).value == 0.0,
             "zero function norm");
    const MetricMeasureGraph unit = single_edge(1.0);
    LemmaInputs trunc;
    trunc.u1 = {{1.0, 0.0}};
    trunc.lambda = 0.5;
    const LemmaReport tr = gradient_lemma_check(LemmaKind::TRUNCATE, trunc, unit);
    c.near(tr.deficit, 0.5, "truncation deficit");
    LemmaInputs prod;
    prod.u1 = {{1.0, 1.0}};
    prod.u2 = VertexFunction{{0.3, -2.0}};
    c.expect(gradient_lemma_check(LemmaKind::PRODUCT, prod, unit).deficit >= 0.0, "identity factor product");
}

void selftest_capacity(Checks& c) {
    const MetricMeasureGraph g = single_edge(1.0);
    const LorentzExponents e(2, 2);
    c.expect(capacity({}, g, e).value == 0.0, "empty set capacity");
    c.expect(capacity_bruteforce({}, g, e) == 0.0, "empty set oracle");
}

void selftest_counterexample(Checks& c) {
    RadialFunctionSpec zero;
    zero.coefficient = 0.0;
    c.expect(radial_distribution(zero).pieces.empty(), "zero coefficient distribution");
    c.expect(radial_weak_norm(zero, 2.0) == 0.0, "zero coefficient weak norm");
    c.expect(radial_segment_integral(zero, 0.1, 0.5) == 0.0, "zero segment integral");
    RadialFunctionSpec gp;
    gp.n = 3;
    gp.alpha = -1.5;
    gp.coefficient = 0.5;
    c.near(radial_segment_integral(gp, 0.2, 0.7), std::pow(0.2, -0.5) - std::pow(0.7, -0.5),
           "gradient integrates to the drop", 1e-14);
    RadialFunctionSpec gn;
    gn.alpha = -1.0;
    c.near(radial_segment_integral(gn, 0.2, 0.7), std::log(0.7 / 0.2), "1/r integrates to a log", 1e-14);
    const double first = truncation_gap(3, 2.0, 1);
    for (int k = 2; k <= 10; ++k) c.near(truncation_gap(3, 2.0, k), first, "truncation constancy");
}

void selftest_maximal(Checks& c) {
    const FiniteMetricMeasureSpace line({"0", "1", "2"}, {1.0, 1.0, 1.0},
                                        {{0.0, 1.0, 2.0}, {1.0, 0.0, 1.0}, {2.0, 1.0, 0.0}});
    const LorentzExponents e(2, 2);
    const VertexFunction zero{{0.0, 0.0, 0.0}};
    const VertexFunction Mz = maximal_function(zero, line, e);
    c.expect(std::all_of(Mz.values.begin(), Mz.values.end(), [](double v) { return v == 0.0; }),
             "maximal function of zero");
    const WeakTypeProfile pz = weak_type_profile(zero, line, e, log_grid(0.1, 10.0, 5));
    c.expect(pz.grid_sup == 0.0 && pz.exact_sup == 0.0, "profile of zero");
    const VertexFunction u{{1.0, 0.0, 2.0}};
    const VertexFunction M = maximal_function(u, line, e);
    const double top = *std::max_element(M.values.begin(), M.values.end());
    c.expect(weak_type_profile(u, line, e, {top * 1.01}).tail == 0.0, "tail beyond max Mu");
    const VertexFunction v = mcshane_extend({{"0", 0.0}}, 1.0, line);
    c.expect(v.values == std::vector<double>{0.0, 1.0, 2.0}, "distance function extension");
    const VertexFunction w = mcshane_extend({{"0", 0.5}, {"1", 1.0}, {"2", 0.25}}, 1.0, line);
    c.expect(w.values == std::vector<double>{0.5, 1.0, 0.25}, "identity extension");
}

void selftest_poincare(Checks& c) {
    const MetricMeasureGraph g({{"a", 1.0}, {"b", 1.0}, {"c", 1.0}},
                               {{"ab", "a", "b", 1.0, std::nullopt}, {"bc", "b", "c", 1.0, std::nullopt}});
    const PoincareReport r = poincare_constant({{2.0, 2.0, 2.0}}, {{1.0, 1.0}}, g, 1.0, LorentzExponents(2, 2));
    c.expect(r.global == 0.0, "constant function");
    const FiniteMetricMeasureSpace one({"a"}, {1.0}, {{0.0}});
    const PoincareReport s = poincare_constant({{3.0}}, VertexFunction{{1.0}}, one, 1.0, LorentzExponents(2, 2));
    c.expect(s.balls.size() == 1 && s.balls[0].constant == 0.0, "single-point ball");
}

Output selftest(const Scenario& s) {
    Checks c;
    const std::string& cmd = s.subcommand;
    if (cmd == "norm") selftest_norm(c);
    else if (cmd == "modulus") selftest_modulus(c);
    else if (cmd == "newtonian" || cmd == "lemma-check") selftest_newtonian(c);
    else if (cmd == "capacity") selftest_capacity(c);
    else if (cmd == "counterexample") selftest_counterexample(c);
    else if (cmd == "maximal") selftest_maximal(c);
    else if (cmd == "poincare") selftest_poincare(c);
    else throw UsageError("unknown subcommand '" + cmd + "'");
    ojson j;
    j["subcommand"] = cmd;
    j["selftest"] = c.failed.empty() ? "pass" : "fail";
    j["checks"] = c.count;
    j["failed"] = c.failed;
    return {detail::write_json(j), c.failed.empty() ? kExitOk : kExitError};
}

// ---- subcommands -----------------------------------------------------------

Output run_norm(const Scenario& s) {
    const FunctionDocument doc = parse_function_document(input(s, "input"));
    const LorentzExponents e = exponents(s);
    const NormVariant v = variant_of(s);
    const double value = lorentz_norm(rearrangement(doc.f, doc.space), e, v);
    if (format_of(s) == "csv")
        return {csv_row({"p", "q", "variant", "value"}) +
                csv_row({num(e.p()), num(e.q()), to_string(v), num(value)})};
    ojson j = header(s);
    j["variant"] = to_string(v);
    j["value"] = value;
    return {detail::write_json(j)};
}

Output run_modulus(const Scenario& s) {
    const MetricMeasureGraph g = parse_graph_document(input(s, "graph"));
    CurveFamily family;
    if (auto fam = optional_input(s, "family")) {
        family = parse_family_document(*fam, g);
    } else if (param(s, "sources") && param(s, "targets")) {
        const double max_edges = number_param(s, "max-edges", 8);
        family = enumerate_paths(g, list_param(s, "sources"), list_param(s, "targets"),
                                 static_cast<std::size_t>(max_edges));
    } else {
        throw UsageError("modulus needs --family or --sources and --targets");
    }
    const LorentzExponents e = exponents(s);
    const ModulusResult r = modulus(g, family, e, s.solver);
    const int code = r.converged ? kExitOk : kExitNotConverged;
    if (format_of(s) == "csv") {
        std::string out = csv_row({"edge", "rho"});
        for (std::size_t i = 0; i < g.edge_count(); ++i)
            out += csv_row({g.edges()[i].id, num(r.optimizer.values[i])});
        return {out, code};
    }
    ojson j = header(s);
    j["variant"] = to_string(r.variant_used);
    j["paths"] = family.size();
    j["value"] = r.value;
    j["bracket"] = {r.bracket.lower, r.bracket.upper};
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    j["seed"] = s.solver.seed;
    j["optimizer"] = by_id(r.optimizer.values, [&](std::size_t i) { return g.edges()[i].id; });
    return {detail::write_json(j), code};
}

Output run_capacity(const Scenario& s) {
    const MetricMeasureGraph g = parse_graph_document(input(s, "graph"));
    const std::set<std::string> E = parse_set_document(input(s, "set"));
    const LorentzExponents e = exponents(s);
    CapacityOptions opts;
    static_cast<SolverOptions&>(opts) = s.solver;
    const CapacityResult r = capacity(E, g, e, opts);
    const int code = r.converged ? kExitOk : kExitNotConverged;
    if (format_of(s) == "csv") {
        std::string out = csv_row({"vertex", "u"});
        for (std::size_t i = 0; i < g.vertex_count(); ++i)
            out += csv_row({g.vertices()[i].id, num(r.optimizer.values[i])});
        return {out, code};
    }
    ojson j = header(s);
    j["variant"] = to_string(r.variant_used);
    j["value"] = r.value;
    j["bracket"] = {r.bracket.lower, r.bracket.upper};
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    j["seed"] = s.solver.seed;
    j["optimizer"] = by_id(r.optimizer.values, [&](std::size_t i) { return g.vertices()[i].id; });
    return {detail::write_json(j), code};
}

Output run_newtonian(const Scenario& s) {
    const MetricMeasureGraph g = parse_graph_document(input(s, "graph"));
    const VertexFunction u = VertexFunction::from_map(g, parse_values_document(input(s, "function")));
    const LorentzExponents e = exponents(s);
    const NormVariant v = variant_of(s);
    const NewtonianNorm n = newtonian_norm(u, g, e, v);
    const EdgeDensity grad = minimal_upper_gradient(u, g);
    if (format_of(s) == "csv") {
        std::string out = csv_row({"edge", "gradient"});
        for (std::size_t i = 0; i < g.edge_count(); ++i) out += csv_row({g.edges()[i].id, num(grad.values[i])});
        return {out};
    }
    ojson j = header(s);
    j["variant"] = to_string(v);
    j["value"] = n.value;
    j["combination_exponent"] = n.combination_exponent;
    j["function_norm"] = n.function_norm;
    j["gradient_norm"] = n.gradient_norm;
    j["minimal_gradient"] = by_id(grad.values, [&](std::size_t i) { return g.edges()[i].id; });
    return {detail::write_json(j)};
}

Output run_lemma_check(const Scenario& s) {
    const MetricMeasureGraph g = parse_graph_document(input(s, "graph"));
    std::string kind_name = param(s, "kind").value_or("");
    if (kind_name.empty()) throw UsageError("missing --kind");
    for (char& ch : kind_name) ch = ch == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    const LemmaKind kind = parse_lemma_kind(kind_name);

    LemmaInputs in;
    in.u1 = VertexFunction::from_map(g, parse_values_document(input(s, "u1")));
    if (auto t = optional_input(s, "u2")) in.u2 = VertexFunction::from_map(g, parse_values_document(*t));
    if (auto t = optional_input(s, "g1")) in.g1 = EdgeDensity::from_map(g, parse_values_document(*t));
    if (auto t = optional_input(s, "g2")) in.g2 = EdgeDensity::from_map(g, parse_values_document(*t));
    if (auto t = optional_input(s, "set")) in.closed_set = parse_set_document(*t);
    if (auto m = param(s, "map")) in.map = ScalarMap::parse(*m);
    in.exponent = number_param(s, "exponent", in.exponent);
    in.epsilon = number_param(s, "epsilon", in.epsilon);
    in.lambda = number_param(s, "lambda", in.lambda);

    const LemmaReport r = gradient_lemma_check(kind, in, g);
    const bool holds = r.deficit >= -1e-12;
    if (format_of(s) == "csv")
        return {csv_row({"kind", "deficit", "worst_edge", "holds"}) +
                csv_row({to_string(kind), num(r.deficit), r.worst_edge.value_or(""), holds ? "true" : "false"})};
    ojson j;
    j["kind"] = to_string(kind);
    j["deficit"] = r.deficit;
    j["worst_edge"] = r.worst_edge ? ojson(*r.worst_edge) : ojson(nullptr);
    j["holds"] = holds;
    j["output"] = by_id(r.output.values, [&](std::size_t i) { return g.vertices()[i].id; });
    j["candidate"] = by_id(r.candidate.values, [&](std::size_t i) { return g.edges()[i].id; });
    return {detail::write_json(j)};
}

Output run_counterexample(const Scenario& s) {
    const int n = static_cast<int>(number_param(s, "n", 3));
    const int kmax = static_cast<int>(number_param(s, "kmax", 10));
    if (kmax < 1) throw UsageError("--kmax must be at least 1");
    const double p = s.p;
    const double reference = p < n ? (n / p - 1.0) * std::pow(omega(n), 1.0 / p) : std::pow(omega(n), 1.0 / n);
    const bool csv = format_of(s) == "csv";
    std::string out = csv_row({"k", "gap_value", "reference_value", "rel_dev"});
    ojson rows = ojson::array();
    for (int k = 1; k <= kmax; ++k) {
        const double gap = truncation_gap(n, p, k);
        const double dev = std::fabs(gap - reference) / reference;
        out += csv_row({std::to_string(k), num(gap), num(reference), num(dev)});
        rows.push_back({{"k", k}, {"gap_value", gap}, {"reference_value", reference}, {"rel_dev", dev}});
    }
    if (csv) return {out};
    ojson j;
    j["n"] = n;
    j["p"] = p;
    j["rows"] = rows;
    return {detail::write_json(j)};
}

Output run_maximal(const Scenario& s) {
    const MetricMeasureGraph g = parse_graph_document(input(s, "graph"));
    const VertexFunction u = VertexFunction::from_map(g, parse_values_document(input(s, "function")));
    const LorentzExponents e = exponents(s);
    const FiniteMetricMeasureSpace space = FiniteMetricMeasureSpace::from_graph(g);
    const VertexFunction M = maximal_function(u, space, e);
    const double top = M.values.empty() ? 0.0 : *std::max_element(M.values.begin(), M.values.end());
    const double lo = number_param(s, "lambda-min", top > 0.0 ? 1e-3 * top : 1e-3);
    const double hi = number_param(s, "lambda-max", top > 0.0 ? 2.0 * top : 1.0);
    const double count = number_param(s, "lambda-count", 50);
    const WeakTypeProfile prof =
        weak_type_profile(u, space, e, log_grid(lo, hi, static_cast<std::size_t>(count)));
    if (format_of(s) == "csv") {
        std::string out = csv_row({"lambda", "weak_value"});
        for (const auto& [lam, val] : prof.points) out += csv_row({num(lam), num(val)});
        return {out};
    }
    ojson j = header(s);
    j["exploratory"] = prof.exploratory;
    j["maximal"] = by_id(M.values, [&](std::size_t i) { return g.vertices()[i].id; });
    ojson pts = ojson::array();
    for (const auto& [lam, val] : prof.points) pts.push_back({lam, val});
    j["profile"] = pts;
    j["grid_sup"] = prof.grid_sup;
    j["tail"] = prof.tail;
    j["exact_sup"] = prof.exact_sup;
    return {detail::write_json(j)};
}

Output run_poincare(const Scenario& s) {
    const MetricMeasureGraph g = parse_graph_document(input(s, "graph"));
    const VertexFunction u = VertexFunction::from_map(g, parse_values_document(input(s, "function")));
    const LorentzExponents e = exponents(s);
    EdgeDensity grad = minimal_upper_gradient(u, g);
    if (auto t = optional_input(s, "gradient")) grad = EdgeDensity::from_map(g, parse_values_document(*t));
    const double sigma = number_param(s, "sigma", 1.0);
    const PoincareReport r = poincare_constant(u, grad, g, sigma, e);
    if (format_of(s) == "csv") {
        std::string out = csv_row({"center", "radius", "size", "constant"});
        for (const BallConstant& b : r.balls)
            out += csv_row({b.center, num(b.radius), std::to_string(b.size), num(b.constant)});
        return {out};
    }
    ojson j = header(s);
    j["sigma"] = r.sigma;
    j["global"] = r.global;
    ojson balls = ojson::array();
    for (const BallConstant& b : r.balls)
        balls.push_back({{"center", b.center}, {"radius", b.radius}, {"size", b.size}, {"constant", b.constant}});
    j["balls"] = balls;
    return {detail::write_json(j)};
}

Output dispatch(const Scenario& s) {
    if (!(s.solver.tol > 0.0)) throw UsageError("--tol must be positive");
    if (s.solver.max_iter < 1) throw UsageError("--max-iter must be at least 1");
    if (s.selftest) return selftest(s);
    const std::string& cmd = s.subcommand;
    if (cmd == "norm") return run_norm(s);
    if (cmd == "modulus") return run_modulus(s);
    if (cmd == "capacity") return run_capacity(s);
    if (cmd == "newtonian") return run_newtonian(s);
    if (cmd == "lemma-check") return run_lemma_check(s);
    if (cmd == "counterexample") return run_counterexample(s);
    if (cmd == "maximal") return run_maximal(s);
    if (cmd == "poincare") return run_poincare(s);
    throw UsageError("unknown subcommand '" + cmd + "'");
}

std::string error_document(const std::string& type, const std::string& message,
                           const std::optional<std::string>& witness = std::nullopt) {
    ojson err;
    err["type"] = type;
    err["message"] = message;
    if (witness) err["witness"] = *witness;
    ojson j;
    j["error"] = err;
    return detail::write_json(j);
}

}  // namespace

int run_scenario(const Scenario& s, std::ostream& out) {
    Output o;
    try {
        o = dispatch(s);
    } catch (const PreconditionError& e) {
        o = {error_document("precondition", e.what(), e.witness()), kExitError};
    } catch (const UnsupportedVariant& e) {
        o = {error_document("unsupported_variant", e.what()), kExitError};
    } catch (const DomainError& e) {
        o = {error_document("domain_error", e.what()), kExitError};
    } catch (const RefusedError& e) {
        o = {error_document("refused", e.what()), kExitError};
    } catch (const ParseError& e) {
        o = {error_document("parse_error", e.what()), kExitError};
    } catch (const UsageError& e) {
        o = {error_document("usage", e.what()), kExitError};
    } catch (const std::exception& e) {
        o = {error_document("error", e.what()), kExitError};
    }
    if (!o.text.empty() && o.text.back() == '\n') o.text.pop_back();
    if (s.out && !s.out->empty()) {
        std::ofstream f(*s.out, std::ios::binary);
        if (!f) {
            out << error_document("io", "cannot write '" + *s.out + "'") << "\n";
            return kExitError;
        }
        f << o.text << "\n";
    } else {
        out << o.text << "\n";
    }
    return o.code;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Lorentz norms, modulus, capacity and maximal operators on finite spaces", "lorentz"};
    app.require_subcommand(1);

    Scenario s;

    struct Sub {
        const char* name;
        const char* help;
        std::vector<std::string> files;
        std::vector<std::string> params;
    };
    const std::vector<Sub> subs = {
        {"norm", "Lorentz norm of a function document", {"input"}, {}},
        {"modulus", "p,q-modulus of a curve family", {"graph", "family"}, {"sources", "targets", "max-edges"}},
        {"capacity", "p,q-capacity of a vertex set", {"graph", "set"}, {}},
        {"newtonian", "Newtonian norm of a vertex function", {"graph", "function"}, {}},
        {"lemma-check", "edgewise check of an upper-gradient rule",
         {"graph", "u1", "u2", "g1", "g2", "set"}, {"kind", "map", "exponent", "epsilon", "lambda"}},
        {"counterexample", "truncation gap table for the radial example", {}, {"n", "kmax"}},
        {"maximal", "maximal function and weak-type profile", {"graph", "function"},
         {"lambda-min", "lambda-max", "lambda-count"}},
        {"poincare", "Poincare constants over all balls", {"graph", "function", "gradient"}, {"sigma"}},
    };
    for (const Sub& sub : subs) {
        CLI::App* c = app.add_subcommand(sub.name, sub.help);
        c->add_option("--p", s.p, "exponent p > 1");
        c->add_option("--q", s.q, "exponent q >= 1, or inf");
        c->add_option("--variant", s.variant, "pq | round");
        c->add_option("--tol", s.solver.tol, "bracket width target");
        c->add_option("--max-iter", s.solver.max_iter, "iteration cap");
        c->add_option("--seed", s.solver.seed, "seed (solvers are deterministic)");
        c->add_option("--out", s.out, "output file");
        c->add_option("--format", s.format, "json | csv");
        c->add_flag("--selftest", s.selftest, "run the built-in examples");
        for (const std::string& f : sub.files) c->add_option("--" + f, s.inputs[f], f + " document");
        for (const std::string& p : sub.params) c->add_option("--" + p, s.params[p], p);
        c->callback([&s, name = std::string(sub.name)] { s.subcommand = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        err << e.what() << "\n";
        out << error_document("usage", e.what()) << "\n";
        return kExitError;
    }
    return run_scenario(s, out);
}

}  // namespace lorentz
