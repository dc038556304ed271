// experiment.cpp — Config parsing, experiment dispatch, CSV/plot/metadata output

#include "dtc/experiment.hpp"

#include "dtc/analytic.hpp"
#include "dtc/geometry.hpp"
#include "dtc/metrology.hpp"
#include "dtc/parallel.hpp"
#include "dtc/scaling.hpp"

#include <Eigen/Core>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace dtc {

using json = nlohmann::ordered_json;

std::string library_version() { return "0.1.0"; }

std::string to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::ground_energy: return "ground_energy";
        case ExperimentKind::metric_scan: return "metric_scan";
        case ExperimentKind::qfi_time: return "qfi_time";
        case ExperimentKind::inverted_variance: return "inverted_variance";
        case ExperimentKind::ratio_beta: return "ratio_beta";
        case ExperimentKind::ratio_N: return "ratio_N";
        case ExperimentKind::identity_checks: return "identity_checks";
    }
    return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
    for (auto k : {ExperimentKind::ground_energy, ExperimentKind::metric_scan, ExperimentKind::qfi_time,
                   ExperimentKind::inverted_variance, ExperimentKind::ratio_beta, ExperimentKind::ratio_N,
                   ExperimentKind::identity_checks})
        if (to_string(k) == name) return k;
    throw ConfigError("unknown experiment '" + name + "'");
}

std::vector<double> SweepSpec::resolve() const {
    if (!values.empty()) return values;
    std::vector<double> out(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double f = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
        out[static_cast<std::size_t>(i)] = scale == SweepScale::log
                                               ? std::exp(std::log(min) + f * (std::log(max) - std::log(min)))
                                               : min + f * (max - min);
    }
    return out;
}

// ------------------------------------------------------------------ schema

namespace {

json number_schema() { return {{"type", "number"}}; }
json integer_schema(long long minimum) { return {{"type", "integer"}, {"minimum", minimum}}; }
json string_schema() { return {{"type", "string"}}; }
json enum_schema(std::initializer_list<const char*> names) {
    json e = json::array();
    for (const char* n : names) e.push_back(n);
    return {{"type", "string"}, {"enum", e}};
}
json pair_schema() {
    return {{"type", "array"}, {"items", number_schema()}, {"minItems", 2}, {"maxItems", 2}};
}
json object_schema(json properties, std::initializer_list<const char*> required = {}) {
    json o = {{"type", "object"}, {"additionalProperties", false}, {"properties", std::move(properties)}};
    if (required.size() > 0) {
        json r = json::array();
        for (const char* n : required) r.push_back(n);
        o["required"] = r;
    }
    return o;
}

const json& schema_document() {
    static const json doc = [] {
        const json model = object_schema({{"omega", number_schema()},
                                          {"Omega", number_schema()},
                                          {"G", number_schema()},
                                          {"g", number_schema()},
                                          {"xi", pair_schema()}});
        const json panel = object_schema({{"label", string_schema()},
                                          {"N", integer_schema(1)},
                                          {"K", number_schema()},
                                          {"xi", pair_schema()},
                                          {"beta", number_schema()}},
                                         {"label"});
        const json sweep = object_schema({{"axis", enum_schema({"g", "t", "t_over_tau", "beta", "N"})},
                                          {"min", number_schema()},
                                          {"max", number_schema()},
                                          {"points", integer_schema(0)},
                                          {"scale", enum_schema({"linear", "log"})},
                                          {"values", {{"type", "array"}, {"items", number_schema()}}}});
        const json numerics = object_schema(
            {{"fock_cutoff", integer_schema(0)},
             {"truncation_tol", number_schema()},
             {"rel_step", number_schema()},
             {"seed", integer_schema(0)},
             {"shots", integer_schema(0)},
             {"threads", integer_schema(0)},
             {"engines",
              {{"type", "array"}, {"items", enum_schema({"closed_form", "sum_over_states", "overlap_fd"})}}},
             {"metric_model", enum_schema({"effective", "full"})},
             {"qfi_method", enum_schema({"gaussian", "fock", "generator"})},
             {"energy_branch", enum_schema({"full", "approximate"})},
             {"finite_beta_model", enum_schema({"full", "hp", "corrected"})},
             {"wrt_g", {{"type", "boolean"}}},
             {"revival", integer_schema(1)}});
        const json run = object_schema({{"name", string_schema()},
                                        {"experiment", enum_schema({"ground_energy", "metric_scan", "qfi_time",
                                                                    "inverted_variance", "ratio_beta", "ratio_N",
                                                                    "identity_checks"})},
                                        {"model", model},
                                        {"panels", {{"type", "array"}, {"items", panel}}},
                                        {"sweep", sweep},
                                        {"numerics", numerics}},
                                       {"name", "experiment"});
        const json output = object_schema(
            {{"directory", string_schema()}, {"formats", {{"type", "array"}, {"items", enum_schema({"csv", "plot"})}}}});
        json d = object_schema({{"name", string_schema()},
                                {"runs", {{"type", "array"}, {"items", run}, {"minItems", 1}}},
                                {"output", output}},
                               {"runs"});
        json full = {{"$schema", "https://json-schema.org/draft/2020-12/schema"}, {"title", "dtc experiment config"}};
        full.update(d);
        return full;
    }();
    return doc;
}

// ------------------------------------------------------------------ parsing

void reject_unknown(const json& obj, const json& schema, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    const json& props = schema.at("properties");
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!props.contains(it.key())) throw ConfigError(where + ": unknown key '" + it.key() + "'");
    if (schema.contains("required"))
        for (const auto& r : schema.at("required"))
            if (!obj.contains(r.get<std::string>()))
                throw ConfigError(where + ": missing required key '" + r.get<std::string>() + "'");
}

std::string path_of(const std::string& where, const std::string& key) { return where + "." + key; }

void read(const json& o, const char* key, double& out, const std::string& where) {
    if (!o.contains(key)) return;
    const json& v = o.at(key);
    if (!v.is_number()) throw ConfigError(path_of(where, key) + ": expected a number");
    out = v.get<double>();
    if (!std::isfinite(out)) throw ConfigError(path_of(where, key) + ": must be finite");
}

template <class I>
void read_integer(const json& o, const char* key, I& out, const std::string& where) {
    if (!o.contains(key)) return;
    const json& v = o.at(key);
    if (!v.is_number_integer()) throw ConfigError(path_of(where, key) + ": expected an integer");
    if constexpr (std::is_unsigned_v<I>) {
        if (!v.is_number_unsigned()) throw ConfigError(path_of(where, key) + ": must be non-negative");
        out = v.get<I>();
    } else {
        out = v.get<I>();
    }
}

void read(const json& o, const char* key, std::string& out, const std::string& where) {
    if (!o.contains(key)) return;
    if (!o.at(key).is_string()) throw ConfigError(path_of(where, key) + ": expected a string");
    out = o.at(key).get<std::string>();
}

void read(const json& o, const char* key, bool& out, const std::string& where) {
    if (!o.contains(key)) return;
    if (!o.at(key).is_boolean()) throw ConfigError(path_of(where, key) + ": expected a boolean");
    out = o.at(key).get<bool>();
}

std::array<double, 2> read_pair(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ConfigError(where + ": expected [re, im]");
    return {v[0].get<double>(), v[1].get<double>()};
}

std::vector<std::string> read_strings(const json& o, const char* key, const std::string& where) {
    const json& v = o.at(key);
    if (!v.is_array()) throw ConfigError(path_of(where, key) + ": expected an array");
    std::vector<std::string> out;
    for (const auto& e : v) {
        if (!e.is_string()) throw ConfigError(path_of(where, key) + ": expected strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

void require_in(const std::string& value, std::initializer_list<const char*> allowed, const std::string& where) {
    for (const char* a : allowed)
        if (value == a) return;
    throw ConfigError(where + ": invalid value '" + value + "'");
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

bool filename_safe(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    }) && s.front() != '.';
}

ModelBlock parse_model(const json& o, const std::string& where) {
    const json& schema = schema_document().at("properties").at("runs").at("items").at("properties").at("model");
    reject_unknown(o, schema, where);
    ModelBlock m;
    read(o, "omega", m.omega, where);
    read(o, "Omega", m.Omega, where);
    read(o, "G", m.G, where);
    read(o, "g", m.g, where);
    if (o.contains("xi")) m.xi = read_pair(o.at("xi"), path_of(where, "xi"));
    return m;
}

PanelSpec parse_panel(const json& o, const std::string& where) {
    const json& schema =
        schema_document().at("properties").at("runs").at("items").at("properties").at("panels").at("items");
    reject_unknown(o, schema, where);
    PanelSpec p;
    read(o, "label", p.label, where);
    read_integer(o, "N", p.N, where);
    p.K = p.N;
    read(o, "K", p.K, where);
    if (o.contains("xi")) p.xi = read_pair(o.at("xi"), path_of(where, "xi"));
    if (o.contains("beta")) {
        double b = 0.0;
        read(o, "beta", b, where);
        p.beta = b;
    }
    return p;
}

SweepSpec parse_sweep(const json& o, const std::string& where) {
    const json& schema = schema_document().at("properties").at("runs").at("items").at("properties").at("sweep");
    reject_unknown(o, schema, where);
    SweepSpec s;
    read(o, "axis", s.axis, where);
    read(o, "min", s.min, where);
    read(o, "max", s.max, where);
    read_integer(o, "points", s.points, where);
    std::string scale = "linear";
    read(o, "scale", scale, where);
    require_in(scale, {"linear", "log"}, path_of(where, "scale"));
    s.scale = scale == "log" ? SweepScale::log : SweepScale::linear;
    if (o.contains("values")) {
        const json& v = o.at("values");
        require(v.is_array(), path_of(where, "values") + ": expected an array");
        for (const auto& e : v) {
            require(e.is_number(), path_of(where, "values") + ": expected numbers");
            s.values.push_back(e.get<double>());
        }
    }
    return s;
}

NumericsBlock parse_numerics(const json& o, const std::string& where) {
    const json& schema = schema_document().at("properties").at("runs").at("items").at("properties").at("numerics");
    reject_unknown(o, schema, where);
    NumericsBlock n;
    read_integer(o, "fock_cutoff", n.fock_cutoff, where);
    read(o, "truncation_tol", n.truncation_tol, where);
    read(o, "rel_step", n.rel_step, where);
    read_integer(o, "seed", n.seed, where);
    read_integer(o, "shots", n.shots, where);
    read_integer(o, "threads", n.threads, where);
    if (o.contains("engines")) n.engines = read_strings(o, "engines", where);
    read(o, "metric_model", n.metric_model, where);
    read(o, "qfi_method", n.qfi_method, where);
    read(o, "energy_branch", n.energy_branch, where);
    read(o, "finite_beta_model", n.finite_beta_model, where);
    read(o, "wrt_g", n.wrt_g, where);
    read_integer(o, "revival", n.revival, where);
    return n;
}

const char* default_axis(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::qfi_time: return "t_over_tau";
        case ExperimentKind::ratio_beta: return "beta";
        case ExperimentKind::ratio_N: return "N";
        default: return "g";
    }
}

void validate_run(RunSpec& r, const std::string& where) {
    require(filename_safe(r.name), where + ".name: use letters, digits, '_', '-' or '.'");
    const auto& m = r.model;
    require(m.omega > 0.0 && m.Omega > 0.0, where + ".model: omega and Omega must be positive");
    require(m.G >= 0.0, where + ".model.G: must be non-negative");
    require(m.omega - 2.0 * m.G > 0.0, where + ".model: requires omega > 2G");
    require(m.g >= 0.0, where + ".model.g: must be non-negative");

    if (r.panels.empty()) r.panels.push_back(PanelSpec{"main", 1, 1.0, std::nullopt, std::nullopt});
    std::set<std::string> labels;
    for (const auto& p : r.panels) {
        const std::string pw = where + ".panels[" + p.label + "]";
        require(filename_safe(p.label), pw + ": label must be a non-empty file-name-safe string");
        require(labels.insert(p.label).second, pw + ": duplicate panel label");
        require(p.N >= 1, pw + ".N: must be at least 1");
        require(p.K > 0.0, pw + ".K: must be positive");
        if (p.beta) require(*p.beta > 0.0, pw + ".beta: must be positive");
    }

    auto& s = r.sweep;
    const std::string sw = where + ".sweep";
    std::string expected = default_axis(r.experiment);
    if (r.experiment == ExperimentKind::qfi_time) {
        require(s.axis == "t" || s.axis == "t_over_tau", sw + ".axis: qfi_time sweeps t or t_over_tau");
    } else {
        require(s.axis == expected, sw + ".axis: " + to_string(r.experiment) + " sweeps '" + expected + "'");
    }
    if (s.values.empty()) {
        require(s.points >= 1, sw + ": give values or points >= 1");
        if (s.scale == SweepScale::log) require(s.min > 0.0 && s.max > 0.0, sw + ": log scale needs positive bounds");
    }
    for (double v : s.resolve()) {
        require(std::isfinite(v), sw + ": non-finite sweep value");
        if (s.axis == "g") require(v >= 0.0, sw + ": g must be non-negative");
        if (s.axis == "beta") require(v > 0.0, sw + ": beta must be positive");
        if (s.axis == "N") require(v >= 1.0 && v == std::floor(v) && v <= 64, sw + ": N must be an integer in [1, 64]");
        if (s.axis == "t" || s.axis == "t_over_tau") require(v >= 0.0, sw + ": times must be non-negative");
    }

    auto& n = r.numerics;
    const std::string nw = where + ".numerics";
    require(n.truncation_tol > 0.0, nw + ".truncation_tol: must be positive");
    require(n.rel_step >= 0.0, nw + ".rel_step: must be non-negative");
    require(n.shots == 0 || n.shots >= 2, nw + ".shots: needs at least 2 shots");
    for (const auto& e : n.engines) require_in(e, {"closed_form", "sum_over_states", "overlap_fd"}, nw + ".engines");
    require_in(n.metric_model, {"effective", "full"}, nw + ".metric_model");
    require_in(n.qfi_method, {"gaussian", "fock", "generator"}, nw + ".qfi_method");
    require_in(n.energy_branch, {"full", "approximate"}, nw + ".energy_branch");
    require_in(n.finite_beta_model, {"full", "hp", "corrected"}, nw + ".finite_beta_model");
    require(n.revival >= 1, nw + ".revival: must be at least 1");

    const bool ratio = r.experiment == ExperimentKind::ratio_beta || r.experiment == ExperimentKind::ratio_N;
    if (ratio) {
        require(m.g < 1.0, where + ".model.g: ratio sweeps run in the normal phase (g < 1)");
        require(m.omega == 1.0, where + ".model.omega: ratio sweeps take beta = Omega in units of omega = 1");
    }
    if (r.experiment == ExperimentKind::ratio_N)
        for (const auto& p : r.panels) require(p.beta.has_value(), where + ".panels[" + p.label + "]: ratio_N needs beta");
    if (r.experiment == ExperimentKind::ratio_N || r.experiment == ExperimentKind::ratio_beta)
        if (n.finite_beta_model == "hp" || r.experiment == ExperimentKind::ratio_N)
            for (const auto& p : r.panels) require(p.N <= 64, where + ": HP panels need N <= 64");

    // Every panel must produce a valid parameter set at a representative point.
    for (const auto& p : r.panels) {
        try {
            const double g = s.axis == "g" ? s.resolve().front() : m.g;
            const double Omega = p.beta ? *p.beta * m.omega : m.Omega;
            (void)ModelParams::from_g(g, Omega, m.G, p.N, p.K, m.omega);
        } catch (const std::exception& e) {
            throw ConfigError(where + ".panels[" + p.label + "]: " + e.what());
        }
    }
}

json dump_run(const RunSpec& r) {
    json model = {{"omega", r.model.omega},
                  {"Omega", r.model.Omega},
                  {"G", r.model.G},
                  {"g", r.model.g},
                  {"xi", {r.model.xi[0], r.model.xi[1]}}};
    json panels = json::array();
    for (const auto& p : r.panels) {
        json o = {{"label", p.label}, {"N", p.N}, {"K", p.K}};
        if (p.xi) o["xi"] = {(*p.xi)[0], (*p.xi)[1]};
        if (p.beta) o["beta"] = *p.beta;
        panels.push_back(o);
    }
    json sweep = {{"axis", r.sweep.axis},
                  {"min", r.sweep.min},
                  {"max", r.sweep.max},
                  {"points", r.sweep.points},
                  {"scale", r.sweep.scale == SweepScale::log ? "log" : "linear"},
                  {"values", r.sweep.values}};
    const auto& n = r.numerics;
    json numerics = {{"fock_cutoff", n.fock_cutoff},
                     {"truncation_tol", n.truncation_tol},
                     {"rel_step", n.rel_step},
                     {"seed", n.seed},
                     {"shots", n.shots},
                     {"threads", n.threads},
                     {"engines", n.engines},
                     {"metric_model", n.metric_model},
                     {"qfi_method", n.qfi_method},
                     {"energy_branch", n.energy_branch},
                     {"finite_beta_model", n.finite_beta_model},
                     {"wrt_g", n.wrt_g},
                     {"revival", n.revival}};
    return {{"name", r.name},   {"experiment", to_string(r.experiment)}, {"model", model}, {"panels", panels},
            {"sweep", sweep}, {"numerics", numerics}};
}

json dump_json(const ExperimentConfig& c) {
    json runs = json::array();
    for (const auto& r : c.runs) runs.push_back(dump_run(r));
    return {{"name", c.name},
            {"runs", runs},
            {"output", {{"directory", c.output.directory}, {"formats", c.output.formats}}}};
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    const json& schema = schema_document();
    reject_unknown(doc, schema, "config");
    ExperimentConfig c;
    read(doc, "name", c.name, "config");
    const json& runs = doc.at("runs");
    require(runs.is_array() && !runs.empty(), "config.runs: expected a non-empty array");
    const json& run_schema = schema.at("properties").at("runs").at("items");
    std::set<std::string> names;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const json& o = runs[i];
        std::string where = "config.runs[" + std::to_string(i) + "]";
        reject_unknown(o, run_schema, where);
        RunSpec r;
        read(o, "name", r.name, where);
        std::string kind;
        read(o, "experiment", kind, where);
        r.experiment = parse_experiment_kind(kind);
        r.sweep.axis = default_axis(r.experiment);
        if (o.contains("model")) r.model = parse_model(o.at("model"), where + ".model");
        if (o.contains("panels")) {
            require(o.at("panels").is_array(), where + ".panels: expected an array");
            for (std::size_t j = 0; j < o.at("panels").size(); ++j)
                r.panels.push_back(parse_panel(o.at("panels")[j], where + ".panels[" + std::to_string(j) + "]"));
        }
        if (o.contains("sweep")) r.sweep = parse_sweep(o.at("sweep"), where + ".sweep");
        if (o.contains("numerics")) r.numerics = parse_numerics(o.at("numerics"), where + ".numerics");
        validate_run(r, where);
        require(names.insert(r.name).second, where + ".name: duplicate run name '" + r.name + "'");
        c.runs.push_back(std::move(r));
    }
    if (doc.contains("output")) {
        const json& o = doc.at("output");
        reject_unknown(o, schema.at("properties").at("output"), "config.output");
        read(o, "directory", c.output.directory, "config.output");
        if (o.contains("formats")) c.output.formats = read_strings(o, "formats", "config.output");
        for (const auto& f : c.output.formats) require_in(f, {"csv", "plot"}, "config.output.formats");
    }
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string dump_config(const ExperimentConfig& c) { return dump_json(c).dump(2) + "\n"; }

std::string config_schema() { return schema_document().dump(2) + "\n"; }

// ------------------------------------------------------------------ tables

void Table::add(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("table row width does not match the header");
    rows.push_back(std::move(row));
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

namespace {

std::string format_cell(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    return std::get<std::string>(c);
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
    return out;
}

}  // namespace

std::string to_csv(const Table& t) {
    std::string out = join(t.columns, ",") + "\n";
    for (const auto& row : t.rows) {
        std::vector<std::string> cells;
        for (const auto& c : row) cells.push_back(format_cell(c));
        out += join(cells, ",") + "\n";
    }
    return out;
}

std::string to_plot_data(const Table& t) {
    std::string out = "# " + join(t.columns, " ") + "\n";
    for (const auto& row : t.rows) {
        std::vector<std::string> cells;
        for (const auto& c : row) cells.push_back(format_cell(c));
        out += join(cells, " ") + "\n";
    }
    return out;
}

// ------------------------------------------------------------------ runners

namespace {

cplx panel_xi(const RunSpec& r, const PanelSpec& p) {
    const auto& x = p.xi ? *p.xi : r.model.xi;
    return {x[0], x[1]};
}

ModelParams panel_params(const RunSpec& r, const PanelSpec& p, double g) {
    const double Omega = p.beta ? *p.beta * r.model.omega : r.model.Omega;
    return ModelParams::from_g(g, Omega, r.model.G, p.N, p.K, r.model.omega);
}

bool near_critical(double g) { return std::abs(g - 1.0) < kCriticalWindow; }

// Rows for a (panel × sweep value) grid, computed in parallel and stored by index.
template <class Fn>
void fill_grid(RunResult& out, const RunSpec& r, const std::vector<double>& values, int threads, Fn&& fn) {
    const std::size_t n = r.panels.size() * values.size();
    std::vector<std::vector<std::vector<Cell>>> slots(n);
    std::vector<std::vector<std::string>> notes(n);
    parallel_for(n, threads, [&](std::size_t i) {
        const auto& panel = r.panels[i / values.size()];
        fn(panel, values[i % values.size()], slots[i], notes[i], i);
    });
    for (std::size_t i = 0; i < n; ++i) {
        for (auto& row : slots[i]) out.table.add(std::move(row));
        for (auto& note : notes[i]) out.diagnostics.push_back(std::move(note));
    }
}

void run_ground_energy(RunResult& out, const RunSpec& r, int threads) {
    out.table.columns = {"panel", "N", "K", "g", "phase", "E_G", "d2E_G", "d2E_G_fd"};
    const auto branch = r.numerics.energy_branch == "approximate" ? EnergyBranch::approximate : EnergyBranch::full;
    fill_grid(out, r, r.sweep.resolve(), threads, [&](const PanelSpec& p, double g, auto& rows, auto&, std::size_t) {
        const ModelParams base = panel_params(r, p, g);
        const auto pt = ground_energy_point(base, g, branch);
        rows.push_back({p.label, static_cast<long long>(p.N), p.K, g, to_string(phase_of(base)), pt.E, pt.d2E,
                        ground_energy_d2_fd(base, g, branch)});
    });
}

void run_metric_scan(RunResult& out, const RunSpec& r, int threads) {
    out.table.columns = {"panel", "N", "K", "g", "engine", "g_ll", "g_OO", "g_lO"};
    std::vector<std::string> engines = r.numerics.engines;
    if (engines.empty()) engines = {"closed_form", "sum_over_states", "overlap_fd"};
    const bool full = r.numerics.metric_model == "full";
    fill_grid(out, r, r.sweep.resolve(), threads, [&](const PanelSpec& p, double g, auto& rows, auto& notes, std::size_t) {
        const ModelParams params = panel_params(r, p, g);
        if (near_critical(g)) {
            notes.push_back(p.label + ": g = " + format_number(g) + " lies in the critical window");
            for (const auto& e : engines)
                rows.push_back({p.label, static_cast<long long>(p.N), p.K, g, e, std::nan(""), std::nan(""), std::nan("")});
            return;
        }
        for (const auto& e : engines) {
            MetricComponents m;
            if (e == "closed_form") {
                m = metric_components(params);
            } else {
                MetricRequest req(params);
                req.model = full ? MetricModel::full
                                 : (g < 1.0 ? MetricModel::normal_effective : MetricModel::superradiant_effective);
                req.engine = e == "sum_over_states" ? MetricEngine::sum_over_states : MetricEngine::overlap_fd;
                if (r.numerics.fock_cutoff > 0) req.fock_cutoff = r.numerics.fock_cutoff;
                else if (full) req.fock_cutoff = 40;
                if (r.numerics.rel_step > 0.0) req.rel_step = r.numerics.rel_step;
                m = compute_metric(req).components();
            }
            rows.push_back({p.label, static_cast<long long>(p.N), p.K, g, e, m.g_ll, m.g_OO, m.g_lO});
        }
    });
}

SensingOptions sensing_options(const RunSpec& r) {
    SensingOptions o;
    o.method = parse_qfi_method(r.numerics.qfi_method);
    o.fock_cutoff = r.numerics.fock_cutoff;
    if (r.numerics.rel_step > 0.0) o.rel_step = r.numerics.rel_step;
    o.wrt_g = r.numerics.wrt_g;
    return o;
}

std::uint64_t point_seed(std::uint64_t seed, std::size_t index) {
    return seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1);
}

void run_qfi_time(RunResult& out, const RunSpec& r, int threads) {
    out.table.columns = {"panel", "xi_re", "xi_im", "t", "t_over_tau", "meanX", "varX", "F", "F_closed", "I", "I_over_F"};
    const bool homodyne = r.numerics.shots > 0;
    if (homodyne) out.table.columns.push_back("I_homodyne");
    const SensingOptions opts = sensing_options(r);
    fill_grid(out, r, r.sweep.resolve(), threads,
              [&](const PanelSpec& p, double v, auto& rows, auto& notes, std::size_t index) {
                  const ModelParams params = panel_params(r, p, r.model.g);
                  const cplx xi = panel_xi(r, p);
                  const double a = alpha_prime(params);
                  const double tau = revival_time(a, params.G(), 1);
                  const double t = r.sweep.axis == "t" ? v : v * tau;
                  const std::vector<double> ts{t};
                  const auto res = run_protocol(params, xi, ts, opts);
                  const double scale = opts.wrt_g ? std::pow(dalpha_prime_dg(params), 2) : 1.0;
                  const double F_closed = scale * qfi_closed_form(a, params.G(), t, res.var_p2);
                  if (index % r.sweep.resolve().size() == 0) notes.push_back(p.label + ": Var[P^2] of the initial state = " + format_number(res.var_p2));
                  std::vector<Cell> row{p.label, xi.real(), xi.imag(), t, t / tau, res.meanX[0], res.varX[0],
                                        res.qfi[0], F_closed, res.inv_var[0], res.inv_var[0] / res.qfi[0]};
                  if (homodyne) {
                      HomodyneOptions h;
                      h.wrt_g = opts.wrt_g;
                      row.push_back(homodyne_estimate(params, xi, t, r.numerics.shots, point_seed(r.numerics.seed, index), h).I_est);
                  }
                  rows.push_back(std::move(row));
              });
}

void run_inverted_variance(RunResult& out, const RunSpec& r, int threads) {
    out.table.columns = {"panel", "N", "K", "xi_re", "xi_im", "g", "alpha_prime", "tau", "I", "I_closed", "F", "I_over_F"};
    const bool homodyne = r.numerics.shots > 0;
    if (homodyne) out.table.columns.push_back("I_homodyne");
    const SensingOptions opts = sensing_options(r);
    const int n = r.numerics.revival;
    fill_grid(out, r, r.sweep.resolve(), threads,
              [&](const PanelSpec& p, double g, auto& rows, auto& notes, std::size_t index) {
                  const cplx xi = panel_xi(r, p);
                  if (near_critical(g)) {
                      notes.push_back(p.label + ": g = " + format_number(g) + " lies in the critical window");
                      return;
                  }
                  const ModelParams params = panel_params(r, p, g);
                  const double a = alpha_prime(params);
                  const double tau = revival_time(a, params.G(), n);
                  const double I = inverted_variance_numeric(params, xi, tau, opts);
                  const double scale = opts.wrt_g ? std::pow(dalpha_prime_dg(params), 2) : 1.0;
                  const double I_closed = scale * inverted_variance_closed_form(a, params.G(), xi, n);
                  const double F = qfi_numeric(params, xi, tau, opts);
                  std::vector<Cell> row{p.label, static_cast<long long>(p.N), p.K, xi.real(), xi.imag(), g, a, tau,
                                        I, I_closed, F, I / F};
                  if (homodyne) {
                      HomodyneOptions h;
                      h.wrt_g = opts.wrt_g;
                      row.push_back(homodyne_estimate(params, xi, tau, r.numerics.shots, point_seed(r.numerics.seed, index), h).I_est);
                  }
                  rows.push_back(std::move(row));
              });
}

ScalingOptions scaling_options(const RunSpec& r, int threads) {
    ScalingOptions o;
    o.fock_cutoff = r.numerics.fock_cutoff;
    if (r.numerics.rel_step > 0.0) o.rel_step = r.numerics.rel_step;
    o.threads = threads;
    return o;
}

void add_scaling_rows(RunResult& out, const ScalingRun& run, const std::function<std::string(std::size_t)>& label) {
    for (std::size_t i = 0; i < run.points.size(); ++i) {
        const auto& pt = run.points[i];
        out.table.add({label(i), pt.beta, static_cast<long long>(pt.N), pt.K, pt.xi.real(), pt.xi.imag(), pt.tau,
                       pt.I_beta, pt.I_ideal, pt.ratio, pt.meanX, pt.varX});
    }
    out.diagnostics.push_back("calibration gate: worst |I_numeric/I_closed - 1| = " + format_number(run.calibration_error));
}

const std::vector<std::string> kScalingColumns = {"panel", "beta", "N",     "K",     "xi_re", "xi_im",
                                                  "tau",   "I_beta", "I_ideal", "ratio", "meanX", "varX"};

void run_ratio_beta(RunResult& out, const RunSpec& r, int threads) {
    out.table.columns = kScalingColumns;
    const auto betas = r.sweep.resolve();
    std::vector<ScalingVariant> variants;
    for (const auto& p : r.panels) variants.push_back({p.N, p.K, panel_xi(r, p)});
    const auto model = parse_finite_beta_model(r.numerics.finite_beta_model);
    const auto run = ratio_vs_beta(r.model.g, r.model.G, betas, variants, model, scaling_options(r, threads));
    add_scaling_rows(out, run, [&](std::size_t i) { return r.panels[i / betas.size()].label; });
}

void run_ratio_N(RunResult& out, const RunSpec& r, int threads) {
    out.table.columns = kScalingColumns;
    std::vector<int> Ns;
    for (double v : r.sweep.resolve()) Ns.push_back(static_cast<int>(v));
    std::vector<double> betas;
    for (const auto& p : r.panels) betas.push_back(*p.beta);
    const auto run = ratio_vs_N(r.model.g, r.model.G, cplx(r.model.xi[0], r.model.xi[1]), Ns, betas, 1.0,
                                scaling_options(r, threads));
    add_scaling_rows(out, run, [&](std::size_t i) { return r.panels[i / Ns.size()].label; });
}

void run_identity_checks(RunResult& out, const RunSpec& r, int threads) {
    out.table.columns = {"panel", "g", "alpha_prime", "Delta", "residual_A", "residual_B", "residual_nested",
                         "residual_lambda", "interior_levels", "passed"};
    const int cutoff = r.numerics.fock_cutoff > 0 ? r.numerics.fock_cutoff : 64;
    fill_grid(out, r, r.sweep.resolve(), threads, [&](const PanelSpec& p, double g, auto& rows, auto& notes, std::size_t) {
        if (near_critical(g)) {
            notes.push_back(p.label + ": g = " + format_number(g) + " lies in the critical window");
            return;
        }
        const ModelParams params = panel_params(r, p, g);
        const auto rep = operator_identity_check(params, cutoff, 1e-10);
        rows.push_back({p.label, g, alpha_prime(params), rep.Delta, rep.residual_A, rep.residual_B,
                        rep.residual_nested, rep.residual_lambda, static_cast<long long>(rep.interior_levels),
                        static_cast<long long>(rep.passed ? 1 : 0)});
    });
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

}  // namespace

RunResult execute_run(const RunSpec& r, int threads) {
    const auto start = std::chrono::steady_clock::now();
    RunResult out;
    out.name = r.name;
    out.experiment = r.experiment;
    threads = resolve_threads(threads > 0 ? threads : r.numerics.threads);
    switch (r.experiment) {
        case ExperimentKind::ground_energy: run_ground_energy(out, r, threads); break;
        case ExperimentKind::metric_scan: run_metric_scan(out, r, threads); break;
        case ExperimentKind::qfi_time: run_qfi_time(out, r, threads); break;
        case ExperimentKind::inverted_variance: run_inverted_variance(out, r, threads); break;
        case ExperimentKind::ratio_beta: run_ratio_beta(out, r, threads); break;
        case ExperimentKind::ratio_N: run_ratio_N(out, r, threads); break;
        case ExperimentKind::identity_checks: run_identity_checks(out, r, threads); break;
    }
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    f << text;
    if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::string compiler_id() {
#if defined(__clang__)
    return "clang " __clang_version__;
#elif defined(__GNUC__)
    return "gcc " __VERSION__;
#else
    return "unknown";
#endif
}

}  // namespace

ArtifactSet run_experiment(const ExperimentConfig& c, const std::string& out_dir, int threads) {
    namespace fs = std::filesystem;
    const auto start = std::chrono::steady_clock::now();
    const fs::path dir(out_dir.empty() ? c.output.directory : out_dir);
    fs::create_directories(dir);
    const bool csv = std::find(c.output.formats.begin(), c.output.formats.end(), "csv") != c.output.formats.end();
    const bool plot = std::find(c.output.formats.begin(), c.output.formats.end(), "plot") != c.output.formats.end();

    ArtifactSet set;
    json runs_meta = json::array();
    for (const auto& r : c.runs) {
        RunResult res = execute_run(r, threads);
        std::vector<std::string> files;
        if (csv) {
            const fs::path p = dir / (r.name + ".csv");
            write_file(p, to_csv(res.table));
            files.push_back(p.filename().string());
        }
        if (plot) {
            for (const auto& panel : r.panels) {
                Table t;
                t.columns.assign(res.table.columns.begin() + 1, res.table.columns.end());
                for (const auto& row : res.table.rows)
                    if (std::get<std::string>(row.front()) == panel.label) t.rows.emplace_back(row.begin() + 1, row.end());
                const fs::path p = dir / (r.name + "_" + panel.label + ".dat");
                write_file(p, to_plot_data(t));
                files.push_back(p.filename().string());
            }
        }
        runs_meta.push_back({{"name", r.name},
                             {"experiment", to_string(r.experiment)},
                             {"rows", res.table.rows.size()},
                             {"columns", res.table.columns},
                             {"wall_seconds", res.wall_seconds},
                             {"diagnostics", res.diagnostics},
                             {"files", files}});
        for (auto& f : files) set.files.push_back((dir / f).string());
        set.results.push_back(std::move(res));
    }
    set.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const json meta = {{"config", json::parse(dump_config(c))},
                       {"versions",
                        {{"dtc", library_version()},
                         {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                       "." + std::to_string(EIGEN_MINOR_VERSION)},
                         {"json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                      std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                      std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                         {"compiler", compiler_id()}}},
                       {"threads", resolve_threads(threads)},
                       {"wall_seconds", set.wall_seconds},
                       {"runs", runs_meta}};
    const fs::path mp = dir / "metadata.json";
    write_file(mp, meta.dump(2) + "\n");
    set.files.push_back(mp.string());
    return set;
}

}  // namespace dtc
