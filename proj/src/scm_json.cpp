#include "medcrit/scm_json.hpp"

#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "medcrit/errors.hpp"

namespace medcrit {

namespace {

using nlohmann::json;

double parse_probability(const json& j, const std::string& where) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        char* end = nullptr;
        errno = 0;
        const double v = std::strtod(s.c_str(), &end);
        if (!s.empty() && end == s.c_str() + s.size() && errno == 0) return v;
    }
    throw ParseError(where + ": expected a probability, got " + j.dump());
}

Level parse_level_key(const std::string& key, const std::string& where) {
    char* end = nullptr;
    errno = 0;
    const long v = std::strtol(key.c_str(), &end, 10);
    if (key.empty() || end != key.c_str() + key.size() || errno != 0 || v < INT32_MIN || v > INT32_MAX) {
        throw ParseError(where + ": noise level key \"" + key + "\" is not an integer");
    }
    return static_cast<Level>(v);
}

const json& field(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) throw ParseError(where + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(where + ": missing key \"" + key + "\"");
    return *it;
}

template <class T>
T as(const json& j, const std::string& where) {
    try {
        return j.get<T>();
    } catch (const json::exception& e) {
        throw ParseError(where + ": " + e.what());
    }
}

ExposureLevels parse_levels(const json& doc) {
    ExposureLevels lv;
    if (auto it = doc.find("exposure_levels"); it != doc.end()) {
        lv.a_star = as<Level>(field(*it, "a_star", "exposure_levels"), "exposure_levels.a_star");
        lv.a = as<Level>(field(*it, "a", "exposure_levels"), "exposure_levels.a");
    } else {
        throw ParseError("missing key \"exposure_levels\"");
    }
    return lv;
}

Scm parse_scm(const json& doc) {
    Scm scm;
    if (auto it = doc.find("name"); it != doc.end()) scm.name = as<std::string>(*it, "name");
    for (const auto& v : field(doc, "variables", "document")) {
        const std::string where = "variables[" + (v.contains("name") ? v["name"].dump() : std::string("?")) + "]";
        VariableSpec spec;
        spec.name = as<std::string>(field(v, "name", where), where);
        const auto code = as<std::string>(field(v, "role", where), where);
        const auto role = parse_role(code);
        if (!role) throw ParseError(where + ": unknown role \"" + code + "\"");
        spec.role = *role;
        spec.support = as<std::vector<Level>>(field(v, "support", where), where + ".support");
        scm.variables.push_back(std::move(spec));
    }
    const auto& edges = field(doc, "edges", "document");
    if (!edges.is_object()) throw ParseError("edges: expected an object of parent lists");
    for (const auto& [child, parents] : edges.items()) {
        scm.edges[child] = as<std::vector<std::string>>(parents, "edges." + child);
    }
    for (const auto& n : field(doc, "noise", "document")) {
        NoiseSpec spec;
        spec.name = as<std::string>(field(n, "name", "noise"), "noise.name");
        const std::string where = "noise " + spec.name;
        const auto& pmf = field(n, "pmf", where);
        if (!pmf.is_object()) throw ParseError(where + ": pmf must be an object keyed by level");
        for (const auto& [key, p] : pmf.items()) {
            spec.pmf[parse_level_key(key, where)] = parse_probability(p, where);
        }
        scm.noise.push_back(std::move(spec));
    }
    for (const auto& t : field(doc, "tables", "document")) {
        StructuralTable table;
        table.variable = as<std::string>(field(t, "variable", "tables"), "tables.variable");
        const std::string where = "table " + table.variable;
        if (auto it = t.find("parents"); it != t.end()) table.parents = as<std::vector<std::string>>(*it, where);
        table.noise = as<std::string>(field(t, "noise", where), where + ".noise");
        for (const auto& r : field(t, "rows", where)) {
            TableRow row;
            row.parents = as<std::vector<Level>>(field(r, "parents", where), where + " row parents");
            row.noise = as<Level>(field(r, "noise", where), where + " row noise");
            row.value = as<Level>(field(r, "value", where), where + " row value");
            table.rows.push_back(std::move(row));
        }
        scm.tables.push_back(std::move(table));
    }
    scm.exposure_levels = parse_levels(doc);
    return scm;
}

FfrcistgSpec parse_ffrcistg(const json& doc) {
    FfrcistgSpec spec;
    if (auto it = doc.find("name"); it != doc.end()) spec.name = as<std::string>(*it, "name");
    if (auto it = doc.find("covariates"); it != doc.end()) {
        spec.covariate_names = as<std::vector<std::string>>(*it, "covariates");
    }
    spec.exposure_support = as<std::vector<Level>>(field(doc, "exposure_support", "document"), "exposure_support");
    spec.mediator_support = as<std::vector<Level>>(field(doc, "mediator_support", "document"), "mediator_support");
    spec.outcome_support = as<std::vector<Level>>(field(doc, "outcome_support", "document"), "outcome_support");
    spec.exposure_levels = parse_levels(doc);
    std::size_t i = 0;
    for (const auto& a : field(doc, "atoms", "document")) {
        const std::string where = "atoms[" + std::to_string(i++) + "]";
        CounterfactualAtom atom;
        atom.probability = parse_probability(field(a, "p", where), where);
        if (auto it = a.find("c"); it != a.end()) atom.covariates = as<std::vector<Level>>(*it, where + ".c");
        atom.exposure = as<Level>(field(a, "a", where), where + ".a");
        const auto m = as<std::vector<Level>>(field(a, "m", where), where + ".m");
        const auto y = as<std::vector<std::vector<Level>>>(field(a, "y", where), where + ".y");
        if (m.size() != 2 || y.size() != 2) throw ParseError(where + ": m and y must have one entry per a_star, a");
        atom.mediator = {m[0], m[1]};
        atom.outcome = {y[0], y[1]};
        spec.atoms.push_back(std::move(atom));
    }
    return spec;
}

json levels_json(const ExposureLevels& lv) { return {{"a_star", lv.a_star}, {"a", lv.a}}; }

json scm_json(const Scm& scm) {
    json doc = json::object();
    doc["name"] = scm.name;
    doc["variables"] = json::array();
    for (const auto& v : scm.variables) {
        doc["variables"].push_back({{"name", v.name}, {"role", std::string(role_code(v.role))}, {"support", v.support}});
    }
    doc["edges"] = json::object();
    for (const auto& [child, parents] : scm.edges) doc["edges"][child] = parents;
    doc["noise"] = json::array();
    for (const auto& n : scm.noise) {
        json pmf = json::object();
        for (const auto& [level, p] : n.pmf) pmf[std::to_string(level)] = p;
        doc["noise"].push_back({{"name", n.name}, {"pmf", pmf}});
    }
    doc["tables"] = json::array();
    for (const auto& t : scm.tables) {
        json rows = json::array();
        for (const auto& r : t.rows) rows.push_back({{"parents", r.parents}, {"noise", r.noise}, {"value", r.value}});
        doc["tables"].push_back({{"variable", t.variable}, {"parents", t.parents}, {"noise", t.noise}, {"rows", rows}});
    }
    doc["exposure_levels"] = levels_json(scm.exposure_levels);
    return doc;
}

json ffrcistg_json(const FfrcistgSpec& spec) {
    json doc = json::object();
    doc["kind"] = "ffrcistg";
    doc["name"] = spec.name;
    doc["covariates"] = spec.covariate_names;
    doc["exposure_support"] = spec.exposure_support;
    doc["mediator_support"] = spec.mediator_support;
    doc["outcome_support"] = spec.outcome_support;
    doc["exposure_levels"] = levels_json(spec.exposure_levels);
    doc["atoms"] = json::array();
    for (const auto& a : spec.atoms) {
        doc["atoms"].push_back({{"p", a.probability},
                                {"c", a.covariates},
                                {"a", a.exposure},
                                {"m", {a.mediator[0], a.mediator[1]}},
                                {"y", {a.outcome[0], a.outcome[1]}}});
    }
    return doc;
}

}  // namespace

CausalModel parse_model_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("model document must be a JSON object");
    if (auto it = doc.find("kind"); it != doc.end()) {
        const auto kind = as<std::string>(*it, "kind");
        if (kind == "ffrcistg") return parse_ffrcistg(doc);
        if (kind != "scm") throw ParseError("unknown model kind \"" + kind + "\"");
    }
    return parse_scm(doc);
}

std::string model_to_json(const CausalModel& model, int indent) {
    const json doc = std::visit(
        [](const auto& m) -> json {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, Scm>) {
                return scm_json(m);
            } else {
                return ffrcistg_json(m);
            }
        },
        model);
    return doc.dump(indent);
}

CausalModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model_json(buf.str());
}

}  // namespace medcrit
