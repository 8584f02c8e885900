#include "isotm/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "isotm/hopf.hpp"
#include "isotm/sampling.hpp"

namespace isotm {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + where + "." + it.key() + "'");
    }
}

double get_number(const json& obj, const std::string& key, const std::string& where,
                  double fallback, bool required = false) {
    if (!obj.contains(key)) {
        if (required) throw ConfigError("missing required field '" + where + "." + key + "'");
        return fallback;
    }
    if (!obj[key].is_number())
        throw ConfigError("field '" + where + "." + key + "' must be a number");
    return obj[key].get<double>();
}

std::string get_string(const json& obj, const std::string& key, const std::string& where,
                       const std::string& fallback, bool required = false) {
    if (!obj.contains(key)) {
        if (required) throw ConfigError("missing required field '" + where + "." + key + "'");
        return fallback;
    }
    if (!obj[key].is_string())
        throw ConfigError("field '" + where + "." + key + "' must be a string");
    return obj[key].get<std::string>();
}

const std::set<std::string> kCheckNames = {
    "nijenhuis_scan",    "flat_pde",     "sphere_pde", "connection_xval",
    "metric_properties", "tension_xval", "tau1",       "harmonic_residual",
    "first_variation",   "energy",       "parallel_check", "gnatural_coeffs"};

CheckSpec parse_check(const json& node, int index) {
    const std::string where = "checks[" + std::to_string(index) + "]";
    CheckSpec spec;
    if (node.is_string()) {
        spec.name = node.get<std::string>();
    } else if (node.is_object()) {
        reject_unknown_keys(
            node, {"name", "expect", "tolerance", "expect_total", "expect_density", "rel_tol"},
            where);
        spec.name = get_string(node, "name", where, "", true);
        spec.expect = get_string(node, "expect", where, "");
        if (node.contains("tolerance")) spec.tolerance = get_number(node, "tolerance", where, 0.0);
        if (node.contains("expect_total"))
            spec.expect_total = get_number(node, "expect_total", where, 0.0);
        if (node.contains("expect_density"))
            spec.expect_density = get_number(node, "expect_density", where, 0.0);
        if (node.contains("rel_tol")) spec.rel_tol = get_number(node, "rel_tol", where, 0.0);
    } else {
        throw ConfigError("'" + where + "' must be a string or an object");
    }
    if (!kCheckNames.count(spec.name))
        throw ConfigError("unknown check '" + spec.name + "' in '" + where + "'");
    return spec;
}

}  // namespace

Scenario parse_scenario(const json& doc) {
    if (!doc.is_object()) throw ConfigError("scenario document must be a JSON object");
    reject_unknown_keys(doc, {"manifold", "structure", "field", "checks", "sampling", "tolerances"},
                        "scenario");

    Scenario s;

    if (!doc.contains("manifold")) throw ConfigError("missing required field 'manifold'");
    {
        const json& m = doc["manifold"];
        reject_unknown_keys(m, {"kind", "dim", "params"}, "manifold");
        s.manifold_kind = get_string(m, "kind", "manifold", "", true);
        if (s.manifold_kind != "euclidean" && s.manifold_kind != "sphere" &&
            s.manifold_kind != "conformal")
            throw ConfigError("manifold.kind must be euclidean, sphere or conformal");
        s.dim = static_cast<int>(get_number(m, "dim", "manifold", 2.0, true));
        if (s.dim < 1 || s.dim > 6) throw ConfigError("manifold.dim out of supported range [1,6]");
        if (m.contains("params")) {
            const json& p = m["params"];
            reject_unknown_keys(p, {"c", "s"}, "manifold.params");
            s.conformal_c = get_number(p, "c", "manifold.params", 2.0);
            s.conformal_s = get_number(p, "s", "manifold.params", 1.0);
            if (s.conformal_c <= 0.0) throw ConfigError("manifold.params.c must be positive");
        }
    }

    if (doc.contains("structure")) {
        const json& st = doc["structure"];
        reject_unknown_keys(st, {"kind", "k", "a", "b", "name"}, "structure");
        s.structure_kind = get_string(st, "kind", "structure", "sasaki");
        if (s.structure_kind != "sasaki" && s.structure_kind != "sigma0" &&
            s.structure_kind != "general" && s.structure_kind != "custom_named")
            throw ConfigError("structure.kind must be sasaki, sigma0, general or custom_named");
        s.k = get_number(st, "k", "structure", 0.0);
        s.a = get_number(st, "a", "structure", 1.0);
        s.b = get_number(st, "b", "structure", 1.0);
        s.structure_name = get_string(st, "name", "structure", "");
        if (s.structure_kind == "custom_named" && s.structure_name.empty())
            throw ConfigError("structure.name is required for custom_named structures");
    }

    if (doc.contains("field")) {
        const json& f = doc["field"];
        reject_unknown_keys(f, {"kind", "name", "params"}, "field");
        s.field_kind = get_string(f, "kind", "field", "", true);
        const std::set<std::string> kinds = {"hopf1",    "hopf2",
                                             "hopf3",    "parallel",
                                             "coordinate_normalized", "custom_named"};
        if (!kinds.count(s.field_kind)) throw ConfigError("unknown field.kind");
        s.field_name = get_string(f, "name", "field", "");
        if (s.field_kind == "custom_named" && s.field_name.empty())
            throw ConfigError("field.name is required for custom_named fields");
        if (f.contains("params")) {
            if (!f["params"].is_array()) throw ConfigError("field.params must be an array");
            for (const auto& v : f["params"]) {
                if (!v.is_number()) throw ConfigError("field.params entries must be numbers");
                s.field_params.push_back(v.get<double>());
            }
        }
    }

    if (!doc.contains("checks") || !doc["checks"].is_array() || doc["checks"].empty())
        throw ConfigError("'checks' must be a non-empty array");
    int idx = 0;
    for (const auto& node : doc["checks"]) s.checks.push_back(parse_check(node, idx++));

    if (doc.contains("sampling")) {
        const json& sp = doc["sampling"];
        reject_unknown_keys(sp, {"seed", "n_points", "fiber_radius", "grid", "fd_step_overrides"},
                            "sampling");
        if (sp.contains("seed")) {
            if (!sp["seed"].is_number_unsigned() && !sp["seed"].is_number_integer())
                throw ConfigError("sampling.seed must be an integer");
            s.seed = sp["seed"].get<std::uint64_t>();
        }
        s.n_points = static_cast<int>(get_number(sp, "n_points", "sampling", 50.0));
        if (s.n_points < 1) throw ConfigError("sampling.n_points must be positive");
        s.fiber_radius = get_number(sp, "fiber_radius", "sampling", 2.0);
        if (s.fiber_radius <= 0.0) throw ConfigError("sampling.fiber_radius must be positive");
        s.grid = static_cast<int>(get_number(sp, "grid", "sampling", 48.0));
        if (s.grid < 2) throw ConfigError("sampling.grid must be at least 2");
        if (sp.contains("fd_step_overrides")) {
            const json& fo = sp["fd_step_overrides"];
            reject_unknown_keys(fo, {"step1", "step2"}, "sampling.fd_step_overrides");
            s.fd_step1 = get_number(fo, "step1", "sampling.fd_step_overrides", 0.0);
            s.fd_step2 = get_number(fo, "step2", "sampling.fd_step_overrides", 0.0);
        }
    }

    if (doc.contains("tolerances")) {
        const json& t = doc["tolerances"];
        if (!t.is_object()) throw ConfigError("'tolerances' must be an object");
        for (auto it = t.begin(); it != t.end(); ++it) {
            if (!kCheckNames.count(it.key()))
                throw ConfigError("tolerances names unknown check '" + it.key() + "'");
            if (!it.value().is_number())
                throw ConfigError("tolerances." + it.key() + " must be a number");
            s.tolerances[it.key()] = it.value().get<double>();
        }
    }

    s.raw = nlohmann::ordered_json::parse(doc.dump());
    return s;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const std::exception& ex) {
        throw ConfigError(std::string("scenario JSON parse error: ") + ex.what());
    }
    return parse_scenario(doc);
}

RiemannianChart Scenario::make_chart() const {
    if (manifold_kind == "euclidean") return euclidean(dim);
    if (manifold_kind == "sphere") return sphere_stereographic(dim);
    return conformal_family(dim, conformal_c, conformal_s);
}

IsotropicStructure Scenario::make_structure(const RiemannianChart& chart) const {
    if (structure_kind == "sasaki") return sasaki_structure();
    if (structure_kind == "sigma0") return family_sigma0(chart, k, b);
    if (structure_kind == "general") return family_general(chart, k, a, b);

    // registry of named fixtures used by the bundled scenarios and tests
    if (structure_name == "explicit_z") return structure_from_z(explicit_flat_z(chart.dim));
    if (structure_name == "cross_fiber_delta")
        return custom_structure([](const TMPoint& at) { return std::exp(0.4 * at.y[0]); });
    if (structure_name == "radial_alpha_bump")
        return custom_structure([](const TMPoint& at) { return 1.0 + 0.2 * std::sin(at.x[0]); });
    throw ConfigError("unknown custom structure name '" + structure_name + "'");
}

VectorFieldOnM Scenario::make_field(const RiemannianChart& chart) const {
    if (field_kind == "hopf1") return hopf_field(chart, 1);
    if (field_kind == "hopf2") return hopf_field(chart, 2);
    if (field_kind == "hopf3") return hopf_field(chart, 3);
    if (field_kind == "parallel") {
        if (manifold_kind != "euclidean")
            throw ConfigError("field.kind parallel requires a euclidean manifold");
        Vec v = Vec::Unit(chart.dim, 0);
        if (!field_params.empty()) {
            if (static_cast<int>(field_params.size()) != chart.dim)
                throw ConfigError("field.params must have manifold.dim entries");
            for (int i = 0; i < chart.dim; ++i) v[i] = field_params[i];
            const double norm = v.norm();
            if (norm == 0.0) throw ConfigError("field.params must be a nonzero vector");
            v /= norm;
        }
        return constant_field(v);
    }
    if (field_kind == "coordinate_normalized") {
        int idx = 0;
        if (!field_params.empty()) idx = static_cast<int>(field_params[0]);
        return normalized_coordinate_field(chart, idx);
    }
    if (field_kind == "custom_named") {
        if (field_name == "tilted_unit") {
            // generic unit field; not harmonic on the curved charts
            const auto metric = chart.metric;
            const int n = chart.dim;
            VectorFieldOnM f;
            f.value = [metric, n](const Vec& x) -> Vec {
                Vec c = Vec::Constant(n, 0.7);
                c[0] = 2.0;
                Mat B = Mat::Zero(n, n);
                const int j = 1 % n;
                B(0, 0) = 0.3;
                B(0, j) = -0.4;
                B(j, 0) = 0.5;
                B(j, j) = 0.2;
                const Vec w = c + B * x;
                return w / std::sqrt(w.dot(metric(x) * w));
            };
            return f;
        }
        throw ConfigError("unknown custom field name '" + field_name + "'");
    }
    throw ConfigError("scenario has no field but a check requires one");
}

void validate_scenario(const Scenario& s) {
    const RiemannianChart chart = s.make_chart();
    IsotropicStructure structure;
    try {
        structure = s.make_structure(chart);
    } catch (const ParameterError& ex) {
        throw ConfigError(std::string("structure.a: ") + ex.what());
    }

    // where the structure will be sampled it must be defined
    Rng rng(s.seed, "scenario.preflight");
    for (int i = 0; i < std::max(8, s.n_points); ++i) {
        const TMPoint w = sample_tm_point(rng, chart, s.fiber_radius);
        try {
            (void)structure.delta_at(w);
            (void)structure.alpha_at(w);
        } catch (const DomainError& ex) {
            throw ConfigError(
                std::string("structure.b: structure undefined on the sampling region (") +
                ex.what() + ")");
        }
    }

    for (const auto& check : s.checks) {
        const bool needs_field = check.name == "tension_xval" || check.name == "tau1" ||
                                 check.name == "harmonic_residual" ||
                                 check.name == "first_variation" || check.name == "energy" ||
                                 check.name == "parallel_check";
        if (needs_field && !s.has_field())
            throw ConfigError("field: check '" + check.name + "' requires a field");
        if (check.name == "flat_pde" && s.manifold_kind != "euclidean")
            throw ConfigError("manifold.kind: flat_pde requires a euclidean manifold");
        if (check.name == "sphere_pde" && s.dim < 2)
            throw ConfigError("manifold.dim: sphere_pde needs dim >= 2");
    }
    if (s.field_kind.rfind("hopf", 0) == 0 && (s.manifold_kind != "sphere" || s.dim != 3))
        throw ConfigError("field.kind: hopf fields require the sphere manifold with dim 3");
}

}  // namespace isotm
