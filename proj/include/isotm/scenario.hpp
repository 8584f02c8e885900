#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "isotm/chart.hpp"
#include "isotm/iso.hpp"

namespace isotm {

struct CheckSpec {
    std::string name;
    std::string expect;                // "", "pass", "harmonic", "integrable", ...
    std::optional<double> tolerance;   // per-check override
    std::optional<double> expect_total;     // energy checks
    std::optional<double> expect_density;   // energy checks
    std::optional<double> rel_tol;          // energy total tolerance
};

// A single JSON document describing what to verify. Unknown keys are
// rejected so a typo cannot silently weaken a verification claim.
struct Scenario {
    std::string manifold_kind = "euclidean";  // euclidean | sphere | conformal
    int dim = 2;
    double conformal_c = 2.0;
    double conformal_s = 1.0;

    std::string structure_kind = "sasaki";  // sasaki | sigma0 | general | custom_named
    std::string structure_name;             // registry key for custom_named
    double k = 0.0;
    double a = 1.0;
    double b = 1.0;

    std::string field_kind;  // hopf1|hopf2|hopf3|parallel|coordinate_normalized|custom_named
    std::string field_name;
    std::vector<double> field_params;

    std::vector<CheckSpec> checks;

    std::uint64_t seed = 1;
    int n_points = 50;
    double fiber_radius = 2.0;
    int grid = 48;
    double fd_step1 = 0.0;  // 0 means default
    double fd_step2 = 0.0;

    std::map<std::string, double> tolerances;

    nlohmann::ordered_json raw;  // the parsed document, echoed into reports

    RiemannianChart make_chart() const;
    IsotropicStructure make_structure(const RiemannianChart& chart) const;
    bool has_field() const { return !field_kind.empty(); }
    VectorFieldOnM make_field(const RiemannianChart& chart) const;
};

// Parses and validates; ConfigError messages name the offending field.
Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario_file(const std::string& path);

// Preflight: the structure must be defined over the sampling region
// (e.g. 2kE + b > 0); ConfigError naming structure.b otherwise.
void validate_scenario(const Scenario& s);

}  // namespace isotm
