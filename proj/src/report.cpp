#include "isotm/report.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "isotm/batch.hpp"
#include "isotm/fd.hpp"
#include "isotm/harmonic.hpp"

namespace isotm {

nlohmann::ordered_json make_report(const Scenario& scenario,
                                   const std::vector<CheckResult>& results,
                                   bool oracle_adjudicate) {
    nlohmann::ordered_json doc;
    doc["version"] = kVersion;
    doc["scenario"] = scenario.raw;

    nlohmann::ordered_json env;
    env["fd_step1"] = scenario.fd_step1 > 0.0 ? scenario.fd_step1 : fd::kStep1;
    env["fd_step2"] = scenario.fd_step2 > 0.0 ? scenario.fd_step2 : fd::kStep2;
    env["grid"] = scenario.grid;
    env["seed"] = scenario.seed;
    env["n_points"] = scenario.n_points;
    env["fiber_radius"] = scenario.fiber_radius;
    env["oracle_adjudicate"] = oracle_adjudicate;
    env["version"] = kVersion;
    doc["environment"] = env;

    auto arr = nlohmann::ordered_json::array();
    bool all_ok = true;
    for (const auto& r : results) {
        nlohmann::ordered_json c;
        c["name"] = r.name;
        c["n_samples"] = r.n_samples;
        c["max_residual"] = r.max_residual;
        c["mean_residual"] = r.mean_residual;
        c["tolerance"] = r.tolerance;
        c["verdict"] = r.verdict;
        c["gate_ok"] = r.gate_ok;
        if (!r.message.empty()) c["message"] = r.message;
        if (!r.details.empty()) c["details"] = r.details;
        arr.push_back(c);
        all_ok = all_ok && r.gate_ok;
    }
    doc["checks"] = arr;
    doc["all_passed"] = all_ok;
    return doc;
}

int report_exit_code(const std::vector<CheckResult>& results) {
    for (const auto& r : results)
        if (!r.gate_ok) return 2;
    return 0;
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Inclusive per-axis grids; rows in lexicographic index order.
void walk_grid(const std::vector<std::pair<double, double>>& ranges, int grid,
               const std::function<void(const Vec&)>& emit) {
    const int dims = static_cast<int>(ranges.size());
    std::vector<int> idx(dims, 0);
    Vec x(dims);
    for (;;) {
        for (int i = 0; i < dims; ++i) {
            const auto& [lo, hi] = ranges[i];
            x[i] = grid == 1 ? lo : lo + (hi - lo) * idx[i] / (grid - 1);
        }
        emit(x);
        int d = dims - 1;
        while (d >= 0 && ++idx[d] == grid) idx[d--] = 0;
        if (d < 0) break;
    }
}

std::string header_tm(int n) {
    std::string h;
    for (int i = 1; i <= n; ++i) h += "x" + std::to_string(i) + ",";
    for (int i = 1; i <= n; ++i) h += "y" + std::to_string(i) + ",";
    return h + "value\n";
}

std::string header_base(int n) {
    std::string h;
    for (int i = 1; i <= n; ++i) h += "x" + std::to_string(i) + ",";
    return h + "value\n";
}

std::string dump_tm_grid(const Scenario& sc, const RiemannianChart& chart,
                         const std::function<double(const TMPoint&)>& value) {
    const int n = chart.dim;
    std::vector<std::pair<double, double>> ranges;
    for (int i = 0; i < n; ++i)
        ranges.emplace_back(0.5 * chart.box_lo[i], 0.5 * chart.box_hi[i]);
    for (int i = 0; i < n; ++i) ranges.emplace_back(-sc.fiber_radius, sc.fiber_radius);

    std::string out = header_tm(n);
    walk_grid(ranges, sc.grid, [&](const Vec& xy) {
        TMPoint w = TMPoint::from_coords(xy);
        if (!chart.contains(w.x)) return;
        std::string row;
        for (int i = 0; i < 2 * n; ++i) row += fmt(xy[i]) + ",";
        row += fmt(value(w)) + "\n";
        out += row;
    });
    return out;
}

std::string dump_base_grid(const Scenario& sc, const RiemannianChart& chart,
                           const std::function<double(const Vec&)>& value) {
    const int n = chart.dim;
    std::vector<std::pair<double, double>> ranges;
    for (int i = 0; i < n; ++i)
        ranges.emplace_back(0.5 * chart.box_lo[i], 0.5 * chart.box_hi[i]);

    std::string out = header_base(n);
    walk_grid(ranges, sc.grid, [&](const Vec& x) {
        if (!chart.contains(x)) return;
        std::string row;
        for (int i = 0; i < n; ++i) row += fmt(x[i]) + ",";
        row += fmt(value(x)) + "\n";
        out += row;
    });
    return out;
}

}  // namespace

std::string dump_field_csv(const Scenario& sc, const std::string& what) {
    const RiemannianChart chart = sc.make_chart();
    const IsotropicStructure structure = sc.make_structure(chart);

    if (what == "nijenhuis_norm") {
        return dump_tm_grid(sc, chart, [&](const TMPoint& w) {
            return nijenhuis_max_component(structure, chart, w);
        });
    }

    if (what == "energy_density") {
        const auto m = make_tangent_metric(chart, structure);
        const auto X = sc.make_field(chart);
        const auto report = energy(m, X, QuadratureRegion::of_chart(chart), 2);
        return dump_base_grid(sc, chart, report.density);
    }

    if (what == "residual") {
        if (sc.checks.empty()) throw ConfigError("checks: residual dump needs a first check");
        const std::string& check = sc.checks.front().name;
        if (check == "flat_pde") {
            const auto zf = z_from_structure(structure);
            return dump_tm_grid(sc, chart, [&](const TMPoint& w) {
                return flat_pde_residual(zf, w.x, w.y).lpNorm<Eigen::Infinity>();
            });
        }
        if (check == "sphere_pde") {
            const auto zf = z_from_structure(structure);
            return dump_tm_grid(sc, chart, [&](const TMPoint& w) {
                double worst = 0.0;
                for (int s0 = 0; s0 < chart.dim; ++s0)
                    worst = std::max(worst,
                                     std::abs(sphere_pde_residual(zf, chart, w.x, w.y, s0)));
                return worst;
            });
        }
        if (check == "nijenhuis_scan") {
            return dump_tm_grid(sc, chart, [&](const TMPoint& w) {
                return nijenhuis_max_component(structure, chart, w);
            });
        }
        if (check == "harmonic_residual") {
            const auto m = make_tangent_metric(chart, structure);
            const auto X = sc.make_field(chart);
            return dump_base_grid(sc, chart, [&](const Vec& p) {
                return harmonic_unit_residual(m, X, p).residual_norm;
            });
        }
        throw ConfigError("checks[0]: check '" + check + "' has no pointwise residual dump");
    }

    throw ConfigError("--what must be residual, energy_density or nijenhuis_norm");
}

}  // namespace isotm
