#include <doctest.h>

#include <json.hpp>

#include "isotm/report.hpp"

using namespace isotm;
using nlohmann::json;

namespace {

json base_scenario() {
    return json::parse(R"({
        "manifold": {"kind": "sphere", "dim": 2},
        "structure": {"kind": "sigma0", "k": 1.0, "b": 1.0},
        "checks": ["nijenhuis_scan"],
        "sampling": {"seed": 9, "n_points": 4}
    })");
}

}  // namespace

TEST_CASE("scenario parsing rejects unknown keys and bad values") {
    {
        json doc = base_scenario();
        doc["manifld"] = json::object();
        CHECK_THROWS_WITH_AS((void)parse_scenario(doc),
                             doctest::Contains("unknown key 'scenario.manifld'"), ConfigError);
    }
    {
        json doc = base_scenario();
        doc["structure"]["radius"] = 2.0;
        CHECK_THROWS_WITH_AS((void)parse_scenario(doc),
                             doctest::Contains("structure.radius"), ConfigError);
    }
    {
        json doc = base_scenario();
        doc["checks"] = json::array({"no_such_check"});
        CHECK_THROWS_AS((void)parse_scenario(doc), ConfigError);
    }
    {
        json doc = base_scenario();
        doc.erase("manifold");
        CHECK_THROWS_WITH_AS((void)parse_scenario(doc), doctest::Contains("manifold"),
                             ConfigError);
    }
    {
        json doc = base_scenario();
        doc["sampling"]["n_points"] = 0;
        CHECK_THROWS_AS((void)parse_scenario(doc), ConfigError);
    }
}

TEST_CASE("structure domain preflight names the offending field") {
    json doc = base_scenario();
    doc["structure"]["b"] = -1.0;  // 2kE + b <= 0 near the zero section
    const Scenario sc = parse_scenario(doc);
    CHECK_THROWS_WITH_AS((void)validate_scenario(sc), doctest::Contains("structure.b"),
                         ConfigError);
}

TEST_CASE("check execution: verdicts and exit codes") {
    // integrable family on T S^2
    {
        json doc = base_scenario();
        doc["checks"] = json::array({json{{"name", "nijenhuis_scan"}, {"expect", "integrable"}}});
        const Scenario sc = parse_scenario(doc);
        validate_scenario(sc);
        const auto results = run_checks(sc, false);
        REQUIRE(results.size() == 1);
        CHECK(results[0].verdict == "INTEGRABLE");
        CHECK(results[0].gate_ok);
        CHECK(report_exit_code(results) == 0);
    }

    // Sasaki on T S^2: not integrable, but without an expectation the scan is
    // informational and the run still exits 0
    {
        json doc = base_scenario();
        doc["structure"] = json{{"kind", "sasaki"}};
        const Scenario sc = parse_scenario(doc);
        validate_scenario(sc);
        const auto results = run_checks(sc, false);
        CHECK(results[0].verdict == "NOT_INTEGRABLE");
        CHECK(results[0].gate_ok);
        CHECK(report_exit_code(results) == 0);

        // with a wrong expectation the same scan gates the exit code
        json doc2 = base_scenario();
        doc2["structure"] = json{{"kind", "sasaki"}};
        doc2["checks"] = json::array({json{{"name", "nijenhuis_scan"}, {"expect", "integrable"}}});
        const Scenario sc2 = parse_scenario(doc2);
        const auto results2 = run_checks(sc2, false);
        CHECK_FALSE(results2[0].gate_ok);
        CHECK(report_exit_code(results2) == 2);
    }

    // module errors are captured per-check as ERROR
    {
        json doc = base_scenario();
        doc["structure"] = json{{"kind", "custom_named"}, {"name", "cross_fiber_delta"}};
        doc["checks"] = json::array({"gnatural_coeffs"});
        const Scenario sc = parse_scenario(doc);
        const auto results = run_checks(sc, false);
        CHECK(results[0].verdict == "ERROR");
        CHECK_FALSE(results[0].gate_ok);
        CHECK(report_exit_code(results) == 2);
    }
}

TEST_CASE("reports are deterministic and self-consistent") {
    json doc = base_scenario();
    doc["checks"] = json::array({"nijenhuis_scan", "metric_properties", "gnatural_coeffs"});
    const Scenario sc = parse_scenario(doc);
    validate_scenario(sc);

    const auto r1 = make_report(sc, run_checks(sc, false), false);
    const auto r2 = make_report(sc, run_checks(sc, false), false);
    CHECK(r1.dump() == r2.dump());  // byte-identical

    // verdicts recompute from their own residuals and tolerances
    for (const auto& check : r1["checks"]) {
        const double max = check["max_residual"].get<double>();
        const double tol = check["tolerance"].get<double>();
        const std::string verdict = check["verdict"].get<std::string>();
        if (verdict == "PASS") CHECK(max <= tol);
        if (verdict == "FAIL") CHECK(max > tol);
        if (verdict == "INTEGRABLE") CHECK(max <= tol);
        if (verdict == "NOT_INTEGRABLE") CHECK(max > 1e-2);
    }
    CHECK(r1["environment"]["seed"] == 9);
    CHECK(r1["all_passed"].get<bool>());
}

TEST_CASE("flat pde scenario with the explicit solution") {
    json doc = json::parse(R"({
        "manifold": {"kind": "euclidean", "dim": 2},
        "structure": {"kind": "custom_named", "name": "explicit_z"},
        "checks": [{"name": "flat_pde", "tolerance": 1e-7}],
        "sampling": {"seed": 1, "n_points": 40, "fiber_radius": 1.0, "grid": 5}
    })");
    const Scenario sc = parse_scenario(doc);
    validate_scenario(sc);
    const auto results = run_checks(sc, false);
    CHECK(results[0].verdict == "PASS");
    CHECK(results[0].max_residual < 1e-7);
}

TEST_CASE("csv dumps: deterministic grids and expected values") {
    // residual dump of the explicit flat solution on a 5^4 grid
    {
        json doc = json::parse(R"({
            "manifold": {"kind": "euclidean", "dim": 2},
            "structure": {"kind": "custom_named", "name": "explicit_z"},
            "checks": ["flat_pde"],
            "sampling": {"seed": 1, "fiber_radius": 1.0, "grid": 5}
        })");
        const Scenario sc = parse_scenario(doc);
        const std::string csv = dump_field_csv(sc, "residual");
        const std::string csv2 = dump_field_csv(sc, "residual");
        CHECK(csv == csv2);

        std::istringstream in(csv);
        std::string line;
        std::getline(in, line);
        CHECK(line == "x1,x2,y1,y2,value");
        int rows = 0;
        double worst = 0.0;
        while (std::getline(in, line)) {
            ++rows;
            const auto pos = line.rfind(',');
            worst = std::max(worst, std::stod(line.substr(pos + 1)));
        }
        CHECK(rows == 625);
        CHECK(worst < 1e-7);
    }

    // energy density of Hopf/Sasaki is the constant 5/2
    {
        json doc = json::parse(R"({
            "manifold": {"kind": "sphere", "dim": 3},
            "structure": {"kind": "sasaki"},
            "field": {"kind": "hopf1"},
            "checks": ["energy"],
            "sampling": {"seed": 1, "grid": 4}
        })");
        const Scenario sc = parse_scenario(doc);
        const std::string csv = dump_field_csv(sc, "energy_density");
        std::istringstream in(csv);
        std::string line;
        std::getline(in, line);
        CHECK(line == "x1,x2,x3,value");
        while (std::getline(in, line)) {
            const auto pos = line.rfind(',');
            CHECK(std::stod(line.substr(pos + 1)) == doctest::Approx(2.5).epsilon(1e-6));
        }
    }

    // nijenhuis norm of Sasaki on T S^2: positive away from the zero section
    {
        json doc = json::parse(R"({
            "manifold": {"kind": "sphere", "dim": 2},
            "structure": {"kind": "sasaki"},
            "checks": ["nijenhuis_scan"],
            "sampling": {"seed": 1, "fiber_radius": 2.0, "grid": 3}
        })");
        const Scenario sc = parse_scenario(doc);
        const std::string csv = dump_field_csv(sc, "nijenhuis_norm");
        std::istringstream in(csv);
        std::string line;
        std::getline(in, line);
        int positive = 0, rows = 0;
        while (std::getline(in, line)) {
            ++rows;
            // columns: x1,x2,y1,y2,value
            double vals[5];
            std::istringstream row(line);
            std::string cell;
            for (double& v : vals) {
                std::getline(row, cell, ',');
                v = std::stod(cell);
            }
            const double ynorm = std::hypot(vals[2], vals[3]);
            if (ynorm > 0.5 && vals[4] > 1e-3) ++positive;
            if (ynorm > 0.5) CHECK(vals[4] > 1e-3);
        }
        CHECK(rows > 0);
        CHECK(positive > 0);
    }

    // unsupported dump target
    {
        const Scenario sc = parse_scenario(base_scenario());
        CHECK_THROWS_AS((void)dump_field_csv(sc, "bogus"), ConfigError);
    }
}
