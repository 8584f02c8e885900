// Command-line driver: runs scenario files through the verification checks
// and writes deterministic JSON reports or CSV field dumps.
//
//   isotm verify <scenario.json> [--out report.json] [--oracle-adjudicate]
//                [--seed N] [--threads N]
//   isotm dump   <scenario.json> --what <residual|energy_density|nijenhuis_norm>
//                --csv <path> [--seed N]
//
// Exit codes: 0 all checks pass, 1 configuration error, 2 check failure or
// check-level error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "isotm/batch.hpp"
#include "isotm/report.hpp"

namespace {

void apply_threads(int threads) {
    if (threads > 1) {
        isotm::batch::set_default_mode(isotm::batch::Mode::Parallel);
    } else if (threads == 1) {
        isotm::batch::set_default_mode(isotm::batch::Mode::Serial);
    }
}

int cmd_verify(const std::string& scenario_path, const std::string& out_path,
               bool oracle_adjudicate, long long seed_override, int threads) {
    apply_threads(threads);

    isotm::Scenario scenario;
    try {
        scenario = isotm::load_scenario_file(scenario_path);
        if (seed_override >= 0) {
            scenario.seed = static_cast<std::uint64_t>(seed_override);
            scenario.raw["sampling"]["seed"] = scenario.seed;
        }
        isotm::validate_scenario(scenario);
    } catch (const isotm::ConfigError& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return 1;
    }

    const auto results = isotm::run_checks(scenario, oracle_adjudicate);
    const auto report = isotm::make_report(scenario, results, oracle_adjudicate);

    if (out_path.empty()) {
        std::cout << report.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "config error: cannot write " << out_path << "\n";
            return 1;
        }
        out << report.dump(2) << "\n";
    }

    for (const auto& r : results) {
        std::cerr << "[" << (r.gate_ok ? "ok" : "FAIL") << "] " << r.name << ": " << r.verdict
                  << " (max " << r.max_residual << ", tol " << r.tolerance << ")";
        if (!r.message.empty()) std::cerr << " -- " << r.message;
        std::cerr << "\n";
    }
    return isotm::report_exit_code(results);
}

int cmd_dump(const std::string& scenario_path, const std::string& what,
             const std::string& csv_path, long long seed_override) {
    isotm::Scenario scenario;
    std::string csv;
    try {
        scenario = isotm::load_scenario_file(scenario_path);
        if (seed_override >= 0) scenario.seed = static_cast<std::uint64_t>(seed_override);
        isotm::validate_scenario(scenario);
        csv = isotm::dump_field_csv(scenario, what);
    } catch (const isotm::ConfigError& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return 1;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }

    std::ofstream out(csv_path);
    if (!out) {
        std::cerr << "config error: cannot write " << csv_path << "\n";
        return 1;
    }
    out << csv;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"isotm - tangent-bundle geometry verification"};
    app.require_subcommand(1);

    std::string scenario_path, out_path, what, csv_path;
    bool oracle_adjudicate = false;
    long long seed_override = -1;
    int threads = 0;

    auto* verify = app.add_subcommand("verify", "run scenario checks and emit a JSON report");
    verify->add_option("scenario", scenario_path, "scenario JSON file")->required();
    verify->add_option("--out", out_path, "report output path (default stdout)");
    verify->add_flag("--oracle-adjudicate", oracle_adjudicate,
                     "use the FD Koszul oracle in tension-based checks");
    verify->add_option("--seed", seed_override, "override sampling.seed");
    verify->add_option("--threads", threads, "use OpenMP batch kernels when > 1");

    auto* dump = app.add_subcommand("dump", "write a CSV field dump");
    dump->add_option("scenario", scenario_path, "scenario JSON file")->required();
    dump->add_option("--what", what, "residual | energy_density | nijenhuis_norm")->required();
    dump->add_option("--csv", csv_path, "output CSV path")->required();
    dump->add_option("--seed", seed_override, "override sampling.seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    if (verify->parsed())
        return cmd_verify(scenario_path, out_path, oracle_adjudicate, seed_override, threads);
    return cmd_dump(scenario_path, what, csv_path, seed_override);
}
