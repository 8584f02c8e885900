#pragma once

#include <json.hpp>

#include "isotm/scenario.hpp"

namespace isotm {

struct CheckResult {
    std::string name;
    long long n_samples = 0;
    double max_residual = 0.0;
    double mean_residual = 0.0;
    double tolerance = 0.0;
    std::string verdict;  // PASS, FAIL, HARMONIC, NOT_HARMONIC, INTEGRABLE,
                          // NOT_INTEGRABLE, INCONCLUSIVE, INFO, ERROR
    bool gate_ok = true;
    std::string message;
    nlohmann::ordered_json details = nlohmann::ordered_json::object();
};

// Runs one named check with scenario sampling. Module errors are captured and
// reported as verdict ERROR (never thrown). oracle_adjudicate switches the
// tension-based checks to the finite-difference Koszul route.
CheckResult run_check(const Scenario& scenario, const CheckSpec& spec, bool oracle_adjudicate);

std::vector<CheckResult> run_checks(const Scenario& scenario, bool oracle_adjudicate);

}  // namespace isotm
