#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "isotm/checks.hpp"

namespace isotm {

inline constexpr const char* kVersion = "1.0.0";

// Deterministic verification report: fixed key order, no timestamps, and all
// doubles serialized with shortest round-trip formatting, so identical
// scenario + seed produce byte-identical documents.
nlohmann::ordered_json make_report(const Scenario& scenario,
                                   const std::vector<CheckResult>& results,
                                   bool oracle_adjudicate);

// 0 if every check gates ok, 2 otherwise.
int report_exit_code(const std::vector<CheckResult>& results);

// CSV dumps over deterministic grids: `what` is one of residual,
// energy_density, nijenhuis_norm. Rows are ordered by grid index.
std::string dump_field_csv(const Scenario& scenario, const std::string& what);

}  // namespace isotm
