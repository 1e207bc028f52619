#pragma once

#include <string>

#include <json.hpp>

#include "pwalloc/model.hpp"
#include "pwalloc/oracle.hpp"

// Canonical JSON forms used by the CLI. Every floating-point value is
// rounded to 9 significant digits before insertion so serialized output is
// stable across runs and platforms.

namespace pwalloc {

// Nearest double representable by a 9-significant-digit decimal.
double round9(double x);

// printf "%.9g" with negative zero normalized; used for CSV cells.
std::string format_sig9(double x);

// {n, r, sense, alpha, beta, priorities[]}
nlohmann::json to_json(const AllocationProblem& problem);

// {p[], objective, structure{...}, method}
nlohmann::json to_json(const SolveResult& result);

// Solve-result JSON extended with the oracle's snapped budget.
nlohmann::json to_json(const OracleResult& oracle);

// Reads the p[] array of a serialized result back into a Distribution.
Distribution distribution_from_json(const nlohmann::json& result_json);

}  // namespace pwalloc
