#include "pwalloc/serialization.hpp"

#include <cmath>
#include <cstdio>

namespace pwalloc {

std::string format_sig9(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of negative zero
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.9g", x);
  return buffer;
}

double round9(double x) {
  if (!std::isfinite(x)) return x;
  return std::strtod(format_sig9(x).c_str(), nullptr);
}

nlohmann::json to_json(const AllocationProblem& problem) {
  nlohmann::json j;
  j["n"] = problem.n;
  j["r"] = round9(problem.r);
  j["sense"] = to_string(problem.sense);
  j["alpha"] = round9(problem.weighting.alpha);
  j["beta"] = round9(problem.weighting.beta);
  nlohmann::json priorities = nlohmann::json::array();
  for (double t : problem.priorities.t) priorities.push_back(round9(t));
  j["priorities"] = std::move(priorities);
  return j;
}

nlohmann::json to_json(const SolveResult& result) {
  nlohmann::json j;
  nlohmann::json p = nlohmann::json::array();
  for (double v : result.distribution.p) p.push_back(round9(v));
  j["p"] = std::move(p);
  j["objective"] = round9(result.objective);
  nlohmann::json structure;
  if (const auto* harm = std::get_if<HarmStructure>(&result.structure)) {
    structure["k"] = harm->k;
    structure["delta"] = round9(harm->delta);
    structure["common_p"] = round9(harm->common_p);
  } else {
    const auto& benefit = std::get<BenefitStructure>(result.structure);
    structure["j"] = benefit.j;
    structure["gamma"] =
        benefit.gamma ? nlohmann::json(round9(*benefit.gamma)) : nlohmann::json();
    structure["common_p"] = round9(benefit.common_p);
  }
  j["structure"] = std::move(structure);
  j["method"] = to_string(result.method);
  return j;
}

nlohmann::json to_json(const OracleResult& oracle) {
  nlohmann::json j = to_json(oracle.result);
  j["effective_r"] = round9(oracle.effective_r);
  j["snapped"] = oracle.snapped;
  j["points_evaluated"] = oracle.points_evaluated;
  return j;
}

Distribution distribution_from_json(const nlohmann::json& result_json) {
  Distribution dist;
  const auto& p = result_json.at("p");
  dist.p.reserve(p.size());
  for (const auto& v : p) dist.p.push_back(v.get<double>());
  return dist;
}

}  // namespace pwalloc
