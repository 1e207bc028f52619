#pragma once

#include <stdexcept>
#include <string>

namespace pwalloc {

// Failure classes surfaced by the library. The CLI maps any of these to
// exit code 2; malformed command lines are reported separately as usage
// errors (exit code 1).
enum class Errc {
  out_of_range,             // parameter outside its documented range
  not_finite,               // NaN or infinity where a finite value is required
  domain_error,             // argument outside the mathematical domain
  convergence_failure,      // a root-find could not bracket or did not settle
  infeasible,               // no distribution satisfies budget and bounds
  infeasible_distribution,  // a supplied distribution violates bounds or budget
  non_positive_priority,    // priority profile contains a value <= 0
  budget_out_of_range,      // budget outside the admissible interval
  too_large,                // enumeration would exceed the safety cap
};

inline const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::out_of_range: return "out_of_range";
    case Errc::not_finite: return "not_finite";
    case Errc::domain_error: return "domain_error";
    case Errc::convergence_failure: return "convergence_failure";
    case Errc::infeasible: return "infeasible";
    case Errc::infeasible_distribution: return "infeasible_distribution";
    case Errc::non_positive_priority: return "non_positive_priority";
    case Errc::budget_out_of_range: return "budget_out_of_range";
    case Errc::too_large: return "too_large";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace pwalloc
