#pragma once

#include <span>
#include <string>
#include <vector>

namespace bobylev {

/**
 * Outcome of one numerical inequality check (lhs <= rhs up to tol).
 * Every estimate the library verifies is reported in this shape so tests and
 * the CLI can print or serialize the worst margins uniformly.
 */
struct InequalityReport {
  std::string check;     // which estimate
  double lhs = 0.0;
  double rhs = 0.0;
  double tol = 0.0;      // additive slack
  std::string location;  // e.g. "r=0.25 t=1.2"
  bool pass = false;

  double margin() const { return rhs - lhs; }
};

InequalityReport check_inequality(std::string check, double lhs, double rhs,
                                  double tol, std::string location);

bool all_pass(std::span<const InequalityReport> reports);
// Most violated (smallest margin) report; reports must be non-empty.
const InequalityReport& worst(std::span<const InequalityReport> reports);

}  // namespace bobylev
