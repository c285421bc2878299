#include "bobylev/report.hpp"

#include <algorithm>
#include <stdexcept>

namespace bobylev {

InequalityReport check_inequality(std::string check, double lhs, double rhs,
                                  double tol, std::string location) {
  InequalityReport r;
  r.check = std::move(check);
  r.lhs = lhs;
  r.rhs = rhs;
  r.tol = tol;
  r.location = std::move(location);
  r.pass = lhs <= rhs + tol;
  return r;
}

bool all_pass(std::span<const InequalityReport> reports) {
  return std::all_of(reports.begin(), reports.end(),
                     [](const InequalityReport& r) { return r.pass; });
}

const InequalityReport& worst(std::span<const InequalityReport> reports) {
  if (reports.empty()) throw std::invalid_argument("no reports");
  return *std::min_element(reports.begin(), reports.end(),
                           [](const InequalityReport& a, const InequalityReport& b) {
                             return a.margin() < b.margin();
                           });
}

}  // namespace bobylev
