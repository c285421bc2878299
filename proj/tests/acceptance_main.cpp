// Acceptance battery entry point. Prints one line per criterion and exits
// nonzero if any fail.

#include <cstdio>
#include <string>

#include "bobylev/acceptance.hpp"

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : "acceptance_artifacts";
  const auto results = bobylev::run_acceptance(dir);
  bool all = true;
  double total = 0.0;
  for (const auto& c : results) {
    all = all && c.pass;
    total += c.seconds;
    std::printf("%s  %-14s %s (%.1fs)\n", c.pass ? "PASS" : "FAIL",
                c.name.c_str(), c.detail.c_str(), c.seconds);
  }
  std::printf("%zu criteria, %s, %.1fs total\n", results.size(),
              all ? "all pass" : "FAILURES PRESENT", total);
  return all ? 0 : 1;
}
