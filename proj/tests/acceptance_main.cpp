// Acceptance suite runner: one pass/fail line per criterion.

#include "census/acceptance.hpp"

#include <iostream>

#ifndef CENSUS_CLI_PATH
#define CENSUS_CLI_PATH ""
#endif

int main() {
  auto results = census::acceptance::run_all(0, CENSUS_CLI_PATH);
  bool ok = census::acceptance::print_results(std::cout, results);
  std::cout << (ok ? "acceptance: ALL PASS" : "acceptance: FAILURES") << std::endl;
  return ok ? 0 : 1;
}
