#include <cstdlib>
#include <iostream>
#include <string>

#include "nbcoll/verify.hpp"

// One pass/fail line per acceptance criterion; details follow for failures.
int main(int argc, char** argv) {
  nbcoll::SuiteOptions opt;
  if (argc > 1) opt.seed = std::strtoull(argv[1], nullptr, 10);
  const auto results = nbcoll::run_acceptance_suite(opt);
  bool all = true;
  for (const auto& r : results) {
    std::cout << nbcoll::format_summary(r) << '\n';
    all = all && r.pass();
  }
  for (const auto& r : results)
    if (!r.pass()) std::cout << '\n' << nbcoll::format_detail(r);
  return all ? 0 : 1;
}
