#pragma once

#include <ostream>
#include <string>

#include "nbcoll_cli/scenario.hpp"

namespace nbcoll::cli {

enum ExitCode : int {
  kSuccess = 0,
  kChecksFailed = 1,
  kSchemaError = 2,
  kDomainError = 3,
  kNoConvergence = 4,
};

// Each command writes its files under sc.out_dir and a short table to out.
int cmd_transform(const Scenario& sc, std::ostream& out);
int cmd_find_cc(const Scenario& sc, std::ostream& out);
int cmd_spin(const Scenario& sc, std::ostream& out);
// Runs the acceptance suite; writes verify.csv when out_dir is non-empty.
int cmd_verify(std::uint64_t seed, const std::string& out_dir, std::ostream& out);

}  // namespace nbcoll::cli
