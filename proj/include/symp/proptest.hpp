#pragma once

#include "symp/core.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace symp {

struct SuiteReport {
  std::string suite;
  int count = 0, passed = 0;
  int skipped = 0;    // instances rejected before the check (ill-conditioned)
  double worst = 0;   // largest residual seen, where the suite has one
  double seconds = 0;
  std::vector<std::string> failures; // first few
  bool ok() const { return passed + skipped == count && passed > 0; }
};

// ptolemy, cocycle, roundtrip-xE, roundtrip-xplus
std::vector<std::string> suite_names();
// throws PreconditionError for an unknown suite or count < 1
SuiteReport run_suite(const std::string &name, int count, std::uint64_t seed,
                      const Ctx &ctx = {});

} // namespace symp
