#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hullcache::verify {

enum class Fault {
  None,
  DropNeighbor,  // removes one true neighbour from a packed vertex record
};

struct VerifyOptions {
  std::vector<std::size_t> hull_sizes{8, 64, 512, 4096, 16384};
  std::uint64_t seed = 1;
  std::size_t directions = 1000;
  Fault fault = Fault::None;
};

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs every invariant suite; when `log` is set, prints one line per suite.
std::vector<SuiteResult> run_verification(const VerifyOptions& options, std::ostream* log = nullptr);

bool all_passed(const std::vector<SuiteResult>& results);

}  // namespace hullcache::verify
