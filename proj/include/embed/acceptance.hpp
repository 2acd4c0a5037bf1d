#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace embed::acceptance {

struct Result {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string measured;           // what was measured against which tolerance
  std::vector<std::string> notes;  // supplementary diagnostics, not part of the verdict
  double seconds = 0.0;
};

struct Options {
  std::uint64_t seed = 20240611;
  int threads = 0;
  std::vector<int> only;  // empty = all criteria
};

std::vector<Result> run(const Options& opts, const std::function<void(const Result&)>& on_result = {});

/// One "[PASS]/[FAIL]" line followed by indented notes.
std::string format(const Result& r);

}  // namespace embed::acceptance
