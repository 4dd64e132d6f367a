#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace remo::demo {

struct Options {
  bool distributed = false; // TCP on 127.0.0.1 instead of loopback
  std::uint64_t seed = 1;
  bool records = false; // tab-separated records instead of prose
};

/// One summary line per experiment.
struct Record {
  std::string experiment;
  std::string key;
  std::string value;
  bool ok = true;
  std::string failure;
};

std::vector<Record> run_all(const Options &opts, std::ostream &human);

} // namespace remo::demo
