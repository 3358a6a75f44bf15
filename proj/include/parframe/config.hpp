#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "parframe/scenarios.hpp"

namespace parframe {

/// Configuration error carrying the offending key (empty when the whole
/// document is at fault).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Fully validated run description parsed from a flat key=value document.
struct RunConfig {
  std::string scenario;  // "su2_cone" | "random_horizontal"
  double dt = 0.0;

  // su2_cone
  double theta = 0.0;
  double omega = 0.0;

  // random_horizontal
  int n = 0;
  std::uint64_t seed = 0;
  int modes = 0;      // key "K"
  double duration = 0.0;  // key "T"

  // optional
  std::string pairs = "cartan";  // "cartan"|"non-cartan"|"all"|"a,b;c,d"
  std::string u_mix;             // ""|"identity"|"diag:.."|"ry:.."|"haar:.."

  /// key=value lines in file order, with defaults applied; re-running from
  /// this echo reproduces the run bit-identically.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

/// Parse a UTF-8 key=value document ('#' comments, blank lines allowed).
/// Unknown keys, duplicates, type mismatches and range violations all throw
/// ConfigError naming the key.
RunConfig parse_config(const std::string& text);

/// Build the scenario described by the config (dt snapped to the duration).
Scenario make_scenario(const RunConfig& config);

/// Resolve a u_mix spec string into a unitary of dimension n.
CMatrix make_mixer(const std::string& spec, int n);

/// Expand a pair-selection spec ("cartan", "non-cartan", "all" or an explicit
/// "a,b;c,d" list, 1-based) into 0-based index pairs.
std::vector<std::pair<int, int>> select_pairs(const std::string& spec,
                                              const GeneratorBasis& basis);

}  // namespace parframe
