#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dyad/types.hpp"

namespace dyad {

struct DecodingParams {
  double temperature = 0.7;
  int top_k = 40;
  double top_p = 0.9;

  bool operator==(const DecodingParams&) const = default;
};

// One cell of the experiment matrix.
struct ScenarioConfig {
  std::string model_id;
  Persona persona;
  bool oversight = false;
  bool risks = false;
  Goal goal = Goal::YardTime;

  bool operator==(const ScenarioConfig&) const = default;
};

// One repetition of a scenario. The seed is a pure function of
// (scenario_id, repetition); expand_runs guarantees global distinctness.
struct RunSpec {
  ScenarioConfig scenario;
  int repetition = 1;  // 1..R
  std::uint64_t seed = 0;

  std::string run_id() const;
};

// Canonical, collision-free, version-stable identifier. Field order:
// model / guard personality / prisoner personality / oversight / risks / goal.
std::string scenario_id(const ScenarioConfig& config);

// Full factorial |models| x 5 combos x 2 oversight x 2 risks x 2 goals, in a
// fixed nested order. Throws ConfigError on an empty model list.
std::vector<ScenarioConfig> enumerate_scenarios(const std::vector<std::string>& models);

// scenarios x repetitions, seeds distinct across all runs.
std::vector<RunSpec> expand_runs(const std::vector<ScenarioConfig>& scenarios, int repetitions);

std::uint64_t derive_seed(const std::string& scenario_id_text, int repetition);

// Plan file I/O: one RunSpec JSON document per line, schema_version included.
std::string run_spec_to_json_line(const RunSpec& run);
RunSpec run_spec_from_json_line(const std::string& line);
void write_plan(const std::string& path, const std::vector<RunSpec>& runs);
std::vector<RunSpec> read_plan(const std::string& path);

}  // namespace dyad
