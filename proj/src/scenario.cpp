#include "dyad/scenario.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "dyad/prompt.hpp"
#include "dyad/util.hpp"

namespace dyad {

namespace {

// Model ids may contain arbitrary characters; escape the id separator so the
// encoding stays injective.
std::string escape_field(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (const char c : s) {
    if (c == '%') {
      out += "%25";
    } else if (c == '|') {
      out += "%7C";
    } else {
      out += c;
    }
  }
  return out;
}

}  // namespace

std::string scenario_id(const ScenarioConfig& config) {
  std::string id = escape_field(config.model_id);
  id += "|g=";
  id += to_string(config.persona.guard);
  id += "|p=";
  id += to_string(config.persona.prisoner);
  id += config.oversight ? "|ov=1" : "|ov=0";
  id += config.risks ? "|rk=1" : "|rk=0";
  id += "|goal=";
  id += to_string(config.goal);
  return id;
}

std::string RunSpec::run_id() const {
  return scenario_id(scenario) + "#r" + std::to_string(repetition);
}

std::vector<ScenarioConfig> enumerate_scenarios(const std::vector<std::string>& models) {
  if (models.empty()) {
    throw ConfigError("enumerate_scenarios: model list is empty");
  }
  const auto combos = list_personality_combos();
  std::vector<ScenarioConfig> out;
  out.reserve(models.size() * combos.size() * 8);
  for (const auto& model : models) {
    for (const auto& combo : combos) {
      for (const bool oversight : {false, true}) {
        for (const bool risks : {false, true}) {
          for (const Goal goal : {Goal::YardTime, Goal::Escape}) {
            out.push_back({model, combo, oversight, risks, goal});
          }
        }
      }
    }
  }
  return out;
}

std::uint64_t derive_seed(const std::string& scenario_id_text, int repetition) {
  return fnv1a64(scenario_id_text + "#r" + std::to_string(repetition));
}

std::vector<RunSpec> expand_runs(const std::vector<ScenarioConfig>& scenarios, int repetitions) {
  if (repetitions < 1) {
    throw ConfigError("expand_runs: repetitions must be >= 1");
  }
  std::vector<RunSpec> runs;
  runs.reserve(scenarios.size() * static_cast<std::size_t>(repetitions));
  std::set<std::uint64_t> used_seeds;
  for (const auto& scenario : scenarios) {
    const std::string id = scenario_id(scenario);
    for (int rep = 1; rep <= repetitions; ++rep) {
      std::uint64_t seed = derive_seed(id, rep);
      // Hash collisions across 2k runs are essentially impossible, but the
      // distinctness invariant is hard; probe deterministically if one occurs.
      while (!used_seeds.insert(seed).second) {
        seed = splitmix64(seed);
      }
      runs.push_back({scenario, rep, seed});
    }
  }
  return runs;
}

std::string run_spec_to_json_line(const RunSpec& run) {
  nlohmann::json doc{
      {"schema_version", 1},
      {"kind", "run_spec"},
      {"run_id", run.run_id()},
      {"scenario_id", scenario_id(run.scenario)},
      {"model", run.scenario.model_id},
      {"guard_personality", to_string(run.scenario.persona.guard)},
      {"prisoner_personality", to_string(run.scenario.persona.prisoner)},
      {"oversight", run.scenario.oversight},
      {"risks", run.scenario.risks},
      {"goal", to_string(run.scenario.goal)},
      {"repetition", run.repetition},
      {"seed", run.seed},
  };
  return doc.dump();
}

RunSpec run_spec_from_json_line(const std::string& line) {
  const auto doc = nlohmann::json::parse(line);
  RunSpec run;
  run.scenario.model_id = doc.at("model").get<std::string>();
  run.scenario.persona.guard = guard_personality_from_string(doc.at("guard_personality").get<std::string>());
  run.scenario.persona.prisoner =
      prisoner_personality_from_string(doc.at("prisoner_personality").get<std::string>());
  run.scenario.oversight = doc.at("oversight").get<bool>();
  run.scenario.risks = doc.at("risks").get<bool>();
  run.scenario.goal = goal_from_string(doc.at("goal").get<std::string>());
  run.repetition = doc.at("repetition").get<int>();
  run.seed = doc.at("seed").get<std::uint64_t>();
  return run;
}

void write_plan(const std::string& path, const std::vector<RunSpec>& runs) {
  std::ofstream out(path, std::ios::binary);
  if (!out.is_open()) {
    throw ConfigError("cannot open plan file for writing: " + path);
  }
  for (const auto& run : runs) {
    out << run_spec_to_json_line(run) << '\n';
  }
}

std::vector<RunSpec> read_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in.is_open()) {
    throw ConfigError("cannot open plan file: " + path);
  }
  std::vector<RunSpec> runs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      runs.push_back(run_spec_from_json_line(line));
    } catch (const std::exception& e) {
      throw SchemaError("plan line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return runs;
}

}  // namespace dyad
