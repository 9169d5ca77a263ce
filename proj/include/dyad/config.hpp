#pragma once

#include <string>
#include <vector>

#include "dyad/orchestrator.hpp"
#include "dyad/scenario.hpp"

namespace dyad {

struct BackendConfig {
  std::string kind = "mock";  // "mock" or "http"
  std::string url;            // http chat endpoint
  std::string script;         // mock script path (optional)
};

struct ScorersConfig {
  std::string kind = "lexicon";  // "lexicon" or "http"
  std::string lexicon_path;
  std::string toxicity_url;
  std::string moderation_url;
  double rate_per_sec = 0.0;  // 0 = unlimited
  int batch_size = 32;
};

struct WorkbenchConfig {
  std::vector<std::string> models;
  int repetitions = 10;
  DecodingParams decoding;
  TurnLimits limits;
  BackendConfig backend;
  ScorersConfig scorers;
  double threshold = 0.5;
};

WorkbenchConfig load_config(const std::string& path);
WorkbenchConfig parse_config_json(const std::string& text);

}  // namespace dyad
