#include "dyad/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dyad {

namespace {
using nlohmann::json;
}

WorkbenchConfig parse_config_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  WorkbenchConfig config;
  if (doc.contains("models")) {
    for (const auto& model : doc["models"]) config.models.push_back(model.get<std::string>());
  }
  config.repetitions = doc.value("repetitions", 10);
  if (doc.contains("decoding")) {
    const auto& decoding = doc["decoding"];
    config.decoding.temperature = decoding.value("temperature", 0.7);
    config.decoding.top_k = decoding.value("top_k", 40);
    config.decoding.top_p = decoding.value("top_p", 0.9);
  }
  if (doc.contains("limits")) {
    config.limits.guard_msgs = doc["limits"].value("guard", 10);
    config.limits.prisoner_msgs = doc["limits"].value("prisoner", 9);
  }
  if (doc.contains("backend")) {
    const auto& backend = doc["backend"];
    config.backend.kind = backend.value("kind", "mock");
    config.backend.url = backend.value("url", "");
    config.backend.script = backend.value("script", "");
    if (config.backend.kind != "mock" && config.backend.kind != "http") {
      throw ConfigError("backend.kind must be mock or http");
    }
  }
  if (doc.contains("scorers")) {
    const auto& scorers = doc["scorers"];
    config.scorers.kind = scorers.value("kind", "lexicon");
    config.scorers.lexicon_path = scorers.value("lexicon", "");
    config.scorers.toxicity_url = scorers.value("toxicity_url", "");
    config.scorers.moderation_url = scorers.value("moderation_url", "");
    config.scorers.rate_per_sec = scorers.value("rate_per_sec", 0.0);
    config.scorers.batch_size = scorers.value("batch_size", 32);
    if (config.scorers.kind != "lexicon" && config.scorers.kind != "http") {
      throw ConfigError("scorers.kind must be lexicon or http");
    }
  }
  config.threshold = doc.value("threshold", 0.5);
  if (config.repetitions < 1) throw ConfigError("repetitions must be >= 1");
  if (config.threshold < 0.0 || config.threshold > 1.0) {
    throw ConfigError("threshold must be in [0,1]");
  }
  return config;
}

WorkbenchConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in.is_open()) {
    throw ConfigError("cannot open config file: " + path);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_json(buffer.str());
}

}  // namespace dyad
