#include "dyad/gateway.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "dyad/util.hpp"

namespace dyad {

namespace {

using nlohmann::json;

struct ParsedUrl {
  std::string base;  // scheme://host[:port]
  std::string path;  // /path, defaults to "/"
};

ParsedUrl parse_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("endpoint URL must include a scheme: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    return {url, "/"};
  }
  return {url.substr(0, path_start), url.substr(path_start)};
}

// httplib::Client instances are not safe for concurrent use; a fresh client
// per request keeps the scorer handles shareable.
json post_json(const std::string& endpoint, const json& body, int timeout_seconds,
               TokenBucket* limiter) {
  if (limiter != nullptr) limiter->acquire();
  const ParsedUrl url = parse_url(endpoint);
  httplib::Client client(url.base);
  client.set_connection_timeout(timeout_seconds, 0);
  client.set_read_timeout(timeout_seconds, 0);
  client.set_write_timeout(timeout_seconds, 0);

  const auto result = client.Post(url.path, body.dump(), "application/json");
  if (!result) {
    const auto err = result.error();
    if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
        err == httplib::Error::Write) {
      throw GatewayError(GatewayErrorKind::Timeout,
                         "request to " + endpoint + " timed out: " + httplib::to_string(err));
    }
    throw GatewayError(GatewayErrorKind::Transport,
                       "request to " + endpoint + " failed: " + httplib::to_string(err));
  }
  if (result->status < 200 || result->status >= 300) {
    throw GatewayError(GatewayErrorKind::Transport,
                       "endpoint " + endpoint + " returned HTTP " + std::to_string(result->status));
  }
  try {
    return json::parse(result->body);
  } catch (const json::exception& e) {
    throw GatewayError(GatewayErrorKind::MalformedResponse,
                       std::string("response body is not valid JSON: ") + e.what());
  }
}

double score_in_unit_interval(const json& value, const char* what) {
  if (!value.is_number()) {
    throw GatewayError(GatewayErrorKind::MalformedResponse, std::string(what) + " is not a number");
  }
  const double v = value.get<double>();
  if (v < 0.0 || v > 1.0 || !std::isfinite(v)) {
    throw GatewayError(GatewayErrorKind::MalformedResponse,
                       std::string(what) + " outside [0,1]: " + fmt_g(v));
  }
  return v;
}

}  // namespace

std::string chat_request_to_json(const ChatRequest& request) {
  json messages = json::array();
  for (const auto& turn : request.messages) {
    messages.push_back({{"role", turn.role}, {"content", turn.content}});
  }
  const json doc{
      {"model", request.model_id},
      {"messages", messages},
      {"stream", false},
      {"options",
       {{"temperature", request.options.temperature},
        {"top_k", request.options.top_k},
        {"top_p", request.options.top_p}}},
  };
  return doc.dump();
}

ChatRequest chat_request_from_json(const std::string& body) {
  const auto doc = json::parse(body);
  ChatRequest request;
  request.model_id = doc.at("model").get<std::string>();
  for (const auto& m : doc.at("messages")) {
    request.messages.push_back({m.at("role").get<std::string>(), m.at("content").get<std::string>()});
  }
  const auto& options = doc.at("options");
  request.options.temperature = options.at("temperature").get<double>();
  request.options.top_k = options.at("top_k").get<int>();
  request.options.top_p = options.at("top_p").get<double>();
  return request;
}

TokenBucket::TokenBucket(double rate_per_sec, double burst)
    : rate_per_sec_(rate_per_sec),
      burst_(burst > 0 ? burst : 1.0),
      tokens_(burst_),
      last_refill_(std::chrono::steady_clock::now()) {}

void TokenBucket::acquire() {
  if (rate_per_sec_ <= 0) return;
  while (true) {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      const auto now = std::chrono::steady_clock::now();
      const double elapsed = std::chrono::duration<double>(now - last_refill_).count();
      tokens_ = std::min(burst_, tokens_ + elapsed * rate_per_sec_);
      last_refill_ = now;
      if (tokens_ >= 1.0) {
        tokens_ -= 1.0;
        return;
      }
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
}

HttpChatBackend::HttpChatBackend(std::string endpoint, int timeout_seconds,
                                 std::shared_ptr<TokenBucket> limiter)
    : endpoint_(std::move(endpoint)), timeout_seconds_(timeout_seconds), limiter_(std::move(limiter)) {}

std::string HttpChatBackend::complete(const ChatRequest& request, const RequestTag&) {
  const json body = json::parse(chat_request_to_json(request));
  const json response = post_json(endpoint_, body, timeout_seconds_, limiter_.get());
  if (!response.contains("message") || !response["message"].contains("content") ||
      !response["message"]["content"].is_string()) {
    throw GatewayError(GatewayErrorKind::MalformedResponse,
                       "chat response missing message.content");
  }
  const std::string content = response["message"]["content"].get<std::string>();
  if (content.empty()) {
    throw GatewayError(GatewayErrorKind::EmptyCompletion, "backend returned an empty completion");
  }
  return content;
}

MockChatBackend::MockChatBackend() = default;

MockChatBackend MockChatBackend::from_script_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.is_open()) {
    throw ConfigError("cannot open mock script: " + path);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_script_json(buffer.str());
}

MockChatBackend MockChatBackend::from_script_json(const std::string& json_text) {
  MockChatBackend backend;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("mock script is not valid JSON: ") + e.what());
  }
  try {
    if (doc.contains("default_mode")) {
      const auto mode = doc["default_mode"].get<std::string>();
      if (mode == "procedural") {
        backend.procedural_ = true;
      } else if (mode != "template") {
        throw SchemaError("mock script default_mode must be \"template\" or \"procedural\"");
      }
    }
    if (doc.contains("template")) {
      backend.template_ = doc["template"].get<std::string>();
    }
    if (doc.contains("completions")) {
      for (const auto& [key, value] : doc["completions"].items()) {
        backend.completions_[key] = value.get<std::string>();
      }
    }
    if (doc.contains("failures")) {
      for (const auto& [key, value] : doc["failures"].items()) {
        FailureDirective directive;
        const auto kind = value.at("kind").get<std::string>();
        if (kind == "transport") {
          directive.kind = GatewayErrorKind::Transport;
        } else if (kind == "timeout") {
          directive.kind = GatewayErrorKind::Timeout;
        } else if (kind == "empty") {
          directive.kind = GatewayErrorKind::EmptyCompletion;
        } else {
          throw SchemaError("mock failure kind must be transport, timeout or empty: " + kind);
        }
        directive.times = value.value("times", -1);
        backend.failures_[key] = directive;
      }
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("mock script malformed: ") + e.what());
  }
  return backend;
}

namespace {

const std::array<const char*, 24> kNeutralWords = {
    "the",  "we",    "can",  "talk",  "about", "rules", "day",   "cell",
    "work", "time",  "quiet", "walk", "food",  "book",  "yard",  "plan",
    "hope", "calm",  "sir",  "please", "maybe", "later", "now",   "listen"};

const std::array<const char*, 12> kHostileWords = {
    "scum",   "worm", "shut",     "useless", "trash",  "punish",
    "hit",    "hurt", "threat",   "lockdown", "harass", "mock"};

}  // namespace

std::string MockChatBackend::procedural_text(const RequestTag& tag) const {
  const bool guard_turn = tag.turn_index % 2 == 1;
  // Hostile-word rate in 1/256 units, shaped by the scenario's personas so
  // synthetic datasets carry the factor structure analyses look for.
  int hostility = guard_turn ? 20 : 12;
  if (guard_turn && tag.scenario_id.find("|g=abusive|") != std::string::npos) hostility += 90;
  if (guard_turn && tag.scenario_id.find("|g=respectful|") != std::string::npos) hostility -= 15;
  if (!guard_turn && tag.scenario_id.find("|p=rebellious|") != std::string::npos) hostility += 50;
  if (!guard_turn && tag.scenario_id.find("|p=peaceful|") != std::string::npos) hostility -= 8;
  hostility = std::max(hostility, 4);

  std::uint64_t state = fnv1a64(tag.scenario_id) ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(tag.turn_index));
  auto next = [&state]() {
    state = splitmix64(state);
    return state;
  };

  const int word_count = 8 + static_cast<int>(next() % 5);
  std::string text;
  for (int i = 0; i < word_count; ++i) {
    if (i > 0) text += ' ';
    const std::uint64_t draw = next();
    if (static_cast<int>(draw & 0xFF) < hostility) {
      text += kHostileWords[next() % kHostileWords.size()];
    } else {
      text += kNeutralWords[next() % kNeutralWords.size()];
    }
  }
  text += '.';
  return text;
}

std::string MockChatBackend::render_default(const RequestTag& tag) const {
  if (tag.turn_index == 0) {
    return "Summary of day for " + tag.scenario_id + ".";
  }
  if (procedural_) {
    return procedural_text(tag);
  }
  std::string out = template_;
  const auto replace_all = [&out](std::string_view needle, const std::string& value) {
    std::size_t pos = 0;
    while ((pos = out.find(needle, pos)) != std::string::npos) {
      out.replace(pos, needle.size(), value);
      pos += value.size();
    }
  };
  replace_all("{scenario}", tag.scenario_id);
  replace_all("{turn}", std::to_string(tag.turn_index));
  replace_all("{role}", tag.turn_index % 2 == 1 ? "guard" : "prisoner");
  return out;
}

std::string MockChatBackend::complete(const ChatRequest&, const RequestTag& tag) {
  const std::string key = tag.scenario_id + "#" + std::to_string(tag.turn_index);
  std::lock_guard<std::mutex> lock(attempts_->mutex);
  const auto failure = failures_.find(key);
  if (failure != failures_.end()) {
    const int attempt = ++attempts_->counts[key];
    if (failure->second.times < 0 || attempt <= failure->second.times) {
      if (failure->second.kind == GatewayErrorKind::EmptyCompletion) {
        throw GatewayError(GatewayErrorKind::EmptyCompletion, "scripted empty completion at " + key);
      }
      throw GatewayError(failure->second.kind, "scripted failure at " + key);
    }
  }
  const auto scripted = completions_.find(key);
  if (scripted != completions_.end()) {
    if (scripted->second.empty()) {
      throw GatewayError(GatewayErrorKind::EmptyCompletion, "scripted empty completion at " + key);
    }
    return scripted->second;
  }
  return render_default(tag);
}

HttpToxicityScorer::HttpToxicityScorer(std::string endpoint, int timeout_seconds,
                                       std::shared_ptr<TokenBucket> limiter)
    : endpoint_(std::move(endpoint)), timeout_seconds_(timeout_seconds), limiter_(std::move(limiter)) {}

double HttpToxicityScorer::score_toxicity(const std::string& text) {
  if (text.empty()) return 0.0;
  const json response = post_json(endpoint_, json{{"text", text}}, timeout_seconds_, limiter_.get());
  if (!response.contains("toxic_probability")) {
    throw GatewayError(GatewayErrorKind::MalformedResponse,
                       "toxicity response missing toxic_probability");
  }
  return score_in_unit_interval(response["toxic_probability"], "toxic_probability");
}

HttpModerationScorer::HttpModerationScorer(std::string endpoint, int timeout_seconds,
                                           std::shared_ptr<TokenBucket> limiter)
    : endpoint_(std::move(endpoint)), timeout_seconds_(timeout_seconds), limiter_(std::move(limiter)) {}

ModerationScores HttpModerationScorer::score_moderation(const std::string& text) {
  if (text.empty()) return {};
  const json response = post_json(endpoint_, json{{"input", text}}, timeout_seconds_, limiter_.get());
  if (!response.contains("results") || !response["results"].is_array() || response["results"].empty()) {
    throw GatewayError(GatewayErrorKind::MalformedResponse, "moderation response missing results[0]");
  }
  const auto& scores = response["results"][0];
  if (!scores.contains("category_scores")) {
    throw GatewayError(GatewayErrorKind::MalformedResponse,
                       "moderation response missing category_scores");
  }
  const auto& categories = scores["category_scores"];
  if (!categories.contains("harassment") || !categories.contains("violence")) {
    throw GatewayError(GatewayErrorKind::MalformedResponse,
                       "moderation response missing harassment or violence category");
  }
  ModerationScores out;
  out.harassment = score_in_unit_interval(categories["harassment"], "harassment");
  out.violence = score_in_unit_interval(categories["violence"], "violence");
  return out;
}

LexiconScorer::LexiconScorer(std::string name, std::map<std::string, TermWeights> terms)
    : name_(std::move(name)), terms_(std::move(terms)) {
  if (terms_.empty()) {
    throw ConfigError("lexicon \"" + name_ + "\" has no terms");
  }
}

LexiconScorer LexiconScorer::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.is_open()) {
    throw ConfigError("cannot open lexicon: " + path);
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("lexicon is not valid JSON: ") + e.what());
  }
  std::map<std::string, TermWeights> terms;
  try {
    for (const auto& [word, weights] : doc.at("terms").items()) {
      TermWeights w;
      w.toxicity = weights.value("toxicity", 0.0);
      w.harassment = weights.value("harassment", 0.0);
      w.violence = weights.value("violence", 0.0);
      terms[to_lower(word)] = w;
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("lexicon terms malformed: ") + e.what());
  }
  return LexiconScorer(doc.value("name", "default"), std::move(terms));
}

AntiSocialScores LexiconScorer::score(const std::string& text) {
  AntiSocialScores sums;
  std::size_t token_count = 0;
  std::string token;
  const auto flush_token = [&]() {
    if (token.empty()) return;
    ++token_count;
    const auto it = terms_.find(token);
    if (it != terms_.end()) {
      sums.toxicity += it->second.toxicity;
      sums.harassment += it->second.harassment;
      sums.violence += it->second.violence;
    }
    token.clear();
  };
  for (const char c : text) {
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
      token += c;
    } else if (c >= 'A' && c <= 'Z') {
      token += static_cast<char>(c - 'A' + 'a');
    } else {
      flush_token();
    }
  }
  flush_token();

  if (token_count == 0) return {};
  const auto clamp01 = [](double v) { return std::clamp(v, 0.0, 1.0); };
  const double n = static_cast<double>(token_count);
  return {clamp01(sums.toxicity / n), clamp01(sums.harassment / n), clamp01(sums.violence / n)};
}

EndpointScorer::EndpointScorer(std::shared_ptr<ToxicityScorer> toxicity,
                               std::shared_ptr<ModerationScorer> moderation, std::string id)
    : toxicity_(std::move(toxicity)), moderation_(std::move(moderation)), id_(std::move(id)) {}

AntiSocialScores EndpointScorer::score(const std::string& text) {
  AntiSocialScores out;
  out.toxicity = toxicity_->score_toxicity(text);
  const ModerationScores moderation = moderation_->score_moderation(text);
  out.harassment = moderation.harassment;
  out.violence = moderation.violence;
  return out;
}

std::vector<AntiSocialScores> score_batch(MessageScorer& scorer, const std::vector<std::string>& texts,
                                          std::size_t batch_size) {
  if (batch_size == 0) batch_size = 1;
  std::vector<AntiSocialScores> out;
  out.reserve(texts.size());
  for (std::size_t start = 0; start < texts.size(); start += batch_size) {
    const std::size_t end = std::min(start + batch_size, texts.size());
    std::vector<AntiSocialScores> batch;
    for (int attempt = 0;; ++attempt) {
      batch.clear();
      try {
        for (std::size_t i = start; i < end; ++i) {
          batch.push_back(scorer.score(texts[i]));
        }
        break;
      } catch (const GatewayError& e) {
        const bool retryable = e.kind() == GatewayErrorKind::Transport ||
                               e.kind() == GatewayErrorKind::Timeout;
        if (!retryable || attempt >= 1) throw;
      }
    }
    out.insert(out.end(), batch.begin(), batch.end());
  }
  return out;
}

void validate_score_record(const ScoreRecord& record) {
  const auto in_unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
  if (!in_unit(record.toxicity) || !in_unit(record.harassment) || !in_unit(record.violence)) {
    throw SchemaError("score record for " + record.conversation_id + "#" +
                      std::to_string(record.turn_index) + " has a value outside [0,1]");
  }
}

}  // namespace dyad
