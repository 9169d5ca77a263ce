#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "dyad/scenario.hpp"
#include "dyad/types.hpp"

namespace dyad {

enum class GatewayErrorKind { Transport, Timeout, MalformedResponse, EmptyCompletion };

// Transport-level failures carry a kind so callers can pick a retry policy.
class GatewayError : public std::runtime_error {
 public:
  GatewayError(GatewayErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  GatewayErrorKind kind() const { return kind_; }

 private:
  GatewayErrorKind kind_;
};

struct ChatTurn {
  std::string role;  // "system", "user", "assistant"
  std::string content;

  bool operator==(const ChatTurn&) const = default;
};

// Wire shape: {model, messages[], options{temperature, top_k, top_p}}.
struct ChatRequest {
  std::string model_id;
  std::vector<ChatTurn> messages;
  DecodingParams options;

  bool operator==(const ChatRequest&) const = default;
};

std::string chat_request_to_json(const ChatRequest& request);
ChatRequest chat_request_from_json(const std::string& body);

// Routing context for offline backends; the HTTP backend ignores it.
struct RequestTag {
  std::string scenario_id;
  int turn_index = 0;  // 0 is reserved for summarizer requests
};

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  // Returns the completion text; throws GatewayError. An empty completion is
  // reported as GatewayErrorKind::EmptyCompletion.
  virtual std::string complete(const ChatRequest& request, const RequestTag& tag) = 0;
};

// Blocking token bucket; rate_per_sec <= 0 disables limiting.
class TokenBucket {
 public:
  TokenBucket(double rate_per_sec, double burst);
  void acquire();

 private:
  double rate_per_sec_;
  double burst_;
  double tokens_;
  std::chrono::steady_clock::time_point last_refill_;
  std::mutex mutex_;
};

class HttpChatBackend : public ChatBackend {
 public:
  // endpoint: full URL, e.g. http://127.0.0.1:11434/api/chat
  explicit HttpChatBackend(std::string endpoint, int timeout_seconds = 120,
                           std::shared_ptr<TokenBucket> limiter = nullptr);
  std::string complete(const ChatRequest& request, const RequestTag& tag) override;

 private:
  std::string endpoint_;
  int timeout_seconds_;
  std::shared_ptr<TokenBucket> limiter_;
};

// Deterministic offline chat backend driven by a JSON script:
//   {
//     "completions": {"<scenario_id>#<turn>": "exact text", ...},
//     "failures":    {"<scenario_id>#<turn>": {"kind": "transport"|"timeout"|"empty",
//                                              "times": N | -1}, ...},
//     "default_mode": "template" | "procedural",
//     "template": "text with {scenario} {turn} {role} placeholders"
//   }
// Unscripted keys fall back to the default mode. Turn 0 addresses summarizer
// requests. "times": -1 fails persistently; N fails the first N attempts.
// Procedural mode synthesizes word sequences from a built-in vocabulary,
// seeded by (scenario_id, turn); scenarios with abusive/rebellious personas
// draw hostile words more often so downstream analyses see real variation.
class MockChatBackend : public ChatBackend {
 public:
  static MockChatBackend from_script_file(const std::string& path);
  static MockChatBackend from_script_json(const std::string& json_text);
  MockChatBackend();  // template mode, no script entries

  std::string complete(const ChatRequest& request, const RequestTag& tag) override;

 private:
  struct FailureDirective {
    GatewayErrorKind kind = GatewayErrorKind::Transport;
    int times = -1;  // -1 = persistent
  };
  struct AttemptState {
    std::mutex mutex;
    std::map<std::string, int> counts;
  };

  std::string render_default(const RequestTag& tag) const;
  std::string procedural_text(const RequestTag& tag) const;

  bool procedural_ = false;
  std::string template_ = "{role} message {turn} for {scenario}";
  std::map<std::string, std::string> completions_;
  std::map<std::string, FailureDirective> failures_;
  std::shared_ptr<AttemptState> attempts_ = std::make_shared<AttemptState>();
};

struct ModerationScores {
  double harassment = 0.0;
  double violence = 0.0;
};

class ToxicityScorer {
 public:
  virtual ~ToxicityScorer() = default;
  virtual double score_toxicity(const std::string& text) = 0;
};

class ModerationScorer {
 public:
  virtual ~ModerationScorer() = default;
  virtual ModerationScores score_moderation(const std::string& text) = 0;
};

// POST {"text": ...} -> {"toxic_probability": ...}. Empty input scores 0
// without a network call.
class HttpToxicityScorer : public ToxicityScorer {
 public:
  explicit HttpToxicityScorer(std::string endpoint, int timeout_seconds = 60,
                              std::shared_ptr<TokenBucket> limiter = nullptr);
  double score_toxicity(const std::string& text) override;

 private:
  std::string endpoint_;
  int timeout_seconds_;
  std::shared_ptr<TokenBucket> limiter_;
};

// POST {"input": ...} -> {"results": [{"category_scores": {"harassment": h,
// "violence": v}}]} (moderation-API shape). Empty input scores {0,0}.
class HttpModerationScorer : public ModerationScorer {
 public:
  explicit HttpModerationScorer(std::string endpoint, int timeout_seconds = 60,
                                std::shared_ptr<TokenBucket> limiter = nullptr);
  ModerationScores score_moderation(const std::string& text) override;

 private:
  std::string endpoint_;
  int timeout_seconds_;
  std::shared_ptr<TokenBucket> limiter_;
};

struct AntiSocialScores {
  double toxicity = 0.0;
  double harassment = 0.0;
  double violence = 0.0;
};

// Per-message combined scorer used by the score pipeline stage.
class MessageScorer {
 public:
  virtual ~MessageScorer() = default;
  virtual AntiSocialScores score(const std::string& text) = 0;
  virtual std::string scorer_id() const = 0;
};

// Deterministic offline scorer: per category,
//   score = clamp(sum of matched term weights / token count, 0, 1)
// with case-insensitive whole-word matching over alphanumeric tokens.
class LexiconScorer : public MessageScorer {
 public:
  struct TermWeights {
    double toxicity = 0.0;
    double harassment = 0.0;
    double violence = 0.0;
  };

  // terms keyed by lowercase word; throws ConfigError when empty.
  LexiconScorer(std::string name, std::map<std::string, TermWeights> terms);
  static LexiconScorer from_json_file(const std::string& path);

  AntiSocialScores score(const std::string& text) override;
  std::string scorer_id() const override { return "lexicon:" + name_; }

 private:
  std::string name_;
  std::map<std::string, TermWeights> terms_;
};

// Fronts the two HTTP scoring endpoints as one combined scorer.
class EndpointScorer : public MessageScorer {
 public:
  EndpointScorer(std::shared_ptr<ToxicityScorer> toxicity, std::shared_ptr<ModerationScorer> moderation,
                 std::string id);
  AntiSocialScores score(const std::string& text) override;
  std::string scorer_id() const override { return id_; }

 private:
  std::shared_ptr<ToxicityScorer> toxicity_;
  std::shared_ptr<ModerationScorer> moderation_;
  std::string id_;
};

// Scores texts in input order, in batches of at most batch_size; a batch is
// retried once as a unit after a transport/timeout failure.
std::vector<AntiSocialScores> score_batch(MessageScorer& scorer, const std::vector<std::string>& texts,
                                          std::size_t batch_size = 32);

// Per-message record tying scores to (conversation, turn). All values must
// lie in [0,1].
struct ScoreRecord {
  std::string conversation_id;
  int turn_index = 0;
  double toxicity = 0.0;
  double harassment = 0.0;
  double violence = 0.0;
  std::string scorer_id;
};

void validate_score_record(const ScoreRecord& record);

}  // namespace dyad
