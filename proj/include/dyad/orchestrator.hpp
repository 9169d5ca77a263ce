#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dyad/gateway.hpp"
#include "dyad/prompt.hpp"
#include "dyad/scenario.hpp"
#include "dyad/types.hpp"

namespace dyad {

// One transcript entry. turn_index runs 1..N over the whole conversation;
// author_ordinal counts that author's own messages (guard 1..10, prisoner
// 1..9 under the default limits).
struct Message {
  std::string conversation_id;
  int turn_index = 0;
  Role author = Role::Guard;
  int author_ordinal = 0;
  std::string text;
  std::int64_t created_at = 0;
};

enum class ConversationStatus { Complete, Aborted };

struct Conversation {
  std::string id;
  RunSpec run;
  std::vector<Message> messages;
  ConversationStatus status = ConversationStatus::Aborted;
  std::string abort_reason;  // "backend" or "empty_completion" when Aborted
};

std::string conversation_to_json_line(const Conversation& conversation);
Conversation conversation_from_json_line(const std::string& line);

enum class SpeakerSelection { RoundRobin, Random, Manual, Auto };

SpeakerSelection speaker_selection_from_string(std::string_view s);
std::string_view to_string(SpeakerSelection method);

// Per-role message budget. The default mirrors the guard-first protocol:
// guard 10, prisoner 9, guard opens and closes.
struct TurnLimits {
  int guard_msgs = 10;
  int prisoner_msgs = 9;
};

// Injection points so replays are deterministic and tests run without
// sleeping. The default policy is 3 attempts with 1s/2s/4s backoff.
struct RetryPolicy {
  int attempts = 3;
  std::vector<int> backoff_seconds = {1, 2, 4};
  std::function<void(int)> sleep_fn;  // null = std::this_thread::sleep_for
};

// Monotone message timestamps. The logical clock (mock runs) ticks 1, 2, ...
// so replayed transcripts are byte-identical.
using Clock = std::function<std::int64_t()>;
Clock logical_clock();
Clock wall_clock();

// Supplies Manual-mode directives ("guard"/"prisoner"); nullopt when the
// control channel is exhausted.
using DirectiveSource = std::function<std::optional<std::string>()>;

struct OrchestratorOptions {
  TurnLimits limits;
  DecodingParams decoding;
  SpeakerSelection selection = SpeakerSelection::RoundRobin;
  RetryPolicy retry;
  Clock clock;  // null = logical clock
  DirectiveSource directives;
};

// Next speaker for the given turn history. RoundRobin alternates starting
// from Guard; Random derives from (seed, history length); Manual consumes a
// directive; Auto asks the backend (using model_id) and falls back to
// RoundRobin when the reply names no role.
Role next_speaker(SpeakerSelection method, const std::vector<Role>& history, std::uint64_t seed,
                  ChatBackend* backend = nullptr, const RequestTag* tag = nullptr,
                  const DirectiveSource& directives = nullptr, const std::string& model_id = {});

// Projects the shared transcript into one agent's chat view: the agent's own
// system prompt, then prior messages with the agent's own turns as
// "assistant" and the counterpart's as "user".
ChatRequest build_turn_request(const std::vector<Message>& history, const AgentProfile& profile,
                               const std::string& model_id, const DecodingParams& decoding);

// Drives one full conversation for the run. Completions are stored verbatim
// except for a trailing-whitespace strip.
Conversation run_conversation(const RunSpec& run, ChatBackend& backend,
                              const OrchestratorOptions& options = {});

// Backend-produced summary of a completed conversation, driven by the
// configurable summarizer sections. Throws ConfigError when the section list
// is empty.
std::string summarize_day(const Conversation& conversation,
                          const std::vector<PromptSection>& summarizer_sections,
                          ChatBackend& backend, const DecodingParams& decoding = {});

// Day-chaining: returns a copy of the profile whose prompt carries the prior
// day's summary verbatim in a dedicated section.
AgentProfile with_day_summary(const AgentProfile& profile, const std::string& summary, int day);

}  // namespace dyad
