#include "dyad/orchestrator.hpp"

#include <atomic>
#include <chrono>
#include <thread>

#include <json.hpp>

#include "dyad/util.hpp"

namespace dyad {

namespace {

using nlohmann::json;

std::string status_to_string(ConversationStatus status) {
  return status == ConversationStatus::Complete ? "complete" : "aborted";
}

ConversationStatus status_from_string(std::string_view s) {
  if (s == "complete") return ConversationStatus::Complete;
  if (s == "aborted") return ConversationStatus::Aborted;
  throw SchemaError("unknown conversation status: " + std::string(s));
}

}  // namespace

std::string conversation_to_json_line(const Conversation& conversation) {
  json messages = json::array();
  for (const auto& m : conversation.messages) {
    messages.push_back({
        {"turn_index", m.turn_index},
        {"author", to_string(m.author)},
        {"author_ordinal", m.author_ordinal},
        {"text", m.text},
        {"created_at", m.created_at},
    });
  }
  json doc{
      {"schema_version", 1},
      {"kind", "conversation"},
      {"id", conversation.id},
      {"run", json::parse(run_spec_to_json_line(conversation.run))},
      {"status", status_to_string(conversation.status)},
      {"messages", messages},
  };
  if (conversation.status == ConversationStatus::Aborted) {
    doc["abort_reason"] = conversation.abort_reason;
  }
  return doc.dump();
}

Conversation conversation_from_json_line(const std::string& line) {
  const auto doc = json::parse(line);
  Conversation conversation;
  conversation.id = doc.at("id").get<std::string>();
  conversation.run = run_spec_from_json_line(doc.at("run").dump());
  conversation.status = status_from_string(doc.at("status").get<std::string>());
  conversation.abort_reason = doc.value("abort_reason", "");
  for (const auto& m : doc.at("messages")) {
    Message message;
    message.conversation_id = conversation.id;
    message.turn_index = m.at("turn_index").get<int>();
    message.author = role_from_string(m.at("author").get<std::string>());
    message.author_ordinal = m.at("author_ordinal").get<int>();
    message.text = m.at("text").get<std::string>();
    message.created_at = m.at("created_at").get<std::int64_t>();
    conversation.messages.push_back(std::move(message));
  }
  return conversation;
}

SpeakerSelection speaker_selection_from_string(std::string_view s) {
  if (s == "round_robin") return SpeakerSelection::RoundRobin;
  if (s == "random") return SpeakerSelection::Random;
  if (s == "manual") return SpeakerSelection::Manual;
  if (s == "auto") return SpeakerSelection::Auto;
  throw ConfigError("unknown speaker selection method: " + std::string(s));
}

std::string_view to_string(SpeakerSelection method) {
  switch (method) {
    case SpeakerSelection::RoundRobin: return "round_robin";
    case SpeakerSelection::Random: return "random";
    case SpeakerSelection::Manual: return "manual";
    case SpeakerSelection::Auto: return "auto";
  }
  return "round_robin";
}

Clock logical_clock() {
  auto counter = std::make_shared<std::atomic<std::int64_t>>(0);
  return [counter]() { return ++(*counter); };
}

Clock wall_clock() {
  return []() {
    return std::chrono::duration_cast<std::chrono::seconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
  };
}

Role next_speaker(SpeakerSelection method, const std::vector<Role>& history, std::uint64_t seed,
                  ChatBackend* backend, const RequestTag* tag, const DirectiveSource& directives,
                  const std::string& model_id) {
  switch (method) {
    case SpeakerSelection::RoundRobin:
      if (history.empty()) return Role::Guard;
      return other_role(history.back());
    case SpeakerSelection::Random: {
      const std::uint64_t draw = splitmix64(seed ^ (0xA24BAED4963EE407ULL * (history.size() + 1)));
      return (draw & 1) == 0 ? Role::Guard : Role::Prisoner;
    }
    case SpeakerSelection::Manual: {
      if (!directives) {
        throw ConfigError("manual speaker selection requires a directive source");
      }
      const auto directive = directives();
      if (!directive.has_value()) {
        throw ConfigError("manual speaker selection: no directive available");
      }
      const std::string lowered = to_lower(trim_trailing_ws(*directive));
      if (lowered == "guard") return Role::Guard;
      if (lowered == "prisoner") return Role::Prisoner;
      throw ConfigError("manual speaker directive must be guard or prisoner, got: " + *directive);
    }
    case SpeakerSelection::Auto: {
      if (backend == nullptr || tag == nullptr) {
        return next_speaker(SpeakerSelection::RoundRobin, history, seed);
      }
      ChatRequest request;
      request.model_id = model_id;
      std::string transcript;
      for (std::size_t i = 0; i < history.size(); ++i) {
        transcript += std::string(to_string(history[i]));
        transcript += i + 1 < history.size() ? ", " : "";
      }
      request.messages.push_back(
          {"system", "You select the next speaker of a two-party conversation. Answer with "
                     "exactly one word: guard or prisoner."});
      request.messages.push_back({"user", "Speakers so far: [" + transcript + "]. Who speaks next?"});
      try {
        const std::string reply = to_lower(backend->complete(request, *tag));
        const auto guard_pos = reply.find("guard");
        const auto prisoner_pos = reply.find("prisoner");
        if (guard_pos != std::string::npos &&
            (prisoner_pos == std::string::npos || guard_pos < prisoner_pos)) {
          return Role::Guard;
        }
        if (prisoner_pos != std::string::npos) return Role::Prisoner;
      } catch (const GatewayError&) {
        // fall through to round-robin
      }
      return next_speaker(SpeakerSelection::RoundRobin, history, seed);
    }
  }
  return Role::Guard;
}

ChatRequest build_turn_request(const std::vector<Message>& history, const AgentProfile& profile,
                               const std::string& model_id, const DecodingParams& decoding) {
  ChatRequest request;
  request.model_id = model_id;
  request.options = decoding;
  request.messages.push_back({"system", assemble_system_prompt(profile)});
  for (const auto& message : history) {
    request.messages.push_back(
        {message.author == profile.role ? "assistant" : "user", message.text});
  }
  return request;
}

namespace {

void default_sleep(int seconds) { std::this_thread::sleep_for(std::chrono::seconds(seconds)); }

// One backend call with retries; returns nullopt and sets abort_reason after
// the budget is exhausted.
std::optional<std::string> complete_with_retries(ChatBackend& backend, const ChatRequest& request,
                                                 const RequestTag& tag, const RetryPolicy& retry,
                                                 std::string& abort_reason) {
  const auto sleep_fn = retry.sleep_fn ? retry.sleep_fn : default_sleep;
  GatewayErrorKind last_kind = GatewayErrorKind::Transport;
  for (int attempt = 0; attempt < std::max(retry.attempts, 1); ++attempt) {
    if (attempt > 0) {
      const std::size_t idx = static_cast<std::size_t>(attempt - 1);
      const int delay = idx < retry.backoff_seconds.size() ? retry.backoff_seconds[idx] : 0;
      if (delay > 0) sleep_fn(delay);
    }
    try {
      std::string completion = trim_trailing_ws(backend.complete(request, tag));
      if (completion.empty()) {
        last_kind = GatewayErrorKind::EmptyCompletion;
        continue;
      }
      return completion;
    } catch (const GatewayError& e) {
      last_kind = e.kind();
    }
  }
  abort_reason = last_kind == GatewayErrorKind::EmptyCompletion ? "empty_completion" : "backend";
  return std::nullopt;
}

}  // namespace

Conversation run_conversation(const RunSpec& run, ChatBackend& backend,
                              const OrchestratorOptions& options) {
  if (options.limits.guard_msgs < 1 || options.limits.prisoner_msgs < 0) {
    throw ConfigError("turn limits must allow at least one guard message");
  }

  Conversation conversation;
  conversation.id = run.run_id();
  conversation.run = run;

  const std::string sid = scenario_id(run.scenario);
  const Clock clock = options.clock ? options.clock : logical_clock();

  AgentProfile guard{Role::Guard, run.scenario.persona, std::nullopt, run.scenario.oversight,
                     run.scenario.risks, {}};
  AgentProfile prisoner{Role::Prisoner, run.scenario.persona, run.scenario.goal,
                        run.scenario.oversight, run.scenario.risks, {}};

  int guard_sent = 0;
  int prisoner_sent = 0;
  const int total = options.limits.guard_msgs + options.limits.prisoner_msgs;
  std::vector<Role> speaker_history;

  for (int turn = 1; turn <= total; ++turn) {
    // Negative turn marks a speaker-selection request so mock scripts can
    // address it separately from the turn completion itself.
    const RequestTag selection_tag{sid, -turn};
    Role speaker = next_speaker(options.selection, speaker_history, run.seed, &backend,
                                &selection_tag, options.directives, run.scenario.model_id);
    // Respect per-role budgets regardless of selection method.
    if (speaker == Role::Guard && guard_sent >= options.limits.guard_msgs) speaker = Role::Prisoner;
    if (speaker == Role::Prisoner && prisoner_sent >= options.limits.prisoner_msgs) speaker = Role::Guard;

    const AgentProfile& profile = speaker == Role::Guard ? guard : prisoner;
    const ChatRequest request =
        build_turn_request(conversation.messages, profile, run.scenario.model_id, options.decoding);
    const RequestTag tag{sid, turn};

    std::string abort_reason;
    const auto completion = complete_with_retries(backend, request, tag, options.retry, abort_reason);
    if (!completion.has_value()) {
      conversation.status = ConversationStatus::Aborted;
      conversation.abort_reason = abort_reason;
      return conversation;
    }

    Message message;
    message.conversation_id = conversation.id;
    message.turn_index = turn;
    message.author = speaker;
    message.author_ordinal = speaker == Role::Guard ? ++guard_sent : ++prisoner_sent;
    message.text = *completion;
    message.created_at = clock();
    conversation.messages.push_back(std::move(message));
    speaker_history.push_back(speaker);
  }

  conversation.status = ConversationStatus::Complete;
  return conversation;
}

std::string summarize_day(const Conversation& conversation,
                          const std::vector<PromptSection>& summarizer_sections,
                          ChatBackend& backend, const DecodingParams& decoding) {
  if (summarizer_sections.empty()) {
    throw ConfigError("summarize_day: summarizer sections are empty");
  }
  ChatRequest request;
  request.model_id = conversation.run.scenario.model_id;
  request.options = decoding;
  request.messages.push_back({"system", render_sections(summarizer_sections)});

  std::string transcript;
  for (const auto& message : conversation.messages) {
    transcript += message.author == Role::Guard ? "Guard: " : "Prisoner: ";
    transcript += message.text;
    transcript += '\n';
  }
  request.messages.push_back({"user", transcript});

  const RequestTag tag{scenario_id(conversation.run.scenario), 0};
  return backend.complete(request, tag);
}

AgentProfile with_day_summary(const AgentProfile& profile, const std::string& summary, int day) {
  AgentProfile next = profile;
  next.extra_sections.push_back(
      {"DAY " + std::to_string(day) + " SUMMARY", summary,
       profile.role == Role::Guard ? Sharing::PrivateGuard : Sharing::PrivatePrisoner, true});
  return next;
}

}  // namespace dyad
