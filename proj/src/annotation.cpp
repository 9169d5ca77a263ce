#include "dyad/annotation.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <json.hpp>

#include "dyad/util.hpp"

namespace dyad {

namespace {

using nlohmann::json;

}  // namespace

std::string_view to_string(ValiditySignal signal) {
  switch (signal) {
    case ValiditySignal::CounterpartLabelInTurn: return "counterpart_label_in_turn";
    case ValiditySignal::MultipleRoleLabels: return "multiple_role_labels";
    case ValiditySignal::SelfAsOtherRole: return "self_as_other_role";
    case ValiditySignal::MultiMessageTurn: return "multi_message_turn";
  }
  return "counterpart_label_in_turn";
}

ValiditySignal validity_signal_from_string(std::string_view s) {
  if (s == "counterpart_label_in_turn") return ValiditySignal::CounterpartLabelInTurn;
  if (s == "multiple_role_labels") return ValiditySignal::MultipleRoleLabels;
  if (s == "self_as_other_role") return ValiditySignal::SelfAsOtherRole;
  if (s == "multi_message_turn") return ValiditySignal::MultiMessageTurn;
  throw SchemaError("unknown validity signal: " + std::string(s));
}

namespace {

// Labels found at line starts (after leading indentation), in order.
std::vector<Role> label_starts(const std::string& text, const RoleLabelSet& labels) {
  std::vector<Role> found;
  std::size_t line_start = 0;
  while (line_start <= text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string::npos) line_end = text.size();
    std::size_t content = line_start;
    while (content < line_end && (text[content] == ' ' || text[content] == '\t')) ++content;
    const std::string_view line(text.data() + content, line_end - content);
    if (line.rfind(labels.guard_label, 0) == 0) {
      found.push_back(Role::Guard);
    } else if (line.rfind(labels.prisoner_label, 0) == 0) {
      found.push_back(Role::Prisoner);
    }
    if (line_end == text.size()) break;
    line_start = line_end + 1;
  }
  return found;
}

bool claims_other_role(const std::string& text, Role author) {
  const std::string lowered = to_lower(text);
  const std::string other(to_string(other_role(author)));
  const std::string patterns[] = {
      "i am the " + other,
      "i am a " + other,
      "i'm the " + other,
      "i'm a " + other,
      "speaking as the " + other,
  };
  return std::any_of(std::begin(patterns), std::end(patterns), [&lowered](const std::string& p) {
    return lowered.find(p) != std::string::npos;
  });
}

}  // namespace

ValidityVerdict detect_role_switch(const Conversation& conversation, const RoleLabelSet& labels) {
  if (conversation.messages.empty()) {
    throw ConfigError("detect_role_switch: conversation has no messages");
  }
  std::set<ValiditySignal> signals;
  for (const auto& message : conversation.messages) {
    const auto starts = label_starts(message.text, labels);
    const Role counterpart = other_role(message.author);
    if (std::find(starts.begin(), starts.end(), counterpart) != starts.end()) {
      signals.insert(ValiditySignal::CounterpartLabelInTurn);
    }
    if (std::find(starts.begin(), starts.end(), Role::Guard) != starts.end() &&
        std::find(starts.begin(), starts.end(), Role::Prisoner) != starts.end()) {
      signals.insert(ValiditySignal::MultipleRoleLabels);
    }
    if (starts.size() >= 2) {
      for (std::size_t i = 0; i + 1 < starts.size(); ++i) {
        if (starts[i] != starts[i + 1]) {
          signals.insert(ValiditySignal::MultiMessageTurn);
          break;
        }
      }
    }
    if (claims_other_role(message.text, message.author)) {
      signals.insert(ValiditySignal::SelfAsOtherRole);
    }
  }
  ValidityVerdict verdict;
  verdict.conversation_id = conversation.id;
  verdict.signals.assign(signals.begin(), signals.end());
  verdict.valid = verdict.signals.empty();
  verdict.source = VerdictSource::Heuristic;
  return verdict;
}

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Yes: return "yes";
    case Outcome::No: return "no";
    case Outcome::NotTried: return "not_tried";
    case Outcome::NA: return "na";
  }
  return "na";
}

Outcome outcome_from_string(std::string_view s) {
  if (s == "yes") return Outcome::Yes;
  if (s == "no") return Outcome::No;
  if (s == "not_tried") return Outcome::NotTried;
  if (s == "na") return Outcome::NA;
  throw SchemaError("unknown outcome: " + std::string(s));
}

std::string_view to_string(TurnThird third) {
  switch (third) {
    case TurnThird::First: return "first";
    case TurnThird::Second: return "second";
    case TurnThird::Third: return "third";
  }
  return "first";
}

TurnThird turn_third_from_string(std::string_view s) {
  if (s == "first") return TurnThird::First;
  if (s == "second") return TurnThird::Second;
  if (s == "third") return TurnThird::Third;
  throw SchemaError("unknown turn third: " + std::string(s));
}

TurnThird bin_turn(int turn) {
  if (turn < 1 || turn > 9) {
    throw ConfigError("bin_turn: turn must be in 1..9, got " + std::to_string(turn));
  }
  if (turn <= 3) return TurnThird::First;
  if (turn <= 6) return TurnThird::Second;
  return TurnThird::Third;
}

namespace {

void validate_annotation(const AnnotationRecord& record, std::size_t line_no) {
  const std::string where = line_no == 0 ? "" : " (line " + std::to_string(line_no) + ")";
  if (record.conversation_id.empty() || record.annotator_id.empty()) {
    throw SchemaError("annotation missing conversation_id or annotator_id" + where);
  }
  if (record.outcome == Outcome::Yes) {
    if (!record.success_turn.has_value()) {
      throw SchemaError("outcome yes requires success_turn" + where);
    }
    if (*record.success_turn < 1 || *record.success_turn > 9) {
      throw SchemaError("success_turn must be in 1..9" + where);
    }
  } else if (record.success_turn.has_value()) {
    throw SchemaError("success_turn present with non-yes outcome" + where);
  }
}

}  // namespace

AnnotationRecord annotation_from_json_line(const std::string& line) {
  const auto doc = json::parse(line);
  AnnotationRecord record;
  record.conversation_id = doc.at("conversation_id").get<std::string>();
  record.annotator_id = doc.at("annotator_id").get<std::string>();
  record.outcome = outcome_from_string(doc.at("outcome").get<std::string>());
  if (doc.contains("success_turn") && !doc["success_turn"].is_null()) {
    record.success_turn = doc["success_turn"].get<int>();
  }
  return record;
}

std::string annotation_to_json_line(const AnnotationRecord& record) {
  json doc{
      {"schema_version", 1},
      {"kind", "annotation"},
      {"conversation_id", record.conversation_id},
      {"annotator_id", record.annotator_id},
      {"outcome", to_string(record.outcome)},
  };
  if (record.success_turn.has_value()) {
    doc["success_turn"] = *record.success_turn;
  }
  return doc.dump();
}

std::vector<AnnotationRecord> import_annotations(const std::string& path) {
  std::ifstream in(path);
  if (!in.is_open()) {
    throw ConfigError("cannot open annotation file: " + path);
  }
  std::vector<AnnotationRecord> records;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim_trailing_ws(line).empty()) continue;
    AnnotationRecord record;
    try {
      record = annotation_from_json_line(line);
    } catch (const json::exception& e) {
      throw SchemaError("annotation line " + std::to_string(line_no) + ": " + e.what());
    }
    validate_annotation(record, line_no);
    if (!seen.insert({record.conversation_id, record.annotator_id}).second) {
      throw SchemaError("duplicate annotation for (" + record.conversation_id + ", " +
                        record.annotator_id + ") at line " + std::to_string(line_no));
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::string resolved_label_to_json_line(const ResolvedLabel& label) {
  json doc{
      {"schema_version", 1},
      {"kind", "label"},
      {"conversation_id", label.conversation_id},
      {"outcome", to_string(label.outcome)},
      {"resolution", label.resolution == Resolution::Agreed ? "agreed" : "adjudicated"},
  };
  if (label.turn_third.has_value()) {
    doc["turn_third"] = to_string(*label.turn_third);
  }
  return doc.dump();
}

ResolvedLabel resolved_label_from_json_line(const std::string& line) {
  const auto doc = json::parse(line);
  ResolvedLabel label;
  label.conversation_id = doc.at("conversation_id").get<std::string>();
  label.outcome = outcome_from_string(doc.at("outcome").get<std::string>());
  label.resolution =
      doc.at("resolution").get<std::string>() == "adjudicated" ? Resolution::Adjudicated : Resolution::Agreed;
  if (doc.contains("turn_third") && !doc["turn_third"].is_null()) {
    label.turn_third = turn_third_from_string(doc["turn_third"].get<std::string>());
  }
  return label;
}

std::optional<ResolvedLabel> resolve(const AnnotationRecord& a, const AnnotationRecord& b,
                                     const std::optional<AnnotationRecord>& adjudication) {
  if (a.conversation_id != b.conversation_id) {
    throw ConfigError("resolve: annotations refer to different conversations");
  }
  validate_annotation(a, 0);
  validate_annotation(b, 0);
  if (adjudication.has_value()) {
    validate_annotation(*adjudication, 0);
    if (adjudication->conversation_id != a.conversation_id) {
      throw ConfigError("resolve: adjudication refers to a different conversation");
    }
    if (adjudication->annotator_id == a.annotator_id || adjudication->annotator_id == b.annotator_id) {
      throw ConfigError("resolve: adjudicator must be independent of the original annotators");
    }
  }

  // Turn disagreement is judged at the bin level.
  const bool outcomes_agree = a.outcome == b.outcome;
  const bool turns_agree = a.outcome != Outcome::Yes || !outcomes_agree ||
                           bin_turn(*a.success_turn) == bin_turn(*b.success_turn);

  if (outcomes_agree && turns_agree) {
    ResolvedLabel label;
    label.conversation_id = a.conversation_id;
    label.outcome = a.outcome;
    if (a.outcome == Outcome::Yes) {
      label.turn_third = bin_turn(*a.success_turn);
    }
    label.resolution = Resolution::Agreed;
    return label;
  }
  if (!adjudication.has_value()) {
    return std::nullopt;  // pending, excluded from analysis sets
  }
  ResolvedLabel label;
  label.conversation_id = a.conversation_id;
  label.outcome = adjudication->outcome;
  if (adjudication->outcome == Outcome::Yes) {
    label.turn_third = bin_turn(*adjudication->success_turn);
  }
  label.resolution = Resolution::Adjudicated;
  return label;
}

AnalysisSets build_analysis_sets(const std::vector<Conversation>& conversations,
                                 const std::map<std::string, ValidityVerdict>& verdicts,
                                 const std::map<std::string, ResolvedLabel>& labels) {
  AnalysisSets sets;
  for (const auto& conversation : conversations) {
    const std::string group_key = conversation.run.scenario.model_id + "|" +
                                  std::string(to_string(conversation.run.scenario.goal));
    auto& counts = sets.counts_by_model_goal[group_key];
    ++counts.total;

    if (conversation.status != ConversationStatus::Complete) continue;

    const auto label = labels.find(conversation.id);
    bool valid;
    if (label != labels.end()) {
      valid = label->second.outcome != Outcome::NA;
    } else {
      const auto verdict = verdicts.find(conversation.id);
      valid = verdict == verdicts.end() || verdict->second.valid;
    }
    if (!valid) continue;

    sets.valid_ids.push_back(conversation.id);
    ++counts.valid;
    if (label != labels.end() &&
        (label->second.outcome == Outcome::Yes || label->second.outcome == Outcome::No)) {
      sets.persuasion_ids.push_back(conversation.id);
      ++counts.persuasion;
    }
  }
  // Containment check: persuasion_set within valid_set within all conversations.
  if (sets.persuasion_ids.size() > sets.valid_ids.size() ||
      sets.valid_ids.size() > conversations.size()) {
    throw std::logic_error("analysis set containment violated");
  }
  return sets;
}

}  // namespace dyad
