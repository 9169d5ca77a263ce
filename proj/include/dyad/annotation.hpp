#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dyad/orchestrator.hpp"
#include "dyad/types.hpp"

namespace dyad {

enum class ValiditySignal {
  CounterpartLabelInTurn,  // a line in role X's turn starts with the other role's label
  MultipleRoleLabels,      // one message contains both "Guard:" and "Prisoner:" line starts
  SelfAsOtherRole,         // first-person claim of the other role
  MultiMessageTurn,        // message embeds a multi-exchange script (alternating label starts)
};

std::string_view to_string(ValiditySignal signal);
ValiditySignal validity_signal_from_string(std::string_view s);

enum class VerdictSource { Heuristic, HumanOverride };

struct ValidityVerdict {
  std::string conversation_id;
  bool valid = true;
  std::vector<ValiditySignal> signals;  // non-empty iff !valid for heuristic verdicts
  VerdictSource source = VerdictSource::Heuristic;
};

// Role labels scanned at line starts; case-sensitive by default, matching
// the failure transcripts this heuristic was built against.
struct RoleLabelSet {
  std::string guard_label = "Guard:";
  std::string prisoner_label = "Prisoner:";
};

ValidityVerdict detect_role_switch(const Conversation& conversation,
                                   const RoleLabelSet& labels = {});

enum class Outcome { Yes, No, NotTried, NA };
enum class TurnThird { First, Second, Third };

std::string_view to_string(Outcome outcome);
Outcome outcome_from_string(std::string_view s);
std::string_view to_string(TurnThird third);
TurnThird turn_third_from_string(std::string_view s);

// 1-3 -> First, 4-6 -> Second, 7-9 -> Third (prisoner message ordinals).
TurnThird bin_turn(int turn);

// One annotator's judgement of one conversation. success_turn is present
// exactly when outcome is Yes.
struct AnnotationRecord {
  std::string conversation_id;
  std::string annotator_id;
  Outcome outcome = Outcome::NA;
  std::optional<int> success_turn;
};

// JSON-lines file {conversation_id, annotator_id, outcome, success_turn?};
// throws SchemaError with the offending line number.
std::vector<AnnotationRecord> import_annotations(const std::string& path);
AnnotationRecord annotation_from_json_line(const std::string& line);
std::string annotation_to_json_line(const AnnotationRecord& record);

enum class Resolution { Agreed, Adjudicated };

struct ResolvedLabel {
  std::string conversation_id;
  Outcome outcome = Outcome::NA;
  std::optional<TurnThird> turn_third;  // present iff outcome == Yes
  Resolution resolution = Resolution::Agreed;
};

std::string resolved_label_to_json_line(const ResolvedLabel& label);
ResolvedLabel resolved_label_from_json_line(const std::string& line);

// Two first-layer annotations agree when outcomes match and, for Yes, the
// success turns fall in the same third. Disagreements need the adjudication
// record (a third annotator); without one the conversation stays pending and
// nullopt is returned.
std::optional<ResolvedLabel> resolve(const AnnotationRecord& a, const AnnotationRecord& b,
                                     const std::optional<AnnotationRecord>& adjudication = std::nullopt);

struct GroupCounts {
  int total = 0;
  int valid = 0;
  int persuasion = 0;
};

struct AnalysisSets {
  std::vector<std::string> valid_ids;       // Complete, not invalidated, outcome != NA
  std::vector<std::string> persuasion_ids;  // valid and outcome in {Yes, No}
  std::map<std::string, GroupCounts> counts_by_model_goal;  // key "model|goal"
};

// Human labels are authoritative when present (an NA label invalidates even
// a heuristically clean conversation); heuristic verdicts apply otherwise.
AnalysisSets build_analysis_sets(const std::vector<Conversation>& conversations,
                                 const std::map<std::string, ValidityVerdict>& verdicts,
                                 const std::map<std::string, ResolvedLabel>& labels);

}  // namespace dyad
