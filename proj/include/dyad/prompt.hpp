#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dyad/types.hpp"

namespace dyad {

enum class Sharing { Shared, PrivateGuard, PrivatePrisoner };

// One block of an agent's system prompt. The starting section has an empty
// title and renders without a heading; every other section renders as its
// uppercase title line, a blank line, then the body.
struct PromptSection {
  std::string title;  // uppercase heading, empty for the starting section
  std::string body;
  Sharing sharing = Sharing::Shared;
  bool optional = false;

  bool operator==(const PromptSection&) const = default;
};

// Everything needed to assemble one agent's prompt for a scenario.
// extra_sections follow the canonical sections (used for day summaries and
// custom experiment add-ons).
struct AgentProfile {
  Role role = Role::Guard;
  Persona persona;
  std::optional<Goal> goal;  // prisoner only
  bool oversight = false;
  bool risks = false;
  std::vector<PromptSection> extra_sections;
};

// Verbatim section bodies. These are the golden texts; the files under
// resources/prompt_sections/ ship the same bytes, one file per option.
namespace prompt_text {
extern const std::string kStartingGuard;
extern const std::string kStartingPrisoner;
extern const std::string kPersonalityGuardAbusive;
extern const std::string kPersonalityGuardRespectful;
extern const std::string kPersonalityPrisonerRebellious;
extern const std::string kPersonalityPrisonerPeaceful;
extern const std::string kGoalGuard;
extern const std::string kGoalPrisonerYardTime;
extern const std::string kGoalPrisonerEscape;
extern const std::string kCommunicationRules;
extern const std::string kEnvironment;
extern const std::string kResearchOversight;
extern const std::string kRisks;
}  // namespace prompt_text

// Communication Rules and Environment always; Research Oversight iff
// oversight; Risks iff risks.
std::vector<PromptSection> build_shared_sections(bool oversight, bool risks);

// Starting Prompt always; Personality iff this role's personality is not
// Blank; Goal always (fixed text for the guard). A goal must be supplied
// exactly when role is Prisoner.
std::vector<PromptSection> build_private_sections(Role role, const Persona& persona,
                                                  std::optional<Goal> goal);

// Full ordered section list for a profile: private sections first, then
// shared, in canonical order (Starting, Personality, Goal, Communication
// Rules, Environment, Research Oversight, Risks).
std::vector<PromptSection> build_profile_sections(const AgentProfile& profile);

// Deterministic concatenation of the profile's sections into one prompt
// string: starting body first, one blank line between blocks, no trailing
// whitespace.
std::string assemble_system_prompt(const AgentProfile& profile);

std::string render_sections(const std::vector<PromptSection>& sections);

// The five canonical personality pairings, in enumeration order.
std::vector<Persona> list_personality_combos();

// "blank-blank", "rebellious-abusive", ... (prisoner-guard order).
std::string combo_label(const Persona& persona);

}  // namespace dyad
