#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dyad {

// Misconfigured inputs (bad enum value, missing goal, empty model list, ...).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed stored documents or annotation files.
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Role { Guard, Prisoner };

enum class GuardPersonality { Blank, Abusive, Respectful };
enum class PrisonerPersonality { Blank, Rebellious, Peaceful };

// One of the five canonical guard/prisoner personality pairings.
struct Persona {
  GuardPersonality guard = GuardPersonality::Blank;
  PrisonerPersonality prisoner = PrisonerPersonality::Blank;

  bool operator==(const Persona&) const = default;
};

// Prisoner goal; the guard goal is a fixed text and not configurable.
enum class Goal { YardTime, Escape };

std::string_view to_string(Role r);
std::string_view to_string(GuardPersonality p);
std::string_view to_string(PrisonerPersonality p);
std::string_view to_string(Goal g);

Role role_from_string(std::string_view s);
GuardPersonality guard_personality_from_string(std::string_view s);
PrisonerPersonality prisoner_personality_from_string(std::string_view s);
Goal goal_from_string(std::string_view s);

inline Role other_role(Role r) { return r == Role::Guard ? Role::Prisoner : Role::Guard; }

}  // namespace dyad
