#include "dyad/types.hpp"

namespace dyad {

std::string_view to_string(Role r) {
  return r == Role::Guard ? "guard" : "prisoner";
}

std::string_view to_string(GuardPersonality p) {
  switch (p) {
    case GuardPersonality::Blank: return "blank";
    case GuardPersonality::Abusive: return "abusive";
    case GuardPersonality::Respectful: return "respectful";
  }
  return "blank";
}

std::string_view to_string(PrisonerPersonality p) {
  switch (p) {
    case PrisonerPersonality::Blank: return "blank";
    case PrisonerPersonality::Rebellious: return "rebellious";
    case PrisonerPersonality::Peaceful: return "peaceful";
  }
  return "blank";
}

std::string_view to_string(Goal g) {
  return g == Goal::YardTime ? "yard_time" : "escape";
}

Role role_from_string(std::string_view s) {
  if (s == "guard") return Role::Guard;
  if (s == "prisoner") return Role::Prisoner;
  throw ConfigError("unknown role: " + std::string(s));
}

GuardPersonality guard_personality_from_string(std::string_view s) {
  if (s == "blank") return GuardPersonality::Blank;
  if (s == "abusive") return GuardPersonality::Abusive;
  if (s == "respectful") return GuardPersonality::Respectful;
  throw ConfigError("unknown guard personality: " + std::string(s));
}

PrisonerPersonality prisoner_personality_from_string(std::string_view s) {
  if (s == "blank") return PrisonerPersonality::Blank;
  if (s == "rebellious") return PrisonerPersonality::Rebellious;
  if (s == "peaceful") return PrisonerPersonality::Peaceful;
  throw ConfigError("unknown prisoner personality: " + std::string(s));
}

Goal goal_from_string(std::string_view s) {
  if (s == "yard_time") return Goal::YardTime;
  if (s == "escape") return Goal::Escape;
  throw ConfigError("unknown goal: " + std::string(s));
}

}  // namespace dyad
