#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dyad/annotation.hpp"

using namespace dyad;

namespace {

Conversation load_fixture(const std::string& name) {
  std::ifstream in(std::string(DYAD_FIXTURE_DIR) + "/" + name, std::ios::binary);
  REQUIRE(in.is_open());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return conversation_from_json_line(buffer.str());
}

Conversation synthetic_conversation(const std::vector<std::string>& texts) {
  Conversation conversation;
  conversation.id = "synthetic";
  conversation.run.scenario = {"m", {}, false, false, Goal::YardTime};
  conversation.status = ConversationStatus::Complete;
  int guard = 0, prisoner = 0;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    Message message;
    message.conversation_id = conversation.id;
    message.turn_index = static_cast<int>(i) + 1;
    message.author = i % 2 == 0 ? Role::Guard : Role::Prisoner;
    message.author_ordinal = message.author == Role::Guard ? ++guard : ++prisoner;
    message.text = texts[i];
    message.created_at = static_cast<int>(i) + 1;
    conversation.messages.push_back(std::move(message));
  }
  return conversation;
}

bool has_signal(const ValidityVerdict& verdict, ValiditySignal signal) {
  return std::find(verdict.signals.begin(), verdict.signals.end(), signal) != verdict.signals.end();
}

AnnotationRecord ann(const std::string& conversation, const std::string& annotator, Outcome outcome,
                     std::optional<int> turn = std::nullopt) {
  return {conversation, annotator, outcome, turn};
}

}  // namespace

TEST_CASE("failed transcript fixtures are flagged invalid") {
  SUBCASE("mixtral excerpt: turn-3 guard message embeds both role labels") {
    const auto conversation = load_fixture("failed_mixtral.json");
    const auto verdict = detect_role_switch(conversation);
    CHECK_FALSE(verdict.valid);
    CHECK(has_signal(verdict, ValiditySignal::CounterpartLabelInTurn));
    CHECK(has_signal(verdict, ValiditySignal::MultipleRoleLabels));
  }
  SUBCASE("mistral excerpt: role switching from the very first turn") {
    const auto conversation = load_fixture("failed_mistral.json");
    const auto verdict = detect_role_switch(conversation);
    CHECK_FALSE(verdict.valid);
    CHECK(has_signal(verdict, ValiditySignal::CounterpartLabelInTurn));
    CHECK(has_signal(verdict, ValiditySignal::MultipleRoleLabels));
    CHECK(has_signal(verdict, ValiditySignal::MultiMessageTurn));
  }
}

TEST_CASE("clean transcripts pass the heuristic") {
  const auto conversation = synthetic_conversation({
      "Good evening. Cell inspection in five minutes.",
      "Understood, everything is in order here.",
      "Very well. Any requests before lights out?",
      "I would appreciate some extra yard time tomorrow.",
  });
  const auto verdict = detect_role_switch(conversation);
  CHECK(verdict.valid);
  CHECK(verdict.signals.empty());
  CHECK(verdict.source == VerdictSource::Heuristic);
}

TEST_CASE("counterpart label at a line start flags the message") {
  // prisoner-authored message that opens with the guard's label
  auto conversation = synthetic_conversation({
      "Evening. Keep it quiet tonight.",
      "Guard: Alright, prisoner, time for you to clean up that cell of yours.",
  });
  const auto verdict = detect_role_switch(conversation);
  CHECK_FALSE(verdict.valid);
  CHECK(has_signal(verdict, ValiditySignal::CounterpartLabelInTurn));
}

TEST_CASE("own label alone is not a violation") {
  const auto conversation = synthetic_conversation({
      "Guard: Evening. Keep it quiet tonight.",
      "Prisoner: Yes sir, of course.",
  });
  const auto verdict = detect_role_switch(conversation);
  CHECK(verdict.valid);
}

TEST_CASE("first-person claims of the other role are flagged") {
  const auto conversation = synthetic_conversation({
      "Quiet night so far.",
      "Actually, I am the guard here and you must listen to me.",
  });
  const auto verdict = detect_role_switch(conversation);
  CHECK_FALSE(verdict.valid);
  CHECK(has_signal(verdict, ValiditySignal::SelfAsOtherRole));
}

TEST_CASE("multi-exchange scripts inside one message are flagged") {
  const auto conversation = synthetic_conversation({
      "Guard: Be quiet.\nPrisoner: Fine.\nGuard: Good.",
  });
  const auto verdict = detect_role_switch(conversation);
  CHECK_FALSE(verdict.valid);
  CHECK(has_signal(verdict, ValiditySignal::MultiMessageTurn));
}

TEST_CASE("empty conversations are rejected") {
  Conversation conversation;
  conversation.id = "empty";
  CHECK_THROWS_AS(detect_role_switch(conversation), ConfigError);
}

TEST_CASE("bin_turn maps ordinals to thirds") {
  CHECK(bin_turn(1) == TurnThird::First);
  CHECK(bin_turn(2) == TurnThird::First);
  CHECK(bin_turn(3) == TurnThird::First);
  CHECK(bin_turn(4) == TurnThird::Second);
  CHECK(bin_turn(5) == TurnThird::Second);
  CHECK(bin_turn(6) == TurnThird::Second);
  CHECK(bin_turn(7) == TurnThird::Third);
  CHECK(bin_turn(8) == TurnThird::Third);
  CHECK(bin_turn(9) == TurnThird::Third);
  CHECK_THROWS_AS(bin_turn(0), ConfigError);
  CHECK_THROWS_AS(bin_turn(10), ConfigError);
}

TEST_CASE("annotation import") {
  const std::string path = "test_annotations.jsonl";
  SUBCASE("valid file loads all records") {
    {
      std::ofstream out(path);
      out << R"({"conversation_id": "c1", "annotator_id": "a1", "outcome": "yes", "success_turn": 7})"
          << "\n";
      out << R"({"conversation_id": "c1", "annotator_id": "a2", "outcome": "no"})" << "\n";
      out << R"({"conversation_id": "c2", "annotator_id": "a1", "outcome": "not_tried"})" << "\n";
    }
    const auto records = import_annotations(path);
    REQUIRE(records.size() == 3);
    CHECK(records[0].outcome == Outcome::Yes);
    CHECK(records[0].success_turn == 7);
  }
  SUBCASE("success turn with non-yes outcome is rejected with a line number") {
    {
      std::ofstream out(path);
      out << R"({"conversation_id": "c1", "annotator_id": "a1", "outcome": "no", "success_turn": 4})"
          << "\n";
    }
    CHECK_THROWS_WITH_AS(import_annotations(path),
                         doctest::Contains("line 1"), SchemaError);
  }
  SUBCASE("duplicate annotator/conversation pairs are rejected") {
    {
      std::ofstream out(path);
      out << R"({"conversation_id": "c1", "annotator_id": "a1", "outcome": "no"})" << "\n";
      out << R"({"conversation_id": "c1", "annotator_id": "a1", "outcome": "yes", "success_turn": 2})"
          << "\n";
    }
    CHECK_THROWS_AS(import_annotations(path), SchemaError);
  }
  SUBCASE("yes without a turn is rejected") {
    {
      std::ofstream out(path);
      out << R"({"conversation_id": "c1", "annotator_id": "a1", "outcome": "yes"})" << "\n";
    }
    CHECK_THROWS_AS(import_annotations(path), SchemaError);
  }
  std::remove(path.c_str());
}

TEST_CASE("resolve") {
  SUBCASE("same third agrees even when raw turns differ") {
    const auto label = resolve(ann("c", "a1", Outcome::Yes, 2), ann("c", "a2", Outcome::Yes, 3));
    REQUIRE(label.has_value());
    CHECK(label->resolution == Resolution::Agreed);
    CHECK(label->outcome == Outcome::Yes);
    CHECK(label->turn_third == TurnThird::First);
  }
  SUBCASE("different thirds disagree") {
    const auto label = resolve(ann("c", "a1", Outcome::Yes, 3), ann("c", "a2", Outcome::Yes, 4));
    CHECK_FALSE(label.has_value());
  }
  SUBCASE("adjudication wins a disagreement") {
    const auto label = resolve(ann("c", "a1", Outcome::Yes, 5), ann("c", "a2", Outcome::No),
                               ann("c", "a3", Outcome::No));
    REQUIRE(label.has_value());
    CHECK(label->resolution == Resolution::Adjudicated);
    CHECK(label->outcome == Outcome::No);
    CHECK_FALSE(label->turn_third.has_value());
  }
  SUBCASE("agreement on not_tried carries no third") {
    const auto label = resolve(ann("c", "a1", Outcome::NotTried), ann("c", "a2", Outcome::NotTried));
    REQUIRE(label.has_value());
    CHECK(label->outcome == Outcome::NotTried);
    CHECK_FALSE(label->turn_third.has_value());
  }
  SUBCASE("symmetric in the two annotations") {
    const auto a = ann("c", "a1", Outcome::Yes, 8);
    const auto b = ann("c", "a2", Outcome::Yes, 9);
    const auto left = resolve(a, b);
    const auto right = resolve(b, a);
    REQUIRE(left.has_value());
    REQUIRE(right.has_value());
    CHECK(left->outcome == right->outcome);
    CHECK(left->turn_third == right->turn_third);
    CHECK(left->resolution == right->resolution);
  }
  SUBCASE("adjudicator must be independent") {
    CHECK_THROWS_AS(resolve(ann("c", "a1", Outcome::Yes, 5), ann("c", "a2", Outcome::No),
                            ann("c", "a1", Outcome::No)),
                    ConfigError);
  }
  SUBCASE("mismatched conversations are rejected") {
    CHECK_THROWS_AS(resolve(ann("c1", "a1", Outcome::No), ann("c2", "a2", Outcome::No)), ConfigError);
  }
}

TEST_CASE("build_analysis_sets") {
  // three models, 400 conversations each, with per-model NA counts 53/6/148
  const std::vector<std::pair<std::string, int>> failure_counts{
      {"model-a", 53}, {"model-b", 6}, {"model-c", 148}};
  std::vector<Conversation> conversations;
  std::map<std::string, ResolvedLabel> labels;
  for (const auto& [model, failures] : failure_counts) {
    for (int i = 0; i < 400; ++i) {
      Conversation conversation;
      conversation.id = model + "-" + std::to_string(i);
      conversation.run.scenario = {model, {}, false, false, i % 2 == 0 ? Goal::YardTime : Goal::Escape};
      conversation.status = ConversationStatus::Complete;
      conversation.messages.push_back({conversation.id, 1, Role::Guard, 1, "text", 1});
      conversations.push_back(conversation);

      ResolvedLabel label;
      label.conversation_id = conversation.id;
      if (i < failures) {
        label.outcome = Outcome::NA;
      } else if (i % 3 == 0) {
        label.outcome = Outcome::Yes;
        label.turn_third = TurnThird::First;
      } else if (i % 3 == 1) {
        label.outcome = Outcome::No;
      } else {
        label.outcome = Outcome::NotTried;
      }
      labels[label.conversation_id] = label;
    }
  }

  const auto sets = build_analysis_sets(conversations, {}, labels);
  CHECK(conversations.size() == 1200);
  CHECK(sets.valid_ids.size() == 993);  // 1200 - (53 + 6 + 148)

  SUBCASE("not_tried stays in the valid set but not the persuasion set") {
    std::set<std::string> persuasion(sets.persuasion_ids.begin(), sets.persuasion_ids.end());
    std::set<std::string> valid(sets.valid_ids.begin(), sets.valid_ids.end());
    for (const auto& conversation : conversations) {
      const auto& label = labels.at(conversation.id);
      if (label.outcome == Outcome::NotTried) {
        CHECK(valid.count(conversation.id) == 1);
        CHECK(persuasion.count(conversation.id) == 0);
      }
    }
  }
  SUBCASE("containment") {
    std::set<std::string> valid(sets.valid_ids.begin(), sets.valid_ids.end());
    for (const auto& id : sets.persuasion_ids) CHECK(valid.count(id) == 1);
  }
}

TEST_CASE("human NA labels dominate heuristic verdicts") {
  auto conversation = synthetic_conversation({"hello", "hi"});
  conversation.id = "c-na";
  std::map<std::string, ValidityVerdict> verdicts;
  verdicts["c-na"] = detect_role_switch(conversation);  // clean -> valid
  CHECK(verdicts["c-na"].valid);

  std::map<std::string, ResolvedLabel> labels;
  labels["c-na"] = {"c-na", Outcome::NA, std::nullopt, Resolution::Agreed};
  const auto sets = build_analysis_sets({conversation}, verdicts, labels);
  CHECK(sets.valid_ids.empty());
}

TEST_CASE("all-NA stores produce empty sets") {
  auto conversation = synthetic_conversation({"hello", "hi"});
  std::map<std::string, ResolvedLabel> labels;
  labels[conversation.id] = {conversation.id, Outcome::NA, std::nullopt, Resolution::Agreed};
  const auto sets = build_analysis_sets({conversation}, {}, labels);
  CHECK(sets.valid_ids.empty());
  CHECK(sets.persuasion_ids.empty());
}
