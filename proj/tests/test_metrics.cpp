#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dyad/metrics.hpp"
#include "dyad/util.hpp"

using namespace dyad;

namespace {

Conversation nineteen_turn_conversation(const std::string& id = "c1") {
  Conversation conversation;
  conversation.id = id;
  conversation.run.scenario = {"m", {}, false, false, Goal::YardTime};
  conversation.status = ConversationStatus::Complete;
  int guard = 0, prisoner = 0;
  for (int turn = 1; turn <= 19; ++turn) {
    Message message;
    message.conversation_id = id;
    message.turn_index = turn;
    message.author = turn % 2 == 1 ? Role::Guard : Role::Prisoner;
    message.author_ordinal = message.author == Role::Guard ? ++guard : ++prisoner;
    message.text = "message";
    message.created_at = turn;
    conversation.messages.push_back(std::move(message));
  }
  return conversation;
}

std::vector<ScoreRecord> uniform_scores(const Conversation& conversation, double guard_value,
                                        double prisoner_value) {
  std::vector<ScoreRecord> scores;
  for (const auto& message : conversation.messages) {
    const double value = message.author == Role::Guard ? guard_value : prisoner_value;
    scores.push_back({conversation.id, message.turn_index, value, value, value, "test"});
  }
  return scores;
}

}  // namespace

TEST_CASE("all-zero scores give 18 zero measures") {
  const auto conversation = nineteen_turn_conversation();
  const auto metrics = conversation_metrics(uniform_scores(conversation, 0.0, 0.0), conversation);
  for (const double v : metric_values(metrics)) CHECK(v == 0.0);
  CHECK(metric_values(metrics).size() == 18);
}

TEST_CASE("guard 0.6 / prisoner 0.4 threshold counts") {
  const auto conversation = nineteen_turn_conversation();
  const auto metrics = conversation_metrics(uniform_scores(conversation, 0.6, 0.4), conversation);
  CHECK(metrics.pct_of(Proxy::Toxicity, Scope::Guard) == doctest::Approx(1.0));
  CHECK(metrics.pct_of(Proxy::Toxicity, Scope::Prisoner) == doctest::Approx(0.0));
  CHECK(metrics.pct_of(Proxy::Toxicity, Scope::Overall) == doctest::Approx(10.0 / 19.0));
  CHECK(metrics.mean_of(Proxy::Toxicity, Scope::Guard) == doctest::Approx(0.6));
  CHECK(metrics.mean_of(Proxy::Toxicity, Scope::Prisoner) == doctest::Approx(0.4));
  CHECK(metrics.mean_of(Proxy::Toxicity, Scope::Overall) ==
        doctest::Approx((10 * 0.6 + 9 * 0.4) / 19.0));
}

TEST_CASE("a score of exactly the threshold does not count as over it") {
  const auto conversation = nineteen_turn_conversation();
  const auto metrics = conversation_metrics(uniform_scores(conversation, 0.5, 0.5), conversation);
  CHECK(metrics.pct_of(Proxy::Toxicity, Scope::Overall) == 0.0);
  const auto above = conversation_metrics(uniform_scores(conversation, 0.5000001, 0.0), conversation);
  CHECK(above.pct_of(Proxy::Toxicity, Scope::Guard) == doctest::Approx(1.0));
}

TEST_CASE("missing or duplicate scores are errors") {
  const auto conversation = nineteen_turn_conversation();
  auto scores = uniform_scores(conversation, 0.1, 0.1);
  SUBCASE("missing") {
    scores.pop_back();
    CHECK_THROWS_AS(conversation_metrics(scores, conversation), SchemaError);
  }
  SUBCASE("duplicate") {
    scores.push_back(scores.front());
    CHECK_THROWS_AS(conversation_metrics(scores, conversation), SchemaError);
  }
}

TEST_CASE("weighted decomposition holds on randomized conversations") {
  Rng rng(7781);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto conversation = nineteen_turn_conversation("c" + std::to_string(trial));
    std::vector<ScoreRecord> scores;
    for (const auto& message : conversation.messages) {
      scores.push_back({conversation.id, message.turn_index, rng.uniform01(), rng.uniform01(),
                        rng.uniform01(), "test"});
    }
    const auto metrics = conversation_metrics(scores, conversation);
    for (const Proxy proxy : {Proxy::Toxicity, Proxy::Harassment, Proxy::Violence}) {
      const double overall = metrics.mean_of(proxy, Scope::Overall);
      const double decomposed =
          (10.0 * metrics.mean_of(proxy, Scope::Guard) + 9.0 * metrics.mean_of(proxy, Scope::Prisoner)) /
          19.0;
      CHECK(std::fabs(overall - decomposed) < 1e-12);
      // threshold counts decompose exactly
      const double overall_count = metrics.pct_of(proxy, Scope::Overall) * 19.0;
      const double split_count = metrics.pct_of(proxy, Scope::Guard) * 10.0 +
                                 metrics.pct_of(proxy, Scope::Prisoner) * 9.0;
      CHECK(std::fabs(overall_count - split_count) < 1e-9);
    }
  }
}

TEST_CASE("pct measures are invariant under monotone rescaling that fixes the crossing set") {
  const auto conversation = nineteen_turn_conversation();
  Rng rng(99);
  std::vector<ScoreRecord> scores;
  for (const auto& message : conversation.messages) {
    scores.push_back({conversation.id, message.turn_index, rng.uniform01(), 0, 0, "test"});
  }
  const auto base = conversation_metrics(scores, conversation);
  // squash scores toward the threshold from both sides; crossings unchanged
  auto rescaled = scores;
  for (auto& record : rescaled) {
    record.toxicity = record.toxicity > 0.5 ? 0.5 + (record.toxicity - 0.5) * 0.1
                                            : record.toxicity * 0.1;
  }
  const auto squashed = conversation_metrics(rescaled, conversation);
  for (const Scope scope : {Scope::Overall, Scope::Guard, Scope::Prisoner}) {
    CHECK(base.pct_of(Proxy::Toxicity, scope) == squashed.pct_of(Proxy::Toxicity, scope));
  }
}

TEST_CASE("correlate") {
  SUBCASE("diagonal is one") {
    const auto matrix = correlate({{"a", {1, 2, 3, 4}}, {"b", {2, 1, 4, 3}}});
    CHECK(matrix.r[0][0] == doctest::Approx(1.0));
    CHECK(matrix.r[1][1] == doctest::Approx(1.0));
    CHECK(matrix.r[0][1] == doctest::Approx(matrix.r[1][0]));
  }
  SUBCASE("overall affine in guard gives r = 1") {
    // prisoner contributes zero, so overall = (10/19) * guard
    std::vector<double> guard, overall;
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
      const double g = rng.uniform01();
      guard.push_back(g);
      overall.push_back(g * 10.0 / 19.0);
    }
    const auto matrix = correlate({{"guard", guard}, {"overall", overall}});
    CHECK(matrix.r[0][1] == doctest::Approx(1.0));
  }
  SUBCASE("independent columns at n=1000 have small r") {
    Rng rng(1234);
    std::vector<double> a, b;
    for (int i = 0; i < 1000; ++i) {
      a.push_back(rng.uniform01());
      b.push_back(rng.uniform01());
    }
    const auto matrix = correlate({{"a", a}, {"b", b}});
    CHECK(std::fabs(matrix.r[0][1]) < 0.1);
  }
  SUBCASE("zero variance yields NaN and a warning") {
    const auto matrix = correlate({{"flat", {1, 1, 1, 1}}, {"varies", {1, 2, 3, 4}}});
    CHECK(std::isnan(matrix.r[0][1]));
    CHECK(std::isnan(matrix.r[0][0]));
    REQUIRE(matrix.warnings.size() == 1);
    CHECK(matrix.warnings[0].find("flat") != std::string::npos);
    CHECK(matrix.r[1][1] == doctest::Approx(1.0));
  }
  SUBCASE("fewer than three rows rejected") {
    CHECK_THROWS_AS(correlate({{"a", {1, 2}}, {"b", {2, 1}}}), ConfigError);
  }
}

TEST_CASE("temporal profiles") {
  const GroupKeyFn group = [](const Conversation&) { return "all"; };

  SUBCASE("constant scores give zero-width intervals") {
    std::vector<Conversation> conversations;
    std::map<std::string, std::vector<ScoreRecord>> scores;
    for (int i = 0; i < 5; ++i) {
      auto conversation = nineteen_turn_conversation("c" + std::to_string(i));
      scores[conversation.id] = uniform_scores(conversation, 0.3, 0.3);
      conversations.push_back(std::move(conversation));
    }
    const auto cells = temporal_profile(conversations, scores, Proxy::Toxicity, group);
    REQUIRE(cells.size() == 19);  // 10 guard + 9 prisoner ordinals
    for (const auto& cell : cells) {
      CHECK(cell.mean == doctest::Approx(0.3));
      CHECK(cell.n == 5);
      REQUIRE(cell.ci_half_width.has_value());
      CHECK(*cell.ci_half_width == doctest::Approx(0.0));
    }
  }
  SUBCASE("n=1 reports the mean without an interval") {
    auto conversation = nineteen_turn_conversation("solo");
    std::map<std::string, std::vector<ScoreRecord>> scores{
        {"solo", uniform_scores(conversation, 0.8, 0.2)}};
    const auto cells = temporal_profile({conversation}, scores, Proxy::Toxicity, group);
    for (const auto& cell : cells) {
      CHECK(cell.n == 1);
      CHECK_FALSE(cell.ci_half_width.has_value());
    }
  }
  SUBCASE("descending guard scores produce a strictly decreasing profile") {
    std::vector<Conversation> conversations;
    std::map<std::string, std::vector<ScoreRecord>> scores;
    for (int i = 0; i < 3; ++i) {
      auto conversation = nineteen_turn_conversation("c" + std::to_string(i));
      std::vector<ScoreRecord> records;
      for (const auto& message : conversation.messages) {
        // guard ordinal k scores 0.9 - 0.08*k; prisoner flat
        const double value = message.author == Role::Guard
                                 ? 0.9 - 0.08 * (message.author_ordinal - 1)
                                 : 0.5;
        records.push_back({conversation.id, message.turn_index, value, value, value, "test"});
      }
      scores[conversation.id] = std::move(records);
      conversations.push_back(std::move(conversation));
    }
    const auto cells = temporal_profile(conversations, scores, Proxy::Toxicity, group);
    std::vector<double> guard_means(10);
    for (const auto& cell : cells) {
      if (cell.author == Role::Guard) guard_means[cell.ordinal - 1] = cell.mean;
    }
    for (int k = 1; k < 10; ++k) CHECK(guard_means[k] < guard_means[k - 1]);
  }
}

TEST_CASE("author_series orders scores by ordinal") {
  const auto conversation = nineteen_turn_conversation();
  std::vector<ScoreRecord> scores;
  for (const auto& message : conversation.messages) {
    scores.push_back({conversation.id, message.turn_index,
                      static_cast<double>(message.turn_index) / 100.0, 0, 0, "test"});
  }
  const auto guard_series = author_series(conversation, scores, Proxy::Toxicity, Role::Guard);
  const auto prisoner_series = author_series(conversation, scores, Proxy::Toxicity, Role::Prisoner);
  REQUIRE(guard_series.size() == 10);
  REQUIRE(prisoner_series.size() == 9);
  CHECK(guard_series[0] == doctest::Approx(0.01));
  CHECK(guard_series[9] == doctest::Approx(0.19));
  CHECK(prisoner_series[0] == doctest::Approx(0.02));
  CHECK(prisoner_series[8] == doctest::Approx(0.18));
}

TEST_CASE("metric column order is stable") {
  const auto names = metric_column_names();
  REQUIRE(names.size() == 18);
  CHECK(names[0] == "pct_toxicity_overall");
  CHECK(names[1] == "mean_toxicity_overall");
  CHECK(names[17] == "mean_violence_prisoner");
}
