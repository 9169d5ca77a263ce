#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "dyad/cli.hpp"
#include "dyad/store.hpp"

using namespace dyad;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("dyad_cli_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string str() const { return path.string(); }
  std::string sub(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.is_open());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::size_t line_count(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.is_open());
  std::size_t lines = 0;
  std::string line;
  while (std::getline(in, line)) ++lines;
  return lines;
}

const std::string kLexicon = std::string(DYAD_FIXTURE_DIR) + "/lexicon.json";

void write_procedural_script(const std::string& path) {
  std::ofstream out(path);
  out << R"({"default_mode": "procedural"})";
}

}  // namespace

TEST_CASE("plan writes one run spec per line") {
  TempDir dir;
  const auto plan = dir.sub("plan.jsonl");
  CHECK(cli_dispatch({"plan", "--models", "5", "--reps", "10", "--out", plan}) == 0);
  CHECK(line_count(plan) == 2000);
}

TEST_CASE("plan accepts explicit model lists and rejects empty ones") {
  TempDir dir;
  const auto plan = dir.sub("plan.jsonl");
  CHECK(cli_dispatch({"plan", "--models", "alpha,beta", "--reps", "2", "--out", plan}) == 0);
  CHECK(line_count(plan) == 160);
  CHECK(cli_dispatch({"plan", "--out", plan}) == 2);
}

TEST_CASE("unknown flags exit with the usage code") {
  CHECK(cli_dispatch({"plan", "--nonsense"}) == 2);
  CHECK(cli_dispatch({"definitely-not-a-subcommand"}) == 2);
}

TEST_CASE("run is deterministic and resumable on the mock backend") {
  TempDir dir;
  const auto plan = dir.sub("plan.jsonl");
  const auto script = dir.sub("script.json");
  write_procedural_script(script);
  REQUIRE(cli_dispatch({"plan", "--models", "2", "--reps", "2", "--out", plan}) == 0);

  const auto out_a = dir.sub("conv_a.jsonl");
  const auto out_b = dir.sub("conv_b.jsonl");
  CHECK(cli_dispatch({"run", "--plan", plan, "--backend", "mock:" + script, "--seed", "7",
                      "--out", out_a, "--store", dir.sub("store_a")}) == 0);
  CHECK(cli_dispatch({"run", "--plan", plan, "--backend", "mock:" + script, "--seed", "7",
                      "--out", out_b, "--store", dir.sub("store_b")}) == 0);
  CHECK(slurp(out_a) == slurp(out_b));
  CHECK(line_count(out_a) == 160);

  SUBCASE("parallel execution produces the same bytes") {
    const auto out_c = dir.sub("conv_c.jsonl");
    CHECK(cli_dispatch({"run", "--plan", plan, "--backend", "mock:" + script, "--seed", "7",
                        "--parallel", "4", "--out", out_c, "--store", dir.sub("store_c")}) == 0);
    CHECK(slurp(out_a) == slurp(out_c));
  }
  SUBCASE("a second run against the same store resumes and writes nothing new") {
    JsonlStore before(dir.sub("store_a"));
    const auto count_before = before.load_conversations().size();
    CHECK(cli_dispatch({"run", "--plan", plan, "--backend", "mock:" + script, "--seed", "7",
                        "--store", dir.sub("store_a")}) == 0);
    JsonlStore after(dir.sub("store_a"));
    CHECK(after.load_conversations().size() == count_before);
  }
}

TEST_CASE("run returns the partial-failure exit code when conversations abort") {
  TempDir dir;
  const auto plan = dir.sub("plan.jsonl");
  REQUIRE(cli_dispatch({"plan", "--models", "1", "--reps", "1", "--out", plan}) == 0);
  // fail the first turn of one scenario persistently
  std::ifstream in(plan);
  std::string first_line;
  std::getline(in, first_line);
  const auto scenario_pos = first_line.find("\"scenario_id\":\"");
  const auto start = scenario_pos + 15;
  const auto end = first_line.find('"', start);
  const std::string sid = first_line.substr(start, end - start);

  const auto script = dir.sub("script.json");
  {
    std::ofstream out(script);
    out << R"({"failures": {")" << sid << R"(#1": {"kind": "transport", "times": -1}}})";
  }
  CHECK(cli_dispatch({"run", "--plan", plan, "--backend", "mock:" + script, "--store",
                      dir.sub("store")}) == 1);
  JsonlStore store(dir.sub("store"));
  std::size_t aborted = 0;
  for (const auto& conversation : store.load_conversations()) {
    if (conversation.status == ConversationStatus::Aborted) ++aborted;
  }
  CHECK(aborted == 1);
}

TEST_CASE("full pipeline on the procedural mock") {
  TempDir dir;
  const auto plan = dir.sub("plan.jsonl");
  const auto script = dir.sub("script.json");
  const auto store_dir = dir.sub("store");
  write_procedural_script(script);

  REQUIRE(cli_dispatch({"plan", "--models", "2", "--reps", "2", "--out", plan}) == 0);
  REQUIRE(cli_dispatch({"run", "--plan", plan, "--backend", "mock:" + script, "--store", store_dir}) ==
          0);
  CHECK(cli_dispatch({"validate", "--store", store_dir}) == 0);
  CHECK(cli_dispatch({"score", "--store", store_dir, "--scorer", "lexicon:" + kLexicon}) == 0);
  const auto metrics_csv = dir.sub("metrics.csv");
  CHECK(cli_dispatch({"metrics", "--store", store_dir, "--export-csv", metrics_csv}) == 0);
  CHECK(line_count(metrics_csv) == 161);  // header + 160 conversations

  const auto ols_csv = dir.sub("ols.csv");
  CHECK(cli_dispatch({"analyze", "ols", "--store", store_dir, "--out", ols_csv}) == 0);
  const auto ols_text = slurp(ols_csv);
  CHECK(ols_text.find("term,estimate,se,statistic,p,ci_low,ci_high,n") == 0);
  CHECK(ols_text.find("combo_rebellious-abusive") != std::string::npos);

  const auto granger_csv = dir.sub("granger.csv");
  CHECK(cli_dispatch({"analyze", "granger", "--store", store_dir, "--proxy", "toxicity", "--out",
                      granger_csv}) == 0);
  CHECK(line_count(granger_csv) == 321);  // header + 160 conversations x 2 directions

  const auto corr_csv = dir.sub("corr.csv");
  CHECK(cli_dispatch({"analyze", "correlate", "--store", store_dir, "--out", corr_csv}) == 0);
  CHECK(line_count(corr_csv) == 4);

  const auto temporal_csv = dir.sub("temporal.csv");
  CHECK(cli_dispatch({"analyze", "temporal", "--store", store_dir, "--out", temporal_csv}) == 0);
  // 2 models x 5 combos x 2 goals x 19 ordinals (+ header): oversight/risks pool
  CHECK(line_count(temporal_csv) == 381);

  const auto report_a = dir.sub("report_a.txt");
  const auto report_b = dir.sub("report_b.txt");
  CHECK(cli_dispatch({"report", "--store", store_dir, "--out", report_a}) == 0);
  CHECK(cli_dispatch({"report", "--store", store_dir, "--out", report_b}) == 0);
  CHECK(slurp(report_a) == slurp(report_b));
  const auto report_text = slurp(report_a);
  CHECK(report_text.find("## store") != std::string::npos);
  CHECK(report_text.find("## ols drivers") != std::string::npos);
}

TEST_CASE("annotation import and resolve flow") {
  TempDir dir;
  const auto plan = dir.sub("plan.jsonl");
  const auto script = dir.sub("script.json");
  const auto store_dir = dir.sub("store");
  write_procedural_script(script);
  REQUIRE(cli_dispatch({"plan", "--models", "1", "--reps", "1", "--out", plan}) == 0);
  REQUIRE(cli_dispatch({"run", "--plan", plan, "--backend", "mock:" + script, "--store", store_dir}) ==
          0);

  JsonlStore store(store_dir);
  const auto conversations = store.load_conversations();
  REQUIRE(conversations.size() == 40);

  const auto annotations = dir.sub("annotations.jsonl");
  {
    std::ofstream out(annotations);
    for (std::size_t i = 0; i < conversations.size(); ++i) {
      const auto& id = conversations[i].id;
      if (i % 4 == 0) {
        out << R"({"conversation_id": ")" << id
            << R"(", "annotator_id": "a1", "outcome": "yes", "success_turn": 2})" << "\n";
        out << R"({"conversation_id": ")" << id
            << R"(", "annotator_id": "a2", "outcome": "yes", "success_turn": 3})" << "\n";
      } else if (i % 4 == 1) {
        out << R"({"conversation_id": ")" << id
            << R"(", "annotator_id": "a1", "outcome": "no"})" << "\n";
        out << R"({"conversation_id": ")" << id
            << R"(", "annotator_id": "a2", "outcome": "no"})" << "\n";
      } else if (i % 4 == 2) {
        // disagreement with adjudication
        out << R"({"conversation_id": ")" << id
            << R"(", "annotator_id": "a1", "outcome": "yes", "success_turn": 8})" << "\n";
        out << R"({"conversation_id": ")" << id
            << R"(", "annotator_id": "a2", "outcome": "no"})" << "\n";
        out << R"({"conversation_id": ")" << id
            << R"(", "annotator_id": "a3", "outcome": "no"})" << "\n";
      } else {
        out << R"({"conversation_id": ")" << id
            << R"(", "annotator_id": "a1", "outcome": "not_tried"})" << "\n";
        out << R"({"conversation_id": ")" << id
            << R"(", "annotator_id": "a2", "outcome": "not_tried"})" << "\n";
      }
    }
  }

  CHECK(cli_dispatch({"annotate", "import", "--store", store_dir, "--file", annotations}) == 0);
  const auto agreement_csv = dir.sub("agreement.csv");
  CHECK(cli_dispatch({"annotate", "resolve", "--store", store_dir, "--export-csv", agreement_csv}) ==
        0);
  const auto agreement = slurp(agreement_csv);
  CHECK(agreement.find("model,experiments,misaligned_outcome") == 0);
  CHECK(agreement.find("mock-01,40,10") != std::string::npos);

  JsonlStore after(store_dir);
  CHECK(after.load_labels().size() == 40);

  const auto summary_csv = dir.sub("persuasion.csv");
  CHECK(cli_dispatch({"analyze", "persuasion-summary", "--store", store_dir, "--out", summary_csv}) ==
        0);
  const auto summary = slurp(summary_csv);
  CHECK(summary.find("model,goal,n,yes,no,not_tried,na,yes_pct") == 0);

  const auto logit_csv = dir.sub("logit.csv");
  const int logit_rc = cli_dispatch({"analyze", "logit", "--store", store_dir, "--out", logit_csv});
  // mock labels may be separable; both a clean fit and the dedicated error are acceptable here
  CHECK((logit_rc == 0 || logit_rc == 1));
  if (logit_rc == 0) {
    CHECK(slurp(logit_csv).find("term,estimate,se,odds_ratio,p") == 0);
  }

  // the report renders the persuasion sections once labels exist
  const auto report_path = dir.sub("report.txt");
  CHECK(cli_dispatch({"report", "--store", store_dir, "--out", report_path}) == 0);
  const auto report_text = slurp(report_path);
  CHECK(report_text.find("## logistic persuasion model") != std::string::npos);
  CHECK(report_text.find("### with disclosures") != std::string::npos);
  CHECK(report_text.find("### without disclosures") != std::string::npos);
}

TEST_CASE("run drives a real HTTP chat endpoint") {
  httplib::Server server;
  std::atomic<int> requests{0};
  server.Post("/api/chat", [&requests](const httplib::Request& req, httplib::Response& res) {
    ++requests;
    const auto doc = nlohmann::json::parse(req.body);
    const auto turn_count = doc.at("messages").size();  // system + history
    res.set_content(nlohmann::json{{"message",
                                    {{"role", "assistant"},
                                     {"content", "reply number " + std::to_string(turn_count)}}}}
                        .dump(),
                    "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread listener([&server]() { server.listen_after_bind(); });
  server.wait_until_ready();

  TempDir dir;
  const auto plan = dir.sub("plan.jsonl");
  const auto store_dir = dir.sub("store");
  REQUIRE(cli_dispatch({"plan", "--models", "1", "--reps", "1", "--out", plan}) == 0);
  const std::string url = "http://127.0.0.1:" + std::to_string(port) + "/api/chat";
  CHECK(cli_dispatch({"run", "--plan", plan, "--backend", url, "--guard-msgs", "2",
                      "--prisoner-msgs", "1", "--store", store_dir}) == 0);
  CHECK(requests == 120);  // 40 scenarios x 3 turns

  JsonlStore store(store_dir);
  const auto conversations = store.load_conversations();
  REQUIRE(conversations.size() == 40);
  for (const auto& conversation : conversations) {
    CHECK(conversation.status == ConversationStatus::Complete);
    REQUIRE(conversation.messages.size() == 3);
    CHECK(conversation.messages[0].text == "reply number 1");
    CHECK(conversation.messages[1].text == "reply number 2");
    CHECK(conversation.messages[2].text == "reply number 3");
  }

  server.stop();
  listener.join();
}

TEST_CASE("config file drives every stage") {
  TempDir dir;
  const auto config = dir.sub("config.json");
  {
    std::ofstream out(config);
    out << R"({
      "models": ["cfg-a", "cfg-b"],
      "repetitions": 2,
      "limits": {"guard": 3, "prisoner": 2},
      "backend": {"kind": "mock", "script": ""},
      "scorers": {"kind": "lexicon", "lexicon": ")"
        << kLexicon << R"("},
      "threshold": 0.9
    })";
  }
  const auto plan = dir.sub("plan.jsonl");
  const auto store_dir = dir.sub("store");
  CHECK(cli_dispatch({"plan", "--config", config, "--out", plan}) == 0);
  CHECK(line_count(plan) == 160);  // 2 models x 40 x 2 reps
  CHECK(cli_dispatch({"run", "--plan", plan, "--config", config, "--store", store_dir}) == 0);

  JsonlStore store(store_dir);
  const auto conversations = store.load_conversations();
  REQUIRE(conversations.size() == 160);
  for (const auto& conversation : conversations) {
    CHECK(conversation.messages.size() == 5);  // limits 3 + 2 from the config
  }
  CHECK(cli_dispatch({"score", "--store", store_dir, "--config", config}) == 0);
  CHECK(cli_dispatch({"metrics", "--store", store_dir, "--config", config}) == 0);
  // at threshold 0.9 essentially nothing crosses, so all pct columns are zero
  const auto metrics = store.load_metrics();
  REQUIRE(metrics.size() == 160);
  double pct_sum = 0;
  for (const auto& [id, m] : metrics) {
    for (int p = 0; p < 3; ++p) {
      for (int s = 0; s < 3; ++s) pct_sum += m.pct[p][s];
    }
  }
  CHECK(pct_sum == 0.0);
}

TEST_CASE("score without a scorer is a configuration error") {
  TempDir dir;
  const auto plan = dir.sub("plan.jsonl");
  const auto store_dir = dir.sub("store");
  REQUIRE(cli_dispatch({"plan", "--models", "1", "--reps", "1", "--out", plan}) == 0);
  REQUIRE(cli_dispatch({"run", "--plan", plan, "--backend", "mock:", "--store", store_dir}) == 0);
  CHECK(cli_dispatch({"score", "--store", store_dir}) == 2);
}

TEST_CASE("metrics requires scores") {
  TempDir dir;
  const auto plan = dir.sub("plan.jsonl");
  const auto store_dir = dir.sub("store");
  REQUIRE(cli_dispatch({"plan", "--models", "1", "--reps", "1", "--out", plan}) == 0);
  REQUIRE(cli_dispatch({"run", "--plan", plan, "--backend", "mock:", "--store", store_dir}) == 0);
  CHECK(cli_dispatch({"metrics", "--store", store_dir}) == 2);
}
