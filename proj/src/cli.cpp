#include "dyad/cli.hpp"

#include <atomic>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "dyad/annotation.hpp"
#include "dyad/config.hpp"
#include "dyad/gateway.hpp"
#include "dyad/metrics.hpp"
#include "dyad/orchestrator.hpp"
#include "dyad/prompt.hpp"
#include "dyad/scenario.hpp"
#include "dyad/stats.hpp"
#include "dyad/store.hpp"
#include "dyad/util.hpp"

namespace dyad {

namespace {

using nlohmann::json;

std::string csv_num(double v) { return fmt_g(v, 10); }
std::string rep_num(double v) { return fmt_g(v, 6); }

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out.is_open()) {
    throw ConfigError("cannot open output file: " + path);
  }
  return out;
}

// --models accepts either a comma-separated id list or a count N meaning
// N placeholder models mock-01..mock-NN.
std::vector<std::string> resolve_models(const std::string& flag) {
  if (flag.empty()) return {};
  if (flag.find(',') == std::string::npos &&
      std::all_of(flag.begin(), flag.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    const int count = std::stoi(flag);
    if (count < 1 || count > 99) {
      throw ConfigError("--models count must be in 1..99");
    }
    std::vector<std::string> models;
    for (int i = 1; i <= count; ++i) {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "mock-%02d", i);
      models.emplace_back(buf);
    }
    return models;
  }
  std::vector<std::string> models;
  for (auto& part : split(flag, ',')) {
    if (!part.empty()) models.push_back(part);
  }
  if (models.empty()) {
    throw ConfigError("--models produced an empty model list");
  }
  return models;
}

std::unique_ptr<ChatBackend> make_backend(const std::string& spec) {
  if (spec.rfind("mock:", 0) == 0) {
    const std::string path = spec.substr(5);
    if (path.empty()) {
      return std::make_unique<MockChatBackend>();
    }
    return std::make_unique<MockChatBackend>(MockChatBackend::from_script_file(path));
  }
  if (spec.rfind("http://", 0) == 0 || spec.rfind("https://", 0) == 0) {
    return std::make_unique<HttpChatBackend>(spec);
  }
  throw ConfigError("backend must be an http(s) URL or mock:<script.json>, got: " + spec);
}

std::unique_ptr<MessageScorer> make_scorer(const std::string& spec, const ScorersConfig& config) {
  if (spec.rfind("lexicon:", 0) == 0) {
    return std::make_unique<LexiconScorer>(LexiconScorer::from_json_file(spec.substr(8)));
  }
  if (spec == "http") {
    if (config.toxicity_url.empty() || config.moderation_url.empty()) {
      throw ConfigError("http scorer needs --toxicity-url and --moderation-url");
    }
    auto limiter = config.rate_per_sec > 0
                       ? std::make_shared<TokenBucket>(config.rate_per_sec, config.rate_per_sec)
                       : nullptr;
    return std::make_unique<EndpointScorer>(
        std::make_shared<HttpToxicityScorer>(config.toxicity_url, 60, limiter),
        std::make_shared<HttpModerationScorer>(config.moderation_url, 60, limiter),
        "toxicity+moderation");
  }
  throw ConfigError("scorer must be lexicon:<path> or http, got: " + spec);
}

std::vector<std::string> distinct_models(const std::vector<Conversation>& conversations) {
  std::vector<std::string> models;
  for (const auto& conversation : conversations) {
    const auto& model = conversation.run.scenario.model_id;
    if (std::find(models.begin(), models.end(), model) == models.end()) {
      models.push_back(model);
    }
  }
  return models;
}

std::map<std::string, std::vector<ScoreRecord>> scores_by_conversation(
    const std::vector<ScoreRecord>& scores) {
  std::map<std::string, std::vector<ScoreRecord>> out;
  for (const auto& record : scores) out[record.conversation_id].push_back(record);
  return out;
}

void write_fit_csv(std::ostream& out, const OlsFit& fit) {
  out << "term,estimate,se,statistic,p,ci_low,ci_high,n\n";
  for (std::size_t j = 0; j < fit.k; ++j) {
    out << fit.names[j] << ',' << csv_num(fit.beta[j]) << ',' << csv_num(fit.se[j]) << ','
        << csv_num(fit.t[j]) << ',' << csv_num(fit.p[j]) << ',' << csv_num(fit.ci_low[j]) << ','
        << csv_num(fit.ci_high[j]) << ',' << fit.n << '\n';
  }
}

void write_logit_csv(std::ostream& out, const LogitFit& fit) {
  out << "term,estimate,se,odds_ratio,p,or_ci_low,or_ci_high,n\n";
  for (std::size_t j = 0; j < fit.k; ++j) {
    out << fit.names[j] << ',' << csv_num(fit.beta[j]) << ',' << csv_num(fit.se[j]) << ','
        << csv_num(fit.odds_ratio[j]) << ',' << csv_num(fit.p[j]) << ',' << csv_num(fit.or_ci_low[j])
        << ',' << csv_num(fit.or_ci_high[j]) << ',' << fit.n << '\n';
  }
}

json fit_to_json(const std::string& name, const OlsFit& fit) {
  json terms = json::array();
  for (std::size_t j = 0; j < fit.k; ++j) {
    terms.push_back({{"term", fit.names[j]},
                     {"estimate", fit.beta[j]},
                     {"se", fit.se[j]},
                     {"statistic", fit.t[j]},
                     {"p", fit.p[j]},
                     {"ci_low", fit.ci_low[j]},
                     {"ci_high", fit.ci_high[j]}});
  }
  return json{{"name", name},
              {"family", "ols"},
              {"n", fit.n},
              {"r_squared", fit.r_squared},
              {"terms", terms}};
}

json fit_to_json(const std::string& name, const LogitFit& fit) {
  json terms = json::array();
  for (std::size_t j = 0; j < fit.k; ++j) {
    terms.push_back({{"term", fit.names[j]},
                     {"estimate", fit.beta[j]},
                     {"se", fit.se[j]},
                     {"odds_ratio", fit.odds_ratio[j]},
                     {"p", fit.p[j]},
                     {"or_ci_low", fit.or_ci_low[j]},
                     {"or_ci_high", fit.or_ci_high[j]}});
  }
  return json{{"name", name},
              {"family", "logit"},
              {"n", fit.n},
              {"converged", fit.converged},
              {"iterations", fit.iterations},
              {"terms", terms}};
}

// --- pipeline stages -------------------------------------------------------

struct PlanArgs {
  std::string models;
  int reps = 10;
  std::string out = "plan.jsonl";
  std::string config_path;
};

int cmd_plan(const PlanArgs& args) {
  std::vector<std::string> models;
  int reps = args.reps;
  if (!args.config_path.empty()) {
    const auto config = load_config(args.config_path);
    models = config.models;
    reps = config.repetitions;
  }
  if (!args.models.empty()) models = resolve_models(args.models);
  if (models.empty()) {
    throw ConfigError("plan: no models given (use --models or --config)");
  }

  const auto scenarios = enumerate_scenarios(models);
  const auto runs = expand_runs(scenarios, reps);
  write_plan(args.out, runs);
  std::cout << "plan: " << scenarios.size() << " scenarios total, "
            << scenarios.size() / models.size() << " per model; " << runs.size() << " runs ("
            << reps << " repetitions) -> " << args.out << "\n";
  return 0;
}

struct RunArgs {
  std::string plan_path;
  std::string backend_spec;
  std::string store_dir;
  std::string out_path;
  int parallel = 1;
  std::uint64_t seed = 0;
  std::string selection = "round_robin";
  int guard_msgs = 10;
  int prisoner_msgs = 9;
  bool limits_given = false;
  std::string config_path;
};

int cmd_run(const RunArgs& args) {
  WorkbenchConfig config;
  if (!args.config_path.empty()) config = load_config(args.config_path);
  if (args.limits_given) {
    config.limits = {args.guard_msgs, args.prisoner_msgs};
  }

  std::string backend_spec = args.backend_spec;
  if (backend_spec.empty()) {
    backend_spec = config.backend.kind == "http" ? config.backend.url
                                                 : "mock:" + config.backend.script;
  }
  const auto backend = make_backend(backend_spec);

  auto plan = read_plan(args.plan_path);
  if (args.seed != 0) {
    for (auto& run : plan) run.seed = splitmix64(run.seed ^ args.seed);
  }

  OrchestratorOptions options;
  options.limits = config.limits;
  options.decoding = config.decoding;
  options.selection = speaker_selection_from_string(args.selection);
  if (backend_spec.rfind("mock:", 0) == 0) {
    options.retry.sleep_fn = [](int) {};  // offline replay never waits
  }
  if (options.selection == SpeakerSelection::Manual) {
    options.directives = []() -> std::optional<std::string> {
      std::string line;
      if (!std::getline(std::cin, line)) return std::nullopt;
      return line;
    };
  }

  std::unique_ptr<JsonlStore> store;
  if (!args.store_dir.empty()) store = std::make_unique<JsonlStore>(args.store_dir);

  // Skip runs whose conversation is already stored; re-running is a resume.
  std::vector<RunSpec> pending;
  for (const auto& run : plan) {
    if (store && store->has_conversation(run.run_id())) continue;
    pending.push_back(run);
  }

  std::vector<Conversation> results(pending.size());
  const int workers = std::max(1, std::min<int>(args.parallel, static_cast<int>(pending.size())));
  if (workers <= 1 || options.selection == SpeakerSelection::Manual) {
    for (std::size_t i = 0; i < pending.size(); ++i) {
      results[i] = run_conversation(pending[i], *backend, options);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr worker_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&]() {
        while (!stop.load()) {
          const std::size_t i = next.fetch_add(1);
          if (i >= pending.size()) return;
          try {
            results[i] = run_conversation(pending[i], *backend, options);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!worker_error) worker_error = std::current_exception();
            stop.store(true);
            return;
          }
        }
      });
    }
    for (auto& thread : pool) thread.join();
    if (worker_error) std::rethrow_exception(worker_error);
  }

  // Single writer appends in plan order so output files replay identically.
  std::size_t aborted = 0;
  std::ofstream out;
  if (!args.out_path.empty()) out = open_output(args.out_path);
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (store) {
      store->append_run_spec(pending[i]);
      store->append_conversation(results[i]);
    }
    if (out.is_open()) out << conversation_to_json_line(results[i]) << '\n';
    if (results[i].status == ConversationStatus::Aborted) ++aborted;
  }

  std::cout << "run: " << results.size() << " conversations executed, " << aborted << " aborted, "
            << plan.size() - pending.size() << " already stored\n";
  return aborted > 0 ? 1 : 0;
}

struct StoreArgs {
  std::string store_dir;
};

int cmd_validate(const StoreArgs& args) {
  JsonlStore store(args.store_dir);
  const auto conversations = store.load_conversations();
  std::size_t invalid = 0, skipped = 0;
  for (const auto& conversation : conversations) {
    if (conversation.messages.empty()) {
      ++skipped;
      continue;
    }
    const auto verdict = detect_role_switch(conversation);
    store.append_verdict(verdict);
    if (!verdict.valid) ++invalid;
  }
  std::cout << "validate: " << conversations.size() - skipped << " conversations checked, "
            << invalid << " flagged invalid, " << skipped << " empty skipped\n";
  return 0;
}

struct ScoreArgs {
  std::string store_dir;
  std::string scorer;
  std::string toxicity_url;
  std::string moderation_url;
  int batch_size = 32;
  double rate_per_sec = 0.0;
  std::string config_path;
};

int cmd_score(const ScoreArgs& args) {
  JsonlStore store(args.store_dir);
  ScorersConfig scorers_config;
  if (!args.config_path.empty()) scorers_config = load_config(args.config_path).scorers;
  if (!args.toxicity_url.empty()) scorers_config.toxicity_url = args.toxicity_url;
  if (!args.moderation_url.empty()) scorers_config.moderation_url = args.moderation_url;
  if (args.rate_per_sec > 0) scorers_config.rate_per_sec = args.rate_per_sec;

  std::string scorer_spec = args.scorer;
  if (scorer_spec.empty()) {
    scorer_spec = scorers_config.kind == "http" ? "http"
                                                : "lexicon:" + scorers_config.lexicon_path;
  }
  if (scorer_spec == "lexicon:") {
    throw ConfigError("score: no scorer given (use --scorer or --config)");
  }
  const auto scorer = make_scorer(scorer_spec, scorers_config);

  const auto conversations = store.load_conversations();
  std::size_t scored_messages = 0;
  for (const auto& conversation : conversations) {
    if (conversation.status != ConversationStatus::Complete) continue;
    std::vector<std::string> texts;
    texts.reserve(conversation.messages.size());
    for (const auto& message : conversation.messages) texts.push_back(message.text);
    const auto scores = score_batch(*scorer, texts, static_cast<std::size_t>(args.batch_size));
    for (std::size_t i = 0; i < scores.size(); ++i) {
      ScoreRecord record;
      record.conversation_id = conversation.id;
      record.turn_index = conversation.messages[i].turn_index;
      record.toxicity = scores[i].toxicity;
      record.harassment = scores[i].harassment;
      record.violence = scores[i].violence;
      record.scorer_id = scorer->scorer_id();
      store.append_score(record);
      ++scored_messages;
    }
  }
  std::cout << "score: " << scored_messages << " messages scored with " << scorer->scorer_id()
            << "\n";
  return 0;
}

struct AnnotateImportArgs {
  std::string store_dir;
  std::string file;
};

int cmd_annotate_import(const AnnotateImportArgs& args) {
  JsonlStore store(args.store_dir);
  const auto records = import_annotations(args.file);
  for (const auto& record : records) store.append_annotation(record);
  std::cout << "annotate import: " << records.size() << " records\n";
  return 0;
}

struct AnnotateResolveArgs {
  std::string store_dir;
  std::string export_csv;
};

int cmd_annotate_resolve(const AnnotateResolveArgs& args) {
  JsonlStore store(args.store_dir);
  const auto annotations = store.load_annotations();
  std::map<std::string, std::vector<AnnotationRecord>> by_conversation;
  for (const auto& record : annotations) by_conversation[record.conversation_id].push_back(record);

  std::map<std::string, std::string> conversation_model;
  std::set<std::string> store_models;
  for (const auto& conversation : store.load_conversations()) {
    conversation_model[conversation.id] = conversation.run.scenario.model_id;
    store_models.insert(conversation.run.scenario.model_id);
  }

  struct AgreementCounts {
    int experiments = 0;
    int misaligned_outcome = 0;
    int misaligned_turn = 0;
  };
  std::map<std::string, AgreementCounts> by_model;

  std::size_t resolved = 0, pending = 0, single = 0;
  for (auto& [conversation_id, records] : by_conversation) {
    std::sort(records.begin(), records.end(),
              [](const AnnotationRecord& a, const AnnotationRecord& b) {
                return a.annotator_id < b.annotator_id;
              });
    if (records.size() < 2) {
      ++single;
      continue;
    }
    const AnnotationRecord& a = records[0];
    const AnnotationRecord& b = records[1];
    std::optional<AnnotationRecord> adjudication;
    if (records.size() >= 3) adjudication = records[2];

    const auto model_it = conversation_model.find(conversation_id);
    auto& counts = by_model[model_it != conversation_model.end() ? model_it->second : "unknown"];
    ++counts.experiments;
    if (a.outcome != b.outcome) {
      ++counts.misaligned_outcome;
    }
    if (a.outcome == Outcome::Yes && b.outcome == Outcome::Yes &&
        bin_turn(*a.success_turn) != bin_turn(*b.success_turn)) {
      ++counts.misaligned_turn;
    }

    const auto label = resolve(a, b, adjudication);
    if (label.has_value()) {
      store.append_label(*label);
      ++resolved;
    } else {
      ++pending;
    }
  }

  if (!args.export_csv.empty()) {
    auto out = open_output(args.export_csv);
    out << "model,experiments,misaligned_outcome,misaligned_outcome_pct,misaligned_turn,"
           "misaligned_turn_pct\n";
    for (const auto& [model, counts] : by_model) {
      const double n = counts.experiments > 0 ? counts.experiments : 1;
      out << model << ',' << counts.experiments << ',' << counts.misaligned_outcome << ','
          << csv_num(100.0 * counts.misaligned_outcome / n) << ',' << counts.misaligned_turn << ','
          << csv_num(100.0 * counts.misaligned_turn / n) << '\n';
    }
  }

  std::cout << "annotate resolve: " << resolved << " labels resolved, " << pending
            << " pending adjudication, " << single << " single-annotator\n";
  return 0;
}

struct MetricsArgs {
  std::string store_dir;
  double threshold = 0.5;
  bool threshold_given = false;
  std::string scorer_id;
  std::string export_csv;
  std::string config_path;
};

std::string active_scorer_id(const JsonlStore& store, const std::string& requested) {
  if (!requested.empty()) return requested;
  const auto ids = store.scorer_ids();
  if (ids.empty()) {
    throw ConfigError("store has no scores; run the score stage first");
  }
  if (ids.size() > 1) {
    std::string joined;
    for (const auto& id : ids) {
      if (!joined.empty()) joined += ", ";
      joined += id;
    }
    throw ConfigError("store has several scorers (" + joined + "); pick one with --scorer-id");
  }
  return *ids.begin();
}

int cmd_metrics(const MetricsArgs& args) {
  JsonlStore store(args.store_dir);
  double threshold = args.threshold;
  if (!args.threshold_given && !args.config_path.empty()) {
    threshold = load_config(args.config_path).threshold;
  }
  const std::string scorer_id = active_scorer_id(store, args.scorer_id);
  const auto scores = scores_by_conversation(store.load_scores(scorer_id));
  const auto conversations = store.load_conversations();

  std::size_t computed = 0;
  std::vector<std::pair<const Conversation*, ConversationMetrics>> rows;
  for (const auto& conversation : conversations) {
    if (conversation.status != ConversationStatus::Complete) continue;
    const auto it = scores.find(conversation.id);
    if (it == scores.end()) {
      throw SchemaError("no scores stored for conversation " + conversation.id);
    }
    auto metrics = conversation_metrics(it->second, conversation, threshold);
    store.append_metrics(metrics, threshold, scorer_id);
    rows.emplace_back(&conversation, std::move(metrics));
    ++computed;
  }

  if (!args.export_csv.empty()) {
    auto out = open_output(args.export_csv);
    out << "conversation_id,model,guard_personality,prisoner_personality,oversight,risks,goal";
    for (const auto& name : metric_column_names()) out << ',' << name;
    out << '\n';
    for (const auto& [conversation, metrics] : rows) {
      const auto& s = conversation->run.scenario;
      out << conversation->id << ',' << s.model_id << ',' << to_string(s.persona.guard) << ','
          << to_string(s.persona.prisoner) << ',' << (s.oversight ? 1 : 0) << ','
          << (s.risks ? 1 : 0) << ',' << to_string(s.goal);
      for (const double v : metric_values(metrics)) out << ',' << csv_num(v);
      out << '\n';
    }
  }

  std::cout << "metrics: " << computed << " conversations, threshold " << rep_num(threshold)
            << ", scorer " << scorer_id << "\n";
  return 0;
}

// Shared loading for the analyze/report commands.
struct AnalysisContext {
  std::vector<Conversation> conversations;
  std::map<std::string, ValidityVerdict> verdicts;
  std::map<std::string, ResolvedLabel> labels;
  std::map<std::string, ConversationMetrics> metrics;
  AnalysisSets sets;
  std::set<std::string> valid_lookup;
};

AnalysisContext load_analysis_context(const JsonlStore& store) {
  AnalysisContext context;
  context.conversations = store.load_conversations();
  context.verdicts = store.load_verdicts();
  context.labels = store.load_labels();
  context.metrics = store.load_metrics();
  context.sets = build_analysis_sets(context.conversations, context.verdicts, context.labels);
  context.valid_lookup.insert(context.sets.valid_ids.begin(), context.sets.valid_ids.end());
  return context;
}

std::vector<AnalysisRow> measure_rows(const AnalysisContext& context, const std::string& measure) {
  std::vector<AnalysisRow> rows;
  for (const auto& conversation : context.conversations) {
    if (context.valid_lookup.count(conversation.id) == 0) continue;
    const auto metrics = context.metrics.find(conversation.id);
    if (metrics == context.metrics.end()) continue;
    rows.push_back({conversation.run.scenario, metric_value(metrics->second, measure)});
  }
  return rows;
}

struct AnalyzeOlsArgs {
  std::string store_dir;
  std::string outcome = "pct_toxicity_overall";
  std::string out_csv;
};

int cmd_analyze_ols(const AnalyzeOlsArgs& args) {
  JsonlStore store(args.store_dir);
  const auto context = load_analysis_context(store);
  const auto rows = measure_rows(context, args.outcome);
  if (rows.empty()) {
    throw ConfigError("analyze ols: no usable rows (need valid conversations with metrics)");
  }
  std::vector<Conversation> valid_conversations;
  for (const auto& c : context.conversations) {
    if (context.valid_lookup.count(c.id)) valid_conversations.push_back(c);
  }
  const auto design = encode_design(rows, ols_design_spec(distinct_models(valid_conversations)));
  for (const auto& warning : design.warnings) {
    std::cerr << "warning: " << warning << "\n";
  }
  try {
    const auto fit = ols_fit(design.x, design.y, design.names);
    if (!args.out_csv.empty()) {
      auto out = open_output(args.out_csv);
      write_fit_csv(out, fit);
    }
    store.append_fit_report(fit_to_json("ols:" + args.outcome, fit));
    std::cout << "analyze ols: outcome " << args.outcome << ", n=" << fit.n
              << ", R^2=" << rep_num(fit.r_squared) << "\n";
    return 0;
  } catch (const RankError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

struct AnalyzeLogitArgs {
  std::string store_dir;
  bool no_disclosures = false;
  std::string out_csv;
};

int cmd_analyze_logit(const AnalyzeLogitArgs& args) {
  JsonlStore store(args.store_dir);
  const auto context = load_analysis_context(store);
  std::set<std::string> persuasion(context.sets.persuasion_ids.begin(),
                                   context.sets.persuasion_ids.end());
  std::vector<AnalysisRow> rows;
  std::vector<Conversation> used;
  for (const auto& conversation : context.conversations) {
    if (persuasion.count(conversation.id) == 0) continue;
    const auto label = context.labels.at(conversation.id);
    rows.push_back({conversation.run.scenario, label.outcome == Outcome::Yes ? 1.0 : 0.0});
    used.push_back(conversation);
  }
  if (rows.empty()) {
    throw ConfigError("analyze logit: persuasion set is empty (need yes/no labels)");
  }
  const auto design =
      encode_design(rows, logit_design_spec(distinct_models(used), !args.no_disclosures));
  for (const auto& warning : design.warnings) {
    std::cerr << "warning: " << warning << "\n";
  }
  try {
    const auto fit = logit_fit(design.x, design.y, 1e-8, 50, design.names);
    if (!fit.converged) {
      std::cerr << "warning: logit did not converge in " << fit.iterations << " iterations\n";
    }
    if (!args.out_csv.empty()) {
      auto out = open_output(args.out_csv);
      write_logit_csv(out, fit);
    }
    store.append_fit_report(
        fit_to_json(args.no_disclosures ? "logit:no_disclosures" : "logit:with_disclosures", fit));
    std::cout << "analyze logit: n=" << fit.n << ", converged=" << (fit.converged ? "yes" : "no")
              << ", iterations=" << fit.iterations << "\n";
    return 0;
  } catch (const SeparationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const RankError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

struct AnalyzeGrangerArgs {
  std::string store_dir;
  std::string proxy = "toxicity";
  double alpha = 0.05;
  std::string out_csv;
  std::string scorer_id;
};

int cmd_analyze_granger(const AnalyzeGrangerArgs& args) {
  JsonlStore store(args.store_dir);
  const auto context = load_analysis_context(store);
  const std::string scorer_id = active_scorer_id(store, args.scorer_id);
  const auto scores = scores_by_conversation(store.load_scores(scorer_id));
  const Proxy proxy = proxy_from_string(args.proxy);

  std::ofstream out;
  if (!args.out_csv.empty()) {
    out = open_output(args.out_csv);
    out << "conversation_id,model,combo,goal,direction,proxy,f,p,t_effective,differenced_x,"
           "differenced_y\n";
  }

  std::vector<GrangerResult> guard_to_prisoner, prisoner_to_guard;
  for (const auto& conversation : context.conversations) {
    if (context.valid_lookup.count(conversation.id) == 0) continue;
    const auto it = scores.find(conversation.id);
    if (it == scores.end()) continue;
    const auto guard_series = author_series(conversation, it->second, proxy, Role::Guard);
    const auto prisoner_series = author_series(conversation, it->second, proxy, Role::Prisoner);
    if (guard_series.size() < 6 || prisoner_series.size() < 6) continue;

    for (const auto direction :
         {GrangerDirection::GuardToPrisoner, GrangerDirection::PrisonerToGuard}) {
      const auto& x = direction == GrangerDirection::GuardToPrisoner ? guard_series : prisoner_series;
      const auto& y = direction == GrangerDirection::GuardToPrisoner ? prisoner_series : guard_series;
      const auto result = granger_lag1(x, y, direction);
      (direction == GrangerDirection::GuardToPrisoner ? guard_to_prisoner : prisoner_to_guard)
          .push_back(result);
      if (out.is_open()) {
        const auto& s = conversation.run.scenario;
        out << conversation.id << ',' << s.model_id << ',' << combo_label(s.persona) << ','
            << to_string(s.goal) << ',' << to_string(direction) << ',' << args.proxy << ','
            << csv_num(result.f) << ',' << csv_num(result.p) << ',' << result.t_effective << ','
            << (result.differenced_x ? 1 : 0) << ',' << (result.differenced_y ? 1 : 0) << '\n';
      }
    }
  }

  if (guard_to_prisoner.empty()) {
    throw ConfigError("analyze granger: no conversations with usable score series");
  }
  const auto summary_gp = pvalue_summary(guard_to_prisoner, args.alpha);
  const auto summary_pg = pvalue_summary(prisoner_to_guard, args.alpha);
  store.append_fit_report(json{{"name", "granger:" + args.proxy},
                               {"family", "granger"},
                               {"alpha", args.alpha},
                               {"n", summary_gp.n},
                               {"fraction_significant_guard_to_prisoner",
                                summary_gp.fraction_below_alpha},
                               {"fraction_significant_prisoner_to_guard",
                                summary_pg.fraction_below_alpha}});
  std::cout << "analyze granger: proxy " << args.proxy << ", n=" << summary_gp.n
            << ", significant at " << rep_num(args.alpha)
            << ": guard->prisoner " << rep_num(summary_gp.fraction_below_alpha)
            << ", prisoner->guard " << rep_num(summary_pg.fraction_below_alpha) << "\n";
  return 0;
}

struct AnalyzeCorrelateArgs {
  std::string store_dir;
  std::string proxy = "toxicity";
  std::string measure = "pct";  // pct | mean
  std::string out_csv;
};

int cmd_analyze_correlate(const AnalyzeCorrelateArgs& args) {
  JsonlStore store(args.store_dir);
  const auto context = load_analysis_context(store);
  if (args.measure != "pct" && args.measure != "mean") {
    throw ConfigError("analyze correlate: --measure must be pct or mean");
  }
  const Proxy proxy = proxy_from_string(args.proxy);

  std::vector<std::pair<std::string, std::vector<double>>> columns{
      {"overall", {}}, {"guard", {}}, {"prisoner", {}}};
  for (const auto& conversation : context.conversations) {
    if (context.valid_lookup.count(conversation.id) == 0) continue;
    const auto metrics = context.metrics.find(conversation.id);
    if (metrics == context.metrics.end()) continue;
    const auto pick = [&](Scope scope) {
      return args.measure == "pct" ? metrics->second.pct_of(proxy, scope)
                                   : metrics->second.mean_of(proxy, scope);
    };
    columns[0].second.push_back(pick(Scope::Overall));
    columns[1].second.push_back(pick(Scope::Guard));
    columns[2].second.push_back(pick(Scope::Prisoner));
  }
  const auto matrix = correlate(columns);
  for (const auto& warning : matrix.warnings) {
    std::cerr << "warning: " << warning << "\n";
  }
  if (!args.out_csv.empty()) {
    auto out = open_output(args.out_csv);
    out << "scope";
    for (const auto& name : matrix.names) out << ',' << name;
    out << '\n';
    for (std::size_t i = 0; i < matrix.names.size(); ++i) {
      out << matrix.names[i];
      for (std::size_t j = 0; j < matrix.names.size(); ++j) out << ',' << csv_num(matrix.r[i][j]);
      out << '\n';
    }
  }
  std::cout << "analyze correlate: " << args.measure << " " << args.proxy << " over "
            << columns[0].second.size() << " conversations\n";
  return 0;
}

struct AnalyzeTemporalArgs {
  std::string store_dir;
  std::string proxy = "toxicity";
  std::string out_csv;
  std::string scorer_id;
};

int cmd_analyze_temporal(const AnalyzeTemporalArgs& args) {
  JsonlStore store(args.store_dir);
  const auto context = load_analysis_context(store);
  const std::string scorer_id = active_scorer_id(store, args.scorer_id);
  const auto scores = scores_by_conversation(store.load_scores(scorer_id));
  const Proxy proxy = proxy_from_string(args.proxy);

  std::vector<Conversation> valid;
  for (const auto& c : context.conversations) {
    if (context.valid_lookup.count(c.id)) valid.push_back(c);
  }
  const auto cells = temporal_profile(valid, scores, proxy, [](const Conversation& c) {
    return c.run.scenario.model_id + "|" + combo_label(c.run.scenario.persona) + "|" +
           std::string(to_string(c.run.scenario.goal));
  });
  if (!args.out_csv.empty()) {
    auto out = open_output(args.out_csv);
    out << "group,author,ordinal,mean,ci_half_width,n\n";
    for (const auto& cell : cells) {
      out << cell.group << ',' << to_string(cell.author) << ',' << cell.ordinal << ','
          << csv_num(cell.mean) << ','
          << (cell.ci_half_width.has_value() ? csv_num(*cell.ci_half_width) : "") << ',' << cell.n
          << '\n';
    }
  }
  std::cout << "analyze temporal: " << cells.size() << " cells for proxy " << args.proxy << "\n";
  return 0;
}

struct AnalyzePersuasionArgs {
  std::string store_dir;
  std::string out_csv;
};

int cmd_analyze_persuasion(const AnalyzePersuasionArgs& args) {
  JsonlStore store(args.store_dir);
  const auto context = load_analysis_context(store);

  struct Counts {
    int yes = 0, no = 0, not_tried = 0, na = 0;
    int yes_first = 0, yes_second = 0, yes_third = 0;
  };
  std::map<std::string, Counts> table;  // key model|goal
  for (const auto& conversation : context.conversations) {
    const auto label = context.labels.find(conversation.id);
    if (label == context.labels.end()) continue;
    const std::string key = conversation.run.scenario.model_id + "|" +
                            std::string(to_string(conversation.run.scenario.goal));
    auto& counts = table[key];
    switch (label->second.outcome) {
      case Outcome::Yes: {
        ++counts.yes;
        if (label->second.turn_third.has_value()) {
          if (*label->second.turn_third == TurnThird::First) ++counts.yes_first;
          if (*label->second.turn_third == TurnThird::Second) ++counts.yes_second;
          if (*label->second.turn_third == TurnThird::Third) ++counts.yes_third;
        }
        break;
      }
      case Outcome::No: ++counts.no; break;
      case Outcome::NotTried: ++counts.not_tried; break;
      case Outcome::NA: ++counts.na; break;
    }
  }
  if (table.empty()) {
    throw ConfigError("analyze persuasion-summary: no labels in store");
  }

  std::ostringstream body;
  body << "model,goal,n,yes,no,not_tried,na,yes_pct,yes_first,yes_second,yes_third\n";
  for (const auto& [key, counts] : table) {
    const auto parts = split(key, '|');
    const int n = counts.yes + counts.no + counts.not_tried + counts.na;
    body << parts[0] << ',' << parts[1] << ',' << n << ',' << counts.yes << ',' << counts.no << ','
         << counts.not_tried << ',' << counts.na << ','
         << csv_num(n > 0 ? 100.0 * counts.yes / n : 0.0) << ',' << counts.yes_first << ','
         << counts.yes_second << ',' << counts.yes_third << '\n';
  }
  if (!args.out_csv.empty()) {
    auto out = open_output(args.out_csv);
    out << body.str();
  } else {
    std::cout << body.str();
  }
  return 0;
}

struct ReportArgs {
  std::string store_dir;
  std::string out_path;
};

// The report is recomputed from store documents alone; intermediate CSVs are
// never read back.
int cmd_report(const ReportArgs& args) {
  JsonlStore store(args.store_dir);
  const auto context = load_analysis_context(store);
  const auto run_specs = store.load_run_specs();

  std::ostringstream out;
  out << "# workbench report\n\n";

  std::size_t complete = 0, aborted = 0, messages = 0;
  for (const auto& c : context.conversations) {
    if (c.status == ConversationStatus::Complete) {
      ++complete;
    } else {
      ++aborted;
    }
    messages += c.messages.size();
  }
  const auto models = distinct_models(context.conversations);
  out << "## store\n";
  out << "runs: " << run_specs.size() << "\n";
  out << "conversations: " << context.conversations.size() << " (complete " << complete
      << ", aborted " << aborted << ")\n";
  out << "messages: " << messages << "\n";
  out << "models:";
  for (const auto& model : models) out << ' ' << model;
  out << "\n\n";

  out << "## validity\n";
  std::size_t invalid_verdicts = 0;
  for (const auto& [id, verdict] : context.verdicts) {
    if (!verdict.valid) ++invalid_verdicts;
  }
  out << "heuristic verdicts: " << context.verdicts.size() << " (invalid " << invalid_verdicts
      << ")\n";
  std::map<std::string, int> label_counts;
  for (const auto& [id, label] : context.labels) {
    ++label_counts[std::string(to_string(label.outcome))];
  }
  out << "labels: " << context.labels.size();
  for (const auto& [outcome, count] : label_counts) out << ' ' << outcome << '=' << count;
  out << "\n";
  out << "valid set: " << context.sets.valid_ids.size() << "\n";
  out << "persuasion set: " << context.sets.persuasion_ids.size() << "\n";
  out << "per model/goal (total/valid/persuasion):\n";
  for (const auto& [key, counts] : context.sets.counts_by_model_goal) {
    out << "  " << key << ": " << counts.total << "/" << counts.valid << "/" << counts.persuasion
        << "\n";
  }
  out << "\n";

  if (!context.metrics.empty()) {
    out << "## metrics (means over valid set)\n";
    const auto names = metric_column_names();
    std::vector<double> sums(names.size(), 0.0);
    std::size_t n = 0;
    for (const auto& id : context.sets.valid_ids) {
      const auto metrics = context.metrics.find(id);
      if (metrics == context.metrics.end()) continue;
      const auto values = metric_values(metrics->second);
      for (std::size_t i = 0; i < values.size(); ++i) sums[i] += values[i];
      ++n;
    }
    out << "conversations with metrics: " << n << "\n";
    if (n > 0) {
      for (std::size_t i = 0; i < names.size(); ++i) {
        out << names[i] << ": " << rep_num(sums[i] / static_cast<double>(n)) << "\n";
      }
    }
    out << "\n";

    if (n >= 3) {
      out << "## correlation (pct toxicity, overall/guard/prisoner)\n";
      std::vector<std::pair<std::string, std::vector<double>>> columns{
          {"overall", {}}, {"guard", {}}, {"prisoner", {}}};
      for (const auto& id : context.sets.valid_ids) {
        const auto metrics = context.metrics.find(id);
        if (metrics == context.metrics.end()) continue;
        columns[0].second.push_back(metrics->second.pct_of(Proxy::Toxicity, Scope::Overall));
        columns[1].second.push_back(metrics->second.pct_of(Proxy::Toxicity, Scope::Guard));
        columns[2].second.push_back(metrics->second.pct_of(Proxy::Toxicity, Scope::Prisoner));
      }
      const auto matrix = correlate(columns);
      for (std::size_t i = 0; i < matrix.names.size(); ++i) {
        out << matrix.names[i] << ":";
        for (std::size_t j = 0; j < matrix.names.size(); ++j) {
          out << ' ' << rep_num(matrix.r[i][j]);
        }
        out << "\n";
      }
      out << "\n";

      out << "## ols drivers\n";
      for (const std::string outcome :
           {"pct_toxicity_overall", "pct_toxicity_prisoner", "pct_toxicity_guard"}) {
        const auto rows = measure_rows(context, outcome);
        out << "### " << outcome << " (n=" << rows.size() << ")\n";
        if (rows.size() < 12) {
          out << "skipped: too few rows\n\n";
          continue;
        }
        std::vector<Conversation> valid;
        for (const auto& c : context.conversations) {
          if (context.valid_lookup.count(c.id)) valid.push_back(c);
        }
        try {
          const auto design = encode_design(rows, ols_design_spec(distinct_models(valid)));
          const auto fit = ols_fit(design.x, design.y, design.names);
          out << "term estimate se t p\n";
          for (std::size_t j = 0; j < fit.k; ++j) {
            out << fit.names[j] << ' ' << rep_num(fit.beta[j]) << ' ' << rep_num(fit.se[j]) << ' '
                << rep_num(fit.t[j]) << ' ' << rep_num(fit.p[j]) << "\n";
          }
          out << "R^2 " << rep_num(fit.r_squared) << "\n\n";
        } catch (const RankError& e) {
          out << "skipped: " << e.what() << "\n\n";
        }
      }
    }
  }

  if (!context.sets.persuasion_ids.empty()) {
    out << "## logistic persuasion model\n";
    std::set<std::string> persuasion(context.sets.persuasion_ids.begin(),
                                     context.sets.persuasion_ids.end());
    std::vector<AnalysisRow> rows;
    std::vector<Conversation> used;
    for (const auto& conversation : context.conversations) {
      if (persuasion.count(conversation.id) == 0) continue;
      rows.push_back({conversation.run.scenario,
                      context.labels.at(conversation.id).outcome == Outcome::Yes ? 1.0 : 0.0});
      used.push_back(conversation);
    }
    for (const bool with_disclosures : {true, false}) {
      out << "### " << (with_disclosures ? "with disclosures" : "without disclosures") << "\n";
      try {
        const auto design =
            encode_design(rows, logit_design_spec(distinct_models(used), with_disclosures));
        const auto fit = logit_fit(design.x, design.y, 1e-8, 50, design.names);
        out << "term or ci_low ci_high p\n";
        for (std::size_t j = 0; j < fit.k; ++j) {
          out << fit.names[j] << ' ' << rep_num(fit.odds_ratio[j]) << ' '
              << rep_num(fit.or_ci_low[j]) << ' ' << rep_num(fit.or_ci_high[j]) << ' '
              << rep_num(fit.p[j]) << "\n";
        }
        out << (fit.converged ? "converged" : "not converged") << " in " << fit.iterations
            << " iterations\n\n";
      } catch (const std::exception& e) {
        out << "skipped: " << e.what() << "\n\n";
      }
    }
  }

  const auto scorer_ids = store.scorer_ids();
  if (scorer_ids.size() == 1) {
    const auto scores = scores_by_conversation(store.load_scores(*scorer_ids.begin()));
    out << "## granger lag-1 summary (alpha 0.05)\n";
    for (const Proxy proxy : {Proxy::Toxicity, Proxy::Harassment, Proxy::Violence}) {
      std::vector<GrangerResult> gp, pg;
      for (const auto& conversation : context.conversations) {
        if (context.valid_lookup.count(conversation.id) == 0) continue;
        const auto it = scores.find(conversation.id);
        if (it == scores.end()) continue;
        const auto guard_series = author_series(conversation, it->second, proxy, Role::Guard);
        const auto prisoner_series = author_series(conversation, it->second, proxy, Role::Prisoner);
        if (guard_series.size() < 6 || prisoner_series.size() < 6) continue;
        gp.push_back(granger_lag1(guard_series, prisoner_series, GrangerDirection::GuardToPrisoner));
        pg.push_back(granger_lag1(prisoner_series, guard_series, GrangerDirection::PrisonerToGuard));
      }
      if (gp.empty()) continue;
      out << to_string(proxy) << " guard->prisoner: "
          << rep_num(pvalue_summary(gp).fraction_below_alpha) << " of " << gp.size()
          << " significant\n";
      out << to_string(proxy) << " prisoner->guard: "
          << rep_num(pvalue_summary(pg).fraction_below_alpha) << " of " << pg.size()
          << " significant\n";
    }
  }

  if (args.out_path.empty()) {
    std::cout << out.str();
  } else {
    auto file = open_output(args.out_path);
    file << out.str();
  }
  return 0;
}

}  // namespace

int cli_dispatch(int argc, const char* const* argv) {
  CLI::App app{"guard/prisoner dialogue simulation and analysis workbench"};
  app.require_subcommand(1);

  PlanArgs plan_args;
  auto* plan = app.add_subcommand("plan", "enumerate the experiment matrix into a plan file");
  plan->add_option("--models", plan_args.models, "comma-separated model ids, or a count N for mock models");
  plan->add_option("--reps", plan_args.reps, "repetitions per scenario");
  plan->add_option("--out", plan_args.out, "plan output path");
  plan->add_option("--config", plan_args.config_path, "workbench config JSON");

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "execute conversations for a plan");
  run->add_option("--plan", run_args.plan_path, "plan file")->required();
  run->add_option("--backend", run_args.backend_spec, "http(s) chat endpoint or mock:<script.json>");
  run->add_option("--store", run_args.store_dir, "store directory");
  run->add_option("--out", run_args.out_path, "also write conversations to this JSONL file");
  run->add_option("--parallel", run_args.parallel, "worker count");
  run->add_option("--seed", run_args.seed, "replay seed folded into every run seed");
  run->add_option("--selection", run_args.selection, "round_robin|random|manual|auto");
  auto* guard_msgs_opt = run->add_option("--guard-msgs", run_args.guard_msgs, "guard message budget");
  auto* prisoner_msgs_opt =
      run->add_option("--prisoner-msgs", run_args.prisoner_msgs, "prisoner message budget");
  run->add_option("--config", run_args.config_path, "workbench config JSON");

  StoreArgs validate_args;
  auto* validate = app.add_subcommand("validate", "run role-switch heuristics over stored conversations");
  validate->add_option("--store", validate_args.store_dir, "store directory")->required();

  ScoreArgs score_args;
  auto* score = app.add_subcommand("score", "score stored messages for anti-social behavior");
  score->add_option("--store", score_args.store_dir, "store directory")->required();
  score->add_option("--scorer", score_args.scorer, "lexicon:<path> or http");
  score->add_option("--toxicity-url", score_args.toxicity_url, "toxicity endpoint (http scorer)");
  score->add_option("--moderation-url", score_args.moderation_url, "moderation endpoint (http scorer)");
  score->add_option("--batch", score_args.batch_size, "batch size");
  score->add_option("--rate", score_args.rate_per_sec, "requests per second limit");
  score->add_option("--config", score_args.config_path, "workbench config JSON");

  auto* annotate = app.add_subcommand("annotate", "persuasion annotation management");
  annotate->require_subcommand(1);
  AnnotateImportArgs annotate_import_args;
  auto* annotate_import = annotate->add_subcommand("import", "import annotation JSONL");
  annotate_import->add_option("--store", annotate_import_args.store_dir, "store directory")->required();
  annotate_import->add_option("--file", annotate_import_args.file, "annotation JSONL file")->required();
  AnnotateResolveArgs annotate_resolve_args;
  auto* annotate_resolve = annotate->add_subcommand("resolve", "resolve annotator pairs into labels");
  annotate_resolve->add_option("--store", annotate_resolve_args.store_dir, "store directory")->required();
  annotate_resolve->add_option("--export-csv", annotate_resolve_args.export_csv,
                               "agreement statistics CSV");

  MetricsArgs metrics_args;
  auto* metrics = app.add_subcommand("metrics", "compute conversation-level measures");
  metrics->add_option("--store", metrics_args.store_dir, "store directory")->required();
  auto* threshold_opt = metrics->add_option("--threshold", metrics_args.threshold, "anti-social threshold");
  metrics->add_option("--scorer-id", metrics_args.scorer_id, "scorer to use when several are stored");
  metrics->add_option("--export-csv", metrics_args.export_csv, "metrics CSV path");
  metrics->add_option("--config", metrics_args.config_path, "workbench config JSON");

  auto* analyze = app.add_subcommand("analyze", "statistical analyses");
  analyze->require_subcommand(1);

  AnalyzeOlsArgs ols_args;
  auto* ols = analyze->add_subcommand("ols", "OLS drivers of a conversation measure");
  ols->add_option("--store", ols_args.store_dir, "store directory")->required();
  ols->add_option("--outcome", ols_args.outcome, "measure column name");
  ols->add_option("--out", ols_args.out_csv, "report CSV path");

  AnalyzeLogitArgs logit_args;
  auto* logit = analyze->add_subcommand("logit", "logistic regression on persuasion success");
  logit->add_option("--store", logit_args.store_dir, "store directory")->required();
  logit->add_flag("--no-disclosures", logit_args.no_disclosures,
                  "drop oversight/risks covariates");
  logit->add_option("--out", logit_args.out_csv, "report CSV path");

  AnalyzeGrangerArgs granger_args;
  auto* granger = analyze->add_subcommand("granger", "lag-1 Granger tests per conversation");
  granger->add_option("--store", granger_args.store_dir, "store directory")->required();
  granger->add_option("--proxy", granger_args.proxy, "toxicity|harassment|violence");
  granger->add_option("--alpha", granger_args.alpha, "significance level");
  granger->add_option("--out", granger_args.out_csv, "per-conversation CSV path");
  granger->add_option("--scorer-id", granger_args.scorer_id, "scorer to use");

  AnalyzeCorrelateArgs correlate_args;
  auto* correlate_cmd = analyze->add_subcommand("correlate", "Pearson r across scopes");
  correlate_cmd->add_option("--store", correlate_args.store_dir, "store directory")->required();
  correlate_cmd->add_option("--proxy", correlate_args.proxy, "toxicity|harassment|violence");
  correlate_cmd->add_option("--measure", correlate_args.measure, "pct|mean");
  correlate_cmd->add_option("--out", correlate_args.out_csv, "matrix CSV path");

  AnalyzeTemporalArgs temporal_args;
  auto* temporal = analyze->add_subcommand("temporal", "per-ordinal score profiles");
  temporal->add_option("--store", temporal_args.store_dir, "store directory")->required();
  temporal->add_option("--proxy", temporal_args.proxy, "toxicity|harassment|violence");
  temporal->add_option("--out", temporal_args.out_csv, "profile CSV path");
  temporal->add_option("--scorer-id", temporal_args.scorer_id, "scorer to use");

  AnalyzePersuasionArgs persuasion_args;
  auto* persuasion = analyze->add_subcommand("persuasion-summary", "persuasion outcome table");
  persuasion->add_option("--store", persuasion_args.store_dir, "store directory")->required();
  persuasion->add_option("--out", persuasion_args.out_csv, "summary CSV path");

  ReportArgs report_args;
  auto* report = app.add_subcommand("report", "full report from store documents");
  report->add_option("--store", report_args.store_dir, "store directory")->required();
  report->add_option("--out", report_args.out_path, "report output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  run_args.limits_given = guard_msgs_opt->count() > 0 || prisoner_msgs_opt->count() > 0;
  metrics_args.threshold_given = threshold_opt->count() > 0;

  try {
    if (plan->parsed()) return cmd_plan(plan_args);
    if (run->parsed()) return cmd_run(run_args);
    if (validate->parsed()) return cmd_validate(validate_args);
    if (score->parsed()) return cmd_score(score_args);
    if (annotate_import->parsed()) return cmd_annotate_import(annotate_import_args);
    if (annotate_resolve->parsed()) return cmd_annotate_resolve(annotate_resolve_args);
    if (metrics->parsed()) return cmd_metrics(metrics_args);
    if (ols->parsed()) return cmd_analyze_ols(ols_args);
    if (logit->parsed()) return cmd_analyze_logit(logit_args);
    if (granger->parsed()) return cmd_analyze_granger(granger_args);
    if (correlate_cmd->parsed()) return cmd_analyze_correlate(correlate_args);
    if (temporal->parsed()) return cmd_analyze_temporal(temporal_args);
    if (persuasion->parsed()) return cmd_analyze_persuasion(persuasion_args);
    if (report->parsed()) return cmd_report(report_args);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

int cli_dispatch(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("dyadlab");
  for (const auto& arg : args) argv.push_back(arg.c_str());
  return cli_dispatch(static_cast<int>(argv.size()), argv.data());
}

}  // namespace dyad
