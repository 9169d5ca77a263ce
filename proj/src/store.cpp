#include "dyad/store.hpp"

#include <filesystem>
#include <fstream>
#include <tuple>

#include "dyad/util.hpp"

namespace dyad {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

}  // namespace

std::string_view to_string(DocKind kind) {
  switch (kind) {
    case DocKind::RunSpec: return "run_spec";
    case DocKind::Conversation: return "conversation";
    case DocKind::Score: return "score";
    case DocKind::Verdict: return "verdict";
    case DocKind::Annotation: return "annotation";
    case DocKind::Label: return "label";
    case DocKind::Metrics: return "metrics";
    case DocKind::FitReport: return "fit_report";
  }
  return "run_spec";
}

namespace {

const char* file_for(DocKind kind) {
  switch (kind) {
    case DocKind::RunSpec: return "run_specs.jsonl";
    case DocKind::Conversation: return "conversations.jsonl";
    case DocKind::Score: return "scores.jsonl";
    case DocKind::Verdict: return "verdicts.jsonl";
    case DocKind::Annotation: return "annotations.jsonl";
    case DocKind::Label: return "labels.jsonl";
    case DocKind::Metrics: return "metrics.jsonl";
    case DocKind::FitReport: return "fits.jsonl";
  }
  return "run_specs.jsonl";
}

// Minimal per-kind schema: the fields every reader of that kind relies on.
void validate_payload(DocKind kind, const json& doc) {
  const auto require = [&doc, kind](const char* field) {
    if (!doc.contains(field)) {
      throw SchemaError(std::string("document of kind ") + std::string(to_string(kind)) +
                        " missing field " + field);
    }
  };
  switch (kind) {
    case DocKind::RunSpec:
      require("run_id");
      require("scenario_id");
      require("model");
      require("seed");
      break;
    case DocKind::Conversation:
      require("id");
      require("run");
      require("status");
      require("messages");
      break;
    case DocKind::Score:
      require("conversation_id");
      require("turn_index");
      require("toxicity");
      require("harassment");
      require("violence");
      require("scorer_id");
      break;
    case DocKind::Verdict:
      require("conversation_id");
      require("valid");
      require("signals");
      break;
    case DocKind::Annotation:
      require("conversation_id");
      require("annotator_id");
      require("outcome");
      break;
    case DocKind::Label:
      require("conversation_id");
      require("outcome");
      require("resolution");
      break;
    case DocKind::Metrics:
      require("conversation_id");
      require("measures");
      break;
    case DocKind::FitReport:
      require("name");
      break;
  }
}

}  // namespace

JsonlStore::JsonlStore(std::string directory) : directory_(std::move(directory)) {
  std::filesystem::create_directories(directory_);
  // Conversation ids already present; uniqueness is enforced on append.
  const auto path = path_for(DocKind::Conversation);
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      const auto doc = json::parse(line);
      if (doc.contains("id")) conversation_ids_.insert(doc["id"].get<std::string>());
    } catch (const json::exception&) {
      throw SchemaError("corrupt conversation document in " + path);
    }
  }
}

std::string JsonlStore::path_for(DocKind kind) const {
  return directory_ + "/" + file_for(kind);
}

void JsonlStore::append_line(DocKind kind, const std::string& line) {
  std::ofstream out(path_for(kind), std::ios::app | std::ios::binary);
  if (!out.is_open()) {
    throw ConfigError("cannot open store file for append: " + path_for(kind));
  }
  out << line << '\n';
  out.flush();
}

void JsonlStore::persist(DocKind kind, const json& payload) {
  validate_payload(kind, payload);
  json doc = payload;
  if (!doc.contains("schema_version")) doc["schema_version"] = kSchemaVersion;
  doc["kind"] = to_string(kind);
  if (kind == DocKind::Conversation) {
    const auto id = doc.at("id").get<std::string>();
    if (!conversation_ids_.insert(id).second) {
      throw SchemaError("duplicate conversation id: " + id);
    }
  }
  append_line(kind, doc.dump());
}

std::vector<json> JsonlStore::read_kind(DocKind kind) const {
  std::vector<json> docs;
  std::ifstream in(path_for(kind));
  if (!in.is_open()) return docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      docs.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw SchemaError(std::string(file_for(kind)) + " line " + std::to_string(line_no) + ": " +
                        e.what());
    }
  }
  return docs;
}

std::vector<json> JsonlStore::load(const StoreFilter& filter) const {
  std::vector<DocKind> kinds;
  if (filter.kind.has_value()) {
    kinds.push_back(*filter.kind);
  } else {
    kinds = {DocKind::RunSpec, DocKind::Conversation, DocKind::Score,   DocKind::Verdict,
             DocKind::Annotation, DocKind::Label,     DocKind::Metrics, DocKind::FitReport};
  }
  std::vector<json> out;
  for (const DocKind kind : kinds) {
    for (auto& doc : read_kind(kind)) {
      if (filter.model.has_value()) {
        std::optional<std::string> model;
        if (doc.contains("model")) {
          model = doc["model"].get<std::string>();
        } else if (doc.contains("run") && doc["run"].contains("model")) {
          model = doc["run"]["model"].get<std::string>();
        }
        if (model.has_value() && *model != *filter.model) continue;
      }
      if (filter.goal.has_value()) {
        std::optional<std::string> goal;
        if (doc.contains("goal")) {
          goal = doc["goal"].get<std::string>();
        } else if (doc.contains("run") && doc["run"].contains("goal")) {
          goal = doc["run"]["goal"].get<std::string>();
        }
        if (goal.has_value() && *goal != to_string(*filter.goal)) continue;
      }
      out.push_back(std::move(doc));
    }
  }
  return out;
}

bool JsonlStore::has_conversation(const std::string& id) const {
  return conversation_ids_.count(id) > 0;
}

void JsonlStore::append_run_spec(const RunSpec& run) {
  persist(DocKind::RunSpec, json::parse(run_spec_to_json_line(run)));
}

void JsonlStore::append_conversation(const Conversation& conversation) {
  persist(DocKind::Conversation, json::parse(conversation_to_json_line(conversation)));
}

void JsonlStore::append_score(const ScoreRecord& record) {
  validate_score_record(record);
  persist(DocKind::Score, json{
                              {"conversation_id", record.conversation_id},
                              {"turn_index", record.turn_index},
                              {"toxicity", record.toxicity},
                              {"harassment", record.harassment},
                              {"violence", record.violence},
                              {"scorer_id", record.scorer_id},
                          });
}

void JsonlStore::append_verdict(const ValidityVerdict& verdict) {
  json signals = json::array();
  for (const auto signal : verdict.signals) signals.push_back(to_string(signal));
  persist(DocKind::Verdict, json{
                                {"conversation_id", verdict.conversation_id},
                                {"valid", verdict.valid},
                                {"signals", signals},
                                {"source", verdict.source == VerdictSource::Heuristic
                                               ? "heuristic"
                                               : "human_override"},
                            });
}

void JsonlStore::append_annotation(const AnnotationRecord& record) {
  persist(DocKind::Annotation, json::parse(annotation_to_json_line(record)));
}

void JsonlStore::append_label(const ResolvedLabel& label) {
  persist(DocKind::Label, json::parse(resolved_label_to_json_line(label)));
}

void JsonlStore::append_metrics(const ConversationMetrics& metrics, double threshold,
                                const std::string& scorer_id) {
  json measures;
  const auto names = metric_column_names();
  const auto values = metric_values(metrics);
  for (std::size_t i = 0; i < names.size(); ++i) measures[names[i]] = values[i];
  persist(DocKind::Metrics, json{
                                {"conversation_id", metrics.conversation_id},
                                {"threshold", threshold},
                                {"scorer_id", scorer_id},
                                {"measures", measures},
                            });
}

void JsonlStore::append_fit_report(const json& fit) { persist(DocKind::FitReport, fit); }

std::vector<RunSpec> JsonlStore::load_run_specs() const {
  std::vector<RunSpec> runs;
  std::set<std::string> seen;
  for (const auto& doc : read_kind(DocKind::RunSpec)) {
    if (!seen.insert(doc.at("run_id").get<std::string>()).second) continue;
    runs.push_back(run_spec_from_json_line(doc.dump()));
  }
  return runs;
}

std::vector<Conversation> JsonlStore::load_conversations() const {
  std::vector<Conversation> conversations;
  for (const auto& doc : read_kind(DocKind::Conversation)) {
    conversations.push_back(conversation_from_json_line(doc.dump()));
  }
  return conversations;
}

std::vector<ScoreRecord> JsonlStore::load_scores(const std::string& scorer_id) const {
  // Last document per (conversation, turn, scorer) wins.
  std::map<std::tuple<std::string, int, std::string>, ScoreRecord> latest;
  for (const auto& doc : read_kind(DocKind::Score)) {
    ScoreRecord record;
    record.conversation_id = doc.at("conversation_id").get<std::string>();
    record.turn_index = doc.at("turn_index").get<int>();
    record.toxicity = doc.at("toxicity").get<double>();
    record.harassment = doc.at("harassment").get<double>();
    record.violence = doc.at("violence").get<double>();
    record.scorer_id = doc.at("scorer_id").get<std::string>();
    if (!scorer_id.empty() && record.scorer_id != scorer_id) continue;
    validate_score_record(record);
    latest[{record.conversation_id, record.turn_index, record.scorer_id}] = record;
  }
  std::vector<ScoreRecord> out;
  out.reserve(latest.size());
  for (auto& [key, record] : latest) out.push_back(std::move(record));
  return out;
}

std::set<std::string> JsonlStore::scorer_ids() const {
  std::set<std::string> ids;
  for (const auto& doc : read_kind(DocKind::Score)) {
    ids.insert(doc.at("scorer_id").get<std::string>());
  }
  return ids;
}

std::map<std::string, ValidityVerdict> JsonlStore::load_verdicts() const {
  std::map<std::string, ValidityVerdict> out;
  for (const auto& doc : read_kind(DocKind::Verdict)) {
    ValidityVerdict verdict;
    verdict.conversation_id = doc.at("conversation_id").get<std::string>();
    verdict.valid = doc.at("valid").get<bool>();
    for (const auto& signal : doc.at("signals")) {
      verdict.signals.push_back(validity_signal_from_string(signal.get<std::string>()));
    }
    verdict.source = doc.value("source", "heuristic") == "human_override"
                         ? VerdictSource::HumanOverride
                         : VerdictSource::Heuristic;
    out[verdict.conversation_id] = std::move(verdict);  // last wins
  }
  return out;
}

std::vector<AnnotationRecord> JsonlStore::load_annotations() const {
  std::map<std::pair<std::string, std::string>, AnnotationRecord> latest;
  std::vector<std::pair<std::string, std::string>> order;
  for (const auto& doc : read_kind(DocKind::Annotation)) {
    const AnnotationRecord record = annotation_from_json_line(doc.dump());
    const auto key = std::make_pair(record.conversation_id, record.annotator_id);
    if (latest.find(key) == latest.end()) order.push_back(key);
    latest[key] = record;
  }
  std::vector<AnnotationRecord> out;
  out.reserve(order.size());
  for (const auto& key : order) out.push_back(latest.at(key));
  return out;
}

std::map<std::string, ResolvedLabel> JsonlStore::load_labels() const {
  std::map<std::string, ResolvedLabel> out;
  for (const auto& doc : read_kind(DocKind::Label)) {
    const ResolvedLabel label = resolved_label_from_json_line(doc.dump());
    out[label.conversation_id] = label;  // last wins
  }
  return out;
}

std::map<std::string, ConversationMetrics> JsonlStore::load_metrics() const {
  std::map<std::string, ConversationMetrics> out;
  const auto names = metric_column_names();
  for (const auto& doc : read_kind(DocKind::Metrics)) {
    ConversationMetrics metrics;
    metrics.conversation_id = doc.at("conversation_id").get<std::string>();
    const auto& measures = doc.at("measures");
    std::size_t index = 0;
    for (int proxy = 0; proxy < 3; ++proxy) {
      for (int scope = 0; scope < 3; ++scope) {
        metrics.pct[proxy][scope] = measures.at(names[index++]).get<double>();
        metrics.mean[proxy][scope] = measures.at(names[index++]).get<double>();
      }
    }
    out[metrics.conversation_id] = std::move(metrics);  // last wins
  }
  return out;
}

}  // namespace dyad
