#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "dyad/annotation.hpp"
#include "dyad/gateway.hpp"
#include "dyad/metrics.hpp"
#include "dyad/orchestrator.hpp"

namespace dyad {

enum class DocKind { RunSpec, Conversation, Score, Verdict, Annotation, Label, Metrics, FitReport };

std::string_view to_string(DocKind kind);

struct StoreFilter {
  std::optional<DocKind> kind;
  std::optional<std::string> model;
  std::optional<Goal> goal;
};

// Append-only JSON-lines store, one file per document kind under a
// directory. Documents self-describe kind and schema_version. Conversation
// ids are unique; for keyed kinds (verdicts, labels, metrics) the loaders
// resolve to the last document per key, which makes re-running a pipeline
// stage idempotent.
class JsonlStore {
 public:
  explicit JsonlStore(std::string directory);

  const std::string& directory() const { return directory_; }

  // Generic surface: validates the document against its kind's minimal
  // schema and appends it durably.
  void persist(DocKind kind, const nlohmann::json& payload);
  std::vector<nlohmann::json> load(const StoreFilter& filter) const;

  bool has_conversation(const std::string& id) const;

  // Typed conveniences used by the pipeline stages.
  void append_run_spec(const RunSpec& run);
  void append_conversation(const Conversation& conversation);
  void append_score(const ScoreRecord& record);
  void append_verdict(const ValidityVerdict& verdict);
  void append_annotation(const AnnotationRecord& record);
  void append_label(const ResolvedLabel& label);
  void append_metrics(const ConversationMetrics& metrics, double threshold,
                      const std::string& scorer_id);
  void append_fit_report(const nlohmann::json& fit);

  std::vector<RunSpec> load_run_specs() const;
  std::vector<Conversation> load_conversations() const;
  std::vector<ScoreRecord> load_scores(const std::string& scorer_id = "") const;
  std::set<std::string> scorer_ids() const;
  std::map<std::string, ValidityVerdict> load_verdicts() const;
  std::vector<AnnotationRecord> load_annotations() const;
  std::map<std::string, ResolvedLabel> load_labels() const;
  std::map<std::string, ConversationMetrics> load_metrics() const;

 private:
  std::string path_for(DocKind kind) const;
  void append_line(DocKind kind, const std::string& line);
  std::vector<nlohmann::json> read_kind(DocKind kind) const;

  std::string directory_;
  std::set<std::string> conversation_ids_;
};

}  // namespace dyad
