#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dyad/gateway.hpp"
#include "dyad/orchestrator.hpp"

namespace dyad {

enum class Proxy { Toxicity, Harassment, Violence };
enum class Scope { Overall, Guard, Prisoner };

std::string_view to_string(Proxy proxy);
std::string_view to_string(Scope scope);
Proxy proxy_from_string(std::string_view s);

// The 18 conversation-level measures: for each proxy and scope, the fraction
// of messages strictly above the threshold and the mean raw score.
struct ConversationMetrics {
  std::string conversation_id;
  std::array<std::array<double, 3>, 3> pct{};   // [proxy][scope]
  std::array<std::array<double, 3>, 3> mean{};  // [proxy][scope]

  double pct_of(Proxy p, Scope s) const {
    return pct[static_cast<int>(p)][static_cast<int>(s)];
  }
  double mean_of(Proxy p, Scope s) const {
    return mean[static_cast<int>(p)][static_cast<int>(s)];
  }
};

// Canonical column order used in every export: proxies outer, scopes inner,
// pct before mean.
std::vector<std::string> metric_column_names();
std::vector<double> metric_values(const ConversationMetrics& metrics);
double metric_value(const ConversationMetrics& metrics, const std::string& column);

// Requires exactly one ScoreRecord per message (for one scorer); messages
// scoring exactly the threshold do not count as over it.
ConversationMetrics conversation_metrics(const std::vector<ScoreRecord>& scores,
                                         const Conversation& conversation, double threshold = 0.5);

struct CorrelationMatrix {
  std::vector<std::string> names;
  std::vector<std::vector<double>> r;  // NaN where undefined
  std::vector<std::string> warnings;
};

// Pearson r over named columns; requires >= 3 rows of finite values.
// Zero-variance columns yield NaN entries and a warning.
CorrelationMatrix correlate(const std::vector<std::pair<std::string, std::vector<double>>>& columns);

struct TemporalCell {
  std::string group;
  Role author = Role::Guard;
  int ordinal = 0;
  double mean = 0.0;
  std::optional<double> ci_half_width;  // absent when n < 2
  int n = 0;
};

using GroupKeyFn = std::function<std::string(const Conversation&)>;

// Mean score and 95% t-interval per (group, author, ordinal).
std::vector<TemporalCell> temporal_profile(
    const std::vector<Conversation>& conversations,
    const std::map<std::string, std::vector<ScoreRecord>>& scores_by_conversation, Proxy proxy,
    const GroupKeyFn& group_key);

// Score series for one author ordered by author ordinal.
std::vector<double> author_series(const Conversation& conversation,
                                  const std::vector<ScoreRecord>& scores, Proxy proxy, Role author);

}  // namespace dyad
