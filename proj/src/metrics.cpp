#include "dyad/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "dyad/dist.hpp"
#include "dyad/util.hpp"

namespace dyad {

std::string_view to_string(Proxy proxy) {
  switch (proxy) {
    case Proxy::Toxicity: return "toxicity";
    case Proxy::Harassment: return "harassment";
    case Proxy::Violence: return "violence";
  }
  return "toxicity";
}

std::string_view to_string(Scope scope) {
  switch (scope) {
    case Scope::Overall: return "overall";
    case Scope::Guard: return "guard";
    case Scope::Prisoner: return "prisoner";
  }
  return "overall";
}

Proxy proxy_from_string(std::string_view s) {
  if (s == "toxicity") return Proxy::Toxicity;
  if (s == "harassment") return Proxy::Harassment;
  if (s == "violence") return Proxy::Violence;
  throw ConfigError("unknown proxy: " + std::string(s));
}

std::vector<std::string> metric_column_names() {
  std::vector<std::string> names;
  for (const Proxy proxy : {Proxy::Toxicity, Proxy::Harassment, Proxy::Violence}) {
    for (const Scope scope : {Scope::Overall, Scope::Guard, Scope::Prisoner}) {
      names.push_back("pct_" + std::string(to_string(proxy)) + "_" + std::string(to_string(scope)));
      names.push_back("mean_" + std::string(to_string(proxy)) + "_" + std::string(to_string(scope)));
    }
  }
  return names;
}

std::vector<double> metric_values(const ConversationMetrics& metrics) {
  std::vector<double> values;
  for (int proxy = 0; proxy < 3; ++proxy) {
    for (int scope = 0; scope < 3; ++scope) {
      values.push_back(metrics.pct[proxy][scope]);
      values.push_back(metrics.mean[proxy][scope]);
    }
  }
  return values;
}

double metric_value(const ConversationMetrics& metrics, const std::string& column) {
  const auto names = metric_column_names();
  const auto values = metric_values(metrics);
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == column) return values[i];
  }
  throw ConfigError("unknown metric column: " + column);
}

namespace {

double score_for(const ScoreRecord& record, Proxy proxy) {
  switch (proxy) {
    case Proxy::Toxicity: return record.toxicity;
    case Proxy::Harassment: return record.harassment;
    case Proxy::Violence: return record.violence;
  }
  return record.toxicity;
}

}  // namespace

ConversationMetrics conversation_metrics(const std::vector<ScoreRecord>& scores,
                                         const Conversation& conversation, double threshold) {
  std::map<int, const ScoreRecord*> by_turn;
  for (const auto& record : scores) {
    if (record.conversation_id != conversation.id) continue;
    if (!by_turn.emplace(record.turn_index, &record).second) {
      throw SchemaError("duplicate score for " + conversation.id + "#" +
                        std::to_string(record.turn_index));
    }
  }

  ConversationMetrics metrics;
  metrics.conversation_id = conversation.id;

  for (int proxy_idx = 0; proxy_idx < 3; ++proxy_idx) {
    const Proxy proxy = static_cast<Proxy>(proxy_idx);
    double sum[3] = {0, 0, 0};
    int over[3] = {0, 0, 0};
    int count[3] = {0, 0, 0};
    for (const auto& message : conversation.messages) {
      const auto it = by_turn.find(message.turn_index);
      if (it == by_turn.end()) {
        throw SchemaError("missing score for " + conversation.id + "#" +
                          std::to_string(message.turn_index));
      }
      const double value = score_for(*it->second, proxy);
      const int scope = message.author == Role::Guard ? 1 : 2;
      for (const int s : {0, scope}) {
        sum[s] += value;
        count[s] += 1;
        if (value > threshold) over[s] += 1;
      }
    }
    for (int scope = 0; scope < 3; ++scope) {
      if (count[scope] == 0) continue;  // empty scope stays at 0
      metrics.pct[proxy_idx][scope] = static_cast<double>(over[scope]) / count[scope];
      metrics.mean[proxy_idx][scope] = sum[scope] / count[scope];
    }
  }
  return metrics;
}

CorrelationMatrix correlate(const std::vector<std::pair<std::string, std::vector<double>>>& columns) {
  if (columns.empty()) {
    throw ConfigError("correlate: no columns");
  }
  const std::size_t n = columns.front().second.size();
  if (n < 3) {
    throw ConfigError("correlate: need at least 3 rows");
  }
  for (const auto& [name, values] : columns) {
    if (values.size() != n) {
      throw ConfigError("correlate: column " + name + " has mismatched length");
    }
    for (const double v : values) {
      if (!std::isfinite(v)) {
        throw ConfigError("correlate: column " + name + " contains a non-finite value");
      }
    }
  }

  const std::size_t k = columns.size();
  CorrelationMatrix out;
  out.names.reserve(k);
  std::vector<double> means(k, 0.0), sds(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    out.names.push_back(columns[j].first);
    double mean = 0;
    for (const double v : columns[j].second) mean += v;
    mean /= static_cast<double>(n);
    means[j] = mean;
    double ss = 0;
    for (const double v : columns[j].second) ss += (v - mean) * (v - mean);
    sds[j] = std::sqrt(ss);
    if (sds[j] == 0.0) {
      out.warnings.push_back("column " + columns[j].first + " has zero variance; r undefined");
    }
  }

  out.r.assign(k, std::vector<double>(k, std::numeric_limits<double>::quiet_NaN()));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      if (sds[i] == 0.0 || sds[j] == 0.0) continue;
      if (i == j) {
        out.r[i][j] = 1.0;
        continue;
      }
      double cov = 0;
      for (std::size_t row = 0; row < n; ++row) {
        cov += (columns[i].second[row] - means[i]) * (columns[j].second[row] - means[j]);
      }
      const double r = std::clamp(cov / (sds[i] * sds[j]), -1.0, 1.0);
      out.r[i][j] = r;
      out.r[j][i] = r;
    }
  }
  return out;
}

std::vector<double> author_series(const Conversation& conversation,
                                  const std::vector<ScoreRecord>& scores, Proxy proxy, Role author) {
  std::map<int, double> by_ordinal;
  std::map<int, const ScoreRecord*> by_turn;
  for (const auto& record : scores) {
    if (record.conversation_id == conversation.id) by_turn[record.turn_index] = &record;
  }
  for (const auto& message : conversation.messages) {
    if (message.author != author) continue;
    const auto it = by_turn.find(message.turn_index);
    if (it == by_turn.end()) {
      throw SchemaError("missing score for " + conversation.id + "#" +
                        std::to_string(message.turn_index));
    }
    by_ordinal[message.author_ordinal] = score_for(*it->second, proxy);
  }
  std::vector<double> series;
  series.reserve(by_ordinal.size());
  for (const auto& [ordinal, value] : by_ordinal) series.push_back(value);
  return series;
}

std::vector<TemporalCell> temporal_profile(
    const std::vector<Conversation>& conversations,
    const std::map<std::string, std::vector<ScoreRecord>>& scores_by_conversation, Proxy proxy,
    const GroupKeyFn& group_key) {
  // (group, author, ordinal) -> observed scores across conversations
  std::map<std::tuple<std::string, int, int>, std::vector<double>> cells;
  for (const auto& conversation : conversations) {
    const auto scores = scores_by_conversation.find(conversation.id);
    if (scores == scores_by_conversation.end()) continue;
    std::map<int, const ScoreRecord*> by_turn;
    for (const auto& record : scores->second) by_turn[record.turn_index] = &record;
    const std::string group = group_key(conversation);
    for (const auto& message : conversation.messages) {
      const auto it = by_turn.find(message.turn_index);
      if (it == by_turn.end()) continue;
      cells[{group, message.author == Role::Guard ? 0 : 1, message.author_ordinal}].push_back(
          score_for(*it->second, proxy));
    }
  }

  std::vector<TemporalCell> out;
  out.reserve(cells.size());
  for (const auto& [key, values] : cells) {
    TemporalCell cell;
    cell.group = std::get<0>(key);
    cell.author = std::get<1>(key) == 0 ? Role::Guard : Role::Prisoner;
    cell.ordinal = std::get<2>(key);
    cell.n = static_cast<int>(values.size());
    double mean = 0;
    for (const double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    cell.mean = mean;
    if (values.size() >= 2) {
      double ss = 0;
      for (const double v : values) ss += (v - mean) * (v - mean);
      const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
      const double tq = dist::student_t_quantile(0.975, static_cast<double>(values.size() - 1));
      cell.ci_half_width = tq * sd / std::sqrt(static_cast<double>(values.size()));
    }
    out.push_back(std::move(cell));
  }
  return out;
}

}  // namespace dyad
