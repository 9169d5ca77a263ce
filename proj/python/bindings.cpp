#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dyad/annotation.hpp"
#include "dyad/cli.hpp"
#include "dyad/gateway.hpp"
#include "dyad/metrics.hpp"
#include "dyad/orchestrator.hpp"
#include "dyad/prompt.hpp"
#include "dyad/scenario.hpp"
#include "dyad/stats.hpp"

namespace py = pybind11;
using namespace dyad;

namespace {

AgentProfile make_profile(const std::string& role, const std::string& guard_personality,
                          const std::string& prisoner_personality, const std::string& goal,
                          bool oversight, bool risks) {
  AgentProfile profile;
  profile.role = role_from_string(role);
  profile.persona.guard = guard_personality_from_string(guard_personality);
  profile.persona.prisoner = prisoner_personality_from_string(prisoner_personality);
  if (profile.role == Role::Prisoner) profile.goal = goal_from_string(goal);
  profile.oversight = oversight;
  profile.risks = risks;
  return profile;
}

Matrix to_matrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw ConfigError("design matrix has no rows");
  Matrix x(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != x.cols) throw ConfigError("design matrix rows have unequal lengths");
    for (std::size_t j = 0; j < x.cols; ++j) x.at(i, j) = rows[i][j];
  }
  return x;
}

py::dict ols_fit_py(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
                    std::vector<std::string> names) {
  const auto fit = ols_fit(to_matrix(x), y, std::move(names));
  py::dict out;
  out["names"] = fit.names;
  out["beta"] = fit.beta;
  out["se"] = fit.se;
  out["t"] = fit.t;
  out["p"] = fit.p;
  out["ci_low"] = fit.ci_low;
  out["ci_high"] = fit.ci_high;
  out["r_squared"] = fit.r_squared;
  out["n"] = fit.n;
  return out;
}

py::dict logit_fit_py(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
                      double tol, int max_iter, std::vector<std::string> names) {
  const auto fit = logit_fit(to_matrix(x), y, tol, max_iter, std::move(names));
  py::dict out;
  out["names"] = fit.names;
  out["beta"] = fit.beta;
  out["se"] = fit.se;
  out["p"] = fit.p;
  out["odds_ratio"] = fit.odds_ratio;
  out["or_ci_low"] = fit.or_ci_low;
  out["or_ci_high"] = fit.or_ci_high;
  out["converged"] = fit.converged;
  out["iterations"] = fit.iterations;
  out["n"] = fit.n;
  return out;
}

py::dict adf_test_py(const std::vector<double>& series) {
  const auto result = adf_test(series);
  py::dict out;
  out["statistic"] = result.statistic;
  out["stationary"] = result.stationary;
  out["critical_value_5pct"] = result.critical_value_5pct;
  out["n"] = result.n;
  out["constant_series"] = result.constant_series;
  return out;
}

py::dict granger_py(const std::vector<double>& x, const std::vector<double>& y) {
  const auto result = granger_lag1(x, y);
  py::dict out;
  out["f"] = result.f;
  out["p"] = result.p;
  out["t_effective"] = result.t_effective;
  out["differenced_x"] = result.differenced_x;
  out["differenced_y"] = result.differenced_y;
  return out;
}

py::dict run_mock_conversation_py(const std::string& model, const std::string& guard_personality,
                                  const std::string& prisoner_personality, const std::string& goal,
                                  bool oversight, bool risks, int repetition) {
  RunSpec run;
  run.scenario.model_id = model;
  run.scenario.persona.guard = guard_personality_from_string(guard_personality);
  run.scenario.persona.prisoner = prisoner_personality_from_string(prisoner_personality);
  run.scenario.oversight = oversight;
  run.scenario.risks = risks;
  run.scenario.goal = goal_from_string(goal);
  run.repetition = repetition;
  run.seed = derive_seed(scenario_id(run.scenario), repetition);

  MockChatBackend backend;
  OrchestratorOptions options;
  options.retry.sleep_fn = [](int) {};
  const auto conversation = run_conversation(run, backend, options);

  py::list messages;
  for (const auto& message : conversation.messages) {
    py::dict m;
    m["turn_index"] = message.turn_index;
    m["author"] = std::string(to_string(message.author));
    m["author_ordinal"] = message.author_ordinal;
    m["text"] = message.text;
    messages.append(m);
  }
  py::dict out;
  out["id"] = conversation.id;
  out["status"] = conversation.status == ConversationStatus::Complete ? "complete" : "aborted";
  out["messages"] = messages;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "core operations of the dyadlab workbench";

  m.def(
      "assemble_system_prompt",
      [](const std::string& role, const std::string& guard_personality,
         const std::string& prisoner_personality, const std::string& goal, bool oversight,
         bool risks) {
        return assemble_system_prompt(
            make_profile(role, guard_personality, prisoner_personality, goal, oversight, risks));
      },
      py::arg("role"), py::arg("guard_personality") = "blank",
      py::arg("prisoner_personality") = "blank", py::arg("goal") = "yard_time",
      py::arg("oversight") = false, py::arg("risks") = false);

  m.def("list_personality_combos", []() {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& combo : list_personality_combos()) {
      out.emplace_back(std::string(to_string(combo.guard)), std::string(to_string(combo.prisoner)));
    }
    return out;
  });

  m.def(
      "enumerate_scenarios",
      [](const std::vector<std::string>& models) {
        std::vector<std::string> ids;
        for (const auto& scenario : enumerate_scenarios(models)) {
          ids.push_back(scenario_id(scenario));
        }
        return ids;
      },
      py::arg("models"));

  m.def(
      "count_runs",
      [](const std::vector<std::string>& models, int repetitions) {
        return expand_runs(enumerate_scenarios(models), repetitions).size();
      },
      py::arg("models"), py::arg("repetitions"));

  m.def("bin_turn", [](int turn) { return std::string(to_string(bin_turn(turn))); }, py::arg("turn"));

  m.def(
      "lexicon_score",
      [](const std::string& text, const std::map<std::string, std::map<std::string, double>>& terms) {
        std::map<std::string, LexiconScorer::TermWeights> weights;
        for (const auto& [word, categories] : terms) {
          LexiconScorer::TermWeights w;
          const auto value = [&categories](const char* key) {
            const auto it = categories.find(key);
            return it == categories.end() ? 0.0 : it->second;
          };
          w.toxicity = value("toxicity");
          w.harassment = value("harassment");
          w.violence = value("violence");
          weights[word] = w;
        }
        LexiconScorer scorer("python", std::move(weights));
        const auto scores = scorer.score(text);
        py::dict out;
        out["toxicity"] = scores.toxicity;
        out["harassment"] = scores.harassment;
        out["violence"] = scores.violence;
        return out;
      },
      py::arg("text"), py::arg("terms"));

  m.def("run_mock_conversation", &run_mock_conversation_py, py::arg("model"),
        py::arg("guard_personality") = "blank", py::arg("prisoner_personality") = "blank",
        py::arg("goal") = "yard_time", py::arg("oversight") = false, py::arg("risks") = false,
        py::arg("repetition") = 1);

  m.def("ols_fit", &ols_fit_py, py::arg("x"), py::arg("y"),
        py::arg("names") = std::vector<std::string>{});
  m.def("logit_fit", &logit_fit_py, py::arg("x"), py::arg("y"), py::arg("tol") = 1e-8,
        py::arg("max_iter") = 50, py::arg("names") = std::vector<std::string>{});
  m.def("adf_test", &adf_test_py, py::arg("series"));
  m.def("granger_lag1", &granger_py, py::arg("x"), py::arg("y"));

  m.def(
      "pvalue_summary",
      [](const std::vector<double>& pvalues, double alpha) {
        const auto summary = pvalue_summary(pvalues, alpha);
        py::dict out;
        out["fraction_below_alpha"] = summary.fraction_below_alpha;
        out["n"] = summary.n;
        out["cdf"] = std::vector<double>(summary.cdf.begin(), summary.cdf.end());
        return out;
      },
      py::arg("pvalues"), py::arg("alpha") = 0.05);

  m.def(
      "cli_main",
      [](const std::vector<std::string>& args) { return cli_dispatch(args); },
      py::arg("args"), "run a workbench subcommand; returns the exit code");

  py::register_exception<ConfigError>(m, "DyadConfigError");
  py::register_exception<SchemaError>(m, "DyadSchemaError");
  py::register_exception<SeparationError>(m, "SeparationError");
}
