#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dyad/scenario.hpp"
#include "dyad/types.hpp"

namespace dyad {

// Row-major dense matrix; everything here is desk-scale (N <= a few
// thousand, k <= a dozen).
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

// Design matrix is rank deficient; names the offending columns.
class RankError : public std::runtime_error {
 public:
  RankError(std::string message, std::vector<std::string> columns)
      : std::runtime_error(std::move(message)), columns_(std::move(columns)) {}
  const std::vector<std::string>& columns() const { return columns_; }

 private:
  std::vector<std::string> columns_;
};

// Perfect separation in logistic regression (diverging coefficients).
struct SeparationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OlsFit {
  std::vector<std::string> names;
  std::vector<double> beta;
  std::vector<double> se;
  std::vector<double> t;
  std::vector<double> p;       // two-sided
  std::vector<double> ci_low;  // 95%
  std::vector<double> ci_high;
  double r_squared = 0.0;
  double rss = 0.0;
  std::size_t n = 0;
  std::size_t k = 0;
};

// Least squares via Householder QR; classical homoskedastic standard errors.
OlsFit ols_fit(const Matrix& x, const std::vector<double>& y,
               std::vector<std::string> names = {});

struct LogitFit {
  std::vector<std::string> names;
  std::vector<double> beta;  // log-odds
  std::vector<double> se;
  std::vector<double> p;            // Wald, two-sided
  std::vector<double> odds_ratio;   // exp(beta)
  std::vector<double> or_ci_low;    // exp(beta - 1.96 se)
  std::vector<double> or_ci_high;   // exp(beta + 1.96 se)
  bool converged = false;
  int iterations = 0;
  std::size_t n = 0;
  std::size_t k = 0;
};

// Maximum likelihood by iteratively reweighted least squares. Converged when
// the largest absolute score component drops below tol. Throws
// SeparationError when coefficients diverge.
LogitFit logit_fit(const Matrix& x, const std::vector<double>& y, double tol = 1e-8,
                   int max_iter = 50, std::vector<std::string> names = {});

struct AdfResult {
  double statistic = 0.0;
  bool stationary = false;
  double critical_value_5pct = 0.0;
  int n = 0;
  bool constant_series = false;  // stationary by convention, statistic is NaN
};

// Dickey-Fuller regression with constant and no augmentation lags; the
// statistic is compared against small-sample 5% critical values.
AdfResult adf_test(const std::vector<double>& series);

double adf_critical_value_5pct(int n);

enum class GrangerDirection { GuardToPrisoner, PrisonerToGuard };

std::string_view to_string(GrangerDirection direction);

struct GrangerResult {
  GrangerDirection direction = GrangerDirection::GuardToPrisoner;
  double f = 0.0;
  double p = 1.0;
  int t_effective = 0;  // regression observations
  bool differenced_x = false;
  bool differenced_y = false;
  bool zero_rss_warning = false;  // unrestricted fit was perfect; p forced to 0
};

// Lag-1 Granger test of x predicting y. Both series get an ADF pre-check and
// one difference when non-stationary; the restricted model regresses y_t on
// [1, y_{t-1}], the unrestricted adds x_{t-1}. F uses m=1 restriction and
// k=3 parameters; a constant (or collinear) x contributes nothing and yields
// F=0, p=1.
GrangerResult granger_lag1(const std::vector<double>& x_series, const std::vector<double>& y_series,
                           GrangerDirection direction = GrangerDirection::GuardToPrisoner);

struct PValueSummary {
  double fraction_below_alpha = 0.0;  // strict p < alpha
  double alpha = 0.05;
  std::size_t n = 0;
  std::array<double, 101> cdf{};  // P[p <= g] on grid 0.00, 0.01, ..., 1.00
};

PValueSummary pvalue_summary(const std::vector<double>& pvalues, double alpha = 0.05);
PValueSummary pvalue_summary(const std::vector<GrangerResult>& results, double alpha = 0.05);

// --- design-matrix encoding ---

enum class FactorKind {
  Oversight,
  Risks,
  GuardPersonality,    // dummies vs Blank
  PrisonerPersonality, // dummies vs Blank
  PersonaCombo,        // 4 dummies vs blank-blank (logistic model)
  Goal,                // yard_time dummy vs Escape
  Model,               // dummies vs the first configured model
};

struct DesignSpec {
  std::vector<FactorKind> factors;
  std::vector<std::string> models;  // ordered; front() is the reference level
};

// The factor layouts used by the two regression families. On the canonical
// five-combo matrix the four separate personality dummies are exactly
// collinear (abusive+respectful = rebellious+peaceful on every row), so the
// identified default uses the persona-combo factor, which spans the same
// column space; split_personalities keeps the per-role dummies for designs
// where the personalities vary freely.
DesignSpec ols_design_spec(std::vector<std::string> models, bool split_personalities = false);
DesignSpec logit_design_spec(std::vector<std::string> models, bool include_disclosures = true);

struct AnalysisRow {
  ScenarioConfig scenario;
  double outcome = 0.0;
};

struct DesignMatrix {
  Matrix x;  // intercept first, then dummies in declared factor order
  std::vector<double> y;
  std::vector<std::string> names;
  std::vector<std::string> warnings;  // all-zero / all-one dummy columns
};

DesignMatrix encode_design(const std::vector<AnalysisRow>& rows, const DesignSpec& spec);

}  // namespace dyad
