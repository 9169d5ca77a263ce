#include "dyad/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "dyad/dist.hpp"
#include "dyad/prompt.hpp"
#include "dyad/util.hpp"

namespace dyad {

namespace {

constexpr double kRankTol = 1e-10;

struct QrFactorization {
  Matrix r;                  // k x k upper triangular
  std::vector<double> qty;   // Q^T y, length n
  std::vector<double> beta;  // solution of R beta = (Q^T y)[0..k)
  double rss = 0.0;
  std::vector<std::size_t> deficient_columns;
};

// Householder QR of [X | y]; also back-solves for beta when full rank.
QrFactorization qr_least_squares(const Matrix& x, const std::vector<double>& y) {
  const std::size_t n = x.rows;
  const std::size_t k = x.cols;
  Matrix a = x;
  std::vector<double> z = y;

  std::vector<double> column_scale(k, 1.0);
  for (std::size_t j = 0; j < k; ++j) {
    double norm = 0;
    for (std::size_t i = 0; i < n; ++i) norm += a.at(i, j) * a.at(i, j);
    column_scale[j] = std::max(1.0, std::sqrt(norm));
  }

  QrFactorization out;
  for (std::size_t j = 0; j < k && j < n; ++j) {
    double norm = 0;
    for (std::size_t i = j; i < n; ++i) norm += a.at(i, j) * a.at(i, j);
    norm = std::sqrt(norm);
    if (norm <= kRankTol * column_scale[j]) {
      out.deficient_columns.push_back(j);
      continue;
    }
    const double alpha = a.at(j, j) >= 0 ? -norm : norm;
    std::vector<double> v(n - j);
    v[0] = a.at(j, j) - alpha;
    for (std::size_t i = j + 1; i < n; ++i) v[i - j] = a.at(i, j);
    double vnorm2 = 0;
    for (const double vi : v) vnorm2 += vi * vi;
    if (vnorm2 <= 0) {
      out.deficient_columns.push_back(j);
      continue;
    }
    for (std::size_t col = j; col < k; ++col) {
      double dot = 0;
      for (std::size_t i = j; i < n; ++i) dot += v[i - j] * a.at(i, col);
      const double factor = 2.0 * dot / vnorm2;
      for (std::size_t i = j; i < n; ++i) a.at(i, col) -= factor * v[i - j];
    }
    double dot = 0;
    for (std::size_t i = j; i < n; ++i) dot += v[i - j] * z[i];
    const double factor = 2.0 * dot / vnorm2;
    for (std::size_t i = j; i < n; ++i) z[i] -= factor * v[i - j];
  }

  out.r = Matrix(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) out.r.at(i, j) = a.at(i, j);
  }
  out.qty = z;
  double rss = 0;
  for (std::size_t i = k; i < n; ++i) rss += z[i] * z[i];
  out.rss = rss;

  if (out.deficient_columns.empty()) {
    out.beta.assign(k, 0.0);
    for (std::size_t ii = k; ii-- > 0;) {
      double value = z[ii];
      for (std::size_t j = ii + 1; j < k; ++j) value -= out.r.at(ii, j) * out.beta[j];
      out.beta[ii] = value / out.r.at(ii, ii);
    }
  }
  return out;
}

// Upper-triangular inverse; diag((X^T X)^-1)[i] = sum_j Rinv(i,j)^2.
std::vector<double> xtx_inverse_diagonal(const Matrix& r) {
  const std::size_t k = r.cols;
  Matrix rinv(k, k);
  for (std::size_t col = 0; col < k; ++col) {
    for (std::size_t i = col + 1; i-- > 0;) {
      double value = i == col ? 1.0 : 0.0;
      for (std::size_t j = i + 1; j <= col; ++j) value -= r.at(i, j) * rinv.at(j, col);
      rinv.at(i, col) = value / r.at(i, i);
    }
  }
  std::vector<double> diag(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) diag[i] += rinv.at(i, j) * rinv.at(i, j);
  }
  return diag;
}

std::vector<std::string> default_names(std::size_t k) {
  std::vector<std::string> names;
  names.reserve(k);
  for (std::size_t i = 0; i < k; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

std::vector<std::string> pick_names(const std::vector<std::size_t>& indices,
                                    const std::vector<std::string>& names) {
  std::vector<std::string> out;
  for (const auto i : indices) out.push_back(i < names.size() ? names[i] : "x" + std::to_string(i));
  return out;
}

}  // namespace

OlsFit ols_fit(const Matrix& x, const std::vector<double>& y, std::vector<std::string> names) {
  if (x.rows != y.size()) {
    throw ConfigError("ols_fit: X rows and y length differ");
  }
  if (x.rows <= x.cols) {
    throw ConfigError("ols_fit: need more observations than parameters");
  }
  if (names.empty()) names = default_names(x.cols);

  const auto qr = qr_least_squares(x, y);
  if (!qr.deficient_columns.empty()) {
    const auto bad = pick_names(qr.deficient_columns, names);
    std::string joined;
    for (const auto& name : bad) {
      if (!joined.empty()) joined += ", ";
      joined += name;
    }
    throw RankError("ols_fit: design matrix is rank deficient in column(s): " + joined, bad);
  }

  OlsFit fit;
  fit.names = std::move(names);
  fit.beta = qr.beta;
  fit.n = x.rows;
  fit.k = x.cols;
  fit.rss = qr.rss;

  const double df = static_cast<double>(fit.n - fit.k);
  const double sigma2 = qr.rss / df;
  const auto diag = xtx_inverse_diagonal(qr.r);
  const double tq = dist::student_t_quantile(0.975, df);
  fit.se.resize(fit.k);
  fit.t.resize(fit.k);
  fit.p.resize(fit.k);
  fit.ci_low.resize(fit.k);
  fit.ci_high.resize(fit.k);
  for (std::size_t j = 0; j < fit.k; ++j) {
    fit.se[j] = std::sqrt(sigma2 * diag[j]);
    if (fit.se[j] > 0) {
      fit.t[j] = fit.beta[j] / fit.se[j];
      fit.p[j] = 2.0 * (1.0 - dist::student_t_cdf(std::fabs(fit.t[j]), df));
    } else if (fit.beta[j] == 0.0) {
      fit.t[j] = 0.0;
      fit.p[j] = 1.0;
    } else {
      // exact fit: the coefficient is known without error
      fit.t[j] = std::copysign(std::numeric_limits<double>::infinity(), fit.beta[j]);
      fit.p[j] = 0.0;
    }
    fit.ci_low[j] = fit.beta[j] - tq * fit.se[j];
    fit.ci_high[j] = fit.beta[j] + tq * fit.se[j];
  }

  double mean = 0;
  for (const double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double tss = 0;
  for (const double v : y) tss += (v - mean) * (v - mean);
  fit.r_squared = tss > 0 ? 1.0 - qr.rss / tss : 1.0;
  return fit;
}

LogitFit logit_fit(const Matrix& x, const std::vector<double>& y, double tol, int max_iter,
                   std::vector<std::string> names) {
  if (x.rows != y.size()) {
    throw ConfigError("logit_fit: X rows and y length differ");
  }
  if (x.rows <= x.cols) {
    throw ConfigError("logit_fit: need more observations than parameters");
  }
  for (const double v : y) {
    if (v != 0.0 && v != 1.0) {
      throw ConfigError("logit_fit: outcome must be binary 0/1");
    }
  }
  if (names.empty()) names = default_names(x.cols);

  const std::size_t n = x.rows;
  const std::size_t k = x.cols;
  std::vector<double> beta(k, 0.0);
  std::vector<double> eta(n, 0.0), mu(n, 0.0), w(n, 0.0), z(n, 0.0);

  LogitFit fit;
  fit.n = n;
  fit.k = k;

  Matrix xw(n, k);
  std::vector<double> zw(n, 0.0);
  Matrix r_final;

  int iter = 0;
  for (; iter < max_iter; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      double e = 0;
      for (std::size_t j = 0; j < k; ++j) e += x.at(i, j) * beta[j];
      eta[i] = e;
      mu[i] = 1.0 / (1.0 + std::exp(-e));
    }
    double max_score = 0;
    for (std::size_t j = 0; j < k; ++j) {
      double g = 0;
      for (std::size_t i = 0; i < n; ++i) g += x.at(i, j) * (y[i] - mu[i]);
      max_score = std::max(max_score, std::fabs(g));
    }
    if (max_score < tol) {
      fit.converged = true;
      break;
    }

    for (std::size_t i = 0; i < n; ++i) {
      w[i] = std::max(mu[i] * (1.0 - mu[i]), 1e-10);
      z[i] = eta[i] + (y[i] - mu[i]) / w[i];
      const double sw = std::sqrt(w[i]);
      for (std::size_t j = 0; j < k; ++j) xw.at(i, j) = sw * x.at(i, j);
      zw[i] = sw * z[i];
    }
    const auto qr = qr_least_squares(xw, zw);
    if (!qr.deficient_columns.empty()) {
      const auto bad = pick_names(qr.deficient_columns, names);
      std::string joined;
      for (const auto& name : bad) {
        if (!joined.empty()) joined += ", ";
        joined += name;
      }
      throw RankError("logit_fit: weighted design is rank deficient in column(s): " + joined, bad);
    }
    beta = qr.beta;
    for (const double b : beta) {
      if (std::fabs(b) > 30.0) {
        throw SeparationError("logit_fit: coefficients diverged; data are perfectly separated");
      }
    }
  }
  // Separated data drive the log-odds toward infinity; the score drops under
  // tol once every fitted probability saturates to its label, so divergence
  // has to be detected on the fit itself, not only on the coefficients.
  {
    double max_residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double e = 0;
      for (std::size_t j = 0; j < k; ++j) e += x.at(i, j) * beta[j];
      const double m = 1.0 / (1.0 + std::exp(-e));
      max_residual = std::max(max_residual, std::fabs(y[i] - m));
    }
    if (max_residual < 1e-4) {
      throw SeparationError("logit_fit: coefficients diverged; data are perfectly separated");
    }
  }
  fit.iterations = iter;
  fit.beta = beta;
  fit.names = std::move(names);

  // Covariance from the information matrix at the final coefficients.
  for (std::size_t i = 0; i < n; ++i) {
    double e = 0;
    for (std::size_t j = 0; j < k; ++j) e += x.at(i, j) * beta[j];
    const double m = 1.0 / (1.0 + std::exp(-e));
    const double sw = std::sqrt(std::max(m * (1.0 - m), 1e-10));
    for (std::size_t j = 0; j < k; ++j) xw.at(i, j) = sw * x.at(i, j);
    zw[i] = 0.0;
  }
  const auto qr = qr_least_squares(xw, zw);
  const auto diag = xtx_inverse_diagonal(qr.r);

  fit.se.resize(k);
  fit.p.resize(k);
  fit.odds_ratio.resize(k);
  fit.or_ci_low.resize(k);
  fit.or_ci_high.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    fit.se[j] = std::sqrt(diag[j]);
    const double zstat = fit.se[j] > 0 ? beta[j] / fit.se[j] : 0.0;
    fit.p[j] = 2.0 * (1.0 - dist::normal_cdf(std::fabs(zstat)));
    fit.odds_ratio[j] = std::exp(beta[j]);
    fit.or_ci_low[j] = std::exp(beta[j] - 1.96 * fit.se[j]);
    fit.or_ci_high[j] = std::exp(beta[j] + 1.96 * fit.se[j]);
  }
  return fit;
}

namespace {

// 5% quantiles of the Dickey-Fuller t distribution (constant-only
// regression) by series length, Monte Carlo estimated at 2M replications;
// the n=25 entry agrees with the published -3.00 to two decimals.
constexpr int kAdfTableMinN = 6;
constexpr std::array<double, 20> kAdfCritical5pct = {
    -3.9900, -3.6500, -3.4717, -3.3570, -3.2811, -3.2256, -3.1794, -3.1530, -3.1248, -3.0994,
    -3.0834, -3.0686, -3.0540, -3.0401, -3.0302, -3.0215, -3.0147, -3.0044, -2.9983, -2.9929,
};

std::vector<double> first_difference(const std::vector<double>& series) {
  std::vector<double> out;
  out.reserve(series.size() - 1);
  for (std::size_t i = 1; i < series.size(); ++i) out.push_back(series[i] - series[i - 1]);
  return out;
}

}  // namespace

double adf_critical_value_5pct(int n) {
  if (n < kAdfTableMinN) {
    throw ConfigError("adf critical value: series length must be >= 6");
  }
  const int max_n = kAdfTableMinN + static_cast<int>(kAdfCritical5pct.size()) - 1;
  if (n <= max_n) {
    return kAdfCritical5pct[static_cast<std::size_t>(n - kAdfTableMinN)];
  }
  // Beyond the table: 1/n blend into the asymptotic -2.86.
  return -2.86 - 3.32 / static_cast<double>(n);
}

AdfResult adf_test(const std::vector<double>& series) {
  const int n = static_cast<int>(series.size());
  if (n < 6) {
    throw ConfigError("adf_test: series length must be >= 6");
  }
  for (const double v : series) {
    if (!std::isfinite(v)) {
      throw ConfigError("adf_test: series contains a non-finite value");
    }
  }

  AdfResult result;
  result.n = n;
  result.critical_value_5pct = adf_critical_value_5pct(n);

  const auto [min_it, max_it] = std::minmax_element(series.begin(), series.end());
  if (*max_it - *min_it == 0.0) {
    result.constant_series = true;
    result.stationary = true;
    result.statistic = std::numeric_limits<double>::quiet_NaN();
    return result;
  }

  // dy_t = c + g*y_{t-1}, t = 2..n
  const double t_obs = static_cast<double>(n - 1);
  double sx = 0, sz = 0, sxx = 0, sxz = 0;
  for (int t = 1; t < n; ++t) {
    const double lag = series[t - 1];
    const double dy = series[t] - series[t - 1];
    sx += lag;
    sz += dy;
    sxx += lag * lag;
    sxz += lag * dy;
  }
  const double denom = sxx - sx * sx / t_obs;
  if (denom <= 0.0) {
    result.constant_series = true;
    result.stationary = true;
    result.statistic = std::numeric_limits<double>::quiet_NaN();
    return result;
  }
  const double gamma = (sxz - sx * sz / t_obs) / denom;
  const double intercept = (sz - gamma * sx) / t_obs;
  double rss = 0;
  for (int t = 1; t < n; ++t) {
    const double e = (series[t] - series[t - 1]) - intercept - gamma * series[t - 1];
    rss += e * e;
  }
  const double sigma2 = rss / (t_obs - 2.0);
  const double se = std::sqrt(sigma2 / denom);
  result.statistic = se > 0 ? gamma / se : -std::numeric_limits<double>::infinity();
  result.stationary = result.statistic < result.critical_value_5pct;
  return result;
}

std::string_view to_string(GrangerDirection direction) {
  return direction == GrangerDirection::GuardToPrisoner ? "guard_to_prisoner" : "prisoner_to_guard";
}

GrangerResult granger_lag1(const std::vector<double>& x_series, const std::vector<double>& y_series,
                           GrangerDirection direction) {
  GrangerResult result;
  result.direction = direction;

  if (x_series.size() < 6 || y_series.size() < 6) {
    throw ConfigError("granger_lag1: both series must have length >= 6");
  }

  std::vector<double> x = x_series;
  std::vector<double> y = y_series;
  const AdfResult adf_x = adf_test(x);
  if (!adf_x.stationary) {
    x = first_difference(x);
    result.differenced_x = true;
  }
  const AdfResult adf_y = adf_test(y);
  if (!adf_y.stationary) {
    y = first_difference(y);
    result.differenced_y = true;
  }
  // Differencing shifts a series one step later; trim the other's head to
  // keep the time bases aligned.
  if (result.differenced_x && !result.differenced_y) {
    y.erase(y.begin());
  } else if (result.differenced_y && !result.differenced_x) {
    x.erase(x.begin());
  }

  const std::size_t rows =
      std::min(y.size() >= 1 ? y.size() - 1 : 0, x.size());
  if (rows < 4) {
    throw ConfigError("granger_lag1: insufficient length after differencing");
  }
  result.t_effective = static_cast<int>(rows);
  const double df2 = static_cast<double>(rows) - 3.0;  // T - k, k = 3

  std::vector<double> y_t(rows), y_lag(rows), x_lag(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    y_t[i] = y[i + 1];
    y_lag[i] = y[i];
    x_lag[i] = x[i];
  }

  const auto column_constant = [](const std::vector<double>& v) {
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    return *mx - *mn == 0.0;
  };

  // Restricted: y_t ~ 1 + y_lag (intercept only when y_lag is constant).
  double rss_restricted;
  const bool y_lag_constant = column_constant(y_lag);
  {
    Matrix design(rows, y_lag_constant ? 1 : 2);
    for (std::size_t i = 0; i < rows; ++i) {
      design.at(i, 0) = 1.0;
      if (!y_lag_constant) design.at(i, 1) = y_lag[i];
    }
    rss_restricted = qr_least_squares(design, y_t).rss;
  }

  // A constant (or collinear) x lag adds no information.
  if (column_constant(x_lag)) {
    result.f = 0.0;
    result.p = 1.0;
    return result;
  }

  double rss_unrestricted;
  {
    const std::size_t cols = y_lag_constant ? 2 : 3;
    Matrix design(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
      design.at(i, 0) = 1.0;
      if (!y_lag_constant) design.at(i, 1) = y_lag[i];
      design.at(i, cols - 1) = x_lag[i];
    }
    const auto qr = qr_least_squares(design, y_t);
    if (!qr.deficient_columns.empty()) {
      result.f = 0.0;
      result.p = 1.0;
      return result;
    }
    rss_unrestricted = qr.rss;
  }

  constexpr double kZeroRss = 1e-14;
  if (rss_unrestricted <= kZeroRss) {
    result.zero_rss_warning = true;
    if (rss_restricted <= kZeroRss) {
      result.f = 0.0;
      result.p = 1.0;
    } else {
      result.f = std::numeric_limits<double>::infinity();
      result.p = 0.0;
    }
    return result;
  }

  result.f = std::max(0.0, (rss_restricted - rss_unrestricted) / rss_unrestricted * df2);
  result.p = 1.0 - dist::f_cdf(result.f, 1.0, df2);
  return result;
}

PValueSummary pvalue_summary(const std::vector<double>& pvalues, double alpha) {
  if (pvalues.empty()) {
    throw ConfigError("pvalue_summary: no p-values");
  }
  PValueSummary summary;
  summary.alpha = alpha;
  summary.n = pvalues.size();
  std::size_t below = 0;
  for (const double p : pvalues) {
    if (p < 0.0 || p > 1.0 || !std::isfinite(p)) {
      throw ConfigError("pvalue_summary: p-value outside [0,1]");
    }
    if (p < alpha) ++below;
  }
  summary.fraction_below_alpha = static_cast<double>(below) / static_cast<double>(pvalues.size());
  for (int i = 0; i <= 100; ++i) {
    const double grid = static_cast<double>(i) / 100.0;
    std::size_t count = 0;
    for (const double p : pvalues) {
      if (p <= grid) ++count;
    }
    summary.cdf[static_cast<std::size_t>(i)] =
        static_cast<double>(count) / static_cast<double>(pvalues.size());
  }
  return summary;
}

PValueSummary pvalue_summary(const std::vector<GrangerResult>& results, double alpha) {
  std::vector<double> pvalues;
  pvalues.reserve(results.size());
  for (const auto& r : results) pvalues.push_back(r.p);
  return pvalue_summary(pvalues, alpha);
}

DesignSpec ols_design_spec(std::vector<std::string> models, bool split_personalities) {
  if (split_personalities) {
    return {{FactorKind::Oversight, FactorKind::Risks, FactorKind::GuardPersonality,
             FactorKind::PrisonerPersonality, FactorKind::Goal, FactorKind::Model},
            std::move(models)};
  }
  return {{FactorKind::Oversight, FactorKind::Risks, FactorKind::PersonaCombo, FactorKind::Goal,
           FactorKind::Model},
          std::move(models)};
}

DesignSpec logit_design_spec(std::vector<std::string> models, bool include_disclosures) {
  std::vector<FactorKind> factors{FactorKind::Goal, FactorKind::PersonaCombo};
  if (include_disclosures) {
    factors.push_back(FactorKind::Oversight);
    factors.push_back(FactorKind::Risks);
  }
  factors.push_back(FactorKind::Model);
  return {std::move(factors), std::move(models)};
}

DesignMatrix encode_design(const std::vector<AnalysisRow>& rows, const DesignSpec& spec) {
  if (rows.empty()) {
    throw ConfigError("encode_design: no rows");
  }

  struct Column {
    std::string name;
    std::function<double(const ScenarioConfig&)> value;
  };
  std::vector<Column> columns;
  columns.push_back({"intercept", [](const ScenarioConfig&) { return 1.0; }});

  for (const FactorKind factor : spec.factors) {
    switch (factor) {
      case FactorKind::Oversight:
        columns.push_back({"oversight", [](const ScenarioConfig& s) { return s.oversight ? 1.0 : 0.0; }});
        break;
      case FactorKind::Risks:
        columns.push_back({"risks", [](const ScenarioConfig& s) { return s.risks ? 1.0 : 0.0; }});
        break;
      case FactorKind::GuardPersonality:
        columns.push_back({"guard_abusive", [](const ScenarioConfig& s) {
                             return s.persona.guard == GuardPersonality::Abusive ? 1.0 : 0.0;
                           }});
        columns.push_back({"guard_respectful", [](const ScenarioConfig& s) {
                             return s.persona.guard == GuardPersonality::Respectful ? 1.0 : 0.0;
                           }});
        break;
      case FactorKind::PrisonerPersonality:
        columns.push_back({"prisoner_rebellious", [](const ScenarioConfig& s) {
                             return s.persona.prisoner == PrisonerPersonality::Rebellious ? 1.0 : 0.0;
                           }});
        columns.push_back({"prisoner_peaceful", [](const ScenarioConfig& s) {
                             return s.persona.prisoner == PrisonerPersonality::Peaceful ? 1.0 : 0.0;
                           }});
        break;
      case FactorKind::PersonaCombo: {
        const auto combos = list_personality_combos();
        for (std::size_t i = 1; i < combos.size(); ++i) {  // skip blank-blank baseline
          const Persona combo = combos[i];
          columns.push_back({"combo_" + combo_label(combo), [combo](const ScenarioConfig& s) {
                               return s.persona == combo ? 1.0 : 0.0;
                             }});
        }
        break;
      }
      case FactorKind::Goal:
        columns.push_back({"goal_yard_time", [](const ScenarioConfig& s) {
                             return s.goal == Goal::YardTime ? 1.0 : 0.0;
                           }});
        break;
      case FactorKind::Model: {
        if (spec.models.empty()) {
          throw ConfigError("encode_design: model factor requires a model list");
        }
        for (std::size_t i = 1; i < spec.models.size(); ++i) {  // front() is the reference
          const std::string model = spec.models[i];
          columns.push_back({"model_" + model, [model](const ScenarioConfig& s) {
                               return s.model_id == model ? 1.0 : 0.0;
                             }});
        }
        break;
      }
    }
  }

  const bool check_models =
      std::find(spec.factors.begin(), spec.factors.end(), FactorKind::Model) != spec.factors.end();
  DesignMatrix out;
  out.x = Matrix(rows.size(), columns.size());
  out.y.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (check_models &&
        std::find(spec.models.begin(), spec.models.end(), row.scenario.model_id) == spec.models.end()) {
      throw ConfigError("encode_design: unseen factor level: model " + row.scenario.model_id);
    }
    for (std::size_t j = 0; j < columns.size(); ++j) {
      out.x.at(i, j) = columns[j].value(row.scenario);
    }
    out.y.push_back(row.outcome);
  }
  for (const auto& column : columns) out.names.push_back(column.name);

  for (std::size_t j = 1; j < columns.size(); ++j) {
    double sum = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) sum += out.x.at(i, j);
    if (sum == 0.0) {
      out.warnings.push_back("dummy column " + out.names[j] + " is all zero");
    } else if (sum == static_cast<double>(rows.size())) {
      out.warnings.push_back("dummy column " + out.names[j] + " is all one");
    }
  }
  return out;
}

}  // namespace dyad
