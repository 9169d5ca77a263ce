// Test-only oracles, deliberately independent of the library's QR/IRLS
// implementation: OLS via normal equations with Gauss-Jordan inversion,
// t-distribution tail probabilities via Simpson integration of the density,
// and logistic maximum likelihood via box grid refinement.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace oracle {

inline std::vector<std::vector<double>> invert(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < n; ++row) {
      if (std::fabs(a[row][col]) > std::fabs(a[pivot][col])) pivot = row;
    }
    if (std::fabs(a[pivot][col]) < 1e-12) {
      throw std::runtime_error("oracle: singular matrix");
    }
    std::swap(a[col], a[pivot]);
    std::swap(inv[col], inv[pivot]);
    const double scale = a[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] /= scale;
      inv[col][j] /= scale;
    }
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col) continue;
      const double factor = a[row][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[row][j] -= factor * a[col][j];
        inv[row][j] -= factor * inv[col][j];
      }
    }
  }
  return inv;
}

// Student-t upper tail by Simpson integration of the density.
inline double t_two_sided_p(double t, double df) {
  const double abs_t = std::fabs(t);
  if (abs_t > 150.0) return 0.0;
  const double log_norm =
      std::lgamma((df + 1.0) / 2.0) - std::lgamma(df / 2.0) - 0.5 * std::log(df * M_PI);
  const auto density = [df, log_norm](double x) {
    return std::exp(log_norm - (df + 1.0) / 2.0 * std::log1p(x * x / df));
  };
  const int steps = 40000;  // even
  const double h = abs_t / steps;
  double sum = density(0.0) + density(abs_t);
  for (int i = 1; i < steps; ++i) {
    sum += density(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  const double integral = sum * h / 3.0;  // P(0 < T < |t|)
  return 2.0 * (0.5 - integral);
}

inline double t_quantile_975(double df) {
  double lo = 0.0, hi = 200.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (t_two_sided_p(mid, df) > 0.05) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct OlsOracle {
  std::vector<double> beta, se, t, p, ci_low, ci_high;
  double r_squared = 0.0;
};

inline OlsOracle ols(const std::vector<std::vector<double>>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  const std::size_t k = x.front().size();
  std::vector<std::vector<double>> xtx(k, std::vector<double>(k, 0.0));
  std::vector<double> xty(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < k; ++a) {
      xty[a] += x[i][a] * y[i];
      for (std::size_t b = 0; b < k; ++b) xtx[a][b] += x[i][a] * x[i][b];
    }
  }
  const auto inv = invert(xtx);
  OlsOracle fit;
  fit.beta.assign(k, 0.0);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) fit.beta[a] += inv[a][b] * xty[b];
  }
  double rss = 0.0, mean = 0.0;
  for (const double v : y) mean += v;
  mean /= static_cast<double>(n);
  double tss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double fitted = 0.0;
    for (std::size_t a = 0; a < k; ++a) fitted += x[i][a] * fit.beta[a];
    rss += (y[i] - fitted) * (y[i] - fitted);
    tss += (y[i] - mean) * (y[i] - mean);
  }
  const double df = static_cast<double>(n - k);
  const double sigma2 = rss / df;
  const double tq = t_quantile_975(df);
  for (std::size_t a = 0; a < k; ++a) {
    fit.se.push_back(std::sqrt(sigma2 * inv[a][a]));
    fit.t.push_back(fit.beta[a] / fit.se[a]);
    fit.p.push_back(t_two_sided_p(fit.t[a], df));
    fit.ci_low.push_back(fit.beta[a] - tq * fit.se[a]);
    fit.ci_high.push_back(fit.beta[a] + tq * fit.se[a]);
  }
  fit.r_squared = tss > 0 ? 1.0 - rss / tss : 1.0;
  return fit;
}

inline double logit_loglik(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
                           const std::vector<double>& beta) {
  double ll = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double eta = 0.0;
    for (std::size_t j = 0; j < beta.size(); ++j) eta += x[i][j] * beta[j];
    ll += y[i] * eta - std::log1p(std::exp(eta));
  }
  return ll;
}

// Box grid search with shrinking refinement around the best cell.
inline std::vector<double> logit_mle(const std::vector<std::vector<double>>& x,
                                     const std::vector<double>& y) {
  const std::size_t k = x.front().size();
  std::vector<double> center(k, 0.0);
  double width = 8.0;
  const int points = 9;
  for (int round = 0; round < 60; ++round) {
    std::vector<double> best = center;
    double best_ll = logit_loglik(x, y, center);
    std::vector<int> index(k, 0);
    while (true) {
      std::vector<double> candidate(k);
      for (std::size_t j = 0; j < k; ++j) {
        candidate[j] = center[j] - width + 2.0 * width * index[j] / (points - 1);
      }
      const double ll = logit_loglik(x, y, candidate);
      if (ll > best_ll) {
        best_ll = ll;
        best = candidate;
      }
      std::size_t carry = 0;
      while (carry < k && ++index[carry] == points) {
        index[carry] = 0;
        ++carry;
      }
      if (carry == k) break;
    }
    center = best;
    width *= 0.55;
    if (width < 1e-7) break;
  }
  return center;
}

}  // namespace oracle
