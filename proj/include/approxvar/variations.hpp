#pragma once

// Classical variation functionals of a sampled function: Jordan variation,
// oscillation, modulus of variation, interval counts above a threshold,
// weighted (Waterman) and gauge-transformed (Wiener-Young) variations, and
// the alternating-sign oscillation used by the Ramsey-based selection route.
//
// "Non-overlapping intervals" always allows shared endpoints; dynamic
// programs index interval endpoints on grid points.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "approxvar/core.hpp"
#include "approxvar/sampled.hpp"

namespace approxvar {

inline size_t exhaustive_cap(size_t fallback = 16) {
  if (const char* env = std::getenv("APPROXVAR_MAX_EXHAUSTIVE")) {
    long v = std::atol(env);
    if (v > 1) return static_cast<size_t>(v);
  }
  return fallback;
}

// On a sorted finite grid the sup over sub-partitions is the consecutive sum.
inline double jordan_variation(const SampledFunction& f) {
  double acc = 0.0;
  for (size_t i = 1; i < f.size(); ++i)
    acc += distance(f.space, f.values[i - 1], f.values[i]);
  return acc;
}

// Diameter of the image.
inline double oscillation(const SampledFunction& f) {
  double best = 0.0;
  for (size_t i = 0; i < f.size(); ++i)
    for (size_t j = i + 1; j < f.size(); ++j)
      best = std::max(best, distance(f.space, f.values[i], f.values[j]));
  return best;
}

namespace detail {

inline std::vector<std::vector<double>> increment_matrix(const SampledFunction& f) {
  size_t n = f.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      d[i][j] = d[j][i] = distance(f.space, f.values[i], f.values[j]);
  return d;
}

}  // namespace detail

// nu_n: largest total increment over n non-overlapping intervals.
inline std::vector<double> modulus_of_variation(const SampledFunction& f,
                                                int n_max) {
  require(n_max >= 1, ErrorKind::precondition, "n_max must be >= 1");
  size_t n = f.size();
  auto d = detail::increment_matrix(f);
  std::vector<double> prev(n, 0.0), cur(n, 0.0), out;
  for (int c = 1; c <= n_max; ++c) {
    for (size_t i = 0; i < n; ++i) {
      double best = i > 0 ? cur[i - 1] : 0.0;
      for (size_t a = 0; a < i; ++a) best = std::max(best, prev[a] + d[a][i]);
      cur[i] = best;
    }
    out.push_back(cur[n - 1]);
    prev = cur;
  }
  return out;
}

// Largest number of non-overlapping intervals with increment strictly > eps.
inline int n_epsilon_count(const SampledFunction& f, double eps) {
  require(eps > 0.0, ErrorKind::domain, "eps must be positive");
  size_t n = f.size();
  auto d = detail::increment_matrix(f);
  std::vector<int> dp(n, 0);
  for (size_t i = 1; i < n; ++i) {
    dp[i] = dp[i - 1];
    for (size_t a = 0; a < i; ++a)
      if (d[a][i] > eps) dp[i] = std::max(dp[i], dp[a] + 1);
  }
  return dp[n - 1];
}

struct WatermanSequence {
  std::vector<double> lambda;  // nondecreasing positive prefix

  void validate() const {
    require(!lambda.empty(), ErrorKind::shape, "empty weight sequence");
    for (size_t i = 0; i < lambda.size(); ++i) {
      require(lambda[i] > 0.0, ErrorKind::shape, "weights must be positive");
      if (i) require(lambda[i - 1] <= lambda[i], ErrorKind::shape,
                     "weights must be nondecreasing");
    }
  }

  double at(size_t i) const {  // extend by the last weight
    return i < lambda.size() ? lambda[i] : lambda.back();
  }

  static WatermanSequence ones(size_t n) {
    return WatermanSequence{std::vector<double>(n, 1.0)};
  }
  static WatermanSequence harmonic_index(size_t n) {  // 1,2,3,...
    WatermanSequence w;
    for (size_t i = 1; i <= n; ++i) w.lambda.push_back(static_cast<double>(i));
    return w;
  }
};

// Exact weighted variation by exhaustion over interval systems; the largest
// increments are paired with the smallest weights. Exponential in grid size,
// hence the cap.
inline double waterman_variation(const SampledFunction& f,
                                 const WatermanSequence& lam,
                                 size_t cap = exhaustive_cap()) {
  lam.validate();
  size_t n = f.size();
  require(n <= cap, ErrorKind::capacity,
          "grid too large for exhaustive weighted variation (cap " +
              std::to_string(cap) + ")");
  auto d = detail::increment_matrix(f);
  double best = 0.0;
  std::vector<double> incs;
  auto evaluate = [&] {
    std::vector<double> s = incs;
    std::sort(s.begin(), s.end(), std::greater<>());
    double v = 0.0;
    for (size_t i = 0; i < s.size(); ++i) v += s[i] / lam.at(i);
    best = std::max(best, v);
  };
  auto dfs = [&](auto&& self, size_t start) -> void {
    for (size_t a = start; a + 1 < n; ++a)
      for (size_t b = a + 1; b < n; ++b) {
        incs.push_back(d[a][b]);
        evaluate();
        self(self, b);
        incs.pop_back();
      }
  };
  dfs(dfs, 0);
  return best;
}

struct PhiGauge {
  std::string name = "identity";  // identity | power | exp
  double param = 1.0;

  double operator()(double u) const {
    if (name == "identity") return u;
    if (name == "power") return std::pow(u, param);
    if (name == "exp") return std::expm1(u);
    fail(ErrorKind::unsupported, "unknown gauge: " + name);
  }

  static PhiGauge identity() { return {}; }
  static PhiGauge power(double p) { return {"power", p}; }
  static PhiGauge exp_gauge() { return {"exp", 1.0}; }
};

// Largest total of phi(increment) over non-overlapping interval systems.
inline double phi_variation(const SampledFunction& f, const PhiGauge& phi) {
  size_t n = f.size();
  auto d = detail::increment_matrix(f);
  std::vector<double> dp(n, 0.0);
  for (size_t i = 1; i < n; ++i) {
    dp[i] = dp[i - 1];
    for (size_t a = 0; a < i; ++a) dp[i] = std::max(dp[i], dp[a] + phi(d[a][i]));
  }
  return dp[n - 1];
}

// Largest sum of |f| over a point sequence whose signs alternate strictly
// (either parity first); equals sup|f| when f never changes sign.
inline double schrader_oscillation(const SampledFunction& f) {
  require(f.space.scalar_kind(), ErrorKind::unsupported,
          "alternating-sign oscillation needs real values");
  double best = 0.0, best_end_pos = 0.0, best_end_neg = 0.0;
  bool has_pos = false, has_neg = false;
  for (size_t i = 0; i < f.size(); ++i) {
    double v = f.values[i].coords[0];
    if (v > 0.0) {
      double cand = v + (has_neg ? std::max(0.0, best_end_neg) : 0.0);
      if (!has_pos || cand > best_end_pos) best_end_pos = cand;
      has_pos = true;
      best = std::max(best, best_end_pos);
    } else if (v < 0.0) {
      double cand = -v + (has_pos ? std::max(0.0, best_end_pos) : 0.0);
      if (!has_neg || cand > best_end_neg) best_end_neg = cand;
      has_neg = true;
      best = std::max(best, best_end_neg);
    }
  }
  return best;
}

struct ClassicalVariationReport {
  double jordan = 0.0;
  double osc = 0.0;
  std::vector<double> nu;                          // nu[k] is nu_{k+1}
  std::vector<std::pair<double, int>> n_eps;       // (eps, count)
  std::optional<double> lambda_var;
  std::optional<double> phi_var;
  std::optional<double> schrader;
};

inline ClassicalVariationReport classical_report(
    const SampledFunction& f, int n_max, const std::vector<double>& eps_list,
    const std::optional<WatermanSequence>& lam = {},
    const std::optional<PhiGauge>& phi = {}) {
  ClassicalVariationReport r;
  r.jordan = jordan_variation(f);
  r.osc = oscillation(f);
  r.nu = modulus_of_variation(f, n_max);
  for (double e : eps_list) r.n_eps.push_back({e, n_epsilon_count(f, e)});
  if (lam) r.lambda_var = waterman_variation(f, *lam);
  if (phi) r.phi_var = phi_variation(f, *phi);
  if (f.space.scalar_kind()) r.schrader = schrader_oscillation(f);
  return r;
}

}  // namespace approxvar
