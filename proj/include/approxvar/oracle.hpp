#pragma once

// Brute-force reference implementations used to certify the fast engines on
// small instances. Test-only dependency direction: production code never
// calls into this header; the CLI exposes it solely for certification runs.

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "approxvar/approx.hpp"
#include "approxvar/core.hpp"
#include "approxvar/sampled.hpp"
#include "approxvar/variations.hpp"

namespace approxvar::oracle {

struct OracleConfig {
  size_t max_points = 10;
  double step_scale = 1e-3;  // tube discretization step, relative to oscillation
  std::uint64_t seed = 20240901;
  int instances = 1000;
};

// Exhaustive tube search. The value pool contains every engine candidate
// exactly plus a uniform discretization, so a gap between the candidate-set
// program and the true infimum would show up here, bounded by the step.
inline double brute_epsilon_variation(const SampledFunction& f, double eps,
                                      const OracleConfig& cfg = {}) {
  require(f.size() <= cfg.max_points, ErrorKind::capacity,
          "instance too large for the brute-force reference");
  const MetricSpace& s = f.space;
  if (s.scalar_kind()) {
    std::vector<double> vals = f.scalars();
    std::vector<double> pool = detail::candidate_pool(s, vals, eps);
    double lo = *std::min_element(vals.begin(), vals.end()) - eps;
    double hi = *std::max_element(vals.begin(), vals.end()) + eps;
    double osc = oscillation(f);
    double step = cfg.step_scale * (osc > 0 ? osc : 1.0);
    for (double v = lo; v < hi; v += step) pool.push_back(v);
    pool.push_back(hi);
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    double v = detail::candidate_dp_value(s, vals, eps, pool, false);
    require(v < detail::kInf, ErrorKind::domain,
            "no admissible values inside the tube");
    return v;
  }
  if (s.kind == SpaceKind::finite_metric) {
    size_t n = f.size();
    std::vector<std::vector<int>> balls(n);
    for (size_t i = 0; i < n; ++i) {
      for (int c = 0; c < static_cast<int>(s.labels.size()); ++c)
        if (s.dist[f.values[i].label][c] <= eps) balls[i].push_back(c);
      require(!balls[i].empty(), ErrorKind::domain, "empty tube at a grid point");
    }
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> choice(n, 0);
    // odometer over the ball product
    while (true) {
      double cost = 0.0;
      for (size_t i = 1; i < n; ++i)
        cost += s.dist[balls[i - 1][choice[i - 1]]][balls[i][choice[i]]];
      best = std::min(best, cost);
      size_t pos = 0;
      while (pos < n) {
        if (++choice[pos] < static_cast<int>(balls[pos].size())) break;
        choice[pos] = 0;
        ++pos;
      }
      if (pos == n) break;
    }
    return best;
  }
  fail(ErrorKind::unsupported, "no brute-force reference for this space kind");
}

namespace detail2 {

// Visit every system of non-overlapping index intervals (shared endpoints
// allowed), including the empty system.
template <class Fn>
inline void for_each_system(size_t n, Fn&& fn) {
  std::vector<std::pair<size_t, size_t>> cur;
  fn(cur);
  auto dfs = [&](auto&& self, size_t start) -> void {
    for (size_t a = start; a + 1 < n; ++a)
      for (size_t b = a + 1; b < n; ++b) {
        cur.push_back({a, b});
        fn(cur);
        self(self, b);
        cur.pop_back();
      }
  };
  dfs(dfs, 0);
}

}  // namespace detail2

struct BruteIntervalReport {
  std::vector<double> nu;
  std::vector<std::pair<double, int>> n_eps;
  double lambda_var = 0.0;
  double phi_var = 0.0;
  double schrader = 0.0;
};

inline BruteIntervalReport brute_interval_functionals(
    const SampledFunction& f, int n_max, const std::vector<double>& eps_list,
    const WatermanSequence& lam, const PhiGauge& phi,
    const OracleConfig& cfg = {}) {
  require(f.size() <= cfg.max_points, ErrorKind::capacity,
          "instance too large for the brute-force reference");
  size_t n = f.size();
  auto d = detail::increment_matrix(f);
  BruteIntervalReport r;
  r.nu.assign(n_max, 0.0);
  std::vector<int> neps_counts(eps_list.size(), 0);
  detail2::for_each_system(n, [&](const std::vector<std::pair<size_t, size_t>>& sys) {
    std::vector<double> incs;
    for (auto [a, b] : sys) incs.push_back(d[a][b]);
    double total = 0.0, mn = std::numeric_limits<double>::infinity();
    for (double v : incs) {
      total += v;
      mn = std::min(mn, v);
    }
    for (int c = static_cast<int>(incs.size()); c <= n_max; ++c)
      if (c >= 1 && static_cast<int>(incs.size()) <= c)
        r.nu[c - 1] = std::max(r.nu[c - 1], total);
    for (size_t e = 0; e < eps_list.size(); ++e)
      if (!incs.empty() && mn > eps_list[e])
        neps_counts[e] = std::max(neps_counts[e], static_cast<int>(incs.size()));
    // weighted: enumerate assignments for small systems, else sorted pairing
    if (!incs.empty()) {
      if (incs.size() <= 6) {
        std::vector<size_t> perm(incs.size());
        for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
        std::sort(perm.begin(), perm.end());
        do {
          double v = 0.0;
          for (size_t i = 0; i < perm.size(); ++i) v += incs[perm[i]] / lam.at(i);
          r.lambda_var = std::max(r.lambda_var, v);
        } while (std::next_permutation(perm.begin(), perm.end()));
      } else {
        std::vector<double> ss = incs;
        std::sort(ss.begin(), ss.end(), std::greater<>());
        double v = 0.0;
        for (size_t i = 0; i < ss.size(); ++i) v += ss[i] / lam.at(i);
        r.lambda_var = std::max(r.lambda_var, v);
      }
      double pv = 0.0;
      for (double v : incs) pv += phi(v);
      r.phi_var = std::max(r.phi_var, pv);
    }
  });
  for (size_t e = 0; e < eps_list.size(); ++e)
    r.n_eps.push_back({eps_list[e], neps_counts[e]});

  if (f.space.scalar_kind()) {
    // every subset, kept when its sign pattern alternates strictly
    std::vector<double> vals = f.scalars();
    require(n <= 20, ErrorKind::capacity, "too many points for subset search");
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      double sum = 0.0;
      int prev_sign = 0;
      bool ok = true;
      for (size_t i = 0; i < n && ok; ++i) {
        if (!(mask & (1u << i))) continue;
        int sg = vals[i] > 0.0 ? 1 : (vals[i] < 0.0 ? -1 : 0);
        if (sg == 0 || sg == prev_sign) {
          ok = false;
          break;
        }
        if (prev_sign != 0 && sg != -prev_sign) {
          ok = false;
          break;
        }
        prev_sign = sg;
        sum += std::fabs(vals[i]);
      }
      if (ok) r.schrader = std::max(r.schrader, sum);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Seeded certification runs

struct CertificationOutcome {
  int instances = 0;
  int failures = 0;
  double max_diff = 0.0;
  std::vector<std::uint64_t> failing_seeds;
  bool ok() const { return failures == 0; }
};

inline SampledFunction random_real_instance(std::mt19937_64& rng,
                                            size_t max_points, double* eps_out) {
  std::uniform_int_distribution<size_t> nd(2, max_points);
  std::uniform_real_distribution<double> vd(0.0, 1.0);
  size_t n = nd(rng);
  GridDomain g;
  for (size_t i = 0; i < n; ++i) g.points.push_back(static_cast<double>(i));
  SampledFunction f;
  f.domain = g;
  f.space = MetricSpace::real();
  for (size_t i = 0; i < n; ++i) f.values.push_back(Point::real(vd(rng)));
  double osc = oscillation(f);
  if (osc <= 0) osc = 1.0;
  std::uniform_real_distribution<double> ed(0.01, 0.99);
  *eps_out = ed(rng) * osc;
  return f;
}

// Random finite metric via shortest-path closure of random weights, which
// restores the triangle inequality.
inline MetricSpace random_finite_space(std::mt19937_64& rng, int max_labels) {
  std::uniform_int_distribution<int> ld(2, max_labels);
  std::uniform_real_distribution<double> wd(0.2, 2.0);
  int m = ld(rng);
  std::vector<std::vector<double>> d(m, std::vector<double>(m, 0.0));
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) d[i][j] = d[j][i] = wd(rng);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  std::vector<std::string> labels;
  for (int i = 0; i < m; ++i) labels.push_back("p" + std::to_string(i));
  return MetricSpace::finite(labels, d);
}

inline CertificationOutcome certify_real_engines(int instances,
                                                 std::uint64_t seed,
                                                 size_t max_points = 10,
                                                 double step_scale = 1e-3) {
  CertificationOutcome out;
  out.instances = instances;
  OracleConfig cfg;
  cfg.max_points = max_points;
  cfg.step_scale = step_scale;
  for (int t = 0; t < instances; ++t) {
    std::uint64_t s = seed + static_cast<std::uint64_t>(t);
    std::mt19937_64 rng(s);
    double eps = 0.0;
    SampledFunction f = random_real_instance(rng, max_points, &eps);
    std::vector<double> vals = f.scalars();
    double taut = taut_string_sweep(vals, eps).cost;
    auto pool = detail::candidate_pool(f.space, vals, eps);
    double cand = detail::candidate_dp_value(f.space, vals, eps, pool, false);
    double brute = brute_epsilon_variation(f, eps, cfg);
    double osc = oscillation(f);
    double step = step_scale * (osc > 0 ? osc : 1.0);
    double diff = std::max(std::fabs(taut - cand), std::fabs(taut - brute));
    out.max_diff = std::max(out.max_diff, diff);
    if (std::fabs(taut - cand) > 1e-9 || std::fabs(taut - brute) > 2.0 * step) {
      ++out.failures;
      out.failing_seeds.push_back(s);
    }
  }
  return out;
}

inline CertificationOutcome certify_finite_engines(int instances,
                                                   std::uint64_t seed,
                                                   int max_labels = 5,
                                                   size_t max_points = 8) {
  CertificationOutcome out;
  out.instances = instances;
  OracleConfig cfg;
  cfg.max_points = max_points;
  for (int t = 0; t < instances; ++t) {
    std::uint64_t s = seed + static_cast<std::uint64_t>(t);
    std::mt19937_64 rng(s);
    MetricSpace sp = random_finite_space(rng, max_labels);
    std::uniform_int_distribution<size_t> nd(2, max_points);
    size_t n = nd(rng);
    SampledFunction f;
    for (size_t i = 0; i < n; ++i) f.domain.points.push_back(static_cast<double>(i));
    f.space = sp;
    std::uniform_int_distribution<int> pd(0, static_cast<int>(sp.labels.size()) - 1);
    for (size_t i = 0; i < n; ++i) f.values.push_back(Point::finite(pd(rng)));
    double osc = oscillation(f);
    if (osc <= 0) osc = 1.0;
    std::uniform_real_distribution<double> ed(0.05, 1.0);
    double eps = ed(rng) * osc;
    double fast = approx_variation(f, eps).value;
    double brute = brute_epsilon_variation(f, eps, cfg);
    double diff = std::fabs(fast - brute);
    out.max_diff = std::max(out.max_diff, diff);
    if (diff != 0.0) {
      ++out.failures;
      out.failing_seeds.push_back(s);
    }
  }
  return out;
}

inline CertificationOutcome certify_interval_functionals(int instances,
                                                         std::uint64_t seed,
                                                         size_t max_points = 8) {
  CertificationOutcome out;
  out.instances = instances;
  for (int t = 0; t < instances; ++t) {
    std::uint64_t s = seed + static_cast<std::uint64_t>(t);
    std::mt19937_64 rng(s);
    double eps = 0.0;
    SampledFunction f = random_real_instance(rng, max_points, &eps);
    int n_max = 6;
    std::vector<double> eps_list{0.5 * eps, eps};
    WatermanSequence lam = WatermanSequence::harmonic_index(f.size());
    PhiGauge phi = PhiGauge::power(2.0);
    OracleConfig cfg;
    cfg.max_points = max_points;
    BruteIntervalReport br =
        brute_interval_functionals(f, n_max, eps_list, lam, phi, cfg);
    auto nu = modulus_of_variation(f, n_max);
    bool bad = false;
    for (int c = 0; c < n_max; ++c) bad = bad || std::fabs(nu[c] - br.nu[c]) > 1e-9;
    for (size_t e = 0; e < eps_list.size(); ++e)
      bad = bad || n_epsilon_count(f, eps_list[e]) != br.n_eps[e].second;
    bad = bad || std::fabs(waterman_variation(f, lam) - br.lambda_var) > 1e-9;
    bad = bad || std::fabs(phi_variation(f, phi) - br.phi_var) > 1e-9;
    bad = bad || std::fabs(schrader_oscillation(f) - br.schrader) > 1e-9;
    if (bad) {
      ++out.failures;
      out.failing_seeds.push_back(s);
    }
  }
  return out;
}

}  // namespace approxvar::oracle
