#pragma once

// Epsilon-variation engines: the least Jordan variation over the closed
// uniform-distance tube of radius eps around a sampled function.
//
//  - real line: greedy taut-string sweep, exact and attained
//  - finite metric: layered dynamic program over ball members, exact
//  - punctured line: dynamic program over a candidate value set drawn from
//    tube edges and hole boundaries; exact as an infimum, with attainment
//    decided by comparing against the strictly-admissible program
//  - euclidean dim >= 2: certified lower/upper bounds only
//
// Also: witnesses, the pointwise lower bound from thinned partitions, the
// prefix variation function, eps-profiles, and the strict-tube variant.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "approxvar/core.hpp"
#include "approxvar/sampled.hpp"
#include "approxvar/space.hpp"
#include "approxvar/variations.hpp"

namespace approxvar {

enum class VeMethod { taut_string, finite_dp, candidate_dp, bounds_only };

inline std::string to_string(VeMethod m) {
  switch (m) {
    case VeMethod::taut_string: return "taut_string";
    case VeMethod::finite_dp: return "finite_dp";
    case VeMethod::candidate_dp: return "candidate_dp";
    case VeMethod::bounds_only: return "bounds_only";
  }
  return "?";
}

struct EpsilonVariationResult {
  double value = 0.0;
  bool attained = false;
  VeMethod method = VeMethod::taut_string;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
};

// ---------------------------------------------------------------------------
// Real line: taut string

struct TautSweep {
  double cost = 0.0;
  std::vector<double> prefix;                    // running cost per grid point
  std::vector<std::pair<double, double>> bands;  // minimizing band per point
};

// Maintain the band of values reachable at minimal cost; when the next tube
// misses the band, pay the gap and collapse onto the nearest tube edge. The
// cost-to-come is 1-Lipschitz in the current value, which makes the greedy
// band update exact.
inline TautSweep taut_string_sweep(const std::vector<double>& vals, double eps) {
  require(!vals.empty(), ErrorKind::precondition, "empty sample");
  TautSweep s;
  s.prefix.resize(vals.size());
  s.bands.resize(vals.size());
  double lo = vals[0] - eps, hi = vals[0] + eps, cost = 0.0;
  s.prefix[0] = 0.0;
  s.bands[0] = {lo, hi};
  for (size_t i = 1; i < vals.size(); ++i) {
    double a = vals[i] - eps, b = vals[i] + eps;
    if (a > hi) {
      cost += a - hi;
      lo = hi = a;
    } else if (b < lo) {
      cost += lo - b;
      lo = hi = b;
    } else {
      lo = std::max(lo, a);
      hi = std::min(hi, b);
    }
    s.prefix[i] = cost;
    s.bands[i] = {lo, hi};
  }
  s.cost = cost;
  return s;
}

// Backward pass: the last value is the band point nearest the sample, then
// each earlier value is the current band point nearest its successor, which
// keeps the realized variation equal to the sweep cost.
inline std::vector<double> taut_string_witness(const TautSweep& s,
                                               const std::vector<double>& vals) {
  std::vector<double> g(vals.size());
  size_t n = vals.size();
  g[n - 1] = std::clamp(vals[n - 1], s.bands[n - 1].first, s.bands[n - 1].second);
  for (size_t i = n - 1; i-- > 0;)
    g[i] = std::clamp(g[i + 1], s.bands[i].first, s.bands[i].second);
  return g;
}

// ---------------------------------------------------------------------------
// Candidate-set dynamic program (punctured line; also a cross-check on the
// real line)

namespace detail {

struct Piece {
  double lo, hi;
};

inline bool strict_scalar_member(const MetricSpace& s, double v) {
  if (s.kind == SpaceKind::real_line) return true;
  if (s.hole_closed_removed) return v < s.hole_lo || v > s.hole_hi;
  return v <= s.hole_lo || v >= s.hole_hi;
}

// Closure of (tube around fi) ∩ M, as up to two closed intervals. Pieces that
// are empty as subsets of M are dropped before closing, so every returned
// endpoint is a limit of admissible values.
inline std::vector<Piece> admissible_closure(const MetricSpace& s, double fi,
                                             double eps) {
  double a = fi - eps, b = fi + eps;
  if (s.kind == SpaceKind::real_line) return {{a, b}};
  std::vector<Piece> out;
  double lo = s.hole_lo, hi = s.hole_hi;
  if (s.hole_closed_removed) {
    // removed [lo,hi]: M-parts are (-inf,lo) and (hi,inf), open at the hole
    if (a < lo) out.push_back({a, std::min(b, lo)});
    if (b > hi) out.push_back({std::max(a, hi), b});
  } else {
    // removed (lo,hi): M-parts are (-inf,lo] and [hi,inf)
    if (a <= lo) out.push_back({a, std::min(b, lo)});
    if (b >= hi) out.push_back({std::max(a, hi), b});
  }
  return out;
}

inline bool in_pieces(const std::vector<Piece>& ps, double v) {
  for (const Piece& p : ps)
    if (v >= p.lo && v <= p.hi) return true;
  return false;
}

inline std::vector<double> candidate_pool(const MetricSpace& s,
                                          const std::vector<double>& vals,
                                          double eps) {
  std::vector<double> g;
  g.reserve(vals.size() * 3 + 2);
  for (double v : vals) {
    g.push_back(v - eps);
    g.push_back(v);
    g.push_back(v + eps);
  }
  if (s.kind == SpaceKind::punctured_line) {
    g.push_back(s.hole_lo);
    g.push_back(s.hole_hi);
  }
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

// Value-only program over the sorted pool; the transition
// dp_new(v) = min_u dp(u) + |v-u| is the 1-Lipschitz lower envelope, done in
// two sweeps.
inline double candidate_dp_value(const MetricSpace& s,
                                 const std::vector<double>& vals, double eps,
                                 const std::vector<double>& pool,
                                 bool strict_only) {
  size_t m = pool.size();
  std::vector<char> ok(m);
  auto admissible = [&](size_t i, std::vector<char>& mask) {
    auto pieces = admissible_closure(s, vals[i], eps);
    bool any = false;
    for (size_t k = 0; k < m; ++k) {
      bool a = in_pieces(pieces, pool[k]) &&
               (!strict_only || strict_scalar_member(s, pool[k]));
      mask[k] = a;
      any = any || a;
    }
    return any;
  };
  std::vector<double> dp(m, kInf), env(m);
  if (!admissible(0, ok)) return kInf;
  for (size_t k = 0; k < m; ++k) dp[k] = ok[k] ? 0.0 : kInf;
  for (size_t i = 1; i < vals.size(); ++i) {
    double run = kInf;
    for (size_t k = 0; k < m; ++k) {
      if (run < kInf && k > 0) run += pool[k] - pool[k - 1];
      run = std::min(run, dp[k]);
      env[k] = run;
    }
    run = kInf;
    for (size_t k = m; k-- > 0;) {
      if (run < kInf && k + 1 < m) run += pool[k + 1] - pool[k];
      run = std::min(run, dp[k]);
      env[k] = std::min(env[k], run);
    }
    if (!admissible(i, ok)) return kInf;
    for (size_t k = 0; k < m; ++k) dp[k] = ok[k] ? env[k] : kInf;
  }
  double best = kInf;
  for (size_t k = 0; k < m; ++k) best = std::min(best, dp[k]);
  return best;
}

// Path-recovering variant, quadratic in the pool size.
inline std::pair<double, std::vector<double>> candidate_dp_path(
    const MetricSpace& s, const std::vector<double>& vals, double eps,
    const std::vector<double>& pool, bool strict_only) {
  size_t m = pool.size(), n = vals.size();
  std::vector<std::vector<double>> dp(n, std::vector<double>(m, kInf));
  std::vector<std::vector<int>> parent(n, std::vector<int>(m, -1));
  std::vector<char> ok(m);
  auto admissible = [&](size_t i) {
    auto pieces = admissible_closure(s, vals[i], eps);
    for (size_t k = 0; k < m; ++k)
      ok[k] = in_pieces(pieces, pool[k]) &&
              (!strict_only || strict_scalar_member(s, pool[k]));
  };
  admissible(0);
  for (size_t k = 0; k < m; ++k)
    if (ok[k]) dp[0][k] = 0.0;
  for (size_t i = 1; i < n; ++i) {
    admissible(i);
    for (size_t k = 0; k < m; ++k) {
      if (!ok[k]) continue;
      for (size_t p = 0; p < m; ++p) {
        if (dp[i - 1][p] == kInf) continue;
        double c = dp[i - 1][p] + std::fabs(pool[k] - pool[p]);
        if (c < dp[i][k] - 1e-15) {
          dp[i][k] = c;
          parent[i][k] = static_cast<int>(p);
        }
      }
    }
  }
  int bk = -1;
  double best = kInf;
  for (size_t k = 0; k < m; ++k) {
    // prefer the end value nearest the sample among ties
    if (dp[n - 1][k] < best - 1e-15 ||
        (dp[n - 1][k] < best + 1e-15 && bk >= 0 &&
         std::fabs(pool[k] - vals[n - 1]) < std::fabs(pool[bk] - vals[n - 1]))) {
      best = dp[n - 1][k];
      bk = static_cast<int>(k);
    }
  }
  std::vector<double> path;
  if (bk >= 0) {
    path.resize(n);
    int k = bk;
    for (size_t i = n; i-- > 0;) {
      path[i] = pool[k];
      k = parent[i][k];
    }
  }
  return {best, path};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Finite metric: layered program over ball members

namespace detail {

inline std::pair<double, std::vector<int>> finite_dp(const SampledFunction& f,
                                                     double eps) {
  const MetricSpace& s = f.space;
  size_t n = f.size(), m = s.labels.size();
  std::vector<std::vector<double>> dp(n, std::vector<double>(m, kInf));
  std::vector<std::vector<int>> parent(n, std::vector<int>(m, -1));
  for (size_t c = 0; c < m; ++c)
    if (s.dist[f.values[0].label][c] <= eps) dp[0][c] = 0.0;
  for (size_t i = 1; i < n; ++i) {
    int fi = f.values[i].label, fp = f.values[i - 1].label;
    for (size_t c = 0; c < m; ++c) {
      if (s.dist[fi][c] > eps) continue;
      for (size_t p = 0; p < m; ++p) {
        if (dp[i - 1][p] == kInf) continue;
        double cand = dp[i - 1][p] + s.dist[p][c];
        bool better = cand < dp[i][c] - 1e-15;
        if (!better && cand < dp[i][c] + 1e-15 && parent[i][c] >= 0) {
          // ties: predecessor nearest the previous sample, then lower label
          double dn = s.dist[fp][p], dc = s.dist[fp][parent[i][c]];
          better = dn < dc - 1e-15;
        }
        if (better) {
          dp[i][c] = std::min(dp[i][c], cand);
          parent[i][c] = static_cast<int>(p);
        }
      }
    }
  }
  int bc = -1;
  double best = kInf;
  int fl = f.values[n - 1].label;
  for (size_t c = 0; c < m; ++c) {
    if (dp[n - 1][c] == kInf) continue;
    bool better = dp[n - 1][c] < best - 1e-15;
    if (!better && dp[n - 1][c] < best + 1e-15 && bc >= 0)
      better = s.dist[fl][c] < s.dist[fl][bc] - 1e-15;
    if (better || bc < 0) {
      best = std::min(best, dp[n - 1][c]);
      bc = static_cast<int>(c);
    }
  }
  require(bc >= 0, ErrorKind::domain, "no admissible values inside the tube");
  std::vector<int> path(n);
  int c = bc;
  for (size_t i = n; i-- > 0;) {
    path[i] = c;
    c = parent[i][c];
  }
  return {best, path};
}

}  // namespace detail

// Subsequence program: max over index subsequences of the summed positive
// parts of (increment - 2 eps). A certified lower bound in every metric
// space; tight for two-valued alternation patterns.
inline double partition_lower_bound(const SampledFunction& f, double eps) {
  require(eps > 0.0, ErrorKind::domain, "eps must be positive");
  size_t n = f.size();
  std::vector<double> dp(n, 0.0);
  double best = 0.0;
  for (size_t i = 1; i < n; ++i) {
    dp[i] = dp[i - 1];
    for (size_t a = 0; a < i; ++a) {
      double inc = distance(f.space, f.values[a], f.values[i]) - 2.0 * eps;
      if (inc > 0.0) dp[i] = std::max(dp[i], dp[a] + inc);
    }
    best = std::max(best, dp[i]);
  }
  return best;
}

inline EpsilonVariationResult approx_variation(const SampledFunction& f,
                                               double eps) {
  require(eps > 0.0, ErrorKind::domain, "eps must be positive");
  EpsilonVariationResult r;
  const MetricSpace& s = f.space;
  if (s.kind == SpaceKind::real_line ||
      (s.kind == SpaceKind::euclidean && s.dimension == 1)) {
    std::vector<double> vals;
    vals.reserve(f.size());
    for (const Point& p : f.values) vals.push_back(p.coords[0]);
    TautSweep sw = taut_string_sweep(vals, eps);
    r.value = r.lower_bound = r.upper_bound = sw.cost;
    r.attained = true;
    r.method = VeMethod::taut_string;
    return r;
  }
  if (s.kind == SpaceKind::punctured_line) {
    std::vector<double> vals = f.scalars();
    auto pool = detail::candidate_pool(s, vals, eps);
    double clo = detail::candidate_dp_value(s, vals, eps, pool, false);
    double strict = detail::candidate_dp_value(s, vals, eps, pool, true);
    require(clo < detail::kInf, ErrorKind::domain,
            "no admissible values inside the tube");
    r.value = r.lower_bound = r.upper_bound = clo;
    r.attained = strict <= clo + kAbsTol;
    r.method = VeMethod::candidate_dp;
    return r;
  }
  if (s.kind == SpaceKind::finite_metric) {
    auto [v, path] = detail::finite_dp(f, eps);
    r.value = r.lower_bound = r.upper_bound = v;
    r.attained = true;
    r.method = VeMethod::finite_dp;
    return r;
  }
  // euclidean dim >= 2: certified interval
  r.method = VeMethod::bounds_only;
  r.lower_bound = partition_lower_bound(f, eps);
  RadiusBound rb = enclosing_radius_upper(s, f.values);
  if (rb.radius <= eps) {
    r.value = r.lower_bound = r.upper_bound = 0.0;
    r.attained = true;  // constant witness at the covering center
  } else {
    r.upper_bound = jordan_variation(f);
    r.value = r.upper_bound;
    r.attained = false;
  }
  return r;
}

struct WitnessResult {
  SampledFunction g;
  bool attained = true;
  double slack = 0.0;  // realized variation may exceed the value by this much
};

inline WitnessResult witness(const SampledFunction& f, double eps) {
  require(eps > 0.0, ErrorKind::domain, "eps must be positive");
  const MetricSpace& s = f.space;
  WitnessResult w;
  w.g.domain = f.domain;
  w.g.space = s;
  if (s.kind == SpaceKind::real_line ||
      (s.kind == SpaceKind::euclidean && s.dimension == 1)) {
    std::vector<double> vals;
    for (const Point& p : f.values) vals.push_back(p.coords[0]);
    TautSweep sw = taut_string_sweep(vals, eps);
    for (double v : taut_string_witness(sw, vals))
      w.g.values.push_back(s.kind == SpaceKind::euclidean
                               ? Point::vec({v})
                               : Point::real(v));
    return w;
  }
  if (s.kind == SpaceKind::finite_metric) {
    auto [v, path] = detail::finite_dp(f, eps);
    for (int c : path) w.g.values.push_back(Point::finite(c));
    return w;
  }
  if (s.kind == SpaceKind::punctured_line) {
    std::vector<double> vals = f.scalars();
    auto pool = detail::candidate_pool(s, vals, eps);
    auto [clo, clo_path] = detail::candidate_dp_path(s, vals, eps, pool, false);
    auto [strict, strict_path] =
        detail::candidate_dp_path(s, vals, eps, pool, true);
    require(clo < detail::kInf, ErrorKind::domain,
            "no admissible values inside the tube");
    if (strict <= clo + kAbsTol) {
      for (double v : strict_path) w.g.values.push_back(Point::real(v));
      return w;
    }
    // Infimum only: nudge excluded boundary values into the space. The
    // resulting variation exceeds the infimum by at most the recorded slack.
    w.attained = false;
    size_t n = vals.size();
    double budget = kAbsTol / (2.0 * static_cast<double>(n) + 2.0);
    for (size_t i = 0; i < n; ++i) {
      double v = clo_path[i];
      if (!detail::strict_scalar_member(s, v)) {
        auto pieces = detail::admissible_closure(s, vals[i], eps);
        for (const detail::Piece& p : pieces) {
          if (v < p.lo || v > p.hi) continue;
          if (nearly_equal(v, p.hi, 0.0) && p.hi == s.hole_lo && p.lo < p.hi) {
            v = p.hi - std::min(budget, 0.5 * (p.hi - p.lo));
            break;
          }
          if (nearly_equal(v, p.lo, 0.0) && p.lo == s.hole_hi && p.hi > p.lo) {
            v = p.lo + std::min(budget, 0.5 * (p.hi - p.lo));
            break;
          }
        }
      }
      w.g.values.push_back(Point::real(v));
    }
    w.slack = kAbsTol;
    return w;
  }
  // euclidean dim >= 2
  RadiusBound rb = enclosing_radius_upper(s, f.values);
  require(rb.radius <= eps, ErrorKind::unsupported,
          "no exact witness construction in euclidean dimension >= 2");
  for (size_t i = 0; i < f.size(); ++i) w.g.values.push_back(rb.center);
  return w;
}

// t -> eps-variation of the restriction to grid points up to t; nondecreasing.
inline std::vector<std::pair<double, double>> epsilon_variation_function(
    const SampledFunction& f, double eps) {
  require(eps > 0.0, ErrorKind::domain, "eps must be positive");
  std::vector<std::pair<double, double>> out;
  if (f.space.kind == SpaceKind::real_line ||
      (f.space.kind == SpaceKind::euclidean && f.space.dimension == 1)) {
    std::vector<double> vals;
    for (const Point& p : f.values) vals.push_back(p.coords[0]);
    TautSweep sw = taut_string_sweep(vals, eps);
    for (size_t i = 0; i < f.size(); ++i)
      out.push_back({f.domain.points[i], sw.prefix[i]});
    return out;
  }
  require(f.space.kind != SpaceKind::euclidean, ErrorKind::unsupported,
          "prefix variation needs an exactly computable value space");
  for (size_t i = 0; i < f.size(); ++i)
    out.push_back({f.domain.points[i], approx_variation(prefix(f, i), eps).value});
  return out;
}

struct ProfileRow {
  double eps = 0.0;
  EpsilonVariationResult res;
  double slope_after = 0.0;  // toward the next row; 0 on the last row
  bool breakpoint = false;   // slope change detected here (heuristic)
};

struct VariationProfile {
  std::vector<ProfileRow> rows;
  bool monotone_ok = true;

  void validate() const {
    for (size_t i = 1; i < rows.size(); ++i)
      require(rows[i - 1].eps < rows[i].eps, ErrorKind::shape,
              "profile eps grid must be strictly increasing");
  }
};

// Assemble rows that were evaluated elsewhere (possibly in parallel).
inline VariationProfile assemble_profile(
    const std::vector<double>& eps_grid,
    std::vector<EpsilonVariationResult> results) {
  require(eps_grid.size() == results.size(), ErrorKind::shape,
          "profile row count mismatch");
  VariationProfile p;
  for (size_t i = 0; i < eps_grid.size(); ++i)
    p.rows.push_back({eps_grid[i], std::move(results[i])});
  p.validate();
  for (size_t i = 0; i + 1 < p.rows.size(); ++i) {
    p.rows[i].slope_after = (p.rows[i + 1].res.value - p.rows[i].res.value) /
                            (p.rows[i + 1].eps - p.rows[i].eps);
    if (p.rows[i + 1].res.value > p.rows[i].res.value + kAbsTol)
      p.monotone_ok = false;
  }
  for (size_t i = 1; i + 1 < p.rows.size(); ++i)
    p.rows[i].breakpoint = std::fabs(p.rows[i].slope_after -
                                     p.rows[i - 1].slope_after) >
                           1e-9 * (1.0 + std::fabs(p.rows[i - 1].slope_after));
  return p;
}

inline VariationProfile profile(const SampledFunction& f,
                                const std::vector<double>& eps_grid) {
  std::vector<EpsilonVariationResult> results;
  results.reserve(eps_grid.size());
  for (double e : eps_grid) results.push_back(approx_variation(f, e));
  return assemble_profile(eps_grid, std::move(results));
}

// Left limit of the eps-variation, evaluated on a geometric delta ladder with
// plateau detection. On finite grids this is the strict-tube variant.
inline double strict_variant(const SampledFunction& f, double eps) {
  require(eps > 0.0, ErrorKind::domain, "eps must be positive");
  require(!(f.space.kind == SpaceKind::euclidean && f.space.dimension > 1),
          ErrorKind::unsupported,
          "strict variant needs an exactly computable value space");
  double last[3] = {-1.0, -2.0, -3.0};
  double v = 0.0;
  for (int m = 1; m <= 40; ++m) {
    double delta = std::ldexp(eps, -m);
    v = approx_variation(f, eps - delta).value;
    last[m % 3] = v;
    if (m >= 3 && nearly_equal(last[0], last[1]) && nearly_equal(last[1], last[2]))
      break;
  }
  return v;
}

}  // namespace approxvar
