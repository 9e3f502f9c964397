#pragma once

// Constructive selection machinery on finite function families: asymptotic
// condition checkers (variation bounds, modulus trends, threshold counts,
// eps-variation bounds per function and pairwise), extraction of pointwise
// stabilizing subsequences via cluster-refinement diagonals, and the
// Ramsey-style monochromatic-subset route for the pairwise conditions.
//
// Finite families can only exhibit trends, so checkers report tail-window
// statistics together with the thresholds that produced each verdict.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "approxvar/approx.hpp"
#include "approxvar/core.hpp"
#include "approxvar/sampled.hpp"
#include "approxvar/variations.hpp"

namespace approxvar {

enum class Verdict { holds_at_scale, fails_at_scale, inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds_at_scale: return "holds-at-scale";
    case Verdict::fails_at_scale: return "fails-at-scale";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

struct EpsilonLadder {
  double eps1 = 0.25;
  double ratio = 0.5;
  int depth = 3;

  std::vector<double> values() const {
    require(eps1 > 0 && ratio > 0 && ratio < 1 && depth >= 1, ErrorKind::shape,
            "ladder needs eps1 > 0, ratio in (0,1), depth >= 1");
    std::vector<double> v;
    double e = eps1;
    for (int k = 0; k < depth; ++k, e *= ratio) v.push_back(e);
    return v;
  }
};

// ---------------------------------------------------------------------------
// Condition checkers

struct ConditionCurve {
  std::string label;
  double param = 0.0;           // eps for the eps-indexed conditions
  std::vector<double> values;   // the raw curve (per index, or per n)
  double tail_sup = 0.0;
  double early_ref = 0.0;       // median of the first half
  double growth = 0.0;          // normalized least-squares slope, last third
  Verdict verdict = Verdict::inconclusive;
};

struct ConditionReport {
  std::string condition;
  std::vector<ConditionCurve> curves;
  double tail_fraction = 0.5;
  double hold_ratio = 10.0;      // holds when tail_sup <= hold_ratio*early_ref
  double growth_threshold = 0.2; // fails when normalized growth exceeds this
  Verdict overall = Verdict::inconclusive;
  double tail_sup_overall = 0.0;
};

struct CheckParams {
  EpsilonLadder ladder;
  int n_max = 12;
  double tail_fraction = 0.5;
};

namespace detail {

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

inline void finish_curve(ConditionCurve& c, const ConditionReport& rep) {
  size_t n = c.values.size();
  if (n == 0) return;
  size_t tail_len = std::max<size_t>(1, static_cast<size_t>(
                                            std::ceil(n * rep.tail_fraction)));
  c.tail_sup = 0.0;
  for (size_t i = n - tail_len; i < n; ++i)
    c.tail_sup = std::max(c.tail_sup, c.values[i]);
  c.early_ref = median({c.values.begin(),
                        c.values.begin() + std::max<size_t>(1, n / 2)});
  size_t third = std::max<size_t>(3, n / 3);
  c.growth = 0.0;
  if (n >= third && third >= 3) {
    // least squares over the last third
    size_t s = n - third;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = s; i < n; ++i) {
      double x = static_cast<double>(i);
      sx += x;
      sy += c.values[i];
      sxx += x * x;
      sxy += x * c.values[i];
    }
    double m = static_cast<double>(third);
    double denom = m * sxx - sx * sx;
    double slope = denom != 0.0 ? (m * sxy - sx * sy) / denom : 0.0;
    c.growth = slope * (static_cast<double>(n) / 3.0) /
               std::max(c.tail_sup, 1e-30);
  }
  if (c.growth > rep.growth_threshold)
    c.verdict = Verdict::fails_at_scale;
  else if (c.tail_sup <= 1e-12 ||
           c.tail_sup <= rep.hold_ratio * std::max(c.early_ref, 1e-12))
    c.verdict = Verdict::holds_at_scale;
  else
    c.verdict = Verdict::inconclusive;
}

inline void finish_report(ConditionReport& rep) {
  bool any_fail = false, all_hold = !rep.curves.empty();
  for (const ConditionCurve& c : rep.curves) {
    any_fail = any_fail || c.verdict == Verdict::fails_at_scale;
    all_hold = all_hold && c.verdict == Verdict::holds_at_scale;
    rep.tail_sup_overall = std::max(rep.tail_sup_overall, c.tail_sup);
  }
  rep.overall = any_fail ? Verdict::fails_at_scale
                         : (all_hold ? Verdict::holds_at_scale
                                     : Verdict::inconclusive);
}

inline double eps_variation_value(const SampledFunction& f, double eps) {
  return approx_variation(f, eps).value;
}

}  // namespace detail

// condition ids: bv | nu | neps | vep | pairwise | schrader
inline ConditionReport check_condition(const FunctionFamily& fam,
                                       const std::string& condition,
                                       const CheckParams& params = {}) {
  fam.validate();
  size_t J = fam.size();
  ConditionReport rep;
  rep.condition = condition;
  rep.tail_fraction = params.tail_fraction;
  auto ladder = params.ladder.values();

  if (condition == "bv") {
    ConditionCurve c;
    c.label = "variation per member";
    for (const SampledFunction& f : fam.members)
      c.values.push_back(jordan_variation(f));
    detail::finish_curve(c, rep);
    rep.curves.push_back(std::move(c));
  } else if (condition == "nu") {
    // tail-sup modulus over n, reported as mu_n / n
    size_t tail_len =
        std::max<size_t>(1, static_cast<size_t>(std::ceil(J * params.tail_fraction)));
    std::vector<std::vector<double>> nus;
    for (size_t j = J - tail_len; j < J; ++j)
      nus.push_back(modulus_of_variation(fam.members[j], params.n_max));
    ConditionCurve c;
    c.label = "mu_n / n over the member tail";
    for (int n = 1; n <= params.n_max; ++n) {
      double mu = 0.0;
      for (const auto& nu : nus) mu = std::max(mu, nu[n - 1]);
      c.values.push_back(mu / n);
    }
    // sublinear-trend rule: decayed by half between n_max/3 and n_max
    double at_third = c.values[std::max(0, params.n_max / 3 - 1)];
    double at_end = c.values[params.n_max - 1];
    c.tail_sup = at_end;
    c.early_ref = at_third;
    c.verdict = (at_end <= 0.5 * at_third || at_end <= 1e-12)
                    ? Verdict::holds_at_scale
                    : Verdict::inconclusive;
    rep.curves.push_back(std::move(c));
  } else if (condition == "neps" || condition == "vep") {
    for (double eps : ladder) {
      ConditionCurve c;
      c.param = eps;
      c.label = (condition == "vep" ? "eps-variation" : "interval count");
      for (const SampledFunction& f : fam.members)
        c.values.push_back(condition == "vep"
                               ? detail::eps_variation_value(f, eps)
                               : static_cast<double>(n_epsilon_count(f, eps)));
      detail::finish_curve(c, rep);
      rep.curves.push_back(std::move(c));
    }
  } else if (condition == "pairwise" || condition == "schrader") {
    require(fam.space.linear_kind(), ErrorKind::unsupported,
            "pairwise conditions need a linear value space");
    std::vector<double> eps_set =
        condition == "schrader" ? std::vector<double>{0.0} : ladder;
    size_t tail_len =
        std::max<size_t>(2, static_cast<size_t>(std::ceil(J * params.tail_fraction)));
    for (double eps : eps_set) {
      auto pair_value = [&](size_t j, size_t k) {
        SampledFunction diff =
            pointwise_difference(fam.members[j], fam.members[k]);
        return condition == "schrader" ? schrader_oscillation(diff)
                                       : detail::eps_variation_value(diff, eps);
      };
      ConditionCurve c;
      c.param = eps;
      c.label = condition == "schrader" ? "alternating oscillation, adjacent pairs"
                                        : "pairwise eps-variation, adjacent pairs";
      for (size_t j = 0; j + 1 < J; ++j) c.values.push_back(pair_value(j, j + 1));
      detail::finish_curve(c, rep);
      // tail statistic over all pairs in the window, not just adjacent ones
      double ts = 0.0;
      for (size_t j = J - tail_len; j < J; ++j)
        for (size_t k = j + 1; k < J; ++k) ts = std::max(ts, pair_value(j, k));
      c.tail_sup = ts;
      rep.curves.push_back(std::move(c));
    }
  } else {
    fail(ErrorKind::domain, "unknown condition id: " + condition);
  }
  detail::finish_report(rep);
  return rep;
}

// ---------------------------------------------------------------------------
// Extraction reports

struct SelectionReport {
  std::string mode;
  size_t family_size = 0;
  std::vector<int> indices;   // 1-based surviving member indices, increasing
  std::optional<SampledFunction> limit;
  std::vector<double> cauchy_residuals;  // per grid point, tail window
  double max_residual = 0.0;
  bool cauchy_ok = false;
  double sup_variation = 0.0;     // helly modes: sup_j V(f_j)
  bool limit_bound_ok = true;     // V(limit) <= bound + tol (mode-specific)
  std::vector<double> phi_eps;    // ladder levels
  std::vector<std::vector<double>> phi_profiles;  // per level, per grid point
  std::vector<double> level_bounds;               // C(eps) per level
  std::vector<std::vector<std::pair<double, double>>> intervals;  // irregular
  std::optional<bool> no_pair_pointwise_close;
  Verdict verdict = Verdict::inconclusive;
  std::string note;
};

namespace detail {

// Single-link clusters at one grid point; returns the surviving subset
// (dominant cluster; ties toward the cluster holding the smallest index).
// With tolerate_outliers, refinement is skipped when all but one member
// already agree: pointwise stabilization tolerates finitely many exceptions.
inline std::vector<int> refine_at_point(const FunctionFamily& fam,
                                        const std::vector<int>& members,
                                        size_t point,
                                        const std::vector<double>* profile_row,
                                        double gap, bool tolerate_outliers) {
  size_t m = members.size();
  if (m <= 2) return members;
  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    return parent[a] == a ? a : parent[a] = find(parent[a]);
  };
  for (size_t a = 0; a < m; ++a)
    for (size_t b = a + 1; b < m; ++b) {
      double dv;
      if (profile_row) {
        dv = std::fabs((*profile_row)[members[a] - 1] -
                       (*profile_row)[members[b] - 1]);
      } else {
        dv = distance(fam.space, fam.members[members[a] - 1].values[point],
                      fam.members[members[b] - 1].values[point]);
      }
      if (dv <= gap) parent[find(static_cast<int>(a))] = find(static_cast<int>(b));
    }
  std::map<int, std::vector<int>> clusters;
  for (size_t a = 0; a < m; ++a)
    clusters[find(static_cast<int>(a))].push_back(members[a]);
  const std::vector<int>* dominant = nullptr;
  for (const auto& [root, mem] : clusters)
    if (!dominant || mem.size() > dominant->size() ||
        (mem.size() == dominant->size() && mem.front() < dominant->front()))
      dominant = &mem;
  if (tolerate_outliers && m - dominant->size() <= 1) return members;
  if (dominant->size() < 2) return members;  // refinement would collapse
  return *dominant;
}

inline std::vector<double> tail_residuals(const FunctionFamily& fam,
                                          const std::vector<int>& members,
                                          double tail_fraction) {
  size_t m = members.size();
  size_t tail_len = std::max<size_t>(
      2, static_cast<size_t>(std::ceil(m * tail_fraction)));
  tail_len = std::min(tail_len, m);
  std::vector<double> res(fam.domain.size(), 0.0);
  for (size_t i = 0; i < fam.domain.size(); ++i)
    for (size_t a = m - tail_len; a < m; ++a)
      for (size_t b = a + 1; b < m; ++b)
        res[i] = std::max(res[i],
                          distance(fam.space, fam.members[members[a] - 1].values[i],
                                   fam.members[members[b] - 1].values[i]));
  return res;
}

inline void finish_cauchy(SelectionReport& rep, const FunctionFamily& fam,
                          const std::vector<int>& members, double tol,
                          double tail_fraction) {
  rep.indices = members;
  rep.cauchy_residuals = tail_residuals(fam, members, tail_fraction);
  rep.max_residual = 0.0;
  for (double r : rep.cauchy_residuals)
    rep.max_residual = std::max(rep.max_residual, r);
  rep.cauchy_ok = members.size() >= 2 && rep.max_residual <= tol;
}

// Per-point representative of the dominant tail cluster.
inline SampledFunction dominant_tail_limit(const FunctionFamily& fam,
                                           const std::vector<int>& members,
                                           double gap, double tail_fraction) {
  size_t m = members.size();
  size_t tail_len = std::max<size_t>(
      2, static_cast<size_t>(std::ceil(m * tail_fraction)));
  tail_len = std::min(tail_len, m);
  std::vector<int> tail(members.end() - tail_len, members.end());
  SampledFunction lim;
  lim.domain = fam.domain;
  lim.space = fam.space;
  for (size_t i = 0; i < fam.domain.size(); ++i) {
    std::vector<int> dom = refine_at_point(fam, tail, i, nullptr, gap, false);
    lim.values.push_back(fam.members[dom.front() - 1].values[i]);
  }
  return lim;
}

}  // namespace detail

// Extraction for uniformly bounded monotone real families.
inline SelectionReport helly_monotone(const FunctionFamily& fam, double tol,
                                      double tail_fraction = 0.5) {
  fam.validate();
  require(fam.space.scalar_kind(), ErrorKind::precondition,
          "monotone extraction needs real values");
  for (const SampledFunction& f : fam.members) {
    bool inc = true, dec = true;
    for (size_t i = 1; i < f.size(); ++i) {
      double a = f.values[i - 1].coords[0], b = f.values[i].coords[0];
      inc = inc && b >= a - kAbsTol;
      dec = dec && b <= a + kAbsTol;
    }
    require(inc || dec, ErrorKind::precondition,
            "family member is not monotone");
  }
  SelectionReport rep;
  rep.mode = "helly-monotone";
  rep.family_size = fam.size();
  for (const SampledFunction& f : fam.members)
    rep.sup_variation = std::max(rep.sup_variation, jordan_variation(f));
  std::vector<int> S(fam.size());
  std::iota(S.begin(), S.end(), 1);
  for (size_t i = 0; i < fam.domain.size(); ++i)
    S = detail::refine_at_point(fam, S, i, nullptr, tol, true);
  detail::finish_cauchy(rep, fam, S, tol, tail_fraction);
  rep.limit = fam.members[S.back() - 1];
  rep.verdict = rep.cauchy_ok ? Verdict::holds_at_scale : Verdict::inconclusive;
  return rep;
}

// Extraction under a uniform variation bound; the limit candidate is the
// per-point dominant tail value and must respect lower semicontinuity.
inline SelectionReport helly_bv(const FunctionFamily& fam, double tol,
                                double tail_fraction = 0.5) {
  fam.validate();
  SelectionReport rep;
  rep.mode = "helly-bv";
  rep.family_size = fam.size();
  for (const SampledFunction& f : fam.members)
    rep.sup_variation = std::max(rep.sup_variation, jordan_variation(f));
  std::vector<int> S(fam.size());
  std::iota(S.begin(), S.end(), 1);
  for (size_t i = 0; i < fam.domain.size(); ++i)
    S = detail::refine_at_point(fam, S, i, nullptr, tol, true);
  detail::finish_cauchy(rep, fam, S, tol, tail_fraction);
  rep.limit = detail::dominant_tail_limit(fam, S, tol, tail_fraction);
  rep.limit_bound_ok =
      jordan_variation(*rep.limit) <= rep.sup_variation + tol;
  rep.verdict = rep.limit_bound_ok
                    ? (rep.cauchy_ok ? Verdict::holds_at_scale
                                     : Verdict::inconclusive)
                    : Verdict::inconclusive;
  return rep;
}

// True when every pair of members separates by more than tol somewhere: no
// two-member subsequence is pointwise close within tol at all grid points.
inline bool pairwise_cauchy_certificate(const FunctionFamily& fam, double tol) {
  for (size_t a = 0; a < fam.size(); ++a)
    for (size_t b = a + 1; b < fam.size(); ++b) {
      double sep = 0.0;
      for (size_t i = 0; i < fam.domain.size(); ++i)
        sep = std::max(sep, distance(fam.space, fam.members[a].values[i],
                                     fam.members[b].values[i]));
      if (sep <= tol) return false;
    }
  return true;
}

// Diagonal extraction through prefix eps-variation profiles, then through the
// values themselves. The clustering gap halves per ladder level with floor
// tol, so tolerances do not accumulate across the diagonal.
inline SelectionReport sp_extract(const FunctionFamily& fam,
                                  const EpsilonLadder& ladder, double tol,
                                  double tail_fraction = 0.5) {
  fam.validate();
  require(!(fam.space.kind == SpaceKind::euclidean && fam.space.dimension > 1),
          ErrorKind::unsupported,
          "profile extraction needs an exactly computable value space");
  require(fam.size() >= 2, ErrorKind::capacity,
          "need at least two members for depth " +
              std::to_string(ladder.depth) + " (roughly 2^depth = " +
              std::to_string(1ll << std::min(ladder.depth, 30)) +
              " for unstructured families); got " + std::to_string(fam.size()));
  SelectionReport rep;
  rep.mode = "sp";
  rep.family_size = fam.size();
  std::vector<double> eps_values = ladder.values();
  rep.phi_eps = eps_values;
  size_t J = fam.size(), n = fam.domain.size();

  // prefix profiles per level and member
  std::vector<std::vector<std::vector<double>>> prof(
      eps_values.size(), std::vector<std::vector<double>>(J));
  for (size_t k = 0; k < eps_values.size(); ++k)
    for (size_t j = 0; j < J; ++j) {
      auto pv = epsilon_variation_function(fam.members[j], eps_values[k]);
      for (auto& [t, v] : pv) prof[k][j].push_back(v);
    }

  // C(eps): tail-window bound per level, recorded for the profile invariants
  size_t tail_len =
      std::max<size_t>(2, static_cast<size_t>(std::ceil(J * tail_fraction)));
  for (size_t k = 0; k < eps_values.size(); ++k) {
    double c = 0.0;
    for (size_t j = J - std::min(tail_len, J); j < J; ++j)
      c = std::max(c, prof[k][j].back());
    rep.level_bounds.push_back(c);
  }

  std::vector<int> S(J);
  std::iota(S.begin(), S.end(), 1);
  for (size_t k = 0; k < eps_values.size(); ++k) {
    double scale = 0.0;
    for (int j : S) scale = std::max(scale, prof[k][j - 1].back());
    double gap = std::max(tol, scale * std::ldexp(1.0, -static_cast<int>(k) - 1));
    for (size_t i = 0; i < n; ++i) {
      std::vector<double> row(J, 0.0);
      for (int j : S) row[j - 1] = prof[k][j - 1][i];
      S = detail::refine_at_point(fam, S, i, &row, gap, false);
    }
  }
  for (size_t i = 0; i < n; ++i)
    S = detail::refine_at_point(fam, S, i, nullptr, tol, false);

  detail::finish_cauchy(rep, fam, S, tol, tail_fraction);
  rep.limit = fam.members[S.back() - 1];
  for (size_t k = 0; k < eps_values.size(); ++k)
    rep.phi_profiles.push_back(prof[k][S.back() - 1]);
  rep.limit_bound_ok = true;
  for (size_t k = 0; k < eps_values.size(); ++k) {
    double vl = approx_variation(*rep.limit, eps_values[k]).value;
    rep.limit_bound_ok = rep.limit_bound_ok && vl <= rep.level_bounds[k] + tol;
  }
  rep.verdict = (rep.cauchy_ok && rep.limit_bound_ok) ? Verdict::holds_at_scale
                                                      : Verdict::fails_at_scale;
  if (rep.verdict == Verdict::fails_at_scale && fam.size() <= 64)
    rep.no_pair_pointwise_close = pairwise_cauchy_certificate(fam, tol);
  return rep;
}

// Local variant: run the profile extraction on each window in turn, feeding
// the survivors of one window into the next.
inline SelectionReport sp_extract_local(
    const FunctionFamily& fam, const std::vector<std::pair<double, double>>& windows,
    const EpsilonLadder& ladder, double tol, double tail_fraction = 0.5) {
  fam.validate();
  require(!windows.empty(), ErrorKind::domain, "window list is empty");
  std::vector<int> S(fam.size());
  std::iota(S.begin(), S.end(), 1);
  SelectionReport rep;
  rep.mode = "sp-local";
  rep.family_size = fam.size();
  std::ostringstream note;
  SelectionReport last;
  for (size_t w = 0; w < windows.size(); ++w) {
    FunctionFamily sub;
    sub.space = fam.space;
    bool first = true;
    for (int j : S) {
      SampledFunction rf =
          restrict(fam.members[j - 1], windows[w].first, windows[w].second);
      if (first) {
        sub.domain = rf.domain;
        first = false;
      }
      sub.members.push_back(std::move(rf));
    }
    last = sp_extract(sub, ladder, tol, tail_fraction);
    std::vector<int> next;
    for (int r : last.indices) next.push_back(S[r - 1]);
    S = next;
    note << "window[" << windows[w].first << "," << windows[w].second
         << "]: " << to_string(last.verdict) << "; ";
  }
  rep.indices = S;
  rep.limit = last.limit;
  rep.cauchy_residuals = last.cauchy_residuals;
  rep.max_residual = last.max_residual;
  rep.cauchy_ok = last.cauchy_ok;
  rep.verdict = last.verdict;
  rep.note = note.str();
  return rep;
}

// ---------------------------------------------------------------------------
// Ramsey machinery

// Greedy monochromatic subset under a two-coloring of index pairs: seeded
// clique growth over every (color, seed) choice, deterministic tie-breaks,
// exhaustive recheck before returning. Capacity error when the best subset
// is smaller than min_size.
inline std::vector<int> ramsey_monochromatic_subset(
    const std::vector<int>& indices,
    const std::function<int(int, int)>& colorer, size_t min_size) {
  require(indices.size() >= 2, ErrorKind::precondition,
          "need at least two indices");
  auto color = [&](int a, int b) { return colorer(std::min(a, b), std::max(a, b)); };
  std::vector<int> best;
  int best_color = 0;
  for (int c : {0, 1}) {
    for (size_t s = 0; s < indices.size(); ++s) {
      std::vector<int> sub{indices[s]};
      for (size_t u = 0; u < indices.size(); ++u) {
        if (u == s) continue;
        bool ok = true;
        for (int v : sub)
          if (color(v, indices[u]) != c) {
            ok = false;
            break;
          }
        if (ok) sub.push_back(indices[u]);
      }
      if (sub.size() > best.size()) {
        std::sort(sub.begin(), sub.end());
        best = sub;
        best_color = c;
      }
    }
  }
  // verify monochromatic by exhaustive pair recheck
  for (size_t a = 0; a < best.size(); ++a)
    for (size_t b = a + 1; b < best.size(); ++b)
      require(color(best[a], best[b]) == best_color, ErrorKind::precondition,
              "internal: candidate subset is not monochromatic");
  require(best.size() >= min_size, ErrorKind::capacity,
          "monochromatic subset of size " + std::to_string(best.size()) +
              " < requested " + std::to_string(min_size));
  return best;
}

// Pairwise-condition extraction: per ladder level and grid prefix, bisect the
// value interval [0, C] by Ramsey selection on the two-coloring "prefix
// variation of the difference below / above the midpoint", to depth P; the
// surviving subsequence then takes a pointwise stabilization check.
inline SelectionReport irregular_extract(const FunctionFamily& fam,
                                         const EpsilonLadder& ladder,
                                         int bisection_depth, double tol,
                                         double tail_fraction = 0.5) {
  fam.validate();
  require(fam.space.scalar_kind(), ErrorKind::unsupported,
          "pairwise extraction needs real values");
  require(fam.size() >= 2, ErrorKind::capacity, "need at least two members");
  SelectionReport rep;
  rep.mode = "irregular";
  rep.family_size = fam.size();
  std::vector<double> eps_values = ladder.values();
  rep.phi_eps = eps_values;
  size_t J = fam.size(), n = fam.domain.size();

  // prefix variation of every pairwise difference, per level
  std::vector<std::vector<std::vector<double>>> pairpro(
      eps_values.size(),
      std::vector<std::vector<double>>(J * J));
  for (size_t k = 0; k < eps_values.size(); ++k)
    for (size_t a = 0; a < J; ++a)
      for (size_t b = a + 1; b < J; ++b) {
        SampledFunction diff =
            pointwise_difference(fam.members[a], fam.members[b]);
        TautSweep sw = taut_string_sweep(diff.scalars(), eps_values[k]);
        pairpro[k][a * J + b] = sw.prefix;
      }
  auto pair_prefix = [&](size_t k, int ja, int jb, size_t i) {
    size_t a = static_cast<size_t>(std::min(ja, jb)) - 1;
    size_t b = static_cast<size_t>(std::max(ja, jb)) - 1;
    return pairpro[k][a * J + b][i];
  };

  std::vector<int> S(J);
  std::iota(S.begin(), S.end(), 1);
  try {
    for (size_t k = 0; k < eps_values.size(); ++k) {
      double C = 0.0;
      for (size_t a = 0; a < S.size(); ++a)
        for (size_t b = a + 1; b < S.size(); ++b)
          C = std::max(C, pair_prefix(k, S[a], S[b], n - 1));
      rep.level_bounds.push_back(C);
      std::vector<std::pair<double, double>> level_intervals;
      std::vector<double> midpoints;
      for (size_t i = 0; i < n; ++i) {
        double lo = 0.0, hi = std::max(C, tol);
        for (int p = 0; p < bisection_depth; ++p) {
          double mid = 0.5 * (lo + hi);
          auto colorer = [&](int a, int b) {
            return pair_prefix(k, a, b, i) < mid ? 0 : 1;
          };
          std::vector<int> next = ramsey_monochromatic_subset(S, colorer, 2);
          int cls = colorer(next[0], next[1]);
          if (cls == 0)
            hi = mid;
          else
            lo = mid;
          S = next;
        }
        level_intervals.push_back({lo, hi});
        midpoints.push_back(0.5 * (lo + hi));
      }
      rep.intervals.push_back(std::move(level_intervals));
      rep.phi_profiles.push_back(std::move(midpoints));
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::capacity) throw;
    std::ostringstream os;
    os << "bisection ran out of members (" << e.what() << "); worst-case need ~2^("
       << bisection_depth << "*" << n << "*" << eps_values.size() << ") members";
    rep.note = os.str();
    rep.verdict = Verdict::fails_at_scale;
    rep.indices = S;
    return rep;
  }
  detail::finish_cauchy(rep, fam, S, tol, tail_fraction);
  rep.limit = fam.members[S.back() - 1];
  rep.verdict =
      rep.cauchy_ok ? Verdict::holds_at_scale : Verdict::fails_at_scale;
  return rep;
}

// Run a checker with a set of grid points excluded, reporting both views.
struct ExceptionalSubsetReport {
  ConditionReport full;
  ConditionReport reduced;
  std::vector<size_t> excluded;
};

inline ExceptionalSubsetReport check_exceptional_subset(
    const FunctionFamily& fam, const std::vector<size_t>& excluded,
    const std::string& condition, const CheckParams& params = {}) {
  fam.validate();
  std::vector<char> drop(fam.domain.size(), 0);
  for (size_t e : excluded) {
    require(e < fam.domain.size(), ErrorKind::domain,
            "excluded index out of range");
    drop[e] = 1;
  }
  FunctionFamily reduced;
  reduced.space = fam.space;
  for (size_t i = 0; i < fam.domain.size(); ++i) {
    if (drop[i]) continue;
    reduced.domain.points.push_back(fam.domain.points[i]);
    if (!fam.domain.exact.empty())
      reduced.domain.exact.push_back(fam.domain.exact[i]);
    if (!fam.domain.tags.empty())
      reduced.domain.tags.push_back(fam.domain.tags[i]);
  }
  require(!reduced.domain.points.empty(), ErrorKind::domain,
          "excluding every grid point leaves an empty domain");
  for (const SampledFunction& f : fam.members) {
    SampledFunction rf;
    rf.space = f.space;
    rf.domain = reduced.domain;
    for (size_t i = 0; i < fam.domain.size(); ++i)
      if (!drop[i]) rf.values.push_back(f.values[i]);
    reduced.members.push_back(std::move(rf));
  }
  ExceptionalSubsetReport rep;
  rep.excluded = excluded;
  rep.full = check_condition(fam, condition, params);
  rep.reduced = check_condition(reduced, condition, params);
  return rep;
}

}  // namespace approxvar
