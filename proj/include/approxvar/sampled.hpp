#pragma once

// Finite sampled domains and functions, plus the built-in generator families
// (monotone ramps, spikes, three-step jumps, two-valued alternation patterns,
// sin(jt) and factorial oscillators). Generators publish canonical grids and
// refuse grids that miss their critical points, because the reference values
// are only achieved through partitions that pass through those points.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "approxvar/core.hpp"
#include "approxvar/space.hpp"

namespace approxvar {

// Finite surrogate for the dense/codense alternation classes a two-valued
// pattern oscillates between. Floating grids cannot carry irrationality, so
// the class is an explicit per-point tag.
enum class DenseTag { none, rational, irrational };

struct GridDomain {
  std::vector<double> points;                    // strictly increasing
  std::vector<std::optional<ExactCoord>> exact;  // empty, or one slot per point
  std::vector<DenseTag> tags;                    // empty, or one tag per point

  size_t size() const { return points.size(); }
  double front() const { return points.front(); }
  double back() const { return points.back(); }

  DenseTag tag(size_t i) const { return tags.empty() ? DenseTag::none : tags[i]; }

  void validate() const {
    require(!points.empty(), ErrorKind::shape, "grid domain must be nonempty");
    for (size_t i = 1; i < points.size(); ++i)
      require(points[i - 1] < points[i], ErrorKind::shape,
              "grid points must be strictly increasing");
    require(exact.empty() || exact.size() == points.size(), ErrorKind::shape,
            "exact coordinate list length mismatch");
    require(tags.empty() || tags.size() == points.size(), ErrorKind::shape,
            "tag list length mismatch");
  }

  static GridDomain from_points(std::vector<double> pts) {
    GridDomain g;
    g.points = std::move(pts);
    g.validate();
    return g;
  }

  static GridDomain uniform(double a, double b, int segments) {
    require(segments >= 1 && a < b, ErrorKind::shape, "bad uniform grid request");
    GridDomain g;
    for (int i = 0; i <= segments; ++i)
      g.points.push_back(a + (b - a) * static_cast<double>(i) / segments);
    return g;
  }

  bool contains(double t, double tol = kAbsTol) const {
    for (double p : points)
      if (std::fabs(p - t) <= tol) return true;
    return false;
  }

  size_t index_of(double t, double tol = kAbsTol) const {
    for (size_t i = 0; i < points.size(); ++i)
      if (std::fabs(points[i] - t) <= tol) return i;
    fail(ErrorKind::domain, "grid point not found");
  }
};

struct SampledFunction {
  GridDomain domain;
  MetricSpace space;
  std::vector<Point> values;

  size_t size() const { return values.size(); }

  void validate() const {
    domain.validate();
    require(values.size() == domain.size(), ErrorKind::shape,
            "one value per grid point required");
    for (const Point& p : values) require_member(space, p, "sampled function");
  }

  // Scalar view for the real-valued engines.
  std::vector<double> scalars() const {
    require(space.scalar_kind(), ErrorKind::unsupported,
            "scalar view of a non-scalar function");
    std::vector<double> out;
    out.reserve(values.size());
    for (const Point& p : values) out.push_back(p.coords[0]);
    return out;
  }

  static SampledFunction constant(const GridDomain& d, const MetricSpace& s,
                                  const Point& v) {
    SampledFunction f{d, s, std::vector<Point>(d.size(), v)};
    f.validate();
    return f;
  }
};

// Restriction to domain ∩ [lo,hi]; values are preserved.
inline SampledFunction restrict(const SampledFunction& f, double lo, double hi,
                                double tol = kAbsTol) {
  SampledFunction out;
  out.space = f.space;
  for (size_t i = 0; i < f.size(); ++i) {
    double t = f.domain.points[i];
    if (t < lo - tol || t > hi + tol) continue;
    out.domain.points.push_back(t);
    if (!f.domain.exact.empty()) out.domain.exact.push_back(f.domain.exact[i]);
    if (!f.domain.tags.empty()) out.domain.tags.push_back(f.domain.tags[i]);
    out.values.push_back(f.values[i]);
  }
  require(!out.values.empty(), ErrorKind::domain,
          "restriction window misses the whole domain");
  return out;
}

inline SampledFunction prefix(const SampledFunction& f, size_t last_index) {
  require(last_index < f.size(), ErrorKind::domain, "prefix index out of range");
  SampledFunction out;
  out.space = f.space;
  out.domain.points.assign(f.domain.points.begin(),
                           f.domain.points.begin() + last_index + 1);
  if (!f.domain.exact.empty())
    out.domain.exact.assign(f.domain.exact.begin(),
                            f.domain.exact.begin() + last_index + 1);
  if (!f.domain.tags.empty())
    out.domain.tags.assign(f.domain.tags.begin(),
                           f.domain.tags.begin() + last_index + 1);
  out.values.assign(f.values.begin(), f.values.begin() + last_index + 1);
  return out;
}

// f - g in the ambient linear space; scalar kinds land on the real line.
inline SampledFunction pointwise_difference(const SampledFunction& f,
                                            const SampledFunction& g) {
  require(f.space.kind != SpaceKind::finite_metric &&
              g.space.kind != SpaceKind::finite_metric,
          ErrorKind::unsupported,
          "pointwise difference needs a linear value space");
  require(f.size() == g.size(), ErrorKind::shape, "domain mismatch");
  for (size_t i = 0; i < f.size(); ++i)
    require(nearly_equal(f.domain.points[i], g.domain.points[i]),
            ErrorKind::shape, "domain mismatch");
  SampledFunction out;
  out.domain = f.domain;
  if (f.space.kind == SpaceKind::euclidean) {
    require(g.space.kind == SpaceKind::euclidean &&
                f.space.dimension == g.space.dimension,
            ErrorKind::shape, "dimension mismatch");
    out.space = f.space;
    for (size_t i = 0; i < f.size(); ++i) {
      std::vector<double> d(f.space.dimension);
      for (int c = 0; c < f.space.dimension; ++c)
        d[c] = f.values[i].coords[c] - g.values[i].coords[c];
      out.values.push_back(Point::vec(std::move(d)));
    }
  } else {
    out.space = MetricSpace::real();
    for (size_t i = 0; i < f.size(); ++i)
      out.values.push_back(Point::real(f.values[i].coords[0] - g.values[i].coords[0]));
  }
  return out;
}

// Reparametrize by a strictly monotone map given by its values at the grid
// points. A decreasing map reverses the sample order.
inline SampledFunction change_of_variable(const SampledFunction& f,
                                          const std::vector<double>& psi) {
  require(psi.size() == f.size(), ErrorKind::shape, "remap length mismatch");
  bool inc = true, dec = true;
  for (size_t i = 1; i < psi.size(); ++i) {
    inc = inc && psi[i - 1] < psi[i];
    dec = dec && psi[i - 1] > psi[i];
  }
  require(inc || dec || psi.size() == 1, ErrorKind::precondition,
          "remap must be strictly monotone");
  SampledFunction out;
  out.space = f.space;
  out.domain.points = psi;
  out.values = f.values;
  if (dec) {
    std::reverse(out.domain.points.begin(), out.domain.points.end());
    std::reverse(out.values.begin(), out.values.end());
  }
  out.domain.validate();
  return out;
}

// ---------------------------------------------------------------------------
// Generator families

struct GeneratorSpec {
  std::string name;  // identity | scaled_monotone | spike | three_step |
                     // dirichlet_pattern | sin_jt | factorial_oscillator |
                     // scaled_dirichlet
  Point x = Point::real(1.0);
  Point y = Point::real(0.0);
  double alpha = 0.0;     // three_step blend
  double tau = 0.5;       // spike / three_step location
  int alternations = 8;   // alternation count of two-valued patterns
  int resolution = 10;    // segments of uniform canonical grids
  // Per-index family rule; empty means every member is the same function.
  //   shrink_inv_j        scale the ramp by j/(j+1)
  //   moving_tau          spike location walks left one grid point per index
  //   amplitude_inv_j     pattern values x/j, y/j
  //   converge_geometric  pattern values collapse onto their midpoint at rate^j
  //   scale_one_plus_inv_j   beta_j = 1 + 1/j
  //   two_branch_inv_j       beta_j = 1 (odd j) or 1 + 1/j (even j)
  //   two_cluster_geometric  beta_j = 1 + rate^j, or 2 + rate^j when 3 | j
  //   alternating_sign       beta_j = (-1)^j
  std::string rule;
  double rate = 0.25;

  MetricSpace space = MetricSpace::real();
};

namespace detail {

inline Point scale_point(const Point& p, double s) {
  Point out = p;
  for (double& c : out.coords) c *= s;
  return out;
}

inline Point lerp_point(const Point& a, const Point& b, double w) {
  // (1-w) a + w b
  require(a.coords.size() == b.coords.size(), ErrorKind::shape,
          "blend of mismatched points");
  Point out = a;
  for (size_t i = 0; i < out.coords.size(); ++i)
    out.coords[i] = (1.0 - w) * a.coords[i] + w * b.coords[i];
  return out;
}

inline double beta_for(const GeneratorSpec& spec, int j) {
  if (spec.rule.empty() || spec.rule == "fixed") return 1.0;
  if (spec.rule == "scale_one_plus_inv_j") return 1.0 + 1.0 / j;
  if (spec.rule == "two_branch_inv_j") return (j % 2 == 1) ? 1.0 : 1.0 + 1.0 / j;
  if (spec.rule == "two_cluster_geometric")
    return (j % 3 == 0 ? 2.0 : 1.0) + std::pow(spec.rate, j);
  if (spec.rule == "alternating_sign") return (j % 2 == 0) ? 1.0 : -1.0;
  fail(ErrorKind::generator, "unknown scale rule: " + spec.rule);
}

// sin(v * pi) with the lattice values pinned exactly.
inline double sin_pi(double v) {
  double r = std::fmod(v, 2.0);
  if (r < 0) r += 2.0;
  if (r == 0.0 || r == 1.0) return 0.0;
  if (r == 0.5) return 1.0;
  if (r == 1.5) return -1.0;
  return std::sin(r * std::numbers::pi);
}

}  // namespace detail

// The grid the family's reference values are proved on.
inline GridDomain canonical_domain(const GeneratorSpec& spec, int j) {
  GridDomain g;
  if (spec.name == "identity" || spec.name == "scaled_monotone") {
    g = GridDomain::uniform(0.0, 1.0, std::max(1, spec.resolution));
  } else if (spec.name == "spike" || spec.name == "three_step") {
    std::vector<double> pts{0.0, 1.0};
    if (spec.tau > 0.0 && spec.tau < 1.0) pts.push_back(spec.tau);
    for (int i = 1; i < spec.resolution; ++i)
      pts.push_back(static_cast<double>(i) / spec.resolution);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](double a, double b) { return nearly_equal(a, b); }),
              pts.end());
    g.points = pts;
  } else if (spec.name == "dirichlet_pattern" || spec.name == "scaled_dirichlet") {
    int k = spec.alternations;
    require(k >= 1, ErrorKind::generator, "alternation count must be positive");
    for (int i = 0; i <= k; ++i) {
      g.points.push_back(static_cast<double>(i) / k);
      g.exact.push_back(ExactCoord::rational(i, k));
      g.tags.push_back(i % 2 == 0 ? DenseTag::rational : DenseTag::irrational);
    }
  } else if (spec.name == "factorial_oscillator") {
    long long q = 2 * factorial_ll(j);
    for (long long m = 0; m <= q; ++m) {
      g.exact.push_back(ExactCoord::rational(m, q));
      g.points.push_back(g.exact.back()->to_double());
    }
  } else if (spec.name == "sin_jt") {
    // zeros and extrema of sin(jt) on [0, 2pi]: multiples of pi/(2j)
    for (int m = 0; m <= 4 * j; ++m) {
      g.exact.push_back(ExactCoord::pi_rational(m, 2 * j));
      g.points.push_back(g.exact.back()->to_double());
    }
  } else {
    fail(ErrorKind::generator, "unknown generator: " + spec.name);
  }
  g.validate();
  return g;
}

namespace detail {

inline bool grid_covers(const GridDomain& g, const GridDomain& wanted) {
  for (size_t i = 0; i < wanted.size(); ++i) {
    bool found = false;
    for (size_t k = 0; k < g.size() && !found; ++k) {
      if (!g.exact.empty() && g.exact[k] && !wanted.exact.empty() &&
          wanted.exact[i])
        found = *g.exact[k] == *wanted.exact[i];
      else
        found = nearly_equal(g.points[k], wanted.points[i], 1e-9);
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace detail

// Sample family member j on the given grid. Refuses grids that omit the
// family's critical points.
inline SampledFunction generate(const GeneratorSpec& spec, int j,
                                const GridDomain& domain) {
  domain.validate();
  require(j >= 1, ErrorKind::generator, "family index must be >= 1");
  SampledFunction f;
  f.domain = domain;
  f.space = spec.space;

  if (spec.name == "identity") {
    require(spec.space.scalar_kind(), ErrorKind::generator,
            "identity needs a scalar space");
    for (double t : domain.points) f.values.push_back(Point::real(t));
  } else if (spec.name == "scaled_monotone") {
    double s = (spec.rule == "shrink_inv_j")
                   ? static_cast<double>(j) / (j + 1)
                   : 1.0;
    double a = domain.front(), b = domain.back();
    double span = (b > a) ? (b - a) : 1.0;
    for (double t : domain.points) {
      double phi = (t - a) / span;
      Point v = detail::scale_point(spec.x, phi * s);
      for (size_t c = 0; c < v.coords.size(); ++c) v.coords[c] += spec.y.coords[c];
      f.values.push_back(std::move(v));
    }
  } else if (spec.name == "spike") {
    double tau = spec.tau;
    if (spec.rule == "moving_tau") {
      // walks one grid point left per index; needs interior room
      long long n = static_cast<long long>(domain.size());
      require(n >= 3, ErrorKind::generator, "moving spike needs interior points");
      long long idx = std::max<long long>(1, n - 1 - j);
      tau = domain.points[static_cast<size_t>(idx)];
    }
    require(domain.contains(tau, 1e-9), ErrorKind::generator,
            "spike grid must contain the spike location");
    for (double t : domain.points)
      f.values.push_back(nearly_equal(t, tau, 1e-9) ? spec.x : spec.y);
  } else if (spec.name == "three_step") {
    require(domain.contains(spec.tau, 1e-9), ErrorKind::generator,
            "three_step grid must contain the jump location");
    require(domain.front() < spec.tau - 1e-9 && domain.back() > spec.tau + 1e-9,
            ErrorKind::generator,
            "three_step needs grid points on both sides of the jump");
    Point mid = detail::lerp_point(spec.x, spec.y, spec.alpha);
    for (double t : domain.points) {
      if (nearly_equal(t, spec.tau, 1e-9))
        f.values.push_back(mid);
      else
        f.values.push_back(t < spec.tau ? spec.x : spec.y);
    }
  } else if (spec.name == "dirichlet_pattern" || spec.name == "scaled_dirichlet") {
    require(!domain.tags.empty(), ErrorKind::generator,
            "two-valued patterns need a tagged grid (alternation classes)");
    Point xj = spec.x, yj = spec.y;
    if (spec.name == "dirichlet_pattern") {
      if (spec.rule == "amplitude_inv_j") {
        xj = detail::scale_point(spec.x, 1.0 / j);
        yj = detail::scale_point(spec.y, 1.0 / j);
      } else if (spec.rule == "converge_geometric") {
        double w = std::pow(spec.rate, j);
        Point mid = detail::lerp_point(spec.x, spec.y, 0.5);
        xj = detail::lerp_point(mid, spec.x, w);
        yj = detail::lerp_point(mid, spec.y, w);
      } else if (!spec.rule.empty() && spec.rule != "fixed") {
        fail(ErrorKind::generator, "unknown pattern rule: " + spec.rule);
      }
    } else {
      double b = detail::beta_for(spec, j);
      xj = detail::scale_point(spec.x, b);
      yj = detail::scale_point(spec.y, b);
    }
    for (size_t i = 0; i < domain.size(); ++i) {
      DenseTag tg = domain.tag(i);
      require(tg != DenseTag::none, ErrorKind::generator,
              "two-valued patterns need a tag at every grid point");
      f.values.push_back(tg == DenseTag::rational ? xj : yj);
    }
  } else if (spec.name == "sin_jt") {
    require(detail::grid_covers(domain, canonical_domain(spec, j)),
            ErrorKind::generator,
            "sin grid must contain the zeros and extrema of member " +
                std::to_string(j));
    for (size_t i = 0; i < domain.size(); ++i) {
      double v;
      if (!domain.exact.empty() && domain.exact[i] && domain.exact[i]->pi_multiple) {
        const ExactCoord& e = *domain.exact[i];
        v = detail::sin_pi(static_cast<double>(j) * e.num / e.den);
      } else {
        v = std::sin(j * domain.points[i]);
      }
      f.values.push_back(Point::real(v));
    }
  } else if (spec.name == "factorial_oscillator") {
    require(detail::grid_covers(domain, canonical_domain(spec, j)),
            ErrorKind::generator,
            "factorial grid must contain the full 1/(2 j!) lattice of member " +
                std::to_string(j));
    long long jf = factorial_ll(j);
    for (size_t i = 0; i < domain.size(); ++i) {
      bool integral;
      if (!domain.exact.empty() && domain.exact[i] && !domain.exact[i]->pi_multiple) {
        const ExactCoord& e = *domain.exact[i];
        integral = static_cast<long long>(
                       (static_cast<__int128>(jf % e.den) * e.num) % e.den) == 0;
      } else {
        double w = jf * domain.points[i];
        integral = std::fabs(w - std::round(w)) <= 1e-9;
      }
      f.values.push_back(integral ? spec.x : spec.y);
    }
  } else {
    fail(ErrorKind::generator, "unknown generator: " + spec.name);
  }
  f.validate();
  return f;
}

struct FunctionFamily {
  MetricSpace space;
  GridDomain domain;
  std::vector<SampledFunction> members;
  std::optional<GeneratorSpec> generator;
  int j_begin = 1;

  size_t size() const { return members.size(); }

  void validate() const {
    require(!members.empty(), ErrorKind::shape, "family must be nonempty");
    for (const SampledFunction& f : members) {
      f.validate();
      require(f.size() == domain.size(), ErrorKind::shape,
              "family members must share the domain");
      for (size_t i = 0; i < domain.size(); ++i)
        require(nearly_equal(f.domain.points[i], domain.points[i]),
                ErrorKind::shape, "family members must share the domain");
    }
  }
};

// Shared canonical grid: union of the members' canonical grids (sin and
// factorial families have index-dependent lattices).
inline GridDomain canonical_family_domain(const GeneratorSpec& spec, int j_begin,
                                          int j_end) {
  require(j_begin >= 1 && j_end >= j_begin, ErrorKind::generator,
          "bad family index range");
  struct Key {
    long long num, den;
    bool pi;
    auto operator<=>(const Key&) const = default;
  };
  std::map<Key, std::pair<double, DenseTag>> merged;
  bool any_tags = false;
  for (int j = j_begin; j <= j_end; ++j) {
    GridDomain g = canonical_domain(spec, j);
    any_tags = any_tags || !g.tags.empty();
    for (size_t i = 0; i < g.size(); ++i) {
      Key k;
      if (!g.exact.empty() && g.exact[i]) {
        const ExactCoord& e = *g.exact[i];
        k = {e.num, e.den, e.pi_multiple};
      } else {
        // inexact grids: key on a fixed-point rounding of the coordinate
        k = {static_cast<long long>(std::llround(g.points[i] * 1e12)), 0, false};
      }
      merged[k] = {g.points[i], g.tag(i)};
    }
  }
  GridDomain out;
  std::vector<std::pair<double, std::pair<Key, DenseTag>>> rows;
  for (const auto& [k, v] : merged) rows.push_back({v.first, {k, v.second}});
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [t, kt] : rows) {
    out.points.push_back(t);
    if (kt.first.den != 0)
      out.exact.push_back(ExactCoord{kt.first.num, kt.first.den, kt.first.pi});
    else
      out.exact.push_back(std::nullopt);
    if (any_tags) out.tags.push_back(kt.second);
  }
  out.validate();
  return out;
}

inline FunctionFamily make_family(const GeneratorSpec& spec, int j_begin,
                                  int j_end,
                                  std::optional<GridDomain> domain = {}) {
  FunctionFamily fam;
  fam.space = spec.space;
  fam.domain = domain ? *domain : canonical_family_domain(spec, j_begin, j_end);
  fam.generator = spec;
  fam.j_begin = j_begin;
  for (int j = j_begin; j <= j_end; ++j)
    fam.members.push_back(generate(spec, j, fam.domain));
  fam.validate();
  return fam;
}

}  // namespace approxvar
