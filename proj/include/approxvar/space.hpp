#pragma once

// Value spaces (M,d) for sampled functions: the real line, a punctured line
// with an interval removed, Euclidean N-space, and finite metric spaces given
// by a distance matrix. Supplies distance, membership, ball queries and the
// enclosing-radius service used by the constant-witness zero rule.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "approxvar/core.hpp"

namespace approxvar {

enum class SpaceKind { real_line, punctured_line, euclidean, finite_metric };

inline std::string to_string(SpaceKind k) {
  switch (k) {
    case SpaceKind::real_line: return "real";
    case SpaceKind::punctured_line: return "punctured";
    case SpaceKind::euclidean: return "euclidean";
    case SpaceKind::finite_metric: return "finite";
  }
  return "?";
}

struct MetricSpace {
  SpaceKind kind = SpaceKind::real_line;

  // punctured line: the removed set is [hole_lo,hole_hi] when
  // hole_closed_removed (so M is open and improper), else (hole_lo,hole_hi)
  // (so M is closed and proper). A degenerate hole_lo==hole_hi with the
  // closed flag removes a single point.
  double hole_lo = 0.0;
  double hole_hi = 0.0;
  bool hole_closed_removed = false;

  int dimension = 1;  // euclidean

  std::vector<std::string> labels;           // finite metric
  std::vector<std::vector<double>> dist;     // finite metric, square

  static MetricSpace real() { return MetricSpace{}; }

  static MetricSpace punctured(double lo, double hi, bool closed_removed) {
    MetricSpace s;
    s.kind = SpaceKind::punctured_line;
    s.hole_lo = lo;
    s.hole_hi = hi;
    s.hole_closed_removed = closed_removed;
    if (closed_removed)
      require(lo <= hi, ErrorKind::shape, "punctured line needs hole_lo <= hole_hi");
    else
      require(lo < hi, ErrorKind::shape,
              "punctured line with open hole removed needs hole_lo < hole_hi");
    return s;
  }

  static MetricSpace euclidean_space(int dim) {
    require(dim >= 1, ErrorKind::shape, "euclidean dimension must be positive");
    MetricSpace s;
    s.kind = SpaceKind::euclidean;
    s.dimension = dim;
    return s;
  }

  static MetricSpace finite(std::vector<std::string> labels,
                            std::vector<std::vector<double>> dist) {
    MetricSpace s;
    s.kind = SpaceKind::finite_metric;
    s.labels = std::move(labels);
    s.dist = std::move(dist);
    return s;
  }

  // Two evenly spaced points, the smallest interesting finite space.
  static MetricSpace two_point(double d, const std::string& a = "x",
                               const std::string& b = "y") {
    return finite({a, b}, {{0.0, d}, {d, 0.0}});
  }

  bool scalar_kind() const {
    return kind == SpaceKind::real_line || kind == SpaceKind::punctured_line;
  }

  bool linear_kind() const {
    return scalar_kind() || kind == SpaceKind::euclidean;
  }
};

// Tagged value: scalar for line kinds, coordinate vector for euclidean,
// label index for finite spaces.
struct Point {
  std::vector<double> coords;
  int label = -1;

  static Point real(double x) { return Point{{x}, -1}; }
  static Point vec(std::vector<double> xs) { return Point{std::move(xs), -1}; }
  static Point finite(int idx) { return Point{{}, idx}; }

  double scalar() const {
    require(coords.size() == 1, ErrorKind::shape, "point is not a scalar");
    return coords[0];
  }

  friend bool operator==(const Point& a, const Point& b) = default;
};

inline bool is_member(const MetricSpace& s, const Point& p) {
  switch (s.kind) {
    case SpaceKind::real_line:
      return p.coords.size() == 1;
    case SpaceKind::punctured_line: {
      if (p.coords.size() != 1) return false;
      double v = p.coords[0];
      if (s.hole_closed_removed) return v < s.hole_lo || v > s.hole_hi;
      return v <= s.hole_lo || v >= s.hole_hi;
    }
    case SpaceKind::euclidean:
      return static_cast<int>(p.coords.size()) == s.dimension;
    case SpaceKind::finite_metric:
      return p.label >= 0 && p.label < static_cast<int>(s.labels.size());
  }
  return false;
}

inline void require_member(const MetricSpace& s, const Point& p,
                           const char* who) {
  if (is_member(s, p)) return;
  if (s.kind == SpaceKind::euclidean &&
      static_cast<int>(p.coords.size()) != s.dimension && !p.coords.empty())
    fail(ErrorKind::shape, std::string(who) + ": dimension mismatch");
  fail(ErrorKind::membership, std::string(who) + ": point is not a member of the space");
}

inline double distance(const MetricSpace& s, const Point& u, const Point& v) {
  require_member(s, u, "distance");
  require_member(s, v, "distance");
  switch (s.kind) {
    case SpaceKind::real_line:
    case SpaceKind::punctured_line:
      return std::fabs(u.coords[0] - v.coords[0]);
    case SpaceKind::euclidean: {
      double acc = 0.0;
      for (int i = 0; i < s.dimension; ++i) {
        double d = u.coords[i] - v.coords[i];
        acc += d * d;
      }
      return std::sqrt(acc);
    }
    case SpaceKind::finite_metric:
      return s.dist[u.label][v.label];
  }
  return 0.0;
}

struct ValidationReport {
  bool valid = true;
  std::vector<std::string> violations;

  void flag(std::string v) {
    valid = false;
    violations.push_back(std::move(v));
  }
};

// Report-only check of the space invariants; finite-metric triangle
// inequality is verified by exhaustion over every triple.
inline ValidationReport validate_space(const MetricSpace& s,
                                       double tol = kAbsTol) {
  ValidationReport r;
  switch (s.kind) {
    case SpaceKind::real_line:
      break;
    case SpaceKind::punctured_line:
      if (s.hole_closed_removed ? (s.hole_lo > s.hole_hi)
                                : (s.hole_lo >= s.hole_hi))
        r.flag("hole bounds out of order");
      break;
    case SpaceKind::euclidean:
      if (s.dimension < 1) r.flag("non-positive dimension");
      break;
    case SpaceKind::finite_metric: {
      size_t n = s.labels.size();
      if (n == 0) r.flag("empty label set");
      if (s.dist.size() != n) r.flag("distance matrix is not square");
      for (size_t i = 0; i < s.dist.size(); ++i)
        if (s.dist[i].size() != n) r.flag("distance matrix is not square");
      if (!r.valid) break;
      for (size_t i = 0; i < n; ++i) {
        if (std::fabs(s.dist[i][i]) > tol)
          r.flag("nonzero diagonal at " + s.labels[i]);
        for (size_t j = i + 1; j < n; ++j) {
          if (std::fabs(s.dist[i][j] - s.dist[j][i]) > tol)
            r.flag("asymmetry (" + s.labels[i] + "," + s.labels[j] + ")");
          if (s.dist[i][j] <= 0.0)
            r.flag("non-positive off-diagonal (" + s.labels[i] + "," +
                   s.labels[j] + ")");
        }
      }
      for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b)
          for (size_t c = 0; c < n; ++c) {
            if (a == b || b == c || a == c) continue;
            if (s.dist[a][c] > s.dist[a][b] + s.dist[b][c] + tol) {
              std::ostringstream os;
              os << "triangle violation (" << s.labels[a] << "," << s.labels[b]
                 << "," << s.labels[c] << ")";
              r.flag(os.str());
            }
          }
      break;
    }
  }
  return r;
}

// All finite-metric labels within the closed ball of radius eps, in label
// order. Always contains the center.
inline std::vector<Point> ball_members(const MetricSpace& s, const Point& center,
                                       double eps) {
  require(s.kind == SpaceKind::finite_metric, ErrorKind::unsupported,
          "ball_members is defined for finite metric spaces");
  require(eps > 0.0, ErrorKind::domain, "ball_members needs eps > 0");
  require_member(s, center, "ball_members");
  std::vector<Point> out;
  for (int i = 0; i < static_cast<int>(s.labels.size()); ++i)
    if (s.dist[center.label][i] <= eps) out.push_back(Point::finite(i));
  return out;
}

// Cheap upper bound on the smallest enclosing-ball radius of a value set,
// with a witness center that is a member of the space. Exact for line kinds,
// finite spaces and two-valued sets; an upper bound in euclidean dimension
// >= 2 with three or more distinct values.
struct RadiusBound {
  double radius = 0.0;
  Point center;
};

inline RadiusBound enclosing_radius_upper(const MetricSpace& s,
                                          const std::vector<Point>& vals) {
  require(!vals.empty(), ErrorKind::precondition, "empty value set");
  RadiusBound best{std::numeric_limits<double>::infinity(), vals[0]};
  auto consider = [&](const Point& c) {
    if (!is_member(s, c)) return;
    double r = 0.0;
    for (const Point& v : vals) r = std::max(r, distance(s, c, v));
    if (r < best.radius) best = {r, c};
  };
  switch (s.kind) {
    case SpaceKind::real_line:
    case SpaceKind::punctured_line: {
      double lo = vals[0].coords[0], hi = lo;
      for (const Point& v : vals) {
        lo = std::min(lo, v.coords[0]);
        hi = std::max(hi, v.coords[0]);
      }
      consider(Point::real(0.5 * (lo + hi)));
      if (s.kind == SpaceKind::punctured_line) {
        consider(Point::real(s.hole_lo));
        consider(Point::real(s.hole_hi));
        for (const Point& v : vals) consider(v);
      }
      break;
    }
    case SpaceKind::euclidean: {
      // centroid, every value, and the midpoint of the farthest pair
      std::vector<double> centroid(s.dimension, 0.0);
      for (const Point& v : vals)
        for (int i = 0; i < s.dimension; ++i) centroid[i] += v.coords[i];
      for (double& c : centroid) c /= static_cast<double>(vals.size());
      consider(Point::vec(centroid));
      size_t ai = 0, bi = 0;
      double dmax = -1.0;
      for (size_t a = 0; a < vals.size(); ++a)
        for (size_t b = a; b < vals.size(); ++b) {
          double d = distance(s, vals[a], vals[b]);
          if (d > dmax) dmax = d, ai = a, bi = b;
        }
      std::vector<double> mid(s.dimension);
      for (int i = 0; i < s.dimension; ++i)
        mid[i] = 0.5 * (vals[ai].coords[i] + vals[bi].coords[i]);
      consider(Point::vec(mid));
      for (const Point& v : vals) consider(v);
      break;
    }
    case SpaceKind::finite_metric:
      for (int i = 0; i < static_cast<int>(s.labels.size()); ++i)
        consider(Point::finite(i));
      break;
  }
  return best;
}

}  // namespace approxvar
