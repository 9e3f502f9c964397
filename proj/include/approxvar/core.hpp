#pragma once

// Shared basics: error taxonomy, default tolerances, exact grid coordinates.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace approxvar {

// Absolute tolerance for floating comparisons on values that are not exact by
// construction. Exactly representable inputs are compared exactly.
inline constexpr double kAbsTol = 1e-12;

enum class ErrorKind {
  membership,
  shape,
  domain,
  unsupported,
  capacity,
  generator,
  parse,
  precondition,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

inline void require(bool ok, ErrorKind kind, const std::string& msg) {
  if (!ok) fail(kind, msg);
}

// Exact coordinate num/den, optionally scaled by pi. Generators emit these so
// lattice grids (k/j!, multiples of pi/2j) survive serialization and can be
// matched exactly when a canonical grid is validated.
struct ExactCoord {
  long long num = 0;
  long long den = 1;
  bool pi_multiple = false;

  static ExactCoord rational(long long n, long long d) {
    ExactCoord c;
    c.num = n;
    c.den = d;
    c.normalize();
    return c;
  }

  static ExactCoord pi_rational(long long n, long long d) {
    ExactCoord c = rational(n, d);
    c.pi_multiple = true;
    return c;
  }

  void normalize() {
    require(den != 0, ErrorKind::parse, "exact coordinate with zero denominator");
    if (den < 0) {
      den = -den;
      num = -num;
    }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  double to_double() const {
    double v = static_cast<double>(num) / static_cast<double>(den);
    return pi_multiple ? v * std::numbers::pi : v;
  }

  friend bool operator==(const ExactCoord& a, const ExactCoord& b) {
    return a.num == b.num && a.den == b.den && a.pi_multiple == b.pi_multiple;
  }
};

inline long long factorial_ll(int j) {
  require(j >= 0 && j <= 20, ErrorKind::capacity,
          "factorial index out of 64-bit range: " + std::to_string(j));
  long long f = 1;
  for (int i = 2; i <= j; ++i) f *= i;
  return f;
}

inline bool nearly_equal(double a, double b, double tol = kAbsTol) {
  return std::fabs(a - b) <= tol;
}

}  // namespace approxvar
