#pragma once

#include <gmpxx.h>

#include <Eigen/Core>
#include <string>
#include <string_view>

namespace lipfree {

using Rational = mpq_class;

/// Parses "p/q", "p" or a plain decimal integer. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form; integers are written without the denominator.
std::string to_string(const Rational& value);

inline Rational abs(const Rational& value) { return ::abs(value); }

inline double to_double(const Rational& value) { return value.get_d(); }
inline double to_double(double value) { return value; }

enum class ScalarKind { rational, floating };

template <class Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr ScalarKind kind = ScalarKind::rational;
  static constexpr const char* name = "rational";
  static bool is_negative(const Rational& x) { return sgn(x) < 0; }
  static bool is_positive(const Rational& x) { return sgn(x) > 0; }
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static bool less(const Rational& a, const Rational& b) { return a < b; }
  // mpq_class(p, q) does not reduce; comparisons assume canonical form
  static void canonicalize(Rational& x) { x.canonicalize(); }
};

template <>
struct ScalarTraits<double> {
  static constexpr ScalarKind kind = ScalarKind::floating;
  static constexpr const char* name = "float";
  // Pivoting threshold for the floating-point transport solver.
  static constexpr double epsilon = 1e-12;
  static bool is_negative(double x) { return x < -epsilon; }
  static bool is_positive(double x) { return x > epsilon; }
  static bool is_zero(double x) { return !is_negative(x) && !is_positive(x); }
  static bool less(double a, double b) { return a < b - epsilon; }
  static void canonicalize(double&) {}
};

inline const char* scalar_name(ScalarKind kind) {
  return kind == ScalarKind::rational ? "rational" : "float";
}

}  // namespace lipfree

namespace Eigen {

// Lets Eigen dense containers hold exact rationals. Only storage, element
// access and coefficient-wise comparisons are used with this scalar.
template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  using Real = mpq_class;
  using NonInteger = mpq_class;
  using Nested = mpq_class;
  using Literal = mpq_class;
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100
  };
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
