#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bmw/core.hpp"

namespace bmw {

using Rational = boost::multiprecision::cpp_rational;

/// x0 + x1·i + x2·j + x3·k with exact rational coefficients.
struct Quaternion {
  Rational x0, x1, x2, x3;

  static Quaternion scalar(const Rational& r) { return {r, 0, 0, 0}; }
  bool is_zero() const { return x0 == 0 && x1 == 0 && x2 == 0 && x3 == 0; }
  /// "1 - i - j", "5/2", "0".
  std::string text() const;

  friend bool operator==(const Quaternion&, const Quaternion&) = default;
};

Quaternion operator+(const Quaternion& a, const Quaternion& b);
Quaternion operator-(const Quaternion& a, const Quaternion& b);
Quaternion multiply(const Quaternion& a, const Quaternion& b);
inline Quaternion operator*(const Quaternion& a, const Quaternion& b) { return multiply(a, b); }
Quaternion conjugate(const Quaternion& x);
/// Reduced norm x0² + x1² + x2² + x3².
Rational nrd(const Quaternion& x);
/// Throws PreconditionError on zero.
Quaternion inverse(const Quaternion& x);
/// True iff x1 = x2 = x3 = 0; throws PreconditionError on zero.
bool is_central(const Quaternion& x);

struct GaussianRational {
  Rational re, im;
  friend bool operator==(const GaussianRational&, const GaussianRational&) = default;
};
GaussianRational operator+(const GaussianRational& a, const GaussianRational& b);
GaussianRational operator-(const GaussianRational& a, const GaussianRational& b);
GaussianRational operator*(const GaussianRational& a, const GaussianRational& b);

using Matrix2 = std::array<std::array<GaussianRational, 2>, 2>;
Matrix2 operator*(const Matrix2& a, const Matrix2& b);
GaussianRational det(const Matrix2& m);

/// [[x0 + x1·i, x2 + x3·i], [−x2 + x3·i, x0 − x1·i]].
Matrix2 m2_embed(const Quaternion& x);

using QuaternionAssignment = std::map<std::string, Quaternion>;

/// a ↦ 1−i−j, b ↦ 1−i+j, x ↦ 1+2k, y ↦ 1−2i, z ↦ 1−2j.
QuaternionAssignment rattaggi_assignment();

struct RelatorEvaluation {
  std::string relator;
  Quaternion value;
  Rational norm;
  bool central = false;
};

/// Evaluates every square relator of p under phi. Throws PreconditionError
/// if a generator is unassigned or sent to zero.
std::vector<RelatorEvaluation> evaluate_relators(const BmwPresentation& p, const QuaternionAssignment& phi);
/// The catalog entry "ratt" under rattaggi_assignment().
std::vector<RelatorEvaluation> verify_rattaggi();

}  // namespace bmw
