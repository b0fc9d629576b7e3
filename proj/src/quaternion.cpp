#include "bmw/quaternion.hpp"

#include "bmw/catalog.hpp"

namespace bmw {

std::string Quaternion::text() const {
  std::string out;
  auto term = [&](const Rational& c, const char* unit) {
    if (c == 0) return;
    Rational a = abs(c);
    std::string mag = (a == 1 && *unit) ? "" : a.str();
    if (out.empty())
      out = (c < 0 ? "-" : "") + mag + unit;
    else
      out += (c < 0 ? " - " : " + ") + mag + unit;
  };
  term(x0, "");
  term(x1, "i");
  term(x2, "j");
  term(x3, "k");
  return out.empty() ? "0" : out;
}

Quaternion operator+(const Quaternion& a, const Quaternion& b) {
  return {a.x0 + b.x0, a.x1 + b.x1, a.x2 + b.x2, a.x3 + b.x3};
}

Quaternion operator-(const Quaternion& a, const Quaternion& b) {
  return {a.x0 - b.x0, a.x1 - b.x1, a.x2 - b.x2, a.x3 - b.x3};
}

Quaternion multiply(const Quaternion& a, const Quaternion& b) {
  return {a.x0 * b.x0 - a.x1 * b.x1 - a.x2 * b.x2 - a.x3 * b.x3,
          a.x0 * b.x1 + a.x1 * b.x0 + a.x2 * b.x3 - a.x3 * b.x2,
          a.x0 * b.x2 - a.x1 * b.x3 + a.x2 * b.x0 + a.x3 * b.x1,
          a.x0 * b.x3 + a.x1 * b.x2 - a.x2 * b.x1 + a.x3 * b.x0};
}

Quaternion conjugate(const Quaternion& x) { return {x.x0, -x.x1, -x.x2, -x.x3}; }

Rational nrd(const Quaternion& x) { return x.x0 * x.x0 + x.x1 * x.x1 + x.x2 * x.x2 + x.x3 * x.x3; }

Quaternion inverse(const Quaternion& x) {
  if (x.is_zero()) throw PreconditionError("zero quaternion has no inverse");
  Rational n = nrd(x);
  Quaternion c = conjugate(x);
  return {c.x0 / n, c.x1 / n, c.x2 / n, c.x3 / n};
}

bool is_central(const Quaternion& x) {
  if (x.is_zero()) throw PreconditionError("centrality test needs a nonzero quaternion");
  return x.x1 == 0 && x.x2 == 0 && x.x3 == 0;
}

GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
  return {a.re + b.re, a.im + b.im};
}
GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
  return {a.re - b.re, a.im - b.im};
}
GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
  Matrix2 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return out;
}

GaussianRational det(const Matrix2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

Matrix2 m2_embed(const Quaternion& x) {
  Matrix2 m;
  m[0][0] = {x.x0, x.x1};
  m[0][1] = {x.x2, x.x3};
  m[1][0] = {Rational(-x.x2), x.x3};
  m[1][1] = {x.x0, Rational(-x.x1)};
  return m;
}

QuaternionAssignment rattaggi_assignment() {
  return {{"a", {1, -1, -1, 0}},
          {"b", {1, -1, 1, 0}},
          {"x", {1, 0, 0, 2}},
          {"y", {1, -2, 0, 0}},
          {"z", {1, 0, -2, 0}}};
}

std::vector<RelatorEvaluation> evaluate_relators(const BmwPresentation& p, const QuaternionAssignment& phi) {
  auto image = [&](Letter l) {
    const auto& name = p.gens(l.side)[l.id].name;
    auto it = phi.find(name);
    if (it == phi.end()) throw PreconditionError("generator '" + name + "' has no image");
    if (it->second.is_zero()) throw PreconditionError("generator '" + name + "' is sent to zero");
    return l.inverse ? inverse(it->second) : it->second;
  };
  std::vector<RelatorEvaluation> out;
  for (const Square& sq : p.squares()) {
    Quaternion v = Quaternion::scalar(1);
    for (Letter l : sq.word()) v = v * image(l);
    out.push_back({p.square_text(sq), v, nrd(v), is_central(v)});
  }
  return out;
}

std::vector<RelatorEvaluation> verify_rattaggi() { return evaluate_relators(catalog_bmw("ratt"), rattaggi_assignment()); }

}  // namespace bmw
