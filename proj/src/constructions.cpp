#include "bmw/constructions.hpp"

#include <map>
#include <tuple>

namespace bmw {

NotSignCoherent::NotSignCoherent(std::string first, std::string second)
    : PreconditionError("corner map is not sign-coherent: " + first + " vs " + second),
      first_(std::move(first)),
      second_(std::move(second)) {}

BmwPresentation double_presentation(const BmwPresentation& p) {
  corner_map(p);
  auto a = p.gens(Side::A);
  const auto na = static_cast<std::uint16_t>(a.size());
  for (std::uint16_t i = 0; i < na; ++i) a.push_back({a[i].name + "_bar", a[i].involutive});
  std::vector<Square> squares = p.squares();
  for (Square s : p.squares()) {
    s.a1.id += na;
    s.a2.id += na;
    squares.push_back(s);
  }
  return BmwPresentation(a, p.gens(Side::X), squares);
}

std::string double_note(const BmwPresentation& p) {
  const auto& a = p.gens(Side::A);
  std::string ex = a.size() >= 2 ? a[0].name + " " + a[1].name + "^-1 " + a[1].name + "_bar " + a[0].name + "_bar^-1"
                                 : "a b^-1 b_bar a_bar^-1";
  return "for an irreducible input, some element of the form " + ex +
         " (distinct A-generators) lies in every finite-index subgroup of the double";
}

std::pair<int, int> coherent_tensor_degree(const Degree& d) {
  return {2 * d.m * d.m + 4 * d.m * d.m_inv + d.m_inv * d.m_inv,
          2 * d.n * d.n + 4 * d.n * d.n_inv + d.n_inv * d.n_inv};
}

namespace {

bool coherent(Letter u, Letter v) { return u.involutive || v.involutive || u.inverse == v.inverse; }

// Signed pair letters of one side.
class PairAlphabet {
 public:
  PairAlphabet(const BmwPresentation& p, Side side, TensorMode mode) : side_(side) {
    if (mode == TensorMode::Full) {
      auto labels = p.star_labels(side);
      for (Letter u : labels)
        for (Letter v : labels) {
          auto [ru, rv, inv] = representative(u, v);
          (void)inv;
          auto key = std::pair{ru.key(), rv.key()};
          if (ids_.count(key)) continue;
          ids_[key] = static_cast<int>(gens_.size());
          gens_.push_back({"(" + p.letter_name(ru) + "|" + p.letter_name(rv) + ")", ru.involutive && rv.involutive});
        }
    } else {
      const auto& g = p.gens(side);
      for (int i = 0; i < static_cast<int>(g.size()); ++i)
        for (int j = 0; j < static_cast<int>(g.size()); ++j) {
          Letter u = p.letter(side, i), v = p.letter(side, j);
          ids_[{u.key(), v.key()}] = static_cast<int>(gens_.size());
          gens_.push_back({"(" + g[i].name + "|" + g[j].name + ")", u.involutive && v.involutive});
        }
    }
  }

  const std::vector<Generator>& gens() const { return gens_; }

  Letter letter(Letter u, Letter v) const {
    auto [ru, rv, inv] = representative(u, v);
    int id = ids_.at({ru.key(), rv.key()});
    Letter l{side_, static_cast<std::uint16_t>(id), inv, gens_[id].involutive};
    if (l.involutive) l.inverse = false;
    return l;
  }

 private:
  // Canonical member of {(u,v), (u⁻¹,v⁻¹)} and whether (u,v) is its inverse.
  std::tuple<Letter, Letter, bool> representative(Letter u, Letter v) const {
    if (!u.involutive) {
      if (u.inverse) return {u.inv(), v.inv(), true};
      return {u, v, false};
    }
    if (!v.involutive && v.inverse) return {u, v.inv(), true};
    return {u, v, false};
  }

  Side side_;
  std::map<std::pair<int, int>, int> ids_;
  std::vector<Generator> gens_;
};

}  // namespace

BmwPresentation tensor_product(const BmwPresentation& p, TensorMode mode) {
  CornerMap k = corner_map(p);
  PairAlphabet A(p, Side::A, mode), X(p, Side::X, mode);
  auto al = p.star_labels(Side::A), xl = p.star_labels(Side::X);
  auto corner_text = [&](Letter a, Letter x, std::pair<Letter, Letter> img) {
    return "(" + p.letter_name(a) + "," + p.letter_name(x) + ")->(" + p.letter_name(img.first) + "," +
           p.letter_name(img.second) + ")";
  };
  std::vector<Square> squares;
  for (Letter u : al)
    for (Letter v : al) {
      if (mode == TensorMode::Coherent && !coherent(u, v)) continue;
      for (Letter xi : xl)
        for (Letter eta : xl) {
          if (mode == TensorMode::Coherent && !coherent(xi, eta)) continue;
          auto c1 = k(u, xi), c2 = k(v, eta);
          if (mode == TensorMode::Coherent && (!coherent(c1.first, c2.first) || !coherent(c1.second, c2.second)))
            throw NotSignCoherent(corner_text(u, xi, c1), corner_text(v, eta, c2));
          squares.push_back(
              {A.letter(u, v), X.letter(xi, eta), A.letter(c1.first, c2.first), X.letter(c1.second, c2.second)});
        }
    }
  return BmwPresentation(A.gens(), X.gens(), squares);
}

}  // namespace bmw
