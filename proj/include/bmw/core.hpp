#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bmw/error.hpp"

namespace bmw {

enum class Side : std::uint8_t { A = 0, X = 1 };

inline Side opposite(Side s) { return s == Side::A ? Side::X : Side::A; }
inline const char* side_name(Side s) { return s == Side::A ? "a" : "x"; }

/// A signed generator of one side. Involutive letters are always stored
/// with `inverse == false`.
struct Letter {
  Side side = Side::A;
  std::uint16_t id = 0;
  bool inverse = false;
  bool involutive = false;

  Letter inv() const {
    Letter l = *this;
    if (!involutive) l.inverse = !inverse;
    return l;
  }

  /// Sort key inside one side: by id, positive before negative.
  int key() const { return 2 * id + (inverse ? 1 : 0); }

  friend bool operator==(const Letter& l, const Letter& r) {
    return l.side == r.side && l.id == r.id && l.inverse == r.inverse;
  }
  friend std::strong_ordering operator<=>(const Letter& l, const Letter& r) {
    if (auto c = l.side <=> r.side; c != 0) return c;
    return l.key() <=> r.key();
  }
};

/// The relator a1·x1·a2·x2, stored in its least reading.
struct Square {
  Letter a1, x1, a2, x2;

  /// The four readings a1x1a2x2, a2x2a1x1, a2⁻¹x1⁻¹a1⁻¹x2⁻¹, a1⁻¹x2⁻¹a2⁻¹x1⁻¹.
  std::array<Square, 4> readings() const;
  Square canonical() const;
  std::array<Letter, 4> word() const { return {a1, x1, a2, x2}; }

  friend bool operator==(const Square&, const Square&) = default;
  friend std::strong_ordering operator<=>(const Square& l, const Square& r) {
    if (auto c = l.a1 <=> r.a1; c != 0) return c;
    if (auto c = l.x1 <=> r.x1; c != 0) return c;
    if (auto c = l.a2 <=> r.a2; c != 0) return c;
    return l.x2 <=> r.x2;
  }
};

struct Generator {
  std::string name;
  bool involutive = false;
  friend bool operator==(const Generator&, const Generator&) = default;
};

/// Side data (m, m′, n, n′) and the tree degrees M = 2m+m′, N = 2n+n′.
struct Degree {
  int m = 0, m_inv = 0, n = 0, n_inv = 0;
  int M() const { return 2 * m + m_inv; }
  int N() const { return 2 * n + n_inv; }
  friend bool operator==(const Degree&, const Degree&) = default;
};

/// Presentation ⟨A ∪ X | R₂ ∪ R₄⟩ where R₂ is implied by the involution flags.
class BmwPresentation {
 public:
  BmwPresentation() = default;
  /// Throws ParseError on duplicate names or letters that do not fit the
  /// alphabet. Squares are canonicalized and deduplicated.
  BmwPresentation(std::vector<Generator> a_gens, std::vector<Generator> x_gens,
                  std::vector<Square> squares);

  const std::vector<Generator>& gens(Side s) const { return s == Side::A ? a_ : x_; }
  const std::vector<Square>& squares() const { return squares_; }
  Degree degree() const;
  int side_degree(Side s) const { return s == Side::A ? degree().M() : degree().N(); }

  Letter letter(Side s, int id, bool inverse = false) const;
  /// Edge labels at the base vertex of the tree of side `s`: non-involutive
  /// positive letters by id, then their inverses, then involutive letters.
  std::vector<Letter> star_labels(Side s) const;
  int star_index(Letter l) const;

  std::string letter_name(Letter l) const;
  /// Accepts "name" or "name^-1".
  std::optional<Letter> find_letter(std::string_view token) const;
  std::string square_text(const Square& sq) const;

  friend bool operator==(const BmwPresentation&, const BmwPresentation&) = default;

 private:
  std::vector<Generator> a_, x_;
  std::vector<Square> squares_;
};

/// Total assignment (a, ξ) ↦ (a′, ξ′) over signed letters.
class CornerMap {
 public:
  CornerMap(const BmwPresentation& p, std::vector<std::pair<Letter, Letter>> table);
  std::pair<Letter, Letter> operator()(Letter a, Letter x) const;
  const std::vector<Letter>& a_labels() const { return a_labels_; }
  const std::vector<Letter>& x_labels() const { return x_labels_; }
  int M() const { return static_cast<int>(a_labels_.size()); }
  int N() const { return static_cast<int>(x_labels_.size()); }

 private:
  std::vector<Letter> a_labels_, x_labels_;
  std::vector<int> a_index_, x_index_;  // letter key -> star index
  std::vector<std::pair<Letter, Letter>> table_;
};

struct Violation {
  enum class Kind { Uncovered, DoublyCovered, Inconsistent, Degenerate } kind;
  Letter a, x;
  std::vector<Square> squares;  // offending squares, if any
  std::string message;
};

struct ValidationResult {
  std::optional<CornerMap> corner_map;
  std::vector<Violation> violations;
  bool ok() const { return corner_map.has_value(); }
};

/// Builds the corner table from the four readings of every square.
ValidationResult validate(const BmwPresentation& p);
/// As validate(), throwing ValidationError with the first diagnostics.
CornerMap corner_map(const BmwPresentation& p);

/// The covered corners of one square, without repetition, in reading order.
std::vector<std::pair<Letter, Letter>> covered_corners(const Square& sq);

struct TorsionProfile {
  int square_count = 0;
  int mn = 0;
  bool generators_infinite_order = false;  // R₂ = ∅
  bool minimal_square_count = false;       // |R₄| = mn
  bool torsion_free() const { return generators_infinite_order && minimal_square_count; }
};
TorsionProfile torsion_profile(const BmwPresentation& p);

/// Homomorphism onto C₂×C₂ by (A-length, X-length) parity.
struct ParityQuotient {
  // Coset c = 2·(A parity) + (X parity); rows[c][col] for columns in
  // star order, A letters first then X letters.
  std::vector<std::vector<int>> rows;
  std::vector<Letter> columns;
  int index() const { return static_cast<int>(rows.size()); }
};
ParityQuotient parity_quotient(const BmwPresentation& p);

struct AmalgamRanks {
  int factor_rank = 0;
  int amalgamated_rank = 0;
  std::string caveat;
  std::string text() const;
};
/// First form F_{N−1} *_{F_{MN−2M+1}} F_{N−1} (edge-transitive on T_A),
/// second form F_{M−1} *_{F_{MN−2N+1}} F_{M−1} (edge-transitive on T_X).
std::pair<AmalgamRanks, AmalgamRanks> amalgam_ranks(int M, int N);

/// True iff p's generators (same involution flags) and squares occur in q
/// after renaming p's generator names through `rename` (missing names map
/// to themselves).
bool is_subpresentation(const BmwPresentation& p, const BmwPresentation& q,
                        const std::vector<std::pair<std::string, std::string>>& rename = {});

BmwPresentation parse_bmw(std::string_view json_text);
std::string serialize_bmw(const BmwPresentation& p);

/// Word over a generic alphabet; token g+1 is generator g, -(g+1) its inverse.
using Word = std::vector<int>;

struct GenericPresentation {
  std::vector<std::string> gens;
  std::vector<Word> relators;

  int gen_count() const { return static_cast<int>(gens.size()); }
  /// Parses a word such as "a b^-1 [x^3, y^4] (a b)^2" or an equation "u = v".
  Word parse_word(std::string_view text) const;
  std::string word_text(const Word& w) const;
};

GenericPresentation parse_generic(std::string_view json_text);
std::string serialize_generic(const GenericPresentation& p);

/// Generators A then X, relators t² for involutive t followed by the squares.
GenericPresentation to_generic(const BmwPresentation& p);

Word free_reduce(Word w);
Word inverse_word(const Word& w);

}  // namespace bmw
