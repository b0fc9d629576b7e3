#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bmw/core.hpp"
#include "bmw/perm.hpp"

namespace bmw {

/// d-generated marked group given by a word problem oracle. Words use the
/// tokens of core: g+1 for generator g, -(g+1) for its inverse.
struct MarkedOracle {
  int arity = 0;
  std::string name;
  std::function<bool(const Word&)> is_trivial;
};

/// Marking by permutations of a common degree.
MarkedOracle permutation_oracle(std::vector<Permutation> gens, std::string name = "perm");
/// C_p ≀ Z marked by the lamp a at position 0 and the shift t.
MarkedOracle lamplighter_oracle(int p);

struct WordBudget {
  std::uint64_t max_words = 20'000'000;
};

/// Words of length at most L equal to the identity, sorted by length then
/// tokens. Throws ResourceLimit if more than max_words would be evaluated.
std::vector<Word> trivial_words(const MarkedOracle& o, int L, const WordBudget& budget = {});

struct BallComparison {
  int radius = 0;
  bool isomorphic = false;
  /// Shortest word trivial in exactly one of the groups.
  std::optional<Word> witness;
  bool witness_trivial_in_first = false;
};

/// Radius-n balls compared through their trivial words of length ≤ 2n.
BallComparison balls_isomorphic(const MarkedOracle& o1, const MarkedOracle& o2, int n,
                                const WordBudget& budget = {});

/// Least radius n ≤ max_radius at which the balls differ, with a witness.
std::optional<BallComparison> first_mismatch(const MarkedOracle& o1, const MarkedOracle& o2, int max_radius,
                                             const WordBudget& budget = {});

struct AltPair {
  int p = 0, q = 0;
  Permutation a, b, t;  // t = b^p
  BigInt order;         // |⟨a, b⟩|
  MarkedOracle oracle() const;
};

/// a = (1 ... p) for odd p and (1 2)(3 4) for p = 2, b = (1 ... q).
/// Throws PreconditionError unless p and q are prime with q > 2p.
AltPair alt_pair(int p, int q);

/// "a t a^-1 t^-1" with a, t for generators 1, 2.
std::string marked_word_text(const Word& w);

}  // namespace bmw
