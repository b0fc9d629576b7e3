#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bmw/core.hpp"
#include "bmw/perm.hpp"

namespace bmw {

/// Coset table over the signed generators of a generic presentation.
/// Column 2g is generator g, column 2g+1 its inverse; -1 is undefined.
struct CosetTable {
  int gen_count = 0;
  std::vector<std::vector<int>> rows;  // row 0 is the subgroup coset
  bool complete = false;
  int index() const { return static_cast<int>(rows.size()); }
  /// Coset reached from `coset` by a word token (g+1 or -(g+1)); -1 if undefined.
  int act(int coset, int token) const;
  int act_word(int coset, const Word& w) const;
};

struct CosetOptions {
  std::size_t max_cosets = 1'000'000;
};

/// HLT with lookahead, switching to Felsch-style filling once half of
/// `max_cosets` is in use. An incomplete table means undecided.
CosetTable todd_coxeter(const GenericPresentation& p, const std::vector<Word>& subgroup,
                        const CosetOptions& opt = {});

/// Order of p with `extra` relators appended; nullopt on overflow.
std::optional<std::uint64_t> quotient_order(const GenericPresentation& p, const std::vector<Word>& extra,
                                            const CosetOptions& opt = {});

/// Table of the parity subgroup Γ⁺ (even A-length and even X-length) over
/// the generators of to_generic(p).
CosetTable parity_table(const BmwPresentation& p);

enum class SpanningTree { Bfs, Dfs };

/// Presentation of the subgroup of a complete table on Schreier generators
/// named "s<coset>_<generator>", Tietze-reduced. Throws PreconditionError on
/// an incomplete table.
GenericPresentation reidemeister_schreier(const GenericPresentation& p, const CosetTable& table,
                                          SpanningTree tree = SpanningTree::Bfs);

/// Removes generators killed or expressed by relators of length at most 2,
/// frees and cyclically reduces relators, drops trivial and duplicate ones.
GenericPresentation tietze_reduce(GenericPresentation p);

using IntMatrix = std::vector<std::vector<BigInt>>;

struct SmithForm {
  std::vector<BigInt> diagonal;  // min(rows, cols) entries, d1 | d2 | ..., all >= 0
  IntMatrix u, v;                // u·m·v = diag, u and v unimodular
};

SmithForm smith_normal_form(const IntMatrix& m);

struct Abelianization {
  int free_rank = 0;
  std::vector<BigInt> torsion;  // invariant factors > 1, ascending
  bool trivial() const { return free_rank == 0 && torsion.empty(); }
  /// "1", "Z", "Z^2 + Z/2", ...
  std::string text() const;
};

Abelianization abelianization(const GenericPresentation& p);

struct HomSearchOptions {
  bool surjective_only = false;
  /// First generator restricted to conjugacy class representatives.
  bool up_to_conjugacy = false;
  std::uint64_t element_bound = 1'000'000;
  /// Stop after this many results; 0 means all.
  std::size_t max_results = 0;
  int jobs = 1;
};

/// All assignments generator -> target element satisfying every relator,
/// by backtracking with relator propagation. Results are sorted.
std::vector<std::vector<Permutation>> find_homomorphisms(const GenericPresentation& p, const PermGroup& target,
                                                         const HomSearchOptions& opt = {});

struct HomCheck {
  bool ok = false;
  int failing_relator = -1;
  BigInt image_order;
};

/// Evaluates every relator; reports the order of the generated image.
HomCheck verify_homomorphism(const GenericPresentation& p, const std::vector<Permutation>& images);

Permutation evaluate(const Word& w, const std::vector<Permutation>& images);

/// Images of x, y, z, t, r of the catalog group "escher" in the Heisenberg
/// group over F7 (right-regular, 343 points) times the dihedral group of
/// order 146 (73 points), on 416 points.
std::vector<Permutation> escher_assignment(const GenericPresentation& e);

/// All n <= limit with n | 2^n - 1.
std::vector<std::uint64_t> higman_scan(std::uint64_t limit);

}  // namespace bmw
