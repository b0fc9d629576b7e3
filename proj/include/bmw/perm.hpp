#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bmw/error.hpp"

namespace bmw {

using BigInt = boost::multiprecision::cpp_int;
using Point = std::uint32_t;

/// Bijection of {0, ..., d-1} stored as its image array.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::size_t degree);
  /// Throws PreconditionError if `images` is not a bijection.
  explicit Permutation(std::vector<Point> images);
  /// Skips the bijection check; the caller guarantees it.
  static Permutation unchecked(std::vector<Point> images) {
    Permutation p;
    p.images_ = std::move(images);
    return p;
  }
  /// Cycles use 0-based points.
  static Permutation from_cycles(std::size_t degree, const std::vector<std::vector<Point>>& cycles);

  std::size_t degree() const { return images_.size(); }
  Point operator()(Point x) const { return images_[x]; }
  const std::vector<Point>& images() const { return images_; }

  bool is_identity() const;
  Permutation inverse() const;
  /// +1 for even, -1 for odd permutations.
  int sign() const;
  /// Element order (lcm of cycle lengths).
  BigInt order() const;
  std::vector<std::vector<Point>> cycles() const;
  /// Cycle notation with 1-based points; "()" for the identity.
  std::string cycle_string() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation& l, const Permutation& r) { return l.images_ <=> r.images_; }

 private:
  std::vector<Point> images_;
};

/// compose(p, q) applies q first, then p. Throws on degree mismatch.
Permutation compose(const Permutation& p, const Permutation& q);
inline Permutation operator*(const Permutation& p, const Permutation& q) { return compose(p, q); }

struct PermutationHash {
  std::size_t operator()(const Permutation& p) const noexcept;
};

struct BsgsOptions {
  /// Base points forced at the front of the base, in order.
  std::vector<Point> base_prefix;
  /// When non-empty, new base points are the first entries of this list
  /// moved by the element that needs them; otherwise the moved point with
  /// the largest orbit under the generators is used.
  std::vector<Point> base_preference;
};

/// Base and strong generating set with explicit transversals.
struct Bsgs {
  struct Level {
    Point base = 0;
    std::vector<int> gens;        // indices into strong_gens
    std::vector<Point> orbit;     // in discovery order, orbit[0] == base
    std::vector<Permutation> rep; // rep[k](base) == orbit[k]
    std::vector<Permutation> rep_inv;
    std::vector<int> slot;        // point -> index into orbit, or -1
  };
  std::vector<Point> base;
  std::vector<Permutation> strong_gens;
  std::vector<Level> levels;

  BigInt order() const;
  /// Sifts g through levels [from, end); returns the residue and the level
  /// where sifting stopped (levels.size() when it went all the way).
  std::pair<Permutation, std::size_t> strip(Permutation g, std::size_t from = 0) const;
};

/// Deterministic Schreier–Sims.
Bsgs schreier_sims(std::size_t degree, const std::vector<Permutation>& gens, const BsgsOptions& opt = {});

/// Finite permutation group given by generators. The BSGS is computed on
/// first use and shared by copies; completed groups are safe to share.
class PermGroup {
 public:
  PermGroup(std::size_t degree, std::vector<Permutation> gens, BsgsOptions opt = {});

  std::size_t degree() const { return degree_; }
  const std::vector<Permutation>& generators() const { return gens_; }
  const Bsgs& bsgs() const;
  BigInt order() const { return bsgs().order(); }
  bool contains(const Permutation& g) const;
  std::vector<std::vector<Point>> orbits() const;
  bool is_transitive() const;

  /// Calls `f` on every element; throws ResourceLimit if the order exceeds `bound`.
  void for_each_element(const std::function<void(const Permutation&)>& f,
                        std::uint64_t bound = 1'000'000) const;
  std::vector<Permutation> elements(std::uint64_t bound = 1'000'000) const;

 private:
  struct Cache;
  std::size_t degree_;
  std::vector<Permutation> gens_;
  BsgsOptions opt_;
  std::shared_ptr<Cache> cache_;
};

/// Element closure by breadth-first multiplication; the test oracle for BSGS.
std::vector<Permutation> closure(std::size_t degree, const std::vector<Permutation>& gens,
                                 std::size_t bound);

bool is_k_transitive(const PermGroup& g, int k);
int transitivity_degree(const PermGroup& g);
bool is_primitive(const PermGroup& g);
bool is_abelian(const PermGroup& g);
bool is_cyclic(const PermGroup& g, std::uint64_t bound = 1'000'000);
/// Unique Sylow p-subgroup for every p dividing the order, tested by
/// counting p-elements over a full enumeration.
bool is_nilpotent(const PermGroup& g, std::uint64_t bound = 1'000'000);

struct GroupSignature {
  std::size_t degree = 0;
  BigInt order;
  std::vector<std::size_t> orbit_sizes;  // sorted ascending
  int transitivity_degree = 0;
  bool primitive = false;
  bool abelian = false;
  bool nilpotent = false;
  bool cyclic = false;
  friend bool operator==(const GroupSignature&, const GroupSignature&) = default;
};

GroupSignature signature(const PermGroup& g);

struct NamedGroup {
  std::string name;
  std::vector<std::string> aliases;
  // Constraints; unset fields match anything.
  std::optional<std::size_t> degree;
  std::optional<BigInt> order;
  std::optional<std::vector<std::size_t>> orbit_sizes;
  std::optional<int> transitivity_degree;
  std::optional<bool> primitive, abelian, nilpotent, cyclic;
  bool matches(const GroupSignature& s) const;
};

/// Loaded from signatures.json in the catalog directory.
std::vector<NamedGroup> signature_catalog();
/// First matching entry, or nullopt ("unrecognized").
std::optional<NamedGroup> identify(const GroupSignature& sig);
std::string identify_label(const GroupSignature& sig);

struct ProjectiveMatch {
  int q = 0;  // field size
  int k = 0;  // vector space dimension; points of the projective (k-1)-space
};
/// Conservative order test against PSL_k(F_q) ≤ G ≤ PΓL_k(F_q) for the
/// projective geometries with at most 13 points. Throws PreconditionError
/// outside the shipped degree table.
std::optional<ProjectiveMatch> projective_type(const PermGroup& g);
bool is_projective_type(const PermGroup& g);

/// Named groups used by tests and the CLI: "sym7", "alt5", "c6", "d8", ...
PermGroup named_perm_group(const std::string& name);

}  // namespace bmw
