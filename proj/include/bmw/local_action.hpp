#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bmw/core.hpp"
#include "bmw/perm.hpp"

namespace bmw {

/// Permutation of the star labels of `side` induced by a letter of the
/// opposite side. A-letters act on the X-star by σ(a)(ξ) = (ξ′)⁻¹ where
/// κ(a,ξ) = (a′,ξ′); X-letters act on the A-star by σ(ξ)(a) = α where
/// κ(a⁻¹,ξ⁻¹) = (α,β).
struct LocalPermutation {
  Letter generator;
  Permutation perm;
};

LocalPermutation sigma(const BmwPresentation& p, const CornerMap& k, Side side, Letter g);
LocalPermutation sigma(const BmwPresentation& p, Side side, Letter g);

/// Cycle notation over star labels, e.g. "(x y^-1 y x^-1)".
std::string label_cycles(const BmwPresentation& p, Side side, const Permutation& perm);

/// Group generated by σ of the positive generators of the opposite side.
PermGroup local_group(const BmwPresentation& p, Side side);

struct SideReport {
  Side side = Side::X;
  int degree = 0;
  GroupSignature signature;
  std::string label;  // "unrecognized" when the signature catalog has no match
  std::vector<std::string> aliases;
  bool two_transitive = false;
  bool primitive = false;
  bool nilpotent = false;
  bool contains_alt = false;
  std::optional<ProjectiveMatch> projective;  // unset also when the degree is outside the table
  std::string note;
};

struct Classification {
  SideReport a, x;
};

Classification classify(const BmwPresentation& p);

struct Table1Row {
  std::string name;
  int degree_a = 0;
  std::string label_a;
  int degree_x = 0;
  std::string label_x;
};

/// Rows for catalog names; the default list is the nine table groups.
std::vector<Table1Row> table1_report(const std::vector<std::string>& names = {});
const std::vector<std::string>& table1_names();

}  // namespace bmw
