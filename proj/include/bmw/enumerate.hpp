#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bmw/core.hpp"

namespace bmw {

/// Side data (m, m′, n, n′): non-involutive and involutive generator counts.
struct Profile {
  int m = 0, m_inv = 0, n = 0, n_inv = 0;
  static Profile of(const BmwPresentation& p);
  int M() const { return 2 * m + m_inv; }
  int N() const { return 2 * n + n_inv; }
  friend bool operator==(const Profile&, const Profile&) = default;
  friend auto operator<=>(const Profile&, const Profile&) = default;
};

/// Least square-set encoding over the relabeling orbit. Letters are coded
/// 2·id + inverse in the standard layout (non-involutive ids first); a
/// square is packed a1·2²⁴ + x1·2¹⁶ + a2·2⁸ + x2 in its least reading.
struct CanonicalForm {
  Profile profile;
  std::vector<std::uint32_t> squares;  // sorted
  friend bool operator==(const CanonicalForm&, const CanonicalForm&) = default;
  friend auto operator<=>(const CanonicalForm&, const CanonicalForm&) = default;
};

/// Relabelings: permutations of same-flag generators and inversion of
/// non-involutive ones on each side, plus the A↔X swap when `with_swap`
/// and (m, m′) = (n, n′). Throws ValidationError on invalid p.
CanonicalForm canonical_form(const BmwPresentation& p, bool with_swap);

/// Presentation in the standard layout with generators a, b, c, ... and
/// x, y, z, t, ... .
BmwPresentation to_presentation(const CanonicalForm& f);

enum class CountMode { Complexes, Presentations };

struct EnumerateOptions {
  CountMode mode = CountMode::Complexes;
  /// Keep only R₂ = ∅ and |R₄| = mn (requires m′ = n′ = 0).
  bool torsion_free = false;
  int jobs = 1;
  /// Search-node budget over the whole run; 0 means unlimited.
  std::uint64_t max_nodes = 0;
  /// When non-empty, completed work is loaded from and saved to this file.
  std::string checkpoint;
};

struct EnumerationResult {
  Profile profile;
  std::vector<CanonicalForm> classes;  // sorted, duplicate-free
  std::uint64_t labelled = 0;          // labelled presentations visited
  std::size_t count() const { return classes.size(); }
};

/// Exhaustive enumeration up to relabeling. Throws ResourceLimit when the
/// node budget is exhausted, after writing the checkpoint if configured.
EnumerationResult enumerate(const Profile& profile, const EnumerateOptions& opt = {});

/// Number of classes whose representative satisfies `pred`; an empty
/// predicate counts everything.
std::size_t filter_enumeration(const EnumerationResult& r,
                               const std::function<bool(const BmwPresentation&)>& pred);

}  // namespace bmw
