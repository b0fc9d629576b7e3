#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bmw/core.hpp"
#include "bmw/perm.hpp"

namespace bmw {

/// push(a, ξ) for an A-letter a and X-letter ξ returns ((ξ′)⁻¹, (a′)⁻¹)
/// with κ(a,ξ) = (a′,ξ′), so that a·ξ = (ξ′)⁻¹·(a′)⁻¹. For an X-letter ξ
/// and A-letter a it returns (α, β) with ξ·a = α·β.
std::pair<Letter, Letter> push(const CornerMap& k, Letter g, Letter l);

/// Reduced words of length ≤ r over the star labels of one side, in BFS
/// order with children ordered by star labels.
class Ball {
 public:
  Ball(const BmwPresentation& p, Side side, int radius);

  Side side() const { return side_; }
  int radius() const { return radius_; }
  std::size_t size() const { return parent_.size(); }
  int degree() const { return degree_; }
  /// Expected vertex count 1 + D((D−1)^r − 1)/(D−2), or 1 + 2r when D = 2.
  static std::uint64_t expected_size(int degree, int radius);

  int parent(std::size_t v) const { return parent_[v]; }
  int last_label(std::size_t v) const { return label_[v]; }  // star index, −1 at the root
  int child(std::size_t v, int label) const { return child_[v * degree_ + label]; }
  int depth(std::size_t v) const { return depth_[v]; }
  std::vector<int> word(std::size_t v) const;
  std::string word_text(const BmwPresentation& p, std::size_t v) const;
  const std::vector<Letter>& labels() const { return labels_; }

 private:
  Side side_;
  int radius_;
  int degree_;
  std::vector<Letter> labels_;
  std::vector<int> parent_, label_, depth_, child_;
};

/// Permutation of the ball induced by a single opposite-side letter.
Permutation act_letter(const BmwPresentation& p, const CornerMap& k, const Ball& ball, Letter g);
/// act(w) = act(w₁)∘act(w₂)∘…; the empty word gives the identity.
Permutation act_on_ball(const BmwPresentation& p, const CornerMap& k, const Ball& ball,
                        const std::vector<Letter>& word);

struct BallOptions {
  std::size_t max_points = 200000;
  bool stop_when_stable = false;
};

struct BallOrderSequence {
  Side side = Side::X;
  std::vector<BigInt> orders;  // orders[r-1] = s_r
};

BallOrderSequence ball_order_sequence(const BmwPresentation& p, Side side, int r_max,
                                      const BallOptions& opt = {});

enum class Verdict { Discrete, NonDiscrete, Inconclusive };
const char* verdict_name(Verdict v);

struct DiscretenessResult {
  Side side = Side::X;
  std::vector<BigInt> orders;
  Verdict verdict = Verdict::Inconclusive;
  int radius = 0;      // Discrete: s_{r+1} = s_r
  std::string rule;    // NonDiscrete: "i", "ii" or "iii"
  bool two_transitive = false;
  std::optional<ProjectiveMatch> projective;
  std::string note;
};

/// Radius-7 growth (rule i) is only examined when `deep` is set.
DiscretenessResult discreteness_verdict(const BmwPresentation& p, Side side, int r_max = 5, bool deep = false,
                                        const BallOptions& opt = {});

}  // namespace bmw
