#include "bmw/tree_ball.hpp"

#include <stdexcept>

#include "bmw/local_action.hpp"

namespace bmw {

std::pair<Letter, Letter> push(const CornerMap& k, Letter g, Letter l) {
  if (g.side == l.side) throw PreconditionError("push needs letters of opposite sides");
  if (g.side == Side::A) {
    auto [a2, x2] = k(g, l);
    return {x2.inv(), a2.inv()};
  }
  return k(l.inv(), g.inv());
}

// ---------------------------------------------------------------------------
// Ball

std::uint64_t Ball::expected_size(int degree, int radius) {
  if (degree <= 1) return radius >= 1 && degree == 1 ? 2 : 1;
  if (degree == 2) return 1 + 2 * static_cast<std::uint64_t>(radius);
  std::uint64_t pw = 1;
  for (int i = 0; i < radius; ++i) pw *= static_cast<std::uint64_t>(degree - 1);
  return 1 + static_cast<std::uint64_t>(degree) * (pw - 1) / static_cast<std::uint64_t>(degree - 2);
}

Ball::Ball(const BmwPresentation& p, Side side, int radius)
    : side_(side), radius_(radius), labels_(p.star_labels(side)) {
  if (radius < 0) throw PreconditionError("ball radius must be non-negative");
  degree_ = static_cast<int>(labels_.size());
  std::vector<int> inv(degree_);
  for (int i = 0; i < degree_; ++i) inv[i] = p.star_index(labels_[i].inv());
  parent_ = {-1};
  label_ = {-1};
  depth_ = {0};
  child_.assign(degree_, -1);
  for (std::size_t v = 0; v < parent_.size(); ++v) {
    if (depth_[v] == radius) continue;
    for (int l = 0; l < degree_; ++l) {
      if (label_[v] >= 0 && inv[label_[v]] == l) continue;
      int c = static_cast<int>(parent_.size());
      child_[v * degree_ + l] = c;
      parent_.push_back(static_cast<int>(v));
      label_.push_back(l);
      depth_.push_back(depth_[v] + 1);
      child_.resize(child_.size() + degree_, -1);
    }
  }
}

std::vector<int> Ball::word(std::size_t v) const {
  std::vector<int> w;
  for (int u = static_cast<int>(v); u > 0; u = parent_[u]) w.push_back(label_[u]);
  return {w.rbegin(), w.rend()};
}

std::string Ball::word_text(const BmwPresentation& p, std::size_t v) const {
  auto w = word(v);
  if (w.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? " " : "") + p.letter_name(labels_[w[i]]);
  return s;
}

Permutation act_letter(const BmwPresentation& p, const CornerMap& k, const Ball& ball, Letter g) {
  if (g.side == ball.side()) throw PreconditionError("ball letters must come from the opposite side");
  std::size_t n = ball.size();
  std::vector<Point> img(n);
  std::vector<Letter> carry(n);
  img[0] = 0;
  carry[0] = g;
  for (std::size_t v = 1; v < n; ++v) {
    int u = ball.parent(v);
    auto [image, c] = push(k, carry[u], ball.labels()[ball.last_label(v)]);
    int target = ball.child(img[u], p.star_index(image));
    if (target < 0) throw std::logic_error("ball action produced a non-reduced word");
    img[v] = static_cast<Point>(target);
    carry[v] = c;
  }
  return Permutation(std::move(img));
}

Permutation act_on_ball(const BmwPresentation& p, const CornerMap& k, const Ball& ball,
                        const std::vector<Letter>& word) {
  Permutation r(ball.size());
  for (auto it = word.rbegin(); it != word.rend(); ++it) r = compose(act_letter(p, k, ball, *it), r);
  return r;
}

// ---------------------------------------------------------------------------
// Order sequence and verdicts

namespace {

BigInt ball_order(const BmwPresentation& p, const CornerMap& k, Side side, int r, std::size_t max_points) {
  int D = static_cast<int>(p.star_labels(side).size());
  if (Ball::expected_size(D, r) > max_points) throw ResourceLimit("ball exceeds the point limit");
  Ball ball(p, side, r);
  Side other = opposite(side);
  std::vector<Permutation> gens;
  for (int i = 0; i < static_cast<int>(p.gens(other).size()); ++i)
    gens.push_back(act_letter(p, k, ball, p.letter(other, i)));
  BsgsOptions opt;
  opt.base_preference.resize(ball.size());
  for (std::size_t v = 0; v < ball.size(); ++v) opt.base_preference[v] = static_cast<Point>(v);
  return schreier_sims(ball.size(), gens, opt).order();
}

}  // namespace

BallOrderSequence ball_order_sequence(const BmwPresentation& p, Side side, int r_max, const BallOptions& opt) {
  if (r_max < 1) throw PreconditionError("r_max must be at least 1");
  CornerMap k = corner_map(p);
  BallOrderSequence seq;
  seq.side = side;
  for (int r = 1; r <= r_max; ++r) {
    seq.orders.push_back(ball_order(p, k, side, r, opt.max_points));
    std::size_t m = seq.orders.size();
    if (m >= 2 && seq.orders[m - 1] < seq.orders[m - 2])
      throw std::logic_error("ball order sequence decreased");
    if (m >= 3 && seq.orders[m - 2] == seq.orders[m - 3] && seq.orders[m - 1] != seq.orders[m - 2])
      throw std::logic_error("ball order sequence grew after stabilizing");
    if (opt.stop_when_stable && m >= 2 && seq.orders[m - 1] == seq.orders[m - 2]) break;
  }
  return seq;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Discrete: return "Discrete";
    case Verdict::NonDiscrete: return "NonDiscrete";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

DiscretenessResult discreteness_verdict(const BmwPresentation& p, Side side, int r_max, bool deep,
                                        const BallOptions& opt) {
  if (r_max < 1) throw PreconditionError("r_max must be at least 1");
  CornerMap k = corner_map(p);
  PermGroup local = local_group(p, side);
  int D = static_cast<int>(local.degree());
  DiscretenessResult res;
  res.side = side;
  res.two_transitive = D >= 3 && is_k_transitive(local, 2);
  bool table = D <= 13;
  if (res.two_transitive && table) res.projective = projective_type(local);
  if (D == 2) res.note = "side degree 2: the tree is a line and the criteria are disabled";
  else if (!res.two_transitive) res.note = "local action is not 2-transitive: only stabilization is decisive";
  else if (!table) res.note = "degree outside the projective table: only the radius-7 rule applies";

  int limit = deep ? std::max(r_max, 7) : r_max;
  auto& s = res.orders;
  for (int r = 1; r <= limit; ++r) {
    s.push_back(ball_order(p, k, side, r, opt.max_points));
    if (r >= 2 && s[r - 1] == s[r - 2]) {
      res.verdict = Verdict::Discrete;
      res.radius = r - 1;
      return res;
    }
    if (!res.two_transitive) continue;
    if (r == 3 && table && !res.projective && s[2] > s[1]) {
      res.verdict = Verdict::NonDiscrete;
      res.rule = "ii";
      return res;
    }
    if (r == 5 && res.projective && res.projective->k == 2 && s[4] > s[3]) {
      res.verdict = Verdict::NonDiscrete;
      res.rule = "iii";
      return res;
    }
    if (r == 7 && s[6] > s[5]) {
      res.verdict = Verdict::NonDiscrete;
      res.rule = "i";
      return res;
    }
  }
  res.verdict = Verdict::Inconclusive;
  return res;
}

}  // namespace bmw
