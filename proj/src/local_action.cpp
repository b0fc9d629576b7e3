#include "bmw/local_action.hpp"

#include <sstream>

#include "bmw/catalog.hpp"

namespace bmw {

LocalPermutation sigma(const BmwPresentation& p, const CornerMap& k, Side side, Letter g) {
  if (g.side == side) throw PreconditionError("sigma needs a letter of the opposite side");
  auto labels = p.star_labels(side);
  std::vector<Point> img(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    Letter image;
    if (side == Side::X) {
      image = k(g, labels[i]).second.inv();
    } else {
      image = k(labels[i].inv(), g.inv()).first;
    }
    img[i] = static_cast<Point>(p.star_index(image));
  }
  return {g, Permutation(std::move(img))};
}

LocalPermutation sigma(const BmwPresentation& p, Side side, Letter g) {
  return sigma(p, corner_map(p), side, g);
}

std::string label_cycles(const BmwPresentation& p, Side side, const Permutation& perm) {
  auto labels = p.star_labels(side);
  auto cs = perm.cycles();
  if (cs.empty()) return "()";
  std::ostringstream os;
  for (const auto& c : cs) {
    os << '(';
    for (std::size_t i = 0; i < c.size(); ++i) os << (i ? " " : "") << p.letter_name(labels[c[i]]);
    os << ')';
  }
  return os.str();
}

PermGroup local_group(const BmwPresentation& p, Side side) {
  CornerMap k = corner_map(p);
  Side other = opposite(side);
  std::vector<Permutation> gens;
  for (int i = 0; i < static_cast<int>(p.gens(other).size()); ++i)
    gens.push_back(sigma(p, k, side, p.letter(other, i)).perm);
  return PermGroup(p.star_labels(side).size(), gens);
}

namespace {

bool contains_alt(const PermGroup& g) {
  std::size_t n = g.degree();
  if (n < 3) return true;
  for (Point i = 2; i < n; ++i)
    if (!g.contains(Permutation::from_cycles(n, {{0, 1, i}}))) return false;
  return true;
}

SideReport side_report(const BmwPresentation& p, Side side) {
  PermGroup g = local_group(p, side);
  SideReport r;
  r.side = side;
  r.degree = static_cast<int>(g.degree());
  r.signature = signature(g);
  if (auto named = identify(r.signature)) {
    r.label = named->name;
    r.aliases = named->aliases;
  } else {
    r.label = "unrecognized";
  }
  r.two_transitive = r.degree >= 2 && is_k_transitive(g, 2);
  r.primitive = r.signature.primitive;
  r.nilpotent = r.signature.nilpotent;
  r.contains_alt = contains_alt(g);
  if (r.two_transitive && r.degree <= 13) r.projective = projective_type(g);
  if (r.nilpotent)
    r.note = "nilpotent local action: an irreducible lattice with this property is not residually finite";
  return r;
}

}  // namespace

Classification classify(const BmwPresentation& p) {
  return {side_report(p, Side::A), side_report(p, Side::X)};
}

const std::vector<std::string>& table1_names() {
  static const std::vector<std::string> names{"rung", "gamma33", "sv",   "jw",     "gamma45",
                                              "wise", "ratt",    "bdr", "gamma66"};
  return names;
}

std::vector<Table1Row> table1_report(const std::vector<std::string>& names) {
  const auto& list = names.empty() ? table1_names() : names;
  std::vector<Table1Row> rows;
  for (const auto& name : list) {
    auto p = catalog_bmw(name);
    auto c = classify(p);
    rows.push_back({name, c.a.degree, c.a.label, c.x.degree, c.x.label});
  }
  return rows;
}

}  // namespace bmw
