#include "bmw/core.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace bmw {

using nlohmann::json;

std::array<Square, 4> Square::readings() const {
  return {Square{a1, x1, a2, x2}, Square{a2, x2, a1, x1},
          Square{a2.inv(), x1.inv(), a1.inv(), x2.inv()},
          Square{a1.inv(), x2.inv(), a2.inv(), x1.inv()}};
}

Square Square::canonical() const {
  auto r = readings();
  return *std::min_element(r.begin(), r.end());
}

std::vector<std::pair<Letter, Letter>> covered_corners(const Square& sq) {
  std::vector<std::pair<Letter, Letter>> out;
  for (const Square& r : sq.readings()) {
    std::pair<Letter, Letter> c{r.a1, r.x1};
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// BmwPresentation

namespace {

void check_letter(const Letter& l, Side side, const std::vector<Generator>& gens) {
  if (l.side != side) throw ParseError("square letter on the wrong side");
  if (l.id >= gens.size()) throw ParseError("square letter id out of range");
  if (gens[l.id].involutive != l.involutive)
    throw ParseError("letter involution flag does not match generator '" + gens[l.id].name + "'");
  if (l.involutive && l.inverse)
    throw ParseError("involutive letter '" + gens[l.id].name + "' stored with inverse sign");
}

}  // namespace

BmwPresentation::BmwPresentation(std::vector<Generator> a_gens, std::vector<Generator> x_gens,
                                 std::vector<Square> squares)
    : a_(std::move(a_gens)), x_(std::move(x_gens)) {
  std::set<std::string> names;
  for (const auto* side : {&a_, &x_})
    for (const auto& g : *side) {
      if (g.name.empty()) throw ParseError("empty generator name");
      if (!names.insert(g.name).second) throw ParseError("duplicate generator name '" + g.name + "'");
    }
  std::set<Square> seen;
  for (const Square& sq : squares) {
    check_letter(sq.a1, Side::A, a_);
    check_letter(sq.a2, Side::A, a_);
    check_letter(sq.x1, Side::X, x_);
    check_letter(sq.x2, Side::X, x_);
    seen.insert(sq.canonical());
  }
  squares_.assign(seen.begin(), seen.end());
}

Degree BmwPresentation::degree() const {
  Degree d;
  for (const auto& g : a_) (g.involutive ? d.m_inv : d.m)++;
  for (const auto& g : x_) (g.involutive ? d.n_inv : d.n)++;
  return d;
}

Letter BmwPresentation::letter(Side s, int id, bool inverse) const {
  const auto& g = gens(s);
  if (id < 0 || id >= static_cast<int>(g.size())) throw PreconditionError("letter id out of range");
  Letter l{s, static_cast<std::uint16_t>(id), inverse, g[id].involutive};
  if (l.involutive) l.inverse = false;
  return l;
}

std::vector<Letter> BmwPresentation::star_labels(Side s) const {
  const auto& g = gens(s);
  std::vector<Letter> out;
  for (int i = 0; i < static_cast<int>(g.size()); ++i)
    if (!g[i].involutive) out.push_back(letter(s, i, false));
  for (int i = 0; i < static_cast<int>(g.size()); ++i)
    if (!g[i].involutive) out.push_back(letter(s, i, true));
  for (int i = 0; i < static_cast<int>(g.size()); ++i)
    if (g[i].involutive) out.push_back(letter(s, i, false));
  return out;
}

int BmwPresentation::star_index(Letter l) const {
  const auto& g = gens(l.side);
  int non_inv = 0;
  for (const auto& gen : g) non_inv += gen.involutive ? 0 : 1;
  int before = 0;  // same-kind generators with smaller id
  for (int i = 0; i < l.id; ++i) before += (g[i].involutive == g[l.id].involutive) ? 1 : 0;
  if (g[l.id].involutive) return 2 * non_inv + before;
  return l.inverse ? non_inv + before : before;
}

std::string BmwPresentation::letter_name(Letter l) const {
  std::string s = gens(l.side).at(l.id).name;
  if (l.inverse) s += "^-1";
  return s;
}

std::optional<Letter> BmwPresentation::find_letter(std::string_view token) const {
  bool inverse = false;
  constexpr std::string_view suffix = "^-1";
  if (token.size() > suffix.size() && token.substr(token.size() - suffix.size()) == suffix) {
    inverse = true;
    token.remove_suffix(suffix.size());
  }
  for (Side s : {Side::A, Side::X}) {
    const auto& g = gens(s);
    for (std::size_t i = 0; i < g.size(); ++i)
      if (g[i].name == token) {
        Letter l{s, static_cast<std::uint16_t>(i), inverse, g[i].involutive};
        return l;
      }
  }
  return std::nullopt;
}

std::string BmwPresentation::square_text(const Square& sq) const {
  return letter_name(sq.a1) + " " + letter_name(sq.x1) + " " + letter_name(sq.a2) + " " +
         letter_name(sq.x2);
}

// ---------------------------------------------------------------------------
// CornerMap and validation

CornerMap::CornerMap(const BmwPresentation& p, std::vector<std::pair<Letter, Letter>> table)
    : a_labels_(p.star_labels(Side::A)), x_labels_(p.star_labels(Side::X)), table_(std::move(table)) {
  a_index_.assign(2 * p.gens(Side::A).size(), -1);
  x_index_.assign(2 * p.gens(Side::X).size(), -1);
  for (std::size_t i = 0; i < a_labels_.size(); ++i) a_index_[a_labels_[i].key()] = static_cast<int>(i);
  for (std::size_t i = 0; i < x_labels_.size(); ++i) x_index_[x_labels_[i].key()] = static_cast<int>(i);
}

std::pair<Letter, Letter> CornerMap::operator()(Letter a, Letter x) const {
  if (a.involutive) a.inverse = false;
  if (x.involutive) x.inverse = false;
  int ai = a_index_.at(a.key()), xi = x_index_.at(x.key());
  return table_[static_cast<std::size_t>(ai) * x_labels_.size() + xi];
}

ValidationResult validate(const BmwPresentation& p) {
  ValidationResult res;
  const auto al = p.star_labels(Side::A);
  const auto xl = p.star_labels(Side::X);
  const std::size_t M = al.size(), N = xl.size();
  if (M == 0 || N == 0) {
    res.violations.push_back({Violation::Kind::Degenerate, {}, {}, {},
                              "degenerate degree: both alphabets must be nonempty"});
    return res;
  }
  std::vector<std::optional<std::pair<Letter, Letter>>> table(M * N);
  std::vector<int> owner(M * N, -1);
  const auto& sqs = p.squares();
  for (std::size_t s = 0; s < sqs.size(); ++s) {
    for (const Square& r : sqs[s].readings()) {
      std::size_t idx = static_cast<std::size_t>(p.star_index(r.a1)) * N + p.star_index(r.x1);
      std::pair<Letter, Letter> img{r.a2, r.x2};
      if (owner[idx] == -1) {
        owner[idx] = static_cast<int>(s);
        table[idx] = img;
      } else if (owner[idx] != static_cast<int>(s)) {
        res.violations.push_back({Violation::Kind::DoublyCovered, r.a1, r.x1,
                                  {sqs[owner[idx]], sqs[s]},
                                  "corner (" + p.letter_name(r.a1) + "," + p.letter_name(r.x1) +
                                      ") covered by squares '" + p.square_text(sqs[owner[idx]]) +
                                      "' and '" + p.square_text(sqs[s]) + "'"});
      } else if (!(*table[idx] == img)) {
        res.violations.push_back({Violation::Kind::Inconsistent, r.a1, r.x1, {sqs[s]},
                                  "square '" + p.square_text(sqs[s]) +
                                      "' assigns two images to corner (" + p.letter_name(r.a1) + "," +
                                      p.letter_name(r.x1) + ")"});
      }
    }
  }
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t j = 0; j < N; ++j)
      if (owner[i * N + j] == -1)
        res.violations.push_back({Violation::Kind::Uncovered, al[i], xl[j], {},
                                  "uncovered corner (" + p.letter_name(al[i]) + "," +
                                      p.letter_name(xl[j]) + ")"});
  if (!res.violations.empty()) return res;
  std::vector<std::pair<Letter, Letter>> flat;
  flat.reserve(M * N);
  for (auto& t : table) flat.push_back(*t);
  res.corner_map.emplace(p, std::move(flat));
  return res;
}

CornerMap corner_map(const BmwPresentation& p) {
  auto res = validate(p);
  if (!res.ok()) {
    std::string msg = "invalid BMW-presentation:";
    for (std::size_t i = 0; i < res.violations.size() && i < 8; ++i)
      msg += "\n  " + res.violations[i].message;
    throw ValidationError(msg);
  }
  return std::move(*res.corner_map);
}

// ---------------------------------------------------------------------------
// Derived data

TorsionProfile torsion_profile(const BmwPresentation& p) {
  TorsionProfile t;
  Degree d = p.degree();
  t.square_count = static_cast<int>(p.squares().size());
  t.mn = d.m * d.n;
  t.generators_infinite_order = d.m_inv == 0 && d.n_inv == 0;
  t.minimal_square_count = t.square_count == t.mn;
  if (t.square_count < t.mn)
    throw std::logic_error("square count below mn on a presentation claimed valid");
  return t;
}

ParityQuotient parity_quotient(const BmwPresentation& p) {
  ParityQuotient q;
  for (Side s : {Side::A, Side::X})
    for (Letter l : p.star_labels(s)) q.columns.push_back(l);
  q.rows.assign(4, std::vector<int>(q.columns.size()));
  for (int c = 0; c < 4; ++c)
    for (std::size_t j = 0; j < q.columns.size(); ++j)
      q.rows[c][j] = q.columns[j].side == Side::A ? (c ^ 2) : (c ^ 1);
  for (const Square& sq : p.squares()) {
    int c = 0;
    for (Letter l : sq.word()) c = l.side == Side::A ? (c ^ 2) : (c ^ 1);
    if (c != 0) throw std::logic_error("square relator with odd side length");
  }
  return q;
}

std::string AmalgamRanks::text() const {
  std::ostringstream os;
  os << "F" << factor_rank << " *_{F" << amalgamated_rank << "} F" << factor_rank;
  return os.str();
}

std::pair<AmalgamRanks, AmalgamRanks> amalgam_ranks(int M, int N) {
  if (M < 2 || N < 2) throw PreconditionError("amalgam ranks need M, N >= 2");
  AmalgamRanks first{N - 1, M * N - 2 * M + 1,
                     "valid only if the index-4 subgroup acts edge-transitively on the A-tree"};
  AmalgamRanks second{M - 1, M * N - 2 * N + 1,
                      "valid only if the index-4 subgroup acts edge-transitively on the X-tree"};
  return {first, second};
}

bool is_subpresentation(const BmwPresentation& p, const BmwPresentation& q,
                        const std::vector<std::pair<std::string, std::string>>& rename) {
  auto mapped = [&](const std::string& name) {
    for (const auto& [from, to] : rename)
      if (from == name) return to;
    return name;
  };
  auto translate = [&](Letter l) -> std::optional<Letter> {
    auto found = q.find_letter(mapped(p.gens(l.side)[l.id].name));
    if (!found || found->side != l.side || found->involutive != l.involutive) return std::nullopt;
    found->inverse = l.inverse;
    return found;
  };
  for (Side s : {Side::A, Side::X})
    for (int i = 0; i < static_cast<int>(p.gens(s).size()); ++i)
      if (!translate(p.letter(s, i))) return false;
  std::set<Square> qs(q.squares().begin(), q.squares().end());
  for (const Square& sq : p.squares()) {
    Square t{*translate(sq.a1), *translate(sq.x1), *translate(sq.a2), *translate(sq.x2)};
    if (!qs.count(t.canonical())) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// JSON documents

namespace {

std::vector<Generator> read_gens(const json& arr, const char* key) {
  if (!arr.is_array()) throw ParseError(std::string("'") + key + "' must be an array");
  std::vector<Generator> out;
  for (const auto& g : arr) {
    if (g.is_string()) {
      out.push_back({g.get<std::string>(), false});
    } else if (g.is_object() && g.contains("name")) {
      out.push_back({g.at("name").get<std::string>(), g.value("involutive", false)});
    } else {
      throw ParseError(std::string("malformed generator entry in '") + key + "'");
    }
  }
  return out;
}

}  // namespace

BmwPresentation parse_bmw(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("a_gens") || !doc.contains("x_gens") || !doc.contains("squares"))
    throw ParseError("presentation document needs 'a_gens', 'x_gens' and 'squares'");
  auto a = read_gens(doc["a_gens"], "a_gens");
  auto x = read_gens(doc["x_gens"], "x_gens");
  // Letters are resolved against a shell presentation so names are checked once.
  BmwPresentation shell(a, x, {});
  std::vector<Square> squares;
  for (const auto& s : doc["squares"]) {
    if (!s.is_array() || s.size() != 4) throw ParseError("each square must list exactly four letters");
    std::array<Letter, 4> ls;
    for (int i = 0; i < 4; ++i) {
      if (!s[i].is_string()) throw ParseError("square letters must be strings");
      auto tok = s[i].get<std::string>();
      auto l = shell.find_letter(tok);
      if (!l) throw ParseError("unknown token '" + tok + "' in square");
      Side want = (i % 2 == 0) ? Side::A : Side::X;
      if (l->side != want) throw ParseError("token '" + tok + "' on the wrong side of a square");
      if (l->involutive && l->inverse)
        throw ParseError("involutive letter written with inverse suffix: '" + tok + "'");
      ls[i] = *l;
    }
    squares.push_back({ls[0], ls[1], ls[2], ls[3]});
  }
  return BmwPresentation(std::move(a), std::move(x), std::move(squares));
}

std::string serialize_bmw(const BmwPresentation& p) {
  std::ostringstream os;
  auto gens = [&](Side s) {
    os << "[";
    const auto& g = p.gens(s);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (i) os << ", ";
      os << "{\"name\": " << json(g[i].name).dump() << ", \"involutive\": "
         << (g[i].involutive ? "true" : "false") << "}";
    }
    os << "]";
  };
  os << "{\n  \"a_gens\": ";
  gens(Side::A);
  os << ",\n  \"x_gens\": ";
  gens(Side::X);
  os << ",\n  \"squares\": [";
  const auto& sqs = p.squares();
  for (std::size_t i = 0; i < sqs.size(); ++i) {
    os << (i ? ",\n    [" : "\n    [");
    auto w = sqs[i].word();
    for (int k = 0; k < 4; ++k) os << (k ? ", " : "") << json(p.letter_name(w[k])).dump();
    os << "]";
  }
  os << (sqs.empty() ? "]\n}\n" : "\n  ]\n}\n");
  return os.str();
}

// ---------------------------------------------------------------------------
// Generic presentations

Word free_reduce(Word w) {
  Word out;
  out.reserve(w.size());
  for (int t : w) {
    if (!out.empty() && out.back() == -t)
      out.pop_back();
    else
      out.push_back(t);
  }
  return out;
}

Word inverse_word(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (int& t : out) t = -t;
  return out;
}

namespace {

Word power(const Word& w, long k) {
  Word base = k < 0 ? inverse_word(w) : w;
  Word out;
  for (long i = 0; i < (k < 0 ? -k : k); ++i) out.insert(out.end(), base.begin(), base.end());
  return out;
}

class WordParser {
 public:
  WordParser(const GenericPresentation& p, std::string_view s) : p_(p), s_(s) {}

  Word parse() {
    Word lhs = word();
    skip();
    if (pos_ < s_.size() && s_[pos_] == '=') {
      ++pos_;
      Word inv = inverse_word(word());
      lhs.insert(lhs.end(), inv.begin(), inv.end());
    }
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return free_reduce(lhs);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at offset " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
  }
  void skip() {
    while (pos_ < s_.size() && (std::isspace(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '*'))
      ++pos_;
  }
  bool name_char(char c) const { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  Word word() {
    Word out;
    for (;;) {
      skip();
      if (pos_ >= s_.size()) break;
      char c = s_[pos_];
      if (c == ',' || c == ']' || c == ')' || c == '=') break;
      Word t = term();
      out.insert(out.end(), t.begin(), t.end());
    }
    return out;
  }

  Word term() {
    Word a = atom();
    skip();
    if (pos_ < s_.size() && s_[pos_] == '^') {
      ++pos_;
      skip();
      std::size_t start = pos_;
      if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ == start || (pos_ == start + 1 && !std::isdigit(static_cast<unsigned char>(s_[start]))))
        fail("expected exponent");
      a = power(a, std::stol(std::string(s_.substr(start, pos_ - start))));
    }
    return a;
  }

  Word atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of word");
    char c = s_[pos_];
    if (c == '[') {
      ++pos_;
      Word u = word();
      expect(',');
      Word v = word();
      expect(']');
      Word out = u;
      out.insert(out.end(), v.begin(), v.end());
      Word ui = inverse_word(u), vi = inverse_word(v);
      out.insert(out.end(), ui.begin(), ui.end());
      out.insert(out.end(), vi.begin(), vi.end());
      return out;
    }
    if (c == '(') {
      ++pos_;
      Word u = word();
      expect(')');
      return u;
    }
    if (c == '1' && (pos_ + 1 == s_.size() || !name_char(s_[pos_ + 1]))) {
      ++pos_;
      return {};
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && name_char(s_[pos_])) ++pos_;
    if (start == pos_) fail("expected generator name");
    std::string name(s_.substr(start, pos_ - start));
    for (int g = 0; g < p_.gen_count(); ++g)
      if (p_.gens[g] == name) return {g + 1};
    throw ParseError("unknown generator '" + name + "' in '" + std::string(s_) + "'");
  }

  void expect(char c) {
    skip();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  const GenericPresentation& p_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Word GenericPresentation::parse_word(std::string_view text) const {
  return WordParser(*this, text).parse();
}

std::string GenericPresentation::word_text(const Word& w) const {
  std::string out;
  for (std::size_t i = 0; i < w.size();) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    long run = static_cast<long>(j - i);
    if (!out.empty()) out += ' ';
    out += gens.at(std::abs(w[i]) - 1);
    long e = w[i] < 0 ? -run : run;
    if (e != 1) out += "^" + std::to_string(e);
    i = j;
  }
  return out.empty() ? "1" : out;
}

GenericPresentation parse_generic(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("gens") || !doc.contains("relators"))
    throw ParseError("generic presentation needs 'gens' and 'relators'");
  GenericPresentation p;
  std::set<std::string> seen;
  for (const auto& g : doc["gens"]) {
    auto name = g.get<std::string>();
    if (name.empty() || !seen.insert(name).second) throw ParseError("duplicate or empty generator '" + name + "'");
    p.gens.push_back(name);
  }
  for (const auto& r : doc["relators"]) {
    Word w = p.parse_word(r.get<std::string>());
    if (w.empty()) throw ParseError("empty relator '" + r.get<std::string>() + "'");
    p.relators.push_back(std::move(w));
  }
  return p;
}

std::string serialize_generic(const GenericPresentation& p) {
  json doc;
  doc["gens"] = p.gens;
  doc["relators"] = json::array();
  for (const Word& w : p.relators) doc["relators"].push_back(p.word_text(w));
  return doc.dump(2) + "\n";
}

GenericPresentation to_generic(const BmwPresentation& p) {
  GenericPresentation g;
  const int na = static_cast<int>(p.gens(Side::A).size());
  for (Side s : {Side::A, Side::X})
    for (const auto& gen : p.gens(s)) g.gens.push_back(gen.name);
  auto token = [&](Letter l) {
    int idx = (l.side == Side::A ? 0 : na) + l.id + 1;
    return l.inverse ? -idx : idx;
  };
  for (Side s : {Side::A, Side::X})
    for (int i = 0; i < static_cast<int>(p.gens(s).size()); ++i)
      if (p.gens(s)[i].involutive) {
        int t = token(p.letter(s, i));
        g.relators.push_back({t, t});
      }
  for (const Square& sq : p.squares()) {
    Word w;
    for (Letter l : sq.word()) w.push_back(token(l));
    g.relators.push_back(w);
  }
  return g;
}

}  // namespace bmw
