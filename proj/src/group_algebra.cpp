#include "charvar/group_algebra.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <tuple>

namespace charvar {

namespace {

std::tuple<int, int, int> order_key(const Generator& g) {
  switch (g.kind) {
    case GenKind::A: return {0, g.index, 0};
    case GenKind::B: return {0, g.index, 1};
    case GenKind::C: return {1, g.index, 0};
  }
  return {2, 0, 0};
}

}  // namespace

std::string Generator::name() const {
  const char prefix = kind == GenKind::A ? 'a' : kind == GenKind::B ? 'b' : 'c';
  return prefix + std::to_string(index);
}

Generator Generator::from_name(std::string_view name) {
  if (name.size() < 2) throw InputError("malformed generator '" + std::string(name) + "'");
  GenKind kind;
  switch (name[0]) {
    case 'a': kind = GenKind::A; break;
    case 'b': kind = GenKind::B; break;
    case 'c': kind = GenKind::C; break;
    default: throw InputError("unknown generator '" + std::string(name) + "'");
  }
  int index = 0;
  auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), index);
  if (ec != std::errc{} || ptr != name.data() + name.size() || index < 1)
    throw InputError("malformed generator '" + std::string(name) + "'");
  return {kind, index};
}

std::strong_ordering operator<=>(const Generator& x, const Generator& y) {
  return order_key(x) <=> order_key(y);
}

std::strong_ordering operator<=>(const Letter& x, const Letter& y) {
  if (auto c = x.gen <=> y.gen; c != 0) return c;
  return x.exp <=> y.exp;
}

// ---------------------------------------------------------------------------
// FreeWord

std::vector<Letter> free_reduce(const std::vector<Letter>& letters) {
  std::vector<Letter> out;
  out.reserve(letters.size());
  for (const Letter& l : letters) {
    if (l.exp != 1 && l.exp != -1) throw std::invalid_argument("letter exponent must be +-1");
    if (!out.empty() && out.back().gen == l.gen && out.back().exp == -l.exp) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

FreeWord::FreeWord(std::vector<Letter> letters) : letters_(free_reduce(letters)) {}

FreeWord FreeWord::generator(Generator g, int power) {
  std::vector<Letter> ls;
  const int e = power >= 0 ? 1 : -1;
  for (int i = 0; i < std::abs(power); ++i) ls.push_back({g, e});
  return FreeWord(std::move(ls));
}

FreeWord FreeWord::inverse() const {
  FreeWord w;
  w.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back({it->gen, -it->exp});
  return w;
}

FreeWord FreeWord::prefix(std::size_t n) const {
  FreeWord w;
  w.letters_.assign(letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(std::min(n, letters_.size())));
  return w;
}

FreeWord FreeWord::pow(int k) const {
  const FreeWord base = k >= 0 ? *this : inverse();
  FreeWord out;
  for (int i = 0; i < std::abs(k); ++i) out *= base;
  return out;
}

std::string FreeWord::str() const {
  if (letters_.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (i) s += ' ';
    s += letters_[i].gen.name();
    if (letters_[i].exp < 0) s += "^-1";
  }
  return s;
}

FreeWord FreeWord::operator*(const FreeWord& rhs) const {
  FreeWord out = *this;
  out *= rhs;
  return out;
}

FreeWord& FreeWord::operator*=(const FreeWord& rhs) {
  // Cancellation only happens at the junction since both sides are reduced.
  std::size_t j = 0;
  while (j < rhs.letters_.size() && !letters_.empty() && letters_.back().gen == rhs.letters_[j].gen &&
         letters_.back().exp == -rhs.letters_[j].exp) {
    letters_.pop_back();
    ++j;
  }
  letters_.insert(letters_.end(), rhs.letters_.begin() + static_cast<std::ptrdiff_t>(j), rhs.letters_.end());
  return *this;
}

std::strong_ordering operator<=>(const FreeWord& x, const FreeWord& y) {
  if (auto c = x.letters_.size() <=> y.letters_.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(x.letters_.begin(), x.letters_.end(), y.letters_.begin(),
                                                y.letters_.end());
}

FreeWord commutator(const FreeWord& x, const FreeWord& y) { return x * y * x.inverse() * y.inverse(); }

// ---------------------------------------------------------------------------
// Signature

Signature::Signature(int genus, std::vector<int> elliptic_orders, int cusps) : genus_(genus) {
  if (genus < 0) throw InputError("genus must be non-negative");
  if (cusps < 0) throw InputError("number of cusps must be non-negative");
  for (int e : elliptic_orders) {
    if (e < 2) throw InputError("elliptic orders must be >= 2");
    marked_.push_back(e);
  }
  marked_.insert(marked_.end(), static_cast<std::size_t>(cusps), kCusp);
}

Signature Signature::with_marked_orders(int genus, std::vector<int> marked_orders) {
  if (genus < 0) throw InputError("genus must be non-negative");
  for (int e : marked_orders)
    if (e != kCusp && e < 2) throw InputError("marked orders must be >= 2 or 0 (cusp)");
  Signature s;
  s.genus_ = genus;
  s.marked_ = std::move(marked_orders);
  return s;
}

std::vector<int> Signature::elliptic_orders() const {
  std::vector<int> out;
  for (int e : marked_)
    if (e != kCusp) out.push_back(e);
  return out;
}

int Signature::cusps() const {
  int n = 0;
  for (int e : marked_) n += e == kCusp;
  return n;
}

double Signature::euler_term() const {
  double t = 2.0 * genus_ - 2.0;
  for (int e : marked_) t += e == kCusp ? 1.0 : 1.0 - 1.0 / e;
  return t;
}

std::vector<Generator> Signature::generators() const {
  std::vector<Generator> gens;
  for (int k = 1; k <= genus_; ++k) {
    gens.push_back(Generator::a(k));
    gens.push_back(Generator::b(k));
  }
  for (int i = 1; i <= num_marked(); ++i) gens.push_back(Generator::c(i));
  return gens;
}

bool Signature::contains(Generator g) const {
  if (g.index < 1) return false;
  if (g.kind == GenKind::C) return g.index <= num_marked();
  return g.index <= genus_;
}

std::string Signature::str() const {
  std::ostringstream os;
  os << "(" << genus_ << ";";
  for (std::size_t i = 0; i < marked_.size(); ++i) {
    os << (i ? "," : "");
    if (marked_[i] == kCusp)
      os << "inf";
    else
      os << marked_[i];
  }
  os << ")";
  return os.str();
}

// ---------------------------------------------------------------------------
// GroupRingElement

GroupRingElement::GroupRingElement(const FreeWord& w, long long coeff) { add_term(w, coeff); }

long long GroupRingElement::coefficient(const FreeWord& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? 0 : it->second;
}

void GroupRingElement::add_term(const FreeWord& w, long long coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.try_emplace(w, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

GroupRingElement GroupRingElement::operator+(const GroupRingElement& rhs) const {
  GroupRingElement out = *this;
  out += rhs;
  return out;
}

GroupRingElement& GroupRingElement::operator+=(const GroupRingElement& rhs) {
  for (const auto& [w, n] : rhs.terms_) add_term(w, n);
  return *this;
}

GroupRingElement GroupRingElement::operator-(const GroupRingElement& rhs) const { return *this + (-rhs); }

GroupRingElement GroupRingElement::operator-() const { return *this * -1; }

GroupRingElement GroupRingElement::operator*(long long k) const {
  GroupRingElement out;
  if (k == 0) return out;
  for (const auto& [w, n] : terms_) out.terms_.emplace(w, n * k);
  return out;
}

GroupRingElement GroupRingElement::operator*(const GroupRingElement& rhs) const {
  GroupRingElement out;
  for (const auto& [u, m] : terms_)
    for (const auto& [v, n] : rhs.terms_) out.add_term(u * v, m * n);
  return out;
}

std::string GroupRingElement::str() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [w, n] : terms_) {
    if (!first) s += n < 0 ? " - " : " + ";
    else if (n < 0) s += "-";
    first = false;
    const long long mag = n < 0 ? -n : n;
    if (mag != 1) s += std::to_string(mag) + "*";
    s += w.empty() ? "1" : "(" + w.str() + ")";
  }
  return s;
}

GroupRingElement operator*(const FreeWord& w, const GroupRingElement& x) { return GroupRingElement(w) * x; }
GroupRingElement operator*(const GroupRingElement& x, const FreeWord& w) { return x * GroupRingElement(w); }

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Token {
  std::string name;
  int power = 1;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto is_sep = [](char ch) { return std::isspace(static_cast<unsigned char>(ch)) || ch == '*'; };
  while (i < text.size()) {
    if (is_sep(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && std::isalnum(static_cast<unsigned char>(text[j]))) ++j;
    if (j == i) throw InputError("unexpected character '" + std::string(1, text[i]) + "' in word");
    Token tok{std::string(text.substr(i, j - i)), 1};
    i = j;
    if (i < text.size() && text[i] == '^') {
      ++i;
      std::size_t k = i;
      if (k < text.size() && (text[k] == '-' || text[k] == '+')) ++k;
      std::size_t digits = k;
      while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
      if (k == digits) throw InputError("malformed exponent after '" + tok.name + "'");
      std::string_view num = text.substr(i, k - i);
      if (num.front() == '+') num.remove_prefix(1);
      auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), tok.power);
      if (ec != std::errc{} || ptr != num.data() + num.size())
        throw InputError("malformed exponent after '" + tok.name + "'");
      i = k;
    }
    out.push_back(std::move(tok));
  }
  return out;
}

FreeWord parse_impl(std::string_view text, const Signature* sig) {
  FreeWord w;
  std::vector<FreeWord> prefixes;
  if (sig) prefixes = prefix_products(*sig);
  for (const Token& tok : tokenize(text)) {
    FreeWord piece;
    if (tok.name == "1") {
      piece = FreeWord{};
    } else if (tok.name[0] == 'R') {
      if (!sig) throw InputError("relator macro '" + tok.name + "' requires a signature");
      if (tok.name == "R") {
        piece = prefixes.back();
      } else {
        int k = -1;
        auto [ptr, ec] = std::from_chars(tok.name.data() + 1, tok.name.data() + tok.name.size(), k);
        if (ec != std::errc{} || ptr != tok.name.data() + tok.name.size() || k < 0 ||
            k >= static_cast<int>(prefixes.size()))
          throw InputError("unknown prefix product '" + tok.name + "'");
        piece = prefixes[static_cast<std::size_t>(k)];
      }
    } else {
      const Generator g = Generator::from_name(tok.name);
      if (sig && !sig->contains(g))
        throw InputError("generator '" + tok.name + "' not in signature " + sig->str());
      piece = FreeWord::generator(g);
    }
    w *= piece.pow(tok.power);
  }
  return w;
}

}  // namespace

FreeWord parse_word(std::string_view text) { return parse_impl(text, nullptr); }
FreeWord parse_word(std::string_view text, const Signature& sig) { return parse_impl(text, &sig); }

// ---------------------------------------------------------------------------
// Fox calculus

GroupRingElement fox_derivative(const FreeWord& w, Generator x) {
  GroupRingElement out;
  const auto& ls = w.letters();
  for (std::size_t i = 0; i < ls.size(); ++i) {
    if (!(ls[i].gen == x)) continue;
    if (ls[i].exp > 0)
      out.add_term(w.prefix(i), 1);
    else
      out.add_term(w.prefix(i + 1), -1);  // -(prefix * x^-1)
  }
  return out;
}

GroupRingElement anti_involution(const GroupRingElement& x) {
  GroupRingElement out;
  for (const auto& [w, n] : x.terms()) out.add_term(w.inverse(), n);
  return out;
}

std::vector<FreeWord> prefix_products(const Signature& sig) {
  std::vector<FreeWord> r{FreeWord{}};
  for (int k = 1; k <= sig.genus(); ++k) {
    const FreeWord a = FreeWord::generator(Generator::a(k));
    const FreeWord b = FreeWord::generator(Generator::b(k));
    r.push_back(r.back() * commutator(a, b));
  }
  for (int i = 1; i <= sig.num_marked(); ++i) r.push_back(r.back() * FreeWord::generator(Generator::c(i)));
  return r;
}

FreeWord relator(const Signature& sig) { return prefix_products(sig).back(); }

DualGenerators dual_generators(const Signature& sig) {
  const auto r = prefix_products(sig);
  const int g = sig.genus();
  DualGenerators d;
  for (int k = 1; k <= g; ++k) {
    const FreeWord& rk1 = r[static_cast<std::size_t>(k - 1)];
    const FreeWord& rk = r[static_cast<std::size_t>(k)];
    d.alpha.push_back(rk1 * FreeWord::generator(Generator::b(k), -1) * rk.inverse());
    d.beta.push_back(rk * FreeWord::generator(Generator::a(k), -1) * rk1.inverse());
  }
  for (int i = 1; i <= sig.num_marked(); ++i) {
    const FreeWord& rp = r[static_cast<std::size_t>(g + i - 1)];
    d.gamma.push_back(rp * FreeWord::generator(Generator::c(i), -1) * rp.inverse());
  }
  return d;
}

// ---------------------------------------------------------------------------
// Identity suite

bool IdentityReport::all_required_pass() const {
  for (const auto& c : checks)
    if (c.required && !c.pass) return false;
  return true;
}

const IdentityCheck* IdentityReport::find(std::string_view identity) const {
  for (const auto& c : checks)
    if (c.identity == identity) return &c;
  return nullptr;
}

namespace {

IdentityCheck ring_check(std::string name, const GroupRingElement& lhs, const GroupRingElement& rhs,
                         bool required = true) {
  const GroupRingElement diff = lhs - rhs;
  return {std::move(name), diff.is_zero(), required, diff.str()};
}

IdentityCheck word_check(std::string name, const FreeWord& lhs, const FreeWord& rhs) {
  const FreeWord diff = lhs * rhs.inverse();
  return {std::move(name), diff.empty(), true, diff.str()};
}

std::string indexed(std::string_view base, int k) { return std::string(base) + "[" + std::to_string(k) + "]"; }

}  // namespace

IdentityReport verify_presentation_identities(const Signature& sig) {
  IdentityReport rep{sig, {}};
  const auto r = prefix_products(sig);
  const FreeWord& R = r.back();
  const auto dual = dual_generators(sig);
  const int g = sig.genus();
  const GroupRingElement one = GroupRingElement::one();

  FreeWord dual_prefix;  // prod_{i<=k} [alpha_i, beta_i]
  for (int k = 1; k <= g; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const FreeWord a = FreeWord::generator(Generator::a(k));
    const FreeWord b = FreeWord::generator(Generator::b(k));
    const GroupRingElement da = fox_derivative(R, Generator::a(k));
    const GroupRingElement db = fox_derivative(R, Generator::b(k));
    const FreeWord& alpha = dual.alpha[ku - 1];
    const FreeWord& beta = dual.beta[ku - 1];

    rep.checks.push_back(ring_check(indexed("fox_a", k), da, GroupRingElement(r[ku - 1]) - GroupRingElement(r[ku] * b)));
    rep.checks.push_back(ring_check(indexed("fox_b", k), db, GroupRingElement(r[ku - 1] * a) - GroupRingElement(r[ku])));

    const GroupRingElement sharp_a = anti_involution(da);
    const GroupRingElement sharp_b = anti_involution(db);
    rep.checks.push_back(ring_check(indexed("sharp_a", k), sharp_a, r[ku - 1].inverse() * (one - alpha)));
    // As printed alongside the dual generators; fails by an overall sign.
    rep.checks.push_back(ring_check(indexed("sharp_b_as_stated", k), sharp_b, r[ku].inverse() * (one - beta), false));
    rep.checks.push_back(ring_check(indexed("sharp_b", k), sharp_b, r[ku].inverse() * (GroupRingElement(beta) - one)));
    // Alternative alpha_k = R_k b_k^-1 R_k^-1.
    const FreeWord alpha_alt = r[ku] * b.inverse() * r[ku].inverse();
    rep.checks.push_back(ring_check(indexed("sharp_a_alt_alpha", k), sharp_a, r[ku - 1].inverse() * (one - alpha_alt), false));

    rep.checks.push_back(word_check(indexed("commutator", k), commutator(alpha, beta), r[ku - 1] * r[ku].inverse()));
    dual_prefix *= commutator(alpha, beta);
    rep.checks.push_back(word_check(indexed("dual_prefix", k), dual_prefix, r[ku].inverse()));
  }

  FreeWord gamma_product;
  for (int i = 1; i <= sig.num_marked(); ++i) {
    const auto iu = static_cast<std::size_t>(i);
    rep.checks.push_back(ring_check(indexed("fox_c", i), fox_derivative(R, Generator::c(i)),
                                    GroupRingElement(r[static_cast<std::size_t>(g) + iu - 1])));
    gamma_product *= dual.gamma[iu - 1];
  }
  rep.checks.push_back(word_check("dual_relation", dual_prefix * gamma_product, R.inverse()));

  GroupRingElement fundamental;
  for (Generator x : sig.generators())
    fundamental += fox_derivative(R, x) * (GroupRingElement(FreeWord::generator(x)) - one);
  rep.checks.push_back(ring_check("fundamental_formula", fundamental, GroupRingElement(R) - one));
  return rep;
}

std::vector<ChainTerm> fundamental_class_chain(const Signature& sig) {
  const FreeWord R = relator(sig);
  std::vector<ChainTerm> chain;
  for (int k = 1; k <= sig.genus(); ++k) {
    chain.push_back({fox_derivative(R, Generator::a(k)), Generator::a(k), false});
    chain.push_back({fox_derivative(R, Generator::b(k)), Generator::b(k), false});
  }
  for (int i = 1; i <= sig.num_marked(); ++i)
    chain.push_back({fox_derivative(R, Generator::c(i)), Generator::c(i), false});
  for (int i = 1; i <= sig.num_marked(); ++i)
    chain.push_back({GroupRingElement(FreeWord::generator(Generator::c(i), -1)), Generator::c(i), true});
  return chain;
}

std::vector<EdgePairing> boundary_pairing(const Signature& sig) {
  const auto d = dual_generators(sig);
  const int g = sig.genus();
  std::vector<EdgePairing> out;
  for (int k = 1; k <= g; ++k) out.push_back({k, d.alpha[static_cast<std::size_t>(k - 1)].inverse()});
  for (int k = 1; k <= g; ++k) out.push_back({k + g, d.beta[static_cast<std::size_t>(k - 1)].inverse()});
  for (int i = 1; i <= sig.num_marked(); ++i)
    out.push_back({2 * g + i, d.gamma[static_cast<std::size_t>(i - 1)].inverse()});
  return out;
}

}  // namespace charvar
