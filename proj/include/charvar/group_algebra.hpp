#pragma once

// Surface/orbifold group presentations, free-group words, the integral group
// ring and Fox free differential calculus. Everything here is exact integer
// arithmetic.

#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace charvar {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class GenKind : std::uint8_t { A, B, C };

// Ordered a1 < b1 < a2 < b2 < ... < ag < bg < c1 < ... < c_{m+n}.
struct Generator {
  GenKind kind = GenKind::A;
  int index = 1;  // 1-based

  static Generator a(int k) { return {GenKind::A, k}; }
  static Generator b(int k) { return {GenKind::B, k}; }
  static Generator c(int i) { return {GenKind::C, i}; }

  std::string name() const;
  static Generator from_name(std::string_view name);

  friend bool operator==(const Generator&, const Generator&) = default;
  friend std::strong_ordering operator<=>(const Generator& x, const Generator& y);
};

struct Letter {
  Generator gen;
  int exp = 1;  // +1 or -1

  friend bool operator==(const Letter&, const Letter&) = default;
  friend std::strong_ordering operator<=>(const Letter& x, const Letter& y);
};

// A freely reduced word. Every constructor reduces, so the invariant holds for
// every value of the type.
class FreeWord {
 public:
  FreeWord() = default;
  explicit FreeWord(std::vector<Letter> letters);

  static FreeWord generator(Generator g, int power = 1);

  const std::vector<Letter>& letters() const { return letters_; }
  bool empty() const { return letters_.empty(); }
  std::size_t length() const { return letters_.size(); }

  FreeWord inverse() const;
  FreeWord prefix(std::size_t n) const;
  FreeWord pow(int k) const;
  std::string str() const;

  FreeWord operator*(const FreeWord& rhs) const;
  FreeWord& operator*=(const FreeWord& rhs);

  friend bool operator==(const FreeWord&, const FreeWord&) = default;
  friend std::strong_ordering operator<=>(const FreeWord& x, const FreeWord& y);

 private:
  std::vector<Letter> letters_;
};

// Free reduction of an arbitrary letter sequence (stack-based, hence confluent).
std::vector<Letter> free_reduce(const std::vector<Letter>& letters);

FreeWord commutator(const FreeWord& x, const FreeWord& y);

// Signature (g; n, e_1..e_m) of a Fuchsian group. The marked generators c_i
// carry an order: e >= 2 for cone points, 0 for cusps. The default presentation
// lists the elliptic generators first.
class Signature {
 public:
  static constexpr int kCusp = 0;

  Signature() = default;
  Signature(int genus, std::vector<int> elliptic_orders, int cusps);
  static Signature with_marked_orders(int genus, std::vector<int> marked_orders);

  int genus() const { return genus_; }
  int num_marked() const { return static_cast<int>(marked_.size()); }
  const std::vector<int>& marked_orders() const { return marked_; }
  int marked_order(int i) const { return marked_.at(static_cast<std::size_t>(i - 1)); }
  std::vector<int> elliptic_orders() const;
  int cusps() const;
  bool closed() const { return marked_.empty(); }

  // 2g - 2 + n + sum(1 - 1/e_i)
  double euler_term() const;
  bool hyperbolic() const { return euler_term() > 0.0; }
  // d = 3g - 3 + m + n
  int dimension() const { return 3 * genus_ - 3 + num_marked(); }

  std::vector<Generator> generators() const;
  bool contains(Generator g) const;
  std::string str() const;

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  int genus_ = 0;
  std::vector<int> marked_;
};

// Integer linear combination of reduced words. No zero coefficients are stored.
class GroupRingElement {
 public:
  using Terms = std::map<FreeWord, long long>;

  GroupRingElement() = default;
  GroupRingElement(const FreeWord& w, long long coeff = 1);  // NOLINT

  static GroupRingElement one() { return GroupRingElement(FreeWord{}); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  long long coefficient(const FreeWord& w) const;
  void add_term(const FreeWord& w, long long coeff);

  GroupRingElement operator+(const GroupRingElement& rhs) const;
  GroupRingElement operator-(const GroupRingElement& rhs) const;
  GroupRingElement operator-() const;
  GroupRingElement operator*(const GroupRingElement& rhs) const;
  GroupRingElement operator*(long long k) const;
  GroupRingElement& operator+=(const GroupRingElement& rhs);

  std::string str() const;

  friend bool operator==(const GroupRingElement&, const GroupRingElement&) = default;

 private:
  Terms terms_;
};

GroupRingElement operator*(const FreeWord& w, const GroupRingElement& x);
GroupRingElement operator*(const GroupRingElement& x, const FreeWord& w);

// Tokens a1, b1, c1, ... with optional ^k exponents, separated by whitespace or
// '*'. "1" is the identity. With a signature, R (the relator) and R<k> (prefix
// products) are accepted as macros and generator ids are range-checked.
FreeWord parse_word(std::string_view text);
FreeWord parse_word(std::string_view text, const Signature& sig);

GroupRingElement fox_derivative(const FreeWord& w, Generator x);
GroupRingElement anti_involution(const GroupRingElement& x);

// R_0, ..., R_{g+m+n}; the last entry is the relator.
std::vector<FreeWord> prefix_products(const Signature& sig);
FreeWord relator(const Signature& sig);

struct DualGenerators {
  std::vector<FreeWord> alpha;  // alpha_k = R_{k-1} b_k^-1 R_k^-1
  std::vector<FreeWord> beta;   // beta_k  = R_k a_k^-1 R_{k-1}^-1
  std::vector<FreeWord> gamma;  // gamma_i = R_{g+i-1} c_i^-1 R_{g+i-1}^-1
};
DualGenerators dual_generators(const Signature& sig);

struct IdentityCheck {
  std::string identity;
  bool pass = false;
  // Informational checks (e.g. the alternative alpha_k = R_k b_k^-1 R_k^-1)
  // do not contribute to IdentityReport::all_required_pass.
  bool required = true;
  std::string witness;  // lhs - rhs (ring) or lhs * rhs^-1 (word); "0"/"1" on success
};

struct IdentityReport {
  Signature signature;
  std::vector<IdentityCheck> checks;

  bool all_required_pass() const;
  const IdentityCheck* find(std::string_view identity) const;
};

IdentityReport verify_presentation_identities(const Signature& sig);

// One slot of a 2-chain. Correction slots stand for the -<chi1(c_i^-1), P_2i>
// terms of the orbifold form; their coefficient is c_i^-1.
struct ChainTerm {
  GroupRingElement coefficient;
  Generator gen;
  bool correction = false;
};

std::vector<ChainTerm> fundamental_class_chain(const Signature& sig);

struct EdgePairing {
  int edge = 0;  // 1-based, up to N = 2g + m + n
  FreeWord lambda;
};
std::vector<EdgePairing> boundary_pairing(const Signature& sig);

}  // namespace charvar
