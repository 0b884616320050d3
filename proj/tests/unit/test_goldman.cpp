#include <doctest.h>

#include "charvar/goldman.hpp"
#include "fixtures.hpp"

using namespace charvar;
using charvar::testing::Rng;

namespace {

struct Setup {
  RepresentationPtr rho;
  std::vector<Cocycle> basis;
};

Setup closed_setup(int genus, Rng& rng) {
  auto rho = std::make_shared<const Representation>(charvar::testing::random_closed_representation(genus, rng));
  return {rho, charvar::testing::parabolic_cocycle_basis(rho)};
}

// (0; cusp, cusp, 3, cusp): point 0 is listed third by the lasso order.
Setup orbifold_setup() {
  const SphereData d = charvar::testing::four_point_sphere({0.3, 0.4}, 3, 0, 0, 0, {0.1, 0.2});
  auto rho = std::make_shared<const Representation>(monodromy_representation(d).rep);
  return {rho, charvar::testing::parabolic_cocycle_basis(rho)};
}

// Rank of the span of the cocycles' generator values.
int cocycle_rank(const std::vector<Cocycle>& basis) {
  const auto gens = basis.front().base().signature().generators();
  Eigen::MatrixXcd M(3 * static_cast<int>(gens.size()), static_cast<int>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (std::size_t g = 0; g < gens.size(); ++g) {
      const auto c = basis[j].value(gens[g]).coeffs();
      for (int i = 0; i < 3; ++i) M(3 * static_cast<int>(g) + i, static_cast<int>(j)) = c[static_cast<std::size_t>(i)];
    }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(M);
  qr.setThreshold(1e-9);
  return static_cast<int>(qr.rank());
}

}  // namespace

TEST_CASE("orbifold fixture signature") {
  const Setup s = orbifold_setup();
  CHECK(s.rho->signature().marked_orders() == std::vector<int>{0, 0, 3, 0});
  CHECK(s.rho->check().ok());
  // dim Z^1_par = dim H^1_par + dim B^1 = 2 (3g - 3 + m + n) + 3.
  CHECK(cocycle_rank(s.basis) == 5);
}

TEST_CASE("closed and orbifold forms vanish on coboundaries and are antisymmetric") {
  Rng rng(1);
  for (int genus : {1, 2}) {
    const Setup s = closed_setup(genus, rng);
    // Genus 1 images commute (a reducible point), where the relator map has rank 2.
    CHECK(cocycle_rank(s.basis) == (genus == 1 ? 4 : 9));
    for (int i = 0; i < 10; ++i) {
      const Cocycle x = charvar::testing::random_parabolic_cocycle(s.basis, rng);
      const Cocycle y = charvar::testing::random_parabolic_cocycle(s.basis, rng);
      const PairingReport r = goldman_pairing(*s.rho, x, y);
      const double scale = std::max(1.0, r.scale);
      CHECK(std::abs(goldman_closed(*s.rho, x, x)) <= 1e-9 * scale);
      CHECK(std::abs(goldman_closed(*s.rho, x, y) + goldman_closed(*s.rho, y, x)) <= 1e-9 * scale);
      const Cocycle d = coboundary(s.rho, charvar::testing::random_poly(rng));
      CHECK(std::abs(goldman_closed(*s.rho, x, d)) <= 1e-9 * scale);
      CHECK(std::abs(goldman_closed(*s.rho, d, x)) <= 1e-9 * scale);
      CHECK(r.value == goldman_closed(*s.rho, x, y));
      CHECK(goldman_form(*s.rho, x, y) == r.value);
    }
  }
}

TEST_CASE("orbifold form well-definedness") {
  Rng rng(2);
  const Setup s = orbifold_setup();
  const Representation& rho = *s.rho;
  for (int i = 0; i < 20; ++i) {
    const Cocycle x = charvar::testing::random_parabolic_cocycle(s.basis, rng);
    const Cocycle y = charvar::testing::random_parabolic_cocycle(s.basis, rng);
    const Cocycle z = charvar::testing::random_parabolic_cocycle(s.basis, rng);
    const Complex a = charvar::testing::random_complex(rng);
    const PairingReport r = goldman_orbifold(rho, x, y);
    const double scale = std::max(1.0, r.scale);
    CHECK(r.local_residuals.size() == 4);
    CHECK(r.chi2_residuals.max_local_residual() <= 1e-9);

    const Cocycle d = coboundary(s.rho, charvar::testing::random_poly(rng));
    CHECK(std::abs(goldman_orbifold(rho, x, y + d).value - r.value) <= 1e-8 * scale);
    CHECK(std::abs(goldman_orbifold(rho, x + d, y).value - r.value) <= 1e-8 * scale);
    CHECK(std::abs(goldman_orbifold(rho, y, x).value + r.value) <= 1e-9 * scale);

    const Complex lin = goldman_orbifold(rho, x * a + z, y).value;
    CHECK(std::abs(lin - (a * r.value + goldman_orbifold(rho, z, y).value)) <= 1e-10 * scale * (1.0 + std::abs(a)));

    // Shifting P2_i inside ker(Ad rho(c_i) - I).
    std::vector<QuadPoly> shifted = r.p2_list;
    for (int k = 1; k <= 4; ++k) {
      const LocalSolve ls = solve_local_coboundary(rho.image(Generator::c(k)), QuadPoly{});
      for (const QuadPoly& K : ls.kernel) shifted[static_cast<std::size_t>(k - 1)] += K * charvar::testing::random_complex(rng, 3.0);
    }
    CHECK(std::abs(goldman_orbifold(rho, x, y, shifted).value - r.value) <= 1e-10 * scale);
  }
}

TEST_CASE("conjugation invariance") {
  Rng rng(3);
  for (const Setup& s : {closed_setup(2, rng), orbifold_setup()}) {
    const MoebiusMap g = charvar::testing::random_moebius(rng, 0.5);
    auto conj = std::make_shared<const Representation>(s.rho->conjugated(g));
    for (int i = 0; i < 5; ++i) {
      const Cocycle x = charvar::testing::random_parabolic_cocycle(s.basis, rng);
      const Cocycle y = charvar::testing::random_parabolic_cocycle(s.basis, rng);
      const PairingReport r = goldman_pairing(*s.rho, x, y);
      const Complex v = goldman_pairing(*conj, x.transported(g, conj), y.transported(g, conj)).value;
      CHECK(std::abs(v - r.value) <= 1e-8 * std::max(1.0, r.scale));
    }
  }
}

TEST_CASE("cup product on the fundamental chain reproduces the Fox form") {
  Rng rng(4);
  for (int genus : {1, 2}) {
    const Setup s = closed_setup(genus, rng);
    const auto chain = fundamental_class_chain(s.rho->signature());
    for (int i = 0; i < 10; ++i) {
      const Cocycle x = charvar::testing::random_parabolic_cocycle(s.basis, rng);
      const Cocycle y = charvar::testing::random_parabolic_cocycle(s.basis, rng);
      const ChainEvaluation e = cup_product_on_chain(*s.rho, x, y, chain);
      const PairingReport r = goldman_pairing(*s.rho, x, y);
      CHECK(std::abs(e.value - r.value) <= 1e-10 * std::max({1.0, r.scale, e.scale}));
      CHECK(std::abs(cup_product_on_chain(*s.rho, x, x, chain).value) <= 1e-9 * std::max(1.0, e.scale));
    }
  }
  const Setup o = orbifold_setup();
  const Cocycle x = charvar::testing::random_parabolic_cocycle(o.basis, rng);
  const Cocycle y = charvar::testing::random_parabolic_cocycle(o.basis, rng);
  const PairingReport r = goldman_orbifold(*o.rho, x, y);
  const ChainEvaluation e = cup_product_on_chain(*o.rho, x, y, fundamental_class_chain(o.rho->signature()));
  CHECK(std::abs(e.value - r.value) <= 1e-10 * std::max({1.0, r.scale, e.scale}));

  // A single slot with coefficient 1 pairs against chi1(1) = 0.
  const std::vector<ChainTerm> unit{{GroupRingElement::one(), Generator::a(1), false}};
  const Setup s1 = closed_setup(1, rng);
  const Cocycle u = charvar::testing::random_parabolic_cocycle(s1.basis, rng);
  CHECK(cup_product_on_chain(*s1.rho, u, u, unit).value == Complex(0.0));
}

TEST_CASE("signature and base checks") {
  Rng rng(5);
  const Setup closed = closed_setup(2, rng);
  const Cocycle x = charvar::testing::random_parabolic_cocycle(closed.basis, rng);
  CHECK_THROWS(goldman_orbifold(*closed.rho, x, x));
  const Setup orb = orbifold_setup();
  const Cocycle o = charvar::testing::random_parabolic_cocycle(orb.basis, rng);
  CHECK_THROWS(goldman_closed(*orb.rho, o, o));
  CHECK_THROWS(goldman_pairing(*closed.rho, x, o));
  // A cocycle that is not parabolic at some c_i propagates the local-solve failure.
  std::map<Generator, QuadPoly> vals = o.values();
  vals.at(Generator::c(1)) += QuadPoly{0.0, 0.0, 1.0};
  const Cocycle bad(orb.rho, vals);
  CHECK_THROWS_AS(goldman_orbifold(*orb.rho, o, bad), NotParabolicError);
}
