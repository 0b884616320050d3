#pragma once

// Shared test data: random words, random representations of closed surface
// groups, parabolic cocycles drawn from the kernel of the relator map, and
// monodromy representations of marked spheres.

#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "charvar/cocycles.hpp"
#include "charvar/group_algebra.hpp"
#include "charvar/monodromy.hpp"
#include "charvar/sl2_poly.hpp"

namespace charvar::testing {

using Rng = std::mt19937_64;

inline Complex random_complex(Rng& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {scale * u(rng), scale * u(rng)};
}

inline QuadPoly random_poly(Rng& rng, double scale = 1.0) {
  return {random_complex(rng, scale), random_complex(rng, scale), random_complex(rng, scale)};
}

inline MoebiusMap random_moebius(Rng& rng, double spread = 1.0) {
  for (;;) {
    Mat2 m{1.0 + random_complex(rng, spread), random_complex(rng, spread), random_complex(rng, spread),
           1.0 + random_complex(rng, spread)};
    if (std::abs(m.det()) > 0.1) return MoebiusMap(m);
  }
}

inline FreeWord random_word(Rng& rng, const Signature& sig, int max_len) {
  const auto gens = sig.generators();
  std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
  std::uniform_int_distribution<int> len(0, max_len), sign(0, 1);
  std::vector<Letter> letters;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) letters.push_back({gens[pick(rng)], sign(rng) ? 1 : -1});
  return FreeWord(letters);
}

inline std::vector<Letter> random_letters(Rng& rng, const Signature& sig, int n) {
  const auto gens = sig.generators();
  std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
  std::uniform_int_distribution<int> sign(0, 1);
  std::vector<Letter> letters;
  for (int i = 0; i < n; ++i) letters.push_back({gens[pick(rng)], sign(rng) ? 1 : -1});
  return letters;
}

inline GroupRingElement random_ring_element(Rng& rng, const Signature& sig, int terms, int max_len) {
  std::uniform_int_distribution<int> coeff(-3, 3);
  GroupRingElement x;
  for (int i = 0; i < terms; ++i) x += GroupRingElement(random_word(rng, sig, max_len), coeff(rng));
  return x;
}

// Eigenvector of m for eigenvalue lambda, as a column (x, y).
inline std::array<Complex, 2> eigenvector(const Mat2& m, Complex lambda) {
  const Complex r0 = m.a - lambda, r1 = m.b;
  if (std::abs(r0) + std::abs(r1) > std::abs(m.c) + std::abs(m.d - lambda)) return {-r1, r0};
  return {m.d - lambda, -m.c};
}

// Genus g >= 1 closed surface group. Genus 1 images commute; higher genus solves
// [A_g, B_g] = ([A_1, B_1] ... [A_{g-1}, B_{g-1}])^-1 by diagonalization.
inline Representation random_closed_representation(int genus, Rng& rng) {
  const Signature sig(genus, {}, 0);
  for (;;) {
    std::map<Generator, MoebiusMap> im;
    if (genus == 1) {
      const MoebiusMap A = random_moebius(rng);
      const Complex s = random_complex(rng), t = random_complex(rng) + 1.5;
      im.emplace(Generator::a(1), A);
      try {
        im.emplace(Generator::b(1), MoebiusMap(A.matrix() * s + Mat2::identity() * t));
      } catch (const std::invalid_argument&) {
        continue;
      }
      return Representation(sig, im);
    }
    Mat2 prod = Mat2::identity();
    for (int k = 1; k < genus; ++k) {
      const MoebiusMap A = random_moebius(rng), B = random_moebius(rng);
      im.emplace(Generator::a(k), A);
      im.emplace(Generator::b(k), B);
      prod = prod * A.matrix() * B.matrix() * A.matrix().adjugate() * B.matrix().adjugate();
    }
    const Mat2 T = prod.adjugate();
    const Mat2 N = T - Mat2::identity();
    // tr(N B) = N.a B.a + N.b B.c + N.c B.b + N.d B.d = 0, solved for B.a.
    if (std::abs(N.a) < 1e-3) continue;
    Mat2 B{0.0, random_complex(rng), random_complex(rng), 1.0 + random_complex(rng)};
    B.a = -(N.b * B.c + N.c * B.b + N.d * B.d) / N.a;
    if (std::abs(B.det()) < 0.05) continue;
    B = B * (1.0 / std::sqrt(B.det()));
    const Mat2 TB = T * B;
    const Complex tr = B.trace();
    const Complex disc = std::sqrt(tr * tr - 4.0);
    if (std::abs(disc) < 1e-2) continue;
    const Complex l1 = 0.5 * (tr + disc), l2 = 0.5 * (tr - disc);
    const auto p1 = eigenvector(B, l1), p2 = eigenvector(B, l2);
    const auto q1 = eigenvector(TB, l1), q2 = eigenvector(TB, l2);
    const Mat2 P{p1[0], p2[0], p1[1], p2[1]}, Q{q1[0], q2[0], q1[1], q2[1]};
    if (std::abs(P.det()) < 1e-6 || std::abs(Q.det()) < 1e-6) continue;
    const Mat2 A = Q * P.inverse();
    im.emplace(Generator::a(genus), MoebiusMap(A));
    im.emplace(Generator::b(genus), MoebiusMap(B));
    Representation rho(sig, im);
    if (rho.check().relator_residual < 1e-9) return rho;
  }
}

// Basis of cocycles whose marked values are (Ad rho(c_i) - I) P_i: the kernel of
// the linear map (chi(a_k), chi(b_k), P_i) -> chi(R).
inline std::vector<Cocycle> parabolic_cocycle_basis(const RepresentationPtr& rho) {
  const Signature& sig = rho->signature();
  const auto gens = sig.generators();
  const int n = 3 * static_cast<int>(gens.size());
  auto assemble = [&](const Eigen::VectorXcd& v) {
    std::map<Generator, QuadPoly> vals;
    for (std::size_t g = 0; g < gens.size(); ++g) {
      const QuadPoly p{v(3 * static_cast<int>(g)), v(3 * static_cast<int>(g) + 1), v(3 * static_cast<int>(g) + 2)};
      vals[gens[g]] = gens[g].kind == GenKind::C ? adjoint_action(rho->image(gens[g]), p) - p : p;
    }
    return Cocycle(rho, vals);
  };
  const FreeWord R = relator(sig);
  Eigen::MatrixXcd L(3, n);
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
    e(j) = 1.0;
    const auto c = evaluate_on_word(assemble(e), R).coeffs();
    for (int i = 0; i < 3; ++i) L(i, j) = c[static_cast<std::size_t>(i)];
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(L, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cut = 1e-10 * std::max(1.0, s(0));
  std::vector<Cocycle> basis;
  for (int j = 0; j < n; ++j) {
    if (j < s.size() && s(j) > cut) continue;
    basis.push_back(assemble(svd.matrixV().col(j)));
  }
  return basis;
}

inline Cocycle random_parabolic_cocycle(const std::vector<Cocycle>& basis, Rng& rng) {
  Cocycle c = basis.front() * random_complex(rng);
  for (std::size_t i = 1; i < basis.size(); ++i) c = c + basis[i] * random_complex(rng);
  return c;
}

// Sphere {0, 1, t} plus infinity with the given orders (0 = cusp).
inline SphereData four_point_sphere(Complex t, int o0, int o1, int ot, int oinf, Complex accessory) {
  return build_potential({0.0, 1.0, t}, {o0, o1, ot}, oinf, {accessory});
}

}  // namespace charvar::testing
