#pragma once

// Schwarzian derivative, the third-order operator
//   Lambda_q F = F''' + 2 q F' + q' F,
// the bilinear form B_q[F, G] = F'' G + F G'' - F' G' + 2 q F G, jet checks of
// their transformation rules and a quadrature solver for Lambda_q G = Q.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "charvar/jet.hpp"
#include "charvar/sl2_poly.hpp"

namespace charvar {

// f''' / f' - 3/2 (f'' / f')^2; order drops by three.
Jet schwarzian(const Jet& f);
Jet lambda_apply(const Jet& q, const Jet& F);
Jet b_apply(const Jet& q, const Jet& F, const Jet& G);

// Jet of z -> g(z) at z0.
Jet moebius_jet(const MoebiusMap& g, Complex z0, int order = Jet::kDefaultOrder);
// Smallest n >= 1 with g^n = +-I; throws InputError if none up to max_order.
int elliptic_order(const MoebiusMap& g, int max_order = 64);

// Holomorphic data given pointwise: a jet of the function at any base point.
using JetProvider = std::function<Jet(Complex z, int order)>;
JetProvider polynomial_provider(std::vector<Complex> coeffs);
JetProvider exp_provider();

// A function of (z, zbar) handled through its z-jets with zbar held fixed: returns
// the z-jet at z of F(., wbar) with wbar = conj(w).
using FrozenJetProvider = std::function<Jet(Complex z, Complex w, int order)>;

struct IdentityInputs {
  JetProvider f;   // developing-type map, q = S(f)
  JetProvider f2;  // second map for the composition law
  JetProvider h;   // transferred function
  JetProvider F;
  JetProvider G;
  FrozenJetProvider F0;  // seed of the equivariant non-holomorphic F
  QuadPoly P;
  MoebiusMap gamma;  // elliptic, of finite order
  std::vector<Complex> samples;
  int order = Jet::kDefaultOrder;
};

// Random polynomial data of degree 5 (f, f2) and 4 (h, F, G), gamma: z -> -1/z.
IdentityInputs default_identity_inputs(std::uint64_t seed, int num_samples = 20);

struct LambdaIdentityReport {
  std::map<std::string, double> residuals;  // lambda1, lambda2, lambda3, lambda5, b1, b2, b3
  int group_order = 0;
  std::size_t samples = 0;

  double max_residual() const;
};

LambdaIdentityReport check_identities(const IdentityInputs& in);

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LambdaSolution {
  Complex value{0.0};   // G(z1)
  Jet jet;              // G near z1
  double residual = 0;  // Lambda_q(G) - Q at z1, relative
  int levels = 0;       // dyadic refinement levels used
};

struct QuadratureOptions {
  double tol = 1e-10;
  int max_levels = 12;
};

// G(z1) = 1/2 int_{z0}^{z1} (f(z1) - f(u))^2 / (f'(z1) f'(u)) Q(u) du + (a f(z1)^2 + b f(z1) + c) / f'(z1)
// on the straight segment, 32-point Gauss-Legendre with dyadic subdivision.
LambdaSolution solve_lambda(const JetProvider& f, const JetProvider& Q, Complex z0, Complex z1,
                            const std::array<Complex, 3>& abc, int order = Jet::kDefaultOrder,
                            const QuadratureOptions& opt = {});

}  // namespace charvar
