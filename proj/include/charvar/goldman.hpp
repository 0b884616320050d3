#pragma once

// Goldman pairing of two parabolic cocycles over the same representation.

#include <optional>
#include <vector>

#include "charvar/cocycles.hpp"

namespace charvar {

// The chain route reproduces the Fox-derivative form with this sign:
// <chi1(g), rho(g) chi2> = -<chi1(g^-1), chi2> turns the chain sum into the Fox-derivative form term by term.
constexpr int kCupProductSign = +1;

struct PairingReport {
  Complex value{0.0};
  double scale = 0.0;  // sum of |summand| over all pairing terms
  Complex handle_terms{0.0};
  Complex marked_terms{0.0};
  Complex correction_terms{0.0};
  std::vector<QuadPoly> p2_list;  // local solutions for chi2 at c_1..c_{m+n}
  std::vector<double> local_residuals;
  std::vector<int> kernel_dims;
  CocycleResidualReport chi1_residuals;
  CocycleResidualReport chi2_residuals;
  int global_sign = kCupProductSign;
};

// -sum_k [<chi1(#dR/da_k), chi2(a_k)> + <chi1(#dR/db_k), chi2(b_k)>]; closed signatures only.
Complex goldman_closed(const Representation& rho, const Cocycle& chi1, const Cocycle& chi2);

// Handle terms, marked terms -<chi1(#dR/dc_i), chi2(c_i)> and corrections
// -<chi1(c_i^-1), P2_i>. The P2_i are minimum-norm local solutions for chi2 unless
// supplied. Requires at least one marked generator.
PairingReport goldman_orbifold(const Representation& rho, const Cocycle& chi1, const Cocycle& chi2,
                               const std::optional<std::vector<QuadPoly>>& p2 = std::nullopt);

// Same sums without the signature restriction; a closed signature gives exactly goldman_closed.
PairingReport goldman_pairing(const Representation& rho, const Cocycle& chi1, const Cocycle& chi2,
                              const std::optional<std::vector<QuadPoly>>& p2 = std::nullopt);

// Dispatches on the signature.
Complex goldman_form(const Representation& rho, const Cocycle& chi1, const Cocycle& chi2);

struct ChainEvaluation {
  Complex value{0.0};
  double scale = 0.0;
};

// sum over non-correction terms (sum_j n_j g_j, x) of n_j <chi1(g_j), rho(g_j) chi2(x)>,
// times kCupProductSign. Correction slots contribute -<chi1(c_i^-1), P2_i>.
ChainEvaluation cup_product_on_chain(const Representation& rho, const Cocycle& chi1, const Cocycle& chi2,
                                     const std::vector<ChainTerm>& chain);

}  // namespace charvar
