#include "charvar/goldman.hpp"

#include <cmath>
#include <stdexcept>

namespace charvar {

namespace {

void require_compatible(const Representation& rho, const Cocycle& chi) {
  if (!(chi.base().signature() == rho.signature()))
    throw InputError("cocycle signature " + chi.base().signature().str() + " does not match representation " +
                     rho.signature().str());
  for (const auto& [g, m] : rho.images())
    if (psl_distance(m, chi.base().image(g)) > 1e-12 * std::max(1.0, m.matrix().norm()))
      throw InputError("cocycle is defined over a different representation (generator " + g.name() + ")");
}

struct Accumulator {
  Complex sum{0.0};
  double scale = 0.0;
  void add(Complex v) {
    sum += v;
    scale += std::abs(v);
  }
};

std::vector<QuadPoly> local_solutions(const Representation& rho, const Cocycle& chi, PairingReport& rep) {
  std::vector<QuadPoly> out;
  for (int i = 1; i <= rho.signature().num_marked(); ++i) {
    const Generator c = Generator::c(i);
    const LocalSolve s = solve_local_coboundary(rho, chi, FreeWord::generator(c));
    out.push_back(s.solution);
    rep.local_residuals.push_back(s.residual);
    rep.kernel_dims.push_back(s.kernel_dim);
  }
  return out;
}

}  // namespace

PairingReport goldman_pairing(const Representation& rho, const Cocycle& chi1, const Cocycle& chi2,
                              const std::optional<std::vector<QuadPoly>>& p2) {
  require_compatible(rho, chi1);
  require_compatible(rho, chi2);
  const Signature& sig = rho.signature();
  PairingReport rep;
  rep.chi1_residuals = verify_cocycle(rho, chi1);
  rep.chi2_residuals = verify_cocycle(rho, chi2);
  if (p2) {
    if (static_cast<int>(p2->size()) != sig.num_marked())
      throw InputError("expected " + std::to_string(sig.num_marked()) + " correction polynomials");
    rep.p2_list = *p2;
    for (int i = 1; i <= sig.num_marked(); ++i) {
      const MoebiusMap& m = rho.image(Generator::c(i));
      const QuadPoly& P = (*p2)[static_cast<std::size_t>(i - 1)];
      const QuadPoly target = chi2.value(Generator::c(i));
      rep.local_residuals.push_back((adjoint_action(m, P) - P - target).norm() / std::max(1.0, target.norm()));
      rep.kernel_dims.push_back(solve_local_coboundary(m, target).kernel_dim);
    }
  } else {
    rep.p2_list = local_solutions(rho, chi2, rep);
  }

  const FreeWord R = relator(sig);
  Accumulator handles, marked, corrections;
  for (Generator x : sig.generators()) {
    const Complex v = -killing(evaluate_on_ring_element(chi1, anti_involution(fox_derivative(R, x))), chi2.value(x));
    (x.kind == GenKind::C ? marked : handles).add(v);
  }
  for (int i = 1; i <= sig.num_marked(); ++i) {
    const QuadPoly ci_inv = evaluate_on_word(chi1, FreeWord::generator(Generator::c(i), -1));
    corrections.add(-killing(ci_inv, rep.p2_list[static_cast<std::size_t>(i - 1)]));
  }
  rep.handle_terms = handles.sum;
  rep.marked_terms = marked.sum;
  rep.correction_terms = corrections.sum;
  rep.value = handles.sum + marked.sum + corrections.sum;
  rep.scale = handles.scale + marked.scale + corrections.scale;
  return rep;
}

Complex goldman_closed(const Representation& rho, const Cocycle& chi1, const Cocycle& chi2) {
  if (!rho.signature().closed())
    throw InputError("goldman_closed needs a closed signature, got " + rho.signature().str());
  return goldman_pairing(rho, chi1, chi2).value;
}

PairingReport goldman_orbifold(const Representation& rho, const Cocycle& chi1, const Cocycle& chi2,
                               const std::optional<std::vector<QuadPoly>>& p2) {
  if (rho.signature().closed())
    throw InputError("goldman_orbifold needs marked generators; use goldman_closed for " + rho.signature().str());
  return goldman_pairing(rho, chi1, chi2, p2);
}

Complex goldman_form(const Representation& rho, const Cocycle& chi1, const Cocycle& chi2) {
  return rho.signature().closed() ? goldman_closed(rho, chi1, chi2) : goldman_orbifold(rho, chi1, chi2).value;
}

ChainEvaluation cup_product_on_chain(const Representation& rho, const Cocycle& chi1, const Cocycle& chi2,
                                     const std::vector<ChainTerm>& chain) {
  require_compatible(rho, chi1);
  require_compatible(rho, chi2);
  Accumulator acc;
  for (const ChainTerm& t : chain) {
    if (!t.correction) {
      const QuadPoly x2 = chi2.value(t.gen);
      for (const auto& [w, n] : t.coefficient.terms()) {
        const Complex v = killing(evaluate_on_word(chi1, w), adjoint_action(rho.evaluate(w), x2));
        acc.add(static_cast<double>(n) * v);
      }
    } else {
      const QuadPoly P = solve_local_coboundary(rho, chi2, FreeWord::generator(t.gen)).solution;
      for (const auto& [w, n] : t.coefficient.terms()) {
        const FreeWord wi = w.inverse();
        const Complex v = killing(evaluate_on_word(chi1, wi), adjoint_action(rho.evaluate(wi), P));
        acc.add(static_cast<double>(n) * v);
      }
    }
  }
  return {static_cast<double>(kCupProductSign) * acc.sum, acc.scale};
}

}  // namespace charvar
