#pragma once

// Representations of the presented group into PSL(2,C), Eichler cocycles with
// values in quadratic polynomials, coboundaries, local coboundary solves at
// marked generators and finite-difference cocycles of representation families.

#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

#include "charvar/group_algebra.hpp"
#include "charvar/sl2_poly.hpp"

namespace charvar {

struct TraceResidual {
  Generator gen;
  int order = 0;  // 0 = cusp
  double residual = 0.0;
};

struct RepresentationCheck {
  double relator_residual = 0.0;  // PSL distance of rho(R) from the identity
  std::vector<TraceResidual> traces;

  double max_trace_residual() const;
  bool ok(double relator_tol = 1e-8, double trace_tol = 1e-6) const;
};

// ||tr| - 2| for cusps; min over k coprime to e of ||tr| - |2 cos(pi k / e)||.
double marked_trace_residual(Complex trace, int order);

class Representation {
 public:
  Representation() = default;
  Representation(Signature sig, std::map<Generator, MoebiusMap> images);

  const Signature& signature() const { return sig_; }
  const MoebiusMap& image(Generator g) const;
  const std::map<Generator, MoebiusMap>& images() const { return images_; }

  MoebiusMap evaluate(const FreeWord& w) const;
  RepresentationCheck check() const;

  Representation conjugated(const MoebiusMap& g) const;  // g rho g^-1
  // True when all generator images share a fixed point in CP^1 (within tol).
  bool visibly_reducible(double tol = 1e-8) const;

 private:
  Signature sig_;
  std::map<Generator, MoebiusMap> images_;
};

using RepresentationPtr = std::shared_ptr<const Representation>;

class Cocycle {
 public:
  Cocycle() = default;
  Cocycle(RepresentationPtr base, std::map<Generator, QuadPoly> values);

  const Representation& base() const { return *base_; }
  const RepresentationPtr& base_ptr() const { return base_; }
  const QuadPoly& value(Generator g) const;
  const std::map<Generator, QuadPoly>& values() const { return values_; }

  Cocycle operator+(const Cocycle& other) const;
  Cocycle operator-(const Cocycle& other) const;
  Cocycle operator*(Complex s) const;
  friend Cocycle operator*(Complex s, const Cocycle& c) { return c * s; }

  // Transport to g rho g^-1: chi'(x) = g . chi(x).
  Cocycle transported(const MoebiusMap& g, RepresentationPtr conjugated_base) const;

 private:
  RepresentationPtr base_;
  std::map<Generator, QuadPoly> values_;
};

struct WordEvaluation {
  QuadPoly value;
  double scale = 0.0;  // sum of norms of the summands rho(prefix) . chi(letter)
};

// chi(w1 w2) = chi(w1) + rho(w1) . chi(w2), chi(1) = 0, chi(x^-1) = -rho(x^-1) . chi(x).
QuadPoly evaluate_on_word(const Cocycle& chi, const FreeWord& w);
WordEvaluation evaluate_on_word_scaled(const Cocycle& chi, const FreeWord& w);
QuadPoly evaluate_on_ring_element(const Cocycle& chi, const GroupRingElement& x);

Cocycle coboundary(const RepresentationPtr& rho, const QuadPoly& P);

class NotParabolicError : public std::runtime_error {
 public:
  NotParabolicError(const std::string& what, double residual) : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

struct LocalSolve {
  QuadPoly solution;  // minimum-norm P with chi(gamma) = rho(gamma) . P - P
  int kernel_dim = 0;
  std::vector<QuadPoly> kernel;  // basis of ker(Ad rho(gamma) - I)
  double residual = 0.0;         // relative to max(1, |chi(gamma)|)
};

constexpr double kLocalSolveTolerance = 1e-6;

// Throws NotParabolicError when the relative residual exceeds tol.
LocalSolve solve_local_coboundary(const Representation& rho, const Cocycle& chi, const FreeWord& gamma,
                                  double tol = kLocalSolveTolerance);
// Same linear algebra on explicit data.
LocalSolve solve_local_coboundary(const MoebiusMap& g, const QuadPoly& value, double tol = kLocalSolveTolerance);

struct LocalResidual {
  Generator gen;
  double residual = 0.0;
  int kernel_dim = 0;
  bool solvable = false;
};

struct CocycleResidualReport {
  double relator_residual = 0.0;  // |chi(R)| / scale
  double relator_scale = 0.0;
  std::vector<LocalResidual> local;

  double max_local_residual() const;
};

CocycleResidualReport verify_cocycle(const Representation& rho, const Cocycle& chi);

using RepresentationFamily = std::function<Representation(double)>;

class BranchJumpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FiniteDifferenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FiniteDifferenceOptions {
  double h = 1e-3;
  bool richardson = true;       // also evaluate at h/2 and extrapolate
  double agreement_tol = 1e-5;  // relative agreement of D(h) and D(h/2)
  double branch_jump = 0.5;     // max relative distance between consecutive aligned lifts
  int threads = 0;              // 0: CHARVAR_THREADS / hardware default
};

struct FiniteDifferenceResult {
  Cocycle cocycle;
  double agreement = 0.0;  // max relative |D(h) - D(h/2)| over generators (0 without Richardson)
};

// chi(x) = d/ds rho_s(x) rho_s(x)^-1 at s0, projected to traceless matrices and
// converted with matrix_to_poly. 4th-order central differences on sign-aligned lifts.
FiniteDifferenceResult finite_difference_cocycle_report(const RepresentationFamily& family, double s0,
                                                        const FiniteDifferenceOptions& opt = {});
Cocycle finite_difference_cocycle(const RepresentationFamily& family, double s0,
                                  const FiniteDifferenceOptions& opt = {});

}  // namespace charvar
