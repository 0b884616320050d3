#pragma once

// Monodromy of psi'' + q psi / 2 = 0 on the sphere with marked points
//   q(z) = sum_j theta_j / (2 (z - p_j)^2) + m_j / (z - p_j),  theta = 1 - 1/o^2,
// where the residues m_j satisfy the two moment conditions that make infinity a
// marked point of order o_inf.

#include <array>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "charvar/cocycles.hpp"
#include "charvar/goldman.hpp"

namespace charvar {

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ClearanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MonodromyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// theta = 1 - 1/o^2 for o >= 2; 1 for a cusp (o = 0).
double cone_theta(int order);

struct SphereData {
  std::vector<Complex> points;  // finite marked points
  std::vector<int> orders;      // per point: >= 2, or 0 for a cusp
  int order_infinity = 0;
  std::vector<Complex> residues;
  std::optional<Complex> base_point;

  std::size_t size() const { return points.size(); }
  int accessory_dimension() const { return static_cast<int>(points.size()) - 2; }
  std::vector<Complex> accessory() const;  // residues of points 3..k
  double theta(std::size_t j) const { return cone_theta(orders.at(j)); }
  double theta_infinity() const { return cone_theta(order_infinity); }
  Complex q(Complex z) const;
  // |sum m_j| and |sum m_j p_j - (theta_inf - sum theta_j) / 2|.
  std::array<double, 2> moment_residuals() const;
  double min_gap() const;  // minimum pairwise distance of finite points
};

// The two residues of the first two points are solved from the moment
// conditions; the remaining k - 2 residues are the accessory values.
SphereData build_potential(std::vector<Complex> points, std::vector<int> orders, int order_infinity,
                           const std::vector<Complex>& accessory, std::optional<Complex> base_point = std::nullopt);

struct LoopPath {
  std::vector<Complex> vertices;
  int encircled = -1;  // index of the finite point, or size() for infinity
};

// Minimum distance from the polyline to the given points.
double path_clearance(const LoopPath& path, const std::vector<Complex>& points);

struct LassoSystem {
  Complex base{0.0};
  double infinity_direction = 0.0;  // angle of the ray carrying the loop around infinity
  std::vector<LoopPath> loops;      // in generator order c_1, c_2, ...; infinity last
  double clearance = 0.0;           // required minimum distance to marked points

  std::vector<int> marked_order_list(const SphereData& data) const;
  Signature signature(const SphereData& data) const;
  // Throws ClearanceError if some loop comes closer than `clearance` to a marked point.
  void check_clearance(const SphereData& data) const;
};

struct LassoOptions {
  double radius_fraction = 0.35;     // loop radius relative to the gap to the nearest other point
  double clearance_fraction = 0.05;  // of the minimum pairwise gap
  int circle_vertices = 64;
  int infinity_vertices = 128;
};

// Base point below all points (or data.base_point), loops ordered by increasing
// angle measured counterclockwise from the ray to infinity, each finite loop
// counterclockwise; the loop around infinity is a large clockwise circle, so that
// c_1 ... c_k c_inf = 1.
LassoSystem standard_lassos(const SphereData& data, const LassoOptions& opt = {});

struct IntegratorOptions {
  double tol = 1e-11;
  double max_step_fraction = 0.2;  // of the distance to the nearest singularity
  long max_steps = 2000000;
};

struct Transport {
  Mat2 matrix;  // rows: (value, derivative) of the solutions with unit initial data
  double wronskian_drift = 0.0;
  long steps = 0;
};

// Adaptive Dormand-Prince 5(4) along a polyline. Singularities bound the step.
Transport integrate_fundamental(const std::function<Complex(Complex)>& q, const std::vector<Complex>& singularities,
                                const std::vector<Complex>& path, const IntegratorOptions& opt = {});
Transport integrate_fundamental(const SphereData& data, const std::vector<Complex>& path,
                                const IntegratorOptions& opt = {});

// PSL class of the transport around loop j of the standard lassos.
MoebiusMap loop_monodromy(const SphereData& data, int j, const IntegratorOptions& opt = {});

struct MonodromyResult {
  Representation rep;
  LassoSystem lassos;
  double relation_residual = 0.0;
  double max_wronskian_drift = 0.0;
  RepresentationCheck check;
};

constexpr double kRelationTolerance = 1e-5;

// Throws MonodromyError when the relation residual exceeds kRelationTolerance.
MonodromyResult monodromy_representation(const SphereData& data, const IntegratorOptions& opt = {});
// Same with frozen loops (clearance is re-checked against data).
MonodromyResult monodromy_representation(const SphereData& data, const LassoSystem& lassos,
                                         const IntegratorOptions& opt = {});

struct GridOffset {
  std::vector<Complex> dp;  // displacement of each finite point
  std::vector<Complex> dc;  // offset of each accessory value
};

struct KawaiConfig {
  SphereData base;
  std::vector<std::vector<Complex>> t_directions;  // velocity of each finite point
  std::vector<GridOffset> grid{GridOffset{}};
  FiniteDifferenceOptions fd;
  IntegratorOptions integrator;
  int threads = 0;
};

struct KawaiGridResult {
  GridOffset offset;
  std::vector<std::vector<Complex>> omega;  // directions: c_1..c_r, then t_1..t_s
  std::vector<std::vector<double>> scale;
  double fiber_isotropy = 0.0;  // max |Omega(c, c')| / max |Omega(c, t)|
  double antisymmetry = 0.0;    // max |Omega(x, y) + Omega(y, x)| / pairing scale
  double max_local_residual = 0.0;
  double max_relator_residual = 0.0;
  double max_fd_agreement = 0.0;
  double relation_residual = 0.0;
  double max_wronskian_drift = 0.0;
};

struct KawaiReport {
  std::vector<std::string> labels;
  int num_c = 0;
  int num_t = 0;
  std::vector<KawaiGridResult> grid;
  double fiber_isotropy = 0.0;
  // max over grid groups with equal dp and (c, t) pairs of max |Omega - mean| / |mean|
  double c_spread = 0.0;
  double antisymmetry = 0.0;
};

KawaiReport kawai_experiment(const KawaiConfig& cfg);

}  // namespace charvar
