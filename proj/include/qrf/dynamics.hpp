#pragma once
#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "qrf/grid_state.hpp"
#include "qrf/potentials.hpp"

namespace qrf {

// Energy of the relative degrees of freedom once the free center of mass is
// split off:
//
//   H_rel = sum_j pi_j^2/(2 m_j) + V(0, x_r) + Pi^2/(2 m_0),  Pi = sum_j pi_j.
//
// The recoil term Pi^2/(2 m_0) is diagonal in momentum space together with
// the ordinary kinetic term, so the split-step drift handles it exactly.
struct RelativeHamiltonian {
  MassConfig masses;
  PotentialSpec potential;

  // T(k) = sum_j (hbar k_j)^2/(2 m_j) + (hbar sum_j k_j)^2/(2 m_0)
  double kinetic(const Eigen::VectorXd& k) const;
};

// Prescribed frame trajectory x0(t) for the classical-origin Hamiltonians:
// polynomial coefficients (c0 + c1 t + c2 t^2 + c3 t^3) or a splined table.
class FrameTrajectory {
 public:
  static FrameTrajectory polynomial(const Eigen::VectorXd& coeffs);
  static FrameTrajectory sampled(std::vector<double> ts, std::vector<double> xs);

  double velocity(double t) const;      // dx0/dt
  double acceleration(double t) const;  // d2x0/dt2

 private:
  bool poly_ = true;
  Eigen::VectorXd coeffs_;
  CubicSpline spline_;
};

// One-parameter family interpolating the vector-potential form (eps = +1,
// drift -x0dot P') and the uniform-field form (eps = -1, M x0ddot X'):
//
//   H'_eps = sum_k p'_k^2/(2 m_k) + V - (1+eps)/2 x0dot P' + (1-eps)/2 M x0ddot X'.
//
// All eps values produce the same Heisenberg equations of motion.
struct ClassicalFrameHamiltonian {
  double epsilon = 0.0;
  std::vector<double> masses;  // m_1..m_N of the described particles
  PotentialSpec potential;     // terms with j >= 1 only (no quantum frame)
  FrameTrajectory trajectory;
};

// Per-step tracked means plus periodic full snapshots.
struct EvolutionResult {
  std::vector<double> times;
  Eigen::MatrixXd mean_positions;     // (steps+1) x N
  Eigen::MatrixXd mean_rel_momenta;   // <p_rj> (relative mode) or <p'_k>
  Eigen::VectorXd pi_means;           // <Pi> (relative mode only)
  Eigen::VectorXd pi_sigmas;
  Eigen::MatrixXd grad_v_means;       // <dV/dx_rj>
  Eigen::VectorXd energies;
  Eigen::VectorXd norms;
  std::vector<std::pair<double, GridState>> snapshots;
};

// Strang split-step on a relative-coordinate grid. Preconditions: the grid is
// over (x_r1..x_rN); dt * max|T(k)|/hbar < 0.5 (phase-step budget); support
// must stay clear of the edges.
EvolutionResult evolve_relative(const RelativeHamiltonian& h, const GridState& s, double dt,
                                int steps, int snapshot_stride = 0);

// Same stepper with the time-dependent classical-frame terms, both sampled at
// the step midpoint.
EvolutionResult evolve_classical_frame(const ClassicalFrameHamiltonian& h, const GridState& s,
                                       double dt, int steps, int snapshot_stride = 0);

// Full absolute-coordinate evolution under H = sum p_i^2/2m_i + V (used by
// the center-of-mass factorization cross-check).
EvolutionResult evolve_absolute(const MassConfig& masses, const PotentialSpec& v,
                                const GridState& s, double dt, int steps,
                                int snapshot_stride = 0);

struct EhrenfestReport {
  double velocity_residual = 0.0;      // d<x_rj>/dt - <p_rj>/mu_0j
  double acceleration_residual = 0.0;  // mu_0j d2<x_rj>/dt2 - d<p_rj>/dt prediction
  double fictitious_residual = 0.0;    // d2<x_rj>/dt2 vs -dV/m_j - x0ddot force law
};

// Central-difference residuals of the Heisenberg velocity/acceleration
// relations over a stored trajectory (uniform dt, >= 5 samples).
EhrenfestReport ehrenfest_check(const EvolutionResult& traj, const RelativeHamiltonian& h);

// <Pi> and its spread on a relative-coordinate grid state.
std::pair<double, double> pi_observable(const GridState& s);

// Linear entropy 1 - purity between one retained relative axis and the rest.
double relative_axis_entropy(const GridState& s, int axis);

}  // namespace qrf
