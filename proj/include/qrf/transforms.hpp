#pragma once
#include <Eigen/Dense>
#include <string>

#include "qrf/gaussian_state.hpp"
#include "qrf/grid_state.hpp"
#include "qrf/masses.hpp"

namespace qrf {

// A linear point transformation on phase space:
//
//   X_new = A x,   P_new = B p,   B = (A^T)^{-1},
//
// so the block-diagonal map S = diag(A, B) is symplectic. Both blocks are
// built from explicit expressions in the masses; symplectic_defect() measures
// their mutual consistency.
struct LinearCanonicalTransform {
  std::string name;
  Eigen::MatrixXd position_block;  // A
  Eigen::MatrixXd momentum_block;  // B
  CoordinateFrame input;
  CoordinateFrame output;

  std::size_t size() const { return static_cast<std::size_t>(position_block.rows()); }

  // max-norm of S J S^T - J
  double symplectic_defect() const;

  LinearCanonicalTransform inverse() const;
};

// second . first
LinearCanonicalTransform compose(const LinearCanonicalTransform& second,
                                 const LinearCanonicalTransform& first);

namespace catalog {

LinearCanonicalTransform identity(const CoordinateFrame& frame);

// (x0..xN) -> (x_cm, x_r1..x_rN), momenta (p_cm, pi_1..pi_N):
//   x_cm = sum m_i x_i / M,  x_rj = x_j - x_0,
//   p_cm = sum p_i,          pi_j = p_j - (m_j/M) p_cm.
LinearCanonicalTransform cm_relative(const MassConfig& m);

// Explicit inverse built from x_j = x_rj + x_cm - sum_k m_k x_rk / M.
LinearCanonicalTransform cm_relative_inverse(const MassConfig& m);

// Three-particle specialization of cm_relative (historical alias).
LinearCanonicalTransform xrpi3(const MassConfig& m);

// (x0,x1,x2) -> (q_cm, q1, q2) with momenta (p_cm, p_r1, p_r2):
//   q_j  = gamma (x_j - (m_0 x_0 + m_k x_k)/(m_0 + m_k)),  k = other particle,
//   p_rj = mu_0j (p_j/m_j - p_0/m_0).
LinearCanonicalTransform qpr3(const MassConfig& m);

// Two-particle Aharonov-Kaufherr pair: q0 = x0, q1 = x1 - x0,
// pi_0 = p0 + p1, pi_1 = p1. Mass-free by construction.
LinearCanonicalTransform ak(const MassConfig& m);

}  // namespace catalog

// Rebuilds the absolute -> frame transform for any frame produced by the
// catalog (identity for absolute frames).
LinearCanonicalTransform transform_to_frame(const CoordinateFrame& frame,
                                            const MassConfig& m);

// Exact branch map: centers -> A c, covariance -> A S A^T, momenta -> B k.
GaussianSuperposition apply_to_gaussian(const LinearCanonicalTransform& t,
                                        const GaussianSuperposition& s);

// Resampling map psi_new(y) = psi(A^{-1} y)/sqrt(|det A|) by periodic cubic
// interpolation. Throws when more than 1e-8 of the image mass falls outside
// the target axes.
GridState apply_to_grid(const LinearCanonicalTransform& t, const GridState& s,
                        const std::vector<GridAxis>& target_axes);

// Pointwise-exact version of apply_to_grid for analytically-backed states:
// evaluates the original branches at A^{-1} y instead of interpolating.
GridState rasterize_transformed(const LinearCanonicalTransform& t,
                                const GaussianSuperposition& s,
                                const std::vector<GridAxis>& target_axes);

// exp(-i delta p_rj / hbar) on a cm+relative state: x_rj moves by delta and
// every other x_rk tags along by (mu_0j/m_0) delta.
GaussianSuperposition relative_momentum_shift(const GaussianSuperposition& s, int j,
                                              double delta);
GridState relative_momentum_shift(const GridState& s, int j, double delta);

// [u.x, v.p] = i hbar * commutator_coefficient(u, v)
double commutator_coefficient(const Eigen::VectorXd& position_coeffs,
                              const Eigen::VectorXd& momentum_coeffs);

}  // namespace qrf
