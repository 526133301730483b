#pragma once
#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "qrf/gaussian_state.hpp"
#include "qrf/grid_state.hpp"
#include "qrf/transforms.hpp"

namespace qrf {

// The shift generator S = sum_i delta_i p_i rewritten on the momenta of a
// catalog transform. The coefficient on the center-of-mass momentum decides
// whether the shift (and hence the phase it probes) is reachable by internal
// interactions alone.
struct ShiftDecomposition {
  std::string transform_name;
  std::vector<std::string> momentum_labels;
  Eigen::VectorXd delta_absolute;
  Eigen::VectorXd coefficients;   // on the new momenta
  double delta_cm = 0.0;          // coefficient on p_cm
  bool accessible = false;        // |delta_cm| < 1e-12 ||delta||
  double reconstruction_error = 0.0;  // max |B^T c - delta|
};

ShiftDecomposition decompose_shift(const Eigen::VectorXd& delta,
                                   const LinearCanonicalTransform& t);
// Convenience: catalog transform by name ("cm_relative", "qpr3", "ak").
ShiftDecomposition decompose_shift(const Eigen::VectorXd& delta, const MassConfig& m,
                                   const std::string& transform_name);

// <psi| exp(i S/hbar) |psi> with S = delta.p in absolute coefficients.
// Magnitude and phase both reported; only the phase is pinned by theory.
std::complex<double> shift_expectation(const GaussianSuperposition& s,
                                       const Eigen::VectorXd& delta);
std::complex<double> shift_expectation(const GridState& s, const Eigen::VectorXd& delta);

// Same expectation with the p_cm component of the generator removed: what an
// internal observer can actually implement.
std::complex<double> shift_expectation_internal(const GaussianSuperposition& s,
                                                const Eigen::VectorXd& delta);

// Independent total-momentum route for rigid shifts delta_i = c:
// characteristic function sum |psi_k|^2 exp(i c sum k) in momentum space.
std::complex<double> total_momentum_characteristic(const GridState& s, double c);

// S = delta.p on the (pi_cm, pi_j) momenta: exact coefficients, the heavy
// third-particle truncation (pi_cm dropped), and the truncation weight
// |delta_cm coefficient| with its mass ratio.
struct PiFormCoefficients {
  std::vector<std::string> labels;
  Eigen::VectorXd exact;
  Eigen::VectorXd truncated;
  double pi_cm_coefficient = 0.0;
  double mass_ratio = 0.0;  // m_p/M for the standard third-particle shift
};

PiFormCoefficients heavy_limit_pi_form(const Eigen::VectorXd& delta, const MassConfig& m);

}  // namespace qrf
