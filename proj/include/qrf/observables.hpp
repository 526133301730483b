#pragma once
#include <Eigen/Dense>
#include <string>
#include <vector>

#include "qrf/gaussian_state.hpp"
#include "qrf/grid_state.hpp"
#include "qrf/masses.hpp"

namespace qrf {

// A Hermitian observable linear in phase space, kept in absolute-coordinate
// coefficients: O = x_coeffs . x + p_coeffs . p. The catalog is the closed
// set generated by the transform blocks; no operator parser.
struct LinearObservable {
  std::string label;
  Eigen::VectorXd x_coeffs;
  Eigen::VectorXd p_coeffs;
};

// x_i, p_i, x_cm, p_cm, x_rj, pi_j, p_rj and (for three particles) q_j.
std::vector<LinearObservable> observable_catalog(const MassConfig& m);
LinearObservable observable_by_label(const MassConfig& m, const std::string& label);

// <O>, works on either backend and any catalog frame.
double expectation(const GaussianSuperposition& s, const LinearObservable& o);
double expectation(const GridState& s, const LinearObservable& o);

// <(O1 O2 + O2 O1)/2> - <O1><O2>
double covariance(const GaussianSuperposition& s, const LinearObservable& a,
                  const LinearObservable& b);
double covariance(const GridState& s, const LinearObservable& a, const LinearObservable& b);

// scalar value of [A, B]/(i hbar) = xA.pB - xB.pA
double commutator_value(const LinearObservable& a, const LinearObservable& b);

}  // namespace qrf
