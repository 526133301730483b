#pragma once
#include <Eigen/Dense>
#include <string>
#include <vector>

#include "qrf/observables.hpp"

namespace qrf {

// Means, variances and symmetrized covariances of a set of observables,
// with the Robertson bound hbar/2 |<[A,B]>| per pair (state-independent for
// linear observables).
struct MomentReport {
  std::vector<std::string> labels;
  Eigen::VectorXd means;
  Eigen::VectorXd variances;
  Eigen::MatrixXd covariance;
  Eigen::MatrixXd bounds;
};

MomentReport moments(const GaussianSuperposition& s,
                     const std::vector<LinearObservable>& observables);
MomentReport moments(const GridState& s, const std::vector<LinearObservable>& observables);

// The cross-pair uncertainty floor: hbar/2 * m_k/(m0+m_k) for j != k, the
// canonical hbar/2 on the diagonal.
double relative_bound(int j, int k, const MassConfig& m);

struct BoundCheck {
  std::string position_label;
  std::string momentum_label;
  double product;  // Dx_rj * Dp_rk
  double bound;
  double margin;  // product - bound
};

// Evaluates Dx_rj Dp_rk against the bound for every (j, k) pair.
std::vector<BoundCheck> verify_bounds(const GaussianSuperposition& s);
std::vector<BoundCheck> verify_bounds(const GridState& s);

}  // namespace qrf
