#pragma once
#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "qrf/grid_state.hpp"

namespace qrf {

// Discretized kernel rho(r, r') of a reduced state over one or two retained
// grid axes (row-major flattened). Entries are kernel values, so the operator
// trace is sum(diag) * cell volume.
struct DensityMatrix {
  std::vector<std::string> labels;
  std::vector<GridAxis> axes;
  Eigen::MatrixXcd rho;

  double cell_volume() const;
  Eigen::Index points() const { return rho.rows(); }
  std::complex<double> trace() const;
  double purity() const;               // Tr rho^2
  double hermiticity_error() const;    // max |rho - rho^dagger|
  double min_eigenvalue() const;       // spot check on a <=64-point downsample
  Eigen::VectorXd diagonal() const;    // real part of the populations

  DensityMatrix downsampled(Eigen::Index max_points) const;
};

// (1/2) || a - b ||_1 of the discretized operators (same axes required).
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace qrf
