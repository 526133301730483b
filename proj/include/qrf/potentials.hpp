#pragma once
#include <Eigen/Dense>
#include <string>
#include <vector>

#include "qrf/errors.hpp"
#include "qrf/masses.hpp"

namespace qrf {

// Natural cubic spline through (x, y) samples; linear extrapolation outside.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> xs, std::vector<double> ys);
  double value(double x) const;
  double derivative(double x) const;

 private:
  std::vector<double> xs_, ys_, m_;  // second derivatives at the knots
};

// One pairwise interaction V(x_k - x_j). Particle index 0 is the frame, so in
// relative coordinates the argument is x_rk - x_rj with x_r0 = 0. Every term
// depends on a coordinate difference only, which keeps the total potential
// translation invariant by construction.
struct PotentialTerm {
  enum class Kind { harmonic, gaussian_well, tabulated };
  Kind kind = Kind::harmonic;
  int j = 0;  // lower particle index
  int k = 1;  // higher particle index
  double spring = 1.0;   // harmonic: spring (x)^2/2
  double depth = 1.0;    // gaussian well: -depth exp(-x^2/(2 width^2))
  double width = 1.0;
  CubicSpline table;

  double value(double x) const;
  double derivative(double x) const;
};

// Sum of pairwise terms with evaluation in either coordinate system.
class PotentialSpec {
 public:
  PotentialSpec() = default;
  explicit PotentialSpec(std::vector<PotentialTerm> terms, std::size_t n_particles);

  const std::vector<PotentialTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  // V at absolute coordinates (x_0..x_N).
  double absolute(const Eigen::VectorXd& x) const;
  // V at relative coordinates (x_r1..x_rN), i.e. V(0, x_r).
  double relative(const Eigen::VectorXd& xr) const;
  // dV/dx_rj at relative coordinates.
  Eigen::VectorXd relative_gradient(const Eigen::VectorXd& xr) const;

 private:
  std::vector<PotentialTerm> terms_;
  std::size_t n_particles_ = 0;
};

}  // namespace qrf
