#pragma once
#include <Eigen/Dense>
#include <complex>
#include <random>
#include <vector>

#include "qrf/gaussian_state.hpp"
#include "qrf/grid_state.hpp"

namespace qrf::testing {

inline Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

// Product of axis-aligned Gaussians.
inline GaussianSuperposition product_state(const MassConfig& m, const Eigen::VectorXd& centers,
                                           const Eigen::VectorXd& widths,
                                           const Eigen::VectorXd& momenta) {
  return GaussianSuperposition(
      CoordinateFrame::absolute(m.count()), m,
      {GaussianBranch::axis_aligned(1.0, centers, widths, momenta)});
}

// The workhorse two-branch state: centers and centers+delta, common widths.
inline GaussianSuperposition two_branch(const MassConfig& m, const Eigen::VectorXd& centers,
                                        const Eigen::VectorXd& delta,
                                        const Eigen::VectorXd& widths, double phase = 0.0) {
  const Eigen::VectorXd k0 = Eigen::VectorXd::Zero(centers.size());
  return GaussianSuperposition(
      CoordinateFrame::absolute(m.count()), m,
      {GaussianBranch::axis_aligned(1.0, centers, widths, k0),
       GaussianBranch::axis_aligned(std::exp(std::complex<double>(0.0, phase)),
                                    centers + delta, widths, k0)});
}

// Deterministic random Gaussian superpositions for property-style tests.
inline GaussianSuperposition random_state(std::mt19937& rng, const MassConfig& m,
                                          int n_branches, double center_scale = 1.5,
                                          double momentum_scale = 0.7) {
  std::uniform_real_distribution<double> uc(-center_scale, center_scale);
  std::uniform_real_distribution<double> uw(0.6, 1.4);
  std::uniform_real_distribution<double> uk(-momentum_scale, momentum_scale);
  std::uniform_real_distribution<double> uphi(0.0, 6.28318530717958648);
  const auto n = static_cast<Eigen::Index>(m.count());
  std::vector<GaussianBranch> branches;
  for (int b = 0; b < n_branches; ++b) {
    Eigen::VectorXd c(n), w(n), k(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      c(i) = uc(rng);
      w(i) = uw(rng);
      k(i) = uk(rng);
    }
    branches.push_back(
        GaussianBranch::axis_aligned(std::exp(std::complex<double>(0.0, uphi(rng))), c, w, k));
  }
  return GaussianSuperposition(CoordinateFrame::absolute(m.count()), m, std::move(branches));
}

inline std::vector<GridAxis> square_axes(std::size_t dim, double lo, double hi, int n) {
  return std::vector<GridAxis>(dim, GridAxis(lo, hi, n));
}

}  // namespace qrf::testing
