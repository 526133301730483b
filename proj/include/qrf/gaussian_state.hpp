#pragma once
#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qrf/frame.hpp"
#include "qrf/masses.hpp"

namespace qrf {

// One normalized Gaussian wavepacket factor of a superposition:
//
//   psi(x) = det(2*pi*Sigma)^(-1/4)
//            * exp( -(x-c)^T Sigma^{-1} (x-c)/4 + i k^T (x-c)/hbar )
//
// Sigma is the position covariance of |psi|^2, so an axis-aligned branch with
// width Delta has variance Delta^2 and two branches a distance delta apart
// overlap by exp(-delta^2/(8 Delta^2)). Momentum phases are referenced to the
// center, which makes rigid translations phase-free.
struct GaussianBranch {
  std::complex<double> coefficient{1.0, 0.0};
  Eigen::VectorXd centers;
  Eigen::MatrixXd covariance;  // symmetric positive definite
  Eigen::VectorXd momentum_offsets;

  static GaussianBranch axis_aligned(std::complex<double> coefficient,
                                     const Eigen::VectorXd& centers,
                                     const Eigen::VectorXd& widths,
                                     const Eigen::VectorXd& momentum_offsets);

  std::size_t dim() const { return static_cast<std::size_t>(centers.size()); }
  double width(std::size_t i) const;
  void validate() const;
};

// Weighted list of Gaussian branches over a shared coordinate frame.
// Normalized on construction (all pairwise overlaps included); immutable
// afterwards.
class GaussianSuperposition {
 public:
  GaussianSuperposition(CoordinateFrame frame, MassConfig masses,
                        std::vector<GaussianBranch> branches);

  const CoordinateFrame& frame() const { return frame_; }
  const MassConfig& masses() const { return masses_; }
  double hbar() const { return masses_.hbar(); }
  const std::vector<GaussianBranch>& branches() const { return branches_; }
  std::size_t dim() const { return branches_.front().dim(); }

  // Analytic wavefunction value at a point.
  std::complex<double> evaluate(const Eigen::VectorXd& x) const;

  // Same state with every branch center displaced by d (exp(-i d.p/hbar)).
  GaussianSuperposition translated(const Eigen::VectorXd& d) const;

  // Replaces the frame label only; geometry untouched (active transforms).
  GaussianSuperposition with_frame(CoordinateFrame f) const;

 private:
  CoordinateFrame frame_;
  MassConfig masses_;
  std::vector<GaussianBranch> branches_;
};

// <a|b> of unit-normalized branches (closed form).
std::complex<double> branch_overlap(const GaussianBranch& a, const GaussianBranch& b,
                                    double hbar);

// <a|b> of full superpositions; frames and masses must match.
std::complex<double> inner_product(const GaussianSuperposition& a,
                                   const GaussianSuperposition& b);

}  // namespace qrf
