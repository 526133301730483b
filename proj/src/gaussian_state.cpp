#include "qrf/gaussian_state.hpp"

#include <cmath>

#include "qrf/detail/gaussian_pair.hpp"

namespace qrf {

GaussianBranch GaussianBranch::axis_aligned(std::complex<double> coefficient,
                                            const Eigen::VectorXd& centers,
                                            const Eigen::VectorXd& widths,
                                            const Eigen::VectorXd& momentum_offsets) {
  GaussianBranch b;
  b.coefficient = coefficient;
  b.centers = centers;
  b.momentum_offsets = momentum_offsets;
  if (widths.size() != centers.size() || momentum_offsets.size() != centers.size())
    throw config_error("GaussianBranch: centers/widths/momentum_offsets sizes differ");
  b.covariance = Eigen::MatrixXd::Zero(centers.size(), centers.size());
  for (Eigen::Index i = 0; i < centers.size(); ++i) {
    if (!(widths[i] > 0.0)) throw config_error("GaussianBranch: widths must be positive");
    b.covariance(i, i) = widths[i] * widths[i];
  }
  return b;
}

double GaussianBranch::width(std::size_t i) const {
  return std::sqrt(covariance(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)));
}

void GaussianBranch::validate() const {
  const Eigen::Index n = centers.size();
  if (covariance.rows() != n || covariance.cols() != n || momentum_offsets.size() != n)
    throw config_error("GaussianBranch: inconsistent dimensions");
  Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success)
    throw config_error("GaussianBranch: covariance must be positive definite");
}

GaussianSuperposition::GaussianSuperposition(CoordinateFrame frame, MassConfig masses,
                                             std::vector<GaussianBranch> branches)
    : frame_(std::move(frame)), masses_(std::move(masses)), branches_(std::move(branches)) {
  if (branches_.empty()) throw config_error("GaussianSuperposition: no branches");
  for (const auto& b : branches_) {
    b.validate();
    if (b.dim() != frame_.size())
      throw config_error("GaussianSuperposition: branch dimension != frame size");
  }
  // Normalize including all pairwise branch overlaps.
  std::complex<double> norm2 = 0.0;
  for (const auto& a : branches_)
    for (const auto& b : branches_)
      norm2 += std::conj(a.coefficient) * b.coefficient * branch_overlap(a, b, hbar());
  const double n2 = norm2.real();
  if (!(n2 > 1e-300))
    throw config_error("GaussianSuperposition: state has vanishing norm");
  const double scale = 1.0 / std::sqrt(n2);
  for (auto& b : branches_) b.coefficient *= scale;
}

std::complex<double> GaussianSuperposition::evaluate(const Eigen::VectorXd& x) const {
  if (x.size() != static_cast<Eigen::Index>(dim()))
    throw config_error("GaussianSuperposition::evaluate: wrong point dimension");
  std::complex<double> acc = 0.0;
  for (const auto& b : branches_) {
    Eigen::LLT<Eigen::MatrixXd> llt(b.covariance);
    const Eigen::VectorXd d = x - b.centers;
    const Eigen::VectorXd pd = llt.solve(d);
    double logdet = 0.0;
    const auto& L = llt.matrixL();
    for (Eigen::Index i = 0; i < d.size(); ++i) logdet += 2.0 * std::log(L(i, i));
    const double log_norm =
        -0.25 * (static_cast<double>(d.size()) * std::log(2.0 * M_PI) + logdet);
    const std::complex<double> expo(-0.25 * d.dot(pd) + log_norm,
                                    b.momentum_offsets.dot(d) / hbar());
    acc += b.coefficient * std::exp(expo);
  }
  return acc;
}

GaussianSuperposition GaussianSuperposition::translated(const Eigen::VectorXd& d) const {
  if (d.size() != static_cast<Eigen::Index>(dim()))
    throw config_error("GaussianSuperposition::translated: wrong displacement dimension");
  GaussianSuperposition out = *this;
  for (auto& b : out.branches_) b.centers += d;
  return out;
}

GaussianSuperposition GaussianSuperposition::with_frame(CoordinateFrame f) const {
  if (f.size() != frame_.size())
    throw config_error("GaussianSuperposition::with_frame: size mismatch");
  GaussianSuperposition out = *this;
  out.frame_ = std::move(f);
  return out;
}

std::complex<double> branch_overlap(const GaussianBranch& a, const GaussianBranch& b,
                                    double hbar) {
  return detail::PairGauss(a, b, hbar).overlap;
}

std::complex<double> inner_product(const GaussianSuperposition& a,
                                   const GaussianSuperposition& b) {
  require_same_frame(a.frame(), b.frame(), "inner_product");
  if (!(a.masses() == b.masses()))
    throw config_error("inner_product: mass configurations differ");
  std::complex<double> acc = 0.0;
  for (const auto& ba : a.branches())
    for (const auto& bb : b.branches())
      acc += std::conj(ba.coefficient) * bb.coefficient * branch_overlap(ba, bb, a.hbar());
  return acc;
}

}  // namespace qrf
