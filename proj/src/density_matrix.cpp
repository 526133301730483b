#include "qrf/density_matrix.hpp"

#include <cmath>

#include "qrf/errors.hpp"

namespace qrf {

double DensityMatrix::cell_volume() const {
  double v = 1.0;
  for (const auto& a : axes) v *= a.step();
  return v;
}

std::complex<double> DensityMatrix::trace() const {
  return rho.diagonal().sum() * cell_volume();
}

double DensityMatrix::purity() const {
  const double v = cell_volume();
  return (rho.cwiseProduct(rho.transpose()).sum() * v * v).real();
}

double DensityMatrix::hermiticity_error() const {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

DensityMatrix DensityMatrix::downsampled(Eigen::Index max_points) const {
  // Power-of-two stride per axis keeps the flattened count under budget while
  // the subsampled axes stay valid GridAxis values.
  int per_axis = 8;
  while (static_cast<Eigen::Index>(std::pow(2.0 * per_axis, axes.size())) <= max_points)
    per_axis *= 2;
  std::vector<int> strides(axes.size()), counts(axes.size());
  Eigen::Index total = 1;
  for (std::size_t a = 0; a < axes.size(); ++a) {
    strides[a] = std::max(1, axes[a].n / per_axis);
    counts[a] = axes[a].n / strides[a];
    total *= counts[a];
  }
  std::vector<Eigen::Index> keep;
  keep.reserve(total);
  std::vector<int> idx(axes.size(), 0);
  for (Eigen::Index f = 0; f < total; ++f) {
    Eigen::Index flat = 0;
    for (std::size_t a = 0; a < axes.size(); ++a) flat = flat * axes[a].n + idx[a] * strides[a];
    keep.push_back(flat);
    for (std::size_t a = axes.size(); a-- > 0;) {
      if (++idx[a] < counts[a]) break;
      idx[a] = 0;
    }
  }
  DensityMatrix out;
  out.labels = labels;
  for (std::size_t a = 0; a < axes.size(); ++a)
    out.axes.emplace_back(axes[a].min, axes[a].min + counts[a] * strides[a] * axes[a].step(),
                          counts[a]);
  out.rho.resize(keep.size(), keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = 0; j < keep.size(); ++j) out.rho(i, j) = rho(keep[i], keep[j]);
  return out;
}

double DensityMatrix::min_eigenvalue() const {
  const DensityMatrix d = points() > 64 ? downsampled(64) : *this;
  const Eigen::MatrixXcd herm = 0.5 * (d.rho + d.rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
  return es.eigenvalues().minCoeff() * d.cell_volume();
}

Eigen::VectorXd DensityMatrix::diagonal() const { return rho.diagonal().real(); }

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (!(a.axes == b.axes)) throw config_error("trace_distance: retained axes differ");
  const Eigen::MatrixXcd diff = 0.5 * ((a.rho - b.rho) + (a.rho - b.rho).adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(diff);
  return 0.5 * es.eigenvalues().cwiseAbs().sum() * a.cell_volume();
}

}  // namespace qrf
