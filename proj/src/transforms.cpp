#include "qrf/transforms.hpp"

#include <cmath>

namespace qrf {

double LinearCanonicalTransform::symplectic_defect() const {
  const Eigen::Index n = position_block.rows();
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  S.topLeftCorner(n, n) = position_block;
  S.bottomRightCorner(n, n) = momentum_block;
  Eigen::MatrixXd Jm = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  Jm.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  Jm.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  return (S * Jm * S.transpose() - Jm).cwiseAbs().maxCoeff();
}

LinearCanonicalTransform LinearCanonicalTransform::inverse() const {
  LinearCanonicalTransform inv;
  inv.name = name + "_inverse";
  inv.position_block = position_block.inverse();
  inv.momentum_block = momentum_block.inverse();
  inv.input = output;
  inv.output = input;
  return inv;
}

LinearCanonicalTransform compose(const LinearCanonicalTransform& second,
                                 const LinearCanonicalTransform& first) {
  if (!(first.output == second.input))
    throw config_error("compose: frames do not chain");
  LinearCanonicalTransform t;
  t.name = second.name + "." + first.name;
  t.position_block = second.position_block * first.position_block;
  t.momentum_block = second.momentum_block * first.momentum_block;
  t.input = first.input;
  t.output = second.output;
  return t;
}

namespace catalog {

LinearCanonicalTransform identity(const CoordinateFrame& frame) {
  const auto n = static_cast<Eigen::Index>(frame.size());
  return {"identity", Eigen::MatrixXd::Identity(n, n), Eigen::MatrixXd::Identity(n, n),
          frame, frame};
}

LinearCanonicalTransform cm_relative(const MassConfig& m) {
  const auto n = static_cast<Eigen::Index>(m.count());
  if (n < 2) throw config_error("cm_relative: needs at least two particles");
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
  const double M = m.total();
  for (Eigen::Index i = 0; i < n; ++i) {
    A(0, i) = m.mass(i) / M;
    B(0, i) = 1.0;
  }
  for (Eigen::Index j = 1; j < n; ++j) {
    A(j, 0) = -1.0;
    A(j, j) = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) B(j, i) = (i == j ? 1.0 : 0.0) - m.mass(j) / M;
  }
  return {"cm_relative", A, B, CoordinateFrame::absolute(n), CoordinateFrame::cm_relative(n)};
}

LinearCanonicalTransform cm_relative_inverse(const MassConfig& m) {
  const auto n = static_cast<Eigen::Index>(m.count());
  if (n < 2) throw config_error("cm_relative_inverse: needs at least two particles");
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
  const double M = m.total();
  // x_j = x_cm + x_rj - sum_k m_k x_rk / M (x_r0 term absent for j = 0)
  for (Eigen::Index j = 0; j < n; ++j) {
    A(j, 0) = 1.0;
    for (Eigen::Index k = 1; k < n; ++k) A(j, k) = (k == j ? 1.0 : 0.0) - m.mass(k) / M;
  }
  // p_j = (m_j/M) p_cm + pi_j,  p_0 = (m_0/M) p_cm - sum_k pi_k
  for (Eigen::Index j = 0; j < n; ++j) {
    B(j, 0) = m.mass(j) / M;
    for (Eigen::Index k = 1; k < n; ++k) B(j, k) = (k == j ? 1.0 : (j == 0 ? -1.0 : 0.0));
  }
  return {"cm_relative_inverse", A, B, CoordinateFrame::cm_relative(n),
          CoordinateFrame::absolute(n)};
}

LinearCanonicalTransform xrpi3(const MassConfig& m) {
  if (m.count() != 3) throw config_error("xrpi3: needs exactly three particles");
  auto t = cm_relative(m);
  t.name = "xrpi3";
  return t;
}

LinearCanonicalTransform qpr3(const MassConfig& m) {
  if (m.count() != 3) throw config_error("qpr3: needs exactly three particles");
  const double M = m.total();
  const double gamma = m.gamma3();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(3, 3);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(3, 3);
  for (int i = 0; i < 3; ++i) {
    A(0, i) = m.mass(i) / M;
    B(0, i) = 1.0;
  }
  // q_1 = gamma (x_1 - (m0 x0 + m2 x2)/(m0 + m2)), q_2 with 1 <-> 2
  const double m0 = m.mass(0), m1 = m.mass(1), m2 = m.mass(2);
  A(1, 0) = -gamma * m0 / (m0 + m2);
  A(1, 1) = gamma;
  A(1, 2) = -gamma * m2 / (m0 + m2);
  A(2, 0) = -gamma * m0 / (m0 + m1);
  A(2, 1) = -gamma * m1 / (m0 + m1);
  A(2, 2) = gamma;
  // p_rj = mu_0j (p_j/m_j - p_0/m_0)
  B(1, 0) = -m.reduced(1) / m0;
  B(1, 1) = m.reduced(1) / m1;
  B(2, 0) = -m.reduced(2) / m0;
  B(2, 2) = m.reduced(2) / m2;
  return {"qpr3", A, B, CoordinateFrame::absolute(3), CoordinateFrame::qpr(3)};
}

LinearCanonicalTransform ak(const MassConfig& m) {
  if (m.count() != 2) throw config_error("ak: needs exactly two particles");
  Eigen::MatrixXd A(2, 2), B(2, 2);
  A << 1, 0, -1, 1;
  B << 1, 1, 0, 1;
  return {"ak", A, B, CoordinateFrame::absolute(2), CoordinateFrame::ak()};
}

}  // namespace catalog

LinearCanonicalTransform transform_to_frame(const CoordinateFrame& frame,
                                            const MassConfig& m) {
  if (frame.is_absolute()) return catalog::identity(frame);
  if (frame == CoordinateFrame::cm_relative(frame.size())) return catalog::cm_relative(m);
  if (frame == CoordinateFrame::qpr(frame.size())) return catalog::qpr3(m);
  if (frame == CoordinateFrame::ak()) return catalog::ak(m);
  throw config_error("transform_to_frame: unrecognized frame '" + frame.position(0) + "'");
}

GaussianSuperposition apply_to_gaussian(const LinearCanonicalTransform& t,
                                        const GaussianSuperposition& s) {
  require_same_frame(t.input, s.frame(), "apply_to_gaussian");
  std::vector<GaussianBranch> out;
  out.reserve(s.branches().size());
  for (const auto& b : s.branches()) {
    GaussianBranch nb;
    nb.coefficient = b.coefficient;
    nb.centers = t.position_block * b.centers;
    nb.covariance = t.position_block * b.covariance * t.position_block.transpose();
    nb.momentum_offsets = t.momentum_block * b.momentum_offsets;
    out.push_back(std::move(nb));
  }
  return GaussianSuperposition(t.output, s.masses(), std::move(out));
}

GridState apply_to_grid(const LinearCanonicalTransform& t, const GridState& s,
                        const std::vector<GridAxis>& target_axes) {
  require_same_frame(t.input, s.frame(), "apply_to_grid");
  if (t.symplectic_defect() > 1e-10)
    throw config_error("apply_to_grid: transform is not symplectic");
  if (target_axes.size() != s.dim())
    throw config_error("apply_to_grid: target axes dimension mismatch");

  // Support check in source space: mass whose image lands outside the target
  // box may not exceed 1e-8.
  {
    double outside = 0.0;
    const double vol = s.cell_volume();
    for (Eigen::Index i = 0; i < s.total_points(); ++i) {
      const Eigen::VectorXd y = t.position_block * s.point(i);
      for (std::size_t a = 0; a < target_axes.size(); ++a) {
        if (y(a) < target_axes[a].min || y(a) >= target_axes[a].max) {
          outside += std::norm(s.amplitudes()(i)) * vol;
          break;
        }
      }
    }
    if (outside >= 1e-8)
      throw numeric_error("apply_to_grid: " + std::to_string(outside) +
                          " of the image mass falls outside the target axes");
  }

  const Eigen::MatrixXd Ainv = t.position_block.inverse();
  const double scale = 1.0 / std::sqrt(std::abs(t.position_block.determinant()));
  Eigen::Index total = 1;
  for (const auto& a : target_axes) total *= a.n;
  Eigen::VectorXcd amp(total);
  std::vector<int> idx(target_axes.size(), 0);
  Eigen::VectorXd y(target_axes.size());
  for (Eigen::Index flat = 0; flat < total; ++flat) {
    for (std::size_t a = 0; a < target_axes.size(); ++a) y(a) = target_axes[a].coord(idx[a]);
    const Eigen::VectorXd x = Ainv * y;
    // Preimages beyond the source box carry no mass (clearance rules); the
    // periodic stencil must not alias the far side in.
    bool inside = true;
    for (std::size_t a = 0; a < s.dim(); ++a)
      inside &= (x(a) >= s.axes()[a].min && x(a) < s.axes()[a].max);
    amp(flat) = inside ? scale * s.interpolate(x) : 0.0;
    for (std::size_t a = target_axes.size(); a-- > 0;) {
      if (++idx[a] < target_axes[a].n) break;
      idx[a] = 0;
    }
  }
  // Resampling budget: the raw norm should come back within 1e-6 of unity.
  double vol = 1.0;
  for (const auto& a : target_axes) vol *= a.step();
  const double drift = std::abs(amp.squaredNorm() * vol - 1.0);
  if (drift > 1e-4)
    throw numeric_error("apply_to_grid: resampled norm drifted by " + std::to_string(drift));
  return GridState(t.output, s.masses(), target_axes, std::move(amp), /*renormalize=*/true);
}

GridState rasterize_transformed(const LinearCanonicalTransform& t,
                                const GaussianSuperposition& s,
                                const std::vector<GridAxis>& target_axes) {
  require_same_frame(t.input, s.frame(), "rasterize_transformed");
  const Eigen::MatrixXd Ainv = t.position_block.inverse();
  const double scale = 1.0 / std::sqrt(std::abs(t.position_block.determinant()));
  Eigen::Index total = 1;
  for (const auto& a : target_axes) total *= a.n;
  Eigen::VectorXcd amp(total);
  std::vector<int> idx(target_axes.size(), 0);
  Eigen::VectorXd y(target_axes.size());
  for (Eigen::Index flat = 0; flat < total; ++flat) {
    for (std::size_t a = 0; a < target_axes.size(); ++a) y(a) = target_axes[a].coord(idx[a]);
    amp(flat) = scale * s.evaluate(Ainv * y);
    for (std::size_t a = target_axes.size(); a-- > 0;) {
      if (++idx[a] < target_axes[a].n) break;
      idx[a] = 0;
    }
  }
  return GridState(t.output, s.masses(), target_axes, std::move(amp), /*renormalize=*/true);
}

namespace {
// Frame-coordinate displacement generated by exp(-i delta p_rj / hbar).
Eigen::VectorXd relative_shift_vector(const CoordinateFrame& frame, const MassConfig& m,
                                      int j, double delta) {
  const auto n = static_cast<Eigen::Index>(m.count());
  if (m.relative_count() < 2)
    throw config_error("relative_momentum_shift: needs at least two relative coordinates");
  if (j < 1 || j >= static_cast<int>(m.count()))
    throw config_error("relative_momentum_shift: particle index out of range");
  if (!frame.is_cm_relative())
    throw config_error("relative_momentum_shift: state must be in the cm+relative frame");
  // p_rj in absolute momentum coefficients
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  v(0) = -m.reduced(j) / m.mass(0);
  v(j) = m.reduced(j) / m.mass(j);
  const auto t = catalog::cm_relative(m);
  return delta * (t.position_block * v);
}
}  // namespace

GaussianSuperposition relative_momentum_shift(const GaussianSuperposition& s, int j,
                                              double delta) {
  return s.translated(relative_shift_vector(s.frame(), s.masses(), j, delta));
}

GridState relative_momentum_shift(const GridState& s, int j, double delta) {
  return translated(s, relative_shift_vector(s.frame(), s.masses(), j, delta));
}

double commutator_coefficient(const Eigen::VectorXd& position_coeffs,
                              const Eigen::VectorXd& momentum_coeffs) {
  return position_coeffs.dot(momentum_coeffs);
}

}  // namespace qrf
