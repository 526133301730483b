#include "qrf/reduction.hpp"

#include <cmath>
#include <functional>

#include "qrf/detail/gaussian_pair.hpp"

namespace qrf {

double DisplacementSpec::d0(const MassConfig& m) const {
  if (delta.size() != 1 || m.count() != 2)
    throw config_error("DisplacementSpec::d0: two-particle form");
  return m.mass(1) * delta(0) / m.total();
}

double DisplacementSpec::d1(const MassConfig& m) const {
  if (delta.size() != 1 || m.count() != 2)
    throw config_error("DisplacementSpec::d1: two-particle form");
  return m.mass(0) * delta(0) / m.total();
}

double DisplacementSpec::weighted_total(const MassConfig& m) const {
  if (static_cast<std::size_t>(delta.size()) + 1 != m.count())
    throw config_error("DisplacementSpec: one delta per relative coordinate");
  double acc = 0.0;
  for (Eigen::Index j = 0; j < delta.size(); ++j) acc += m.mass(j + 1) * delta(j);
  return acc / m.total();
}

namespace {

std::vector<int> complement(std::size_t n, const std::vector<int>& traced) {
  std::vector<int> retained;
  for (std::size_t i = 0; i < n; ++i) {
    bool is_traced = false;
    for (int t : traced) is_traced |= (t == static_cast<int>(i));
    if (!is_traced) retained.push_back(static_cast<int>(i));
  }
  return retained;
}

Eigen::Index axes_points(const std::vector<GridAxis>& axes) {
  Eigen::Index total = 1;
  for (const auto& a : axes) total *= a.n;
  return total;
}

Eigen::VectorXd axes_point(const std::vector<GridAxis>& axes, Eigen::Index flat) {
  Eigen::VectorXd x(axes.size());
  for (std::size_t a = axes.size(); a-- > 0;) {
    x(a) = axes[a].coord(static_cast<int>(flat % axes[a].n));
    flat /= axes[a].n;
  }
  return x;
}

}  // namespace

DensityMatrix partial_trace(const GaussianSuperposition& s, const std::vector<int>& traced,
                            const std::vector<GridAxis>& retained_axes) {
  const auto retained = complement(s.dim(), traced);
  if (retained.empty() || traced.empty())
    throw config_error("partial_trace: need at least one traced and one retained coordinate");
  if (retained.size() != retained_axes.size())
    throw config_error("partial_trace: retained axes count mismatch");

  const Eigen::Index np = axes_points(retained_axes);
  DensityMatrix out;
  for (int r : retained) out.labels.push_back(s.frame().position(r));
  out.axes = retained_axes;
  out.rho = Eigen::MatrixXcd::Zero(np, np);

  // Precompute the retained-grid points once.
  std::vector<Eigen::VectorXd> pts(np);
  for (Eigen::Index i = 0; i < np; ++i) pts[i] = axes_point(retained_axes, i);

  for (const auto& ket : s.branches()) {
    for (const auto& bra : s.branches()) {
      const detail::PairTraceKernel kernel(ket, bra, traced, retained, s.hbar());
      const std::complex<double> w = ket.coefficient * std::conj(bra.coefficient);
      for (Eigen::Index i = 0; i < np; ++i)
        for (Eigen::Index j = 0; j < np; ++j) out.rho(i, j) += w * kernel(pts[i], pts[j]);
    }
  }
  return out;
}

double subsystem_purity(const GaussianSuperposition& s, const std::vector<int>& traced) {
  const auto retained = complement(s.dim(), traced);
  if (retained.empty() || traced.empty())
    throw config_error("subsystem_purity: need at least one traced and one retained coordinate");
  const auto nr = static_cast<Eigen::Index>(retained.size());

  // Purity is invariant under rigid coordinate translations; recentre far-away
  // states so the kernel quadratic forms stay well conditioned.
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(s.dim());
  for (const auto& b : s.branches()) mean += b.centers;
  mean /= static_cast<double>(s.branches().size());
  const GaussianSuperposition centered = s.translated(-mean);

  // Tr rho^2 = sum over branch quadruples of
  //   iint K_ab(r, r') K_cd(r', r) dr dr',
  // each factor an exp-quadratic, so the double integral is Gaussian again.
  const auto& br = centered.branches();
  std::vector<std::vector<detail::PairTraceKernel::Quadratic>> q(br.size());
  for (std::size_t a = 0; a < br.size(); ++a)
    for (std::size_t b = 0; b < br.size(); ++b)
      q[a].push_back(
          detail::PairTraceKernel(br[a], br[b], traced, retained, s.hbar()).quadratic());

  // Permutation that swaps the (r, r') blocks of the second kernel.
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(2 * nr, 2 * nr);
  P.topRightCorner(nr, nr) = Eigen::MatrixXd::Identity(nr, nr);
  P.bottomLeftCorner(nr, nr) = Eigen::MatrixXd::Identity(nr, nr);

  std::complex<double> acc = 0.0;
  for (std::size_t a = 0; a < br.size(); ++a)
    for (std::size_t b = 0; b < br.size(); ++b)
      for (std::size_t c = 0; c < br.size(); ++c)
        for (std::size_t d = 0; d < br.size(); ++d) {
          const auto& k1 = q[a][b];
          const auto& k2 = q[c][d];
          const Eigen::MatrixXd M = -(k1.quad + P.transpose() * k2.quad * P);
          const Eigen::VectorXcd J = k1.lin + P.transpose() * k2.lin;
          const std::complex<double> w = br[a].coefficient * std::conj(br[b].coefficient) *
                                         br[c].coefficient * std::conj(br[d].coefficient);
          acc += w * detail::gauss_integral(M, J, k1.s0 + k2.s0);
        }
  return acc.real();
}

DensityMatrix partial_trace(const GridState& s, const std::vector<int>& traced) {
  const auto retained = complement(s.dim(), traced);
  if (retained.empty() || traced.empty())
    throw config_error("partial_trace: need at least one traced and one retained coordinate");

  // Gather psi into a (traced-points x retained-points) matrix.
  Eigen::Index nt = 1, nr = 1;
  for (int t : traced) nt *= s.axes()[t].n;
  for (int r : retained) nr *= s.axes()[r].n;
  Eigen::MatrixXcd psi(nt, nr);
  for (Eigen::Index flat = 0; flat < s.total_points(); ++flat) {
    Eigen::Index ti = 0, ri = 0;
    const auto full = s.unflatten(flat);
    for (int t : traced) ti = ti * s.axes()[t].n + full[t];
    for (int r : retained) ri = ri * s.axes()[r].n + full[r];
    psi(ti, ri) = s.amplitudes()(flat);
  }

  double traced_vol = 1.0;
  for (int t : traced) traced_vol *= s.axes()[t].step();

  DensityMatrix out;
  for (int r : retained) {
    out.labels.push_back(s.frame().position(r));
    out.axes.push_back(s.axes()[r]);
  }
  out.rho = (psi.transpose() * psi.conjugate()) * traced_vol;
  return out;
}

DensityMatrix reduce_relative(const GaussianSuperposition& s,
                              const std::vector<GridAxis>& retained_axes) {
  if (s.frame().is_absolute()) {
    const auto t = catalog::cm_relative(s.masses());
    return partial_trace(apply_to_gaussian(t, s), {0}, retained_axes);
  }
  if (!s.frame().is_cm_relative())
    throw config_error("reduce_relative: state must be absolute or cm+relative");
  return partial_trace(s, {0}, retained_axes);
}

DensityMatrix reduce_relative(const GridState& s) {
  if (!s.frame().is_cm_relative())
    throw config_error("reduce_relative: grid state must be in the cm+relative frame");
  return partial_trace(s, {0});
}

DensityMatrix reduce_external(const GaussianSuperposition& s, int keep, const GridAxis& axis) {
  if (!s.frame().is_absolute())
    throw config_error("reduce_external: state must be in the absolute frame");
  if (keep < 0 || keep >= static_cast<int>(s.dim()))
    throw config_error("reduce_external: particle index out of range");
  std::vector<int> traced;
  for (std::size_t i = 0; i < s.dim(); ++i)
    if (static_cast<int>(i) != keep) traced.push_back(static_cast<int>(i));
  return partial_trace(s, traced, {axis});
}

DensityMatrix reduce_external(const GridState& s, int keep) {
  if (!s.frame().is_absolute())
    throw config_error("reduce_external: state must be in the absolute frame");
  if (keep < 0 || keep >= static_cast<int>(s.dim()))
    throw config_error("reduce_external: particle index out of range");
  std::vector<int> traced;
  for (std::size_t i = 0; i < s.dim(); ++i)
    if (static_cast<int>(i) != keep) traced.push_back(static_cast<int>(i));
  return partial_trace(s, traced);
}

GaussianSuperposition active_transform(const GaussianSuperposition& s) {
  if (!s.frame().is_absolute())
    throw config_error("active_transform: state must be in the absolute frame");
  return apply_to_gaussian(catalog::cm_relative(s.masses()), s).with_frame(s.frame());
}

GridState active_transform(const GridState& s, const std::vector<GridAxis>& target_axes) {
  if (!s.frame().is_absolute())
    throw config_error("active_transform: state must be in the absolute frame");
  return apply_to_grid(catalog::cm_relative(s.masses()), s, target_axes).with_frame(s.frame());
}

namespace {

// Shared quadrature: rho(chi, chi') = sum_u T(u,chi) conj(T(u,chi')) du where
// T(u, chi) samples psi along a (u, chi)-dependent line through the plane.
DensityMatrix line_trace(const GridState& s, const GridAxis& chi_axis,
                         const std::function<Eigen::Vector2d(double, double)>& arg,
                         const std::string& label) {
  if (s.dim() != 2) throw config_error("reduction: two-particle grid state expected");
  // u covers the x0 extent padded by the largest |chi| leverage; sampling at
  // the source resolution keeps the Riemann sum consistent with the grid.
  const GridAxis& a0 = s.axes()[0];
  const double chi_max = std::max(std::abs(chi_axis.min), std::abs(chi_axis.max));
  const double pad = chi_max;
  const int nu = 2 * a0.n;
  const double umin = a0.min - pad, umax = a0.max + pad;
  const double du = (umax - umin) / nu;

  Eigen::MatrixXcd T(nu, chi_axis.n);
  Eigen::VectorXd x(2);
  for (int ui = 0; ui < nu; ++ui) {
    const double u = umin + ui * du;
    for (int ci = 0; ci < chi_axis.n; ++ci) {
      const Eigen::Vector2d p = arg(u, chi_axis.coord(ci));
      // Outside the source box the state has (checked) negligible mass; the
      // periodic interpolant would wrap garbage back in, so clamp to zero.
      if (p(0) < a0.min || p(0) >= a0.max || p(1) < s.axes()[1].min || p(1) >= s.axes()[1].max) {
        T(ui, ci) = 0.0;
      } else {
        x << p(0), p(1);
        T(ui, ci) = s.interpolate(x);
      }
    }
  }
  DensityMatrix out;
  out.labels = {label};
  out.axes = {chi_axis};
  out.rho = (T.transpose() * T.conjugate()) * du;
  return out;
}

}  // namespace

DensityMatrix twirl(const GridState& s, const GridAxis& chi_axis) {
  if (!s.frame().is_absolute())
    throw config_error("twirl: state must be in the absolute frame");
  const double m0 = s.masses().mass(0), m1 = s.masses().mass(1), M = s.masses().total();
  return line_trace(
      s, chi_axis,
      [&](double u, double chi) { return Eigen::Vector2d(u - m1 * chi / M, u + m0 * chi / M); },
      "x_r1");
}

DensityMatrix twirl(const DensityMatrix& full, const MassConfig& masses,
                    const GridAxis& chi_axis) {
  if (full.axes.size() != 2) throw config_error("twirl: full state needs two axes");
  const double p = full.purity();
  if (p < 1.0 - 1e-6)
    throw numeric_error("twirl: input state is not pure (purity " + std::to_string(p) + ")");
  const Eigen::MatrixXcd herm = 0.5 * (full.rho + full.rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
  Eigen::Index imax;
  es.eigenvalues().maxCoeff(&imax);
  const double vol = full.cell_volume();
  Eigen::VectorXcd amp = es.eigenvectors().col(imax) / std::sqrt(vol);
  GridState pure(CoordinateFrame::absolute(2), masses, full.axes, std::move(amp));
  return twirl(pure, chi_axis);
}

DensityMatrix ak_reduce(const GaussianSuperposition& s, const GridAxis& axis) {
  if (!s.frame().is_absolute() || s.dim() != 2)
    throw config_error("ak_reduce: two-particle absolute state expected");
  const auto t = catalog::ak(s.masses());
  return partial_trace(apply_to_gaussian(t, s), {0}, {axis});
}

DensityMatrix ak_reduce(const GridState& s, const GridAxis& axis) {
  if (!s.frame().is_absolute())
    throw config_error("ak_reduce: state must be in the absolute frame");
  return line_trace(
      s, axis, [&](double u, double chi) { return Eigen::Vector2d(u, chi + u); }, "q1");
}

}  // namespace qrf
