#include "qrf/observables.hpp"

#include "qrf/detail/gaussian_pair.hpp"
#include "qrf/transforms.hpp"

namespace qrf {

std::vector<LinearObservable> observable_catalog(const MassConfig& m) {
  const auto n = static_cast<Eigen::Index>(m.count());
  std::vector<LinearObservable> cat;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    LinearObservable x{"x" + std::to_string(i), zero, zero};
    x.x_coeffs(i) = 1.0;
    cat.push_back(x);
    LinearObservable p{"p" + std::to_string(i), zero, zero};
    p.p_coeffs(i) = 1.0;
    cat.push_back(p);
  }
  const auto cm = catalog::cm_relative(m);
  for (Eigen::Index r = 0; r < n; ++r) {
    cat.push_back({cm.output.position(r), cm.position_block.row(r).transpose(), zero});
    cat.push_back({cm.output.momentum(r), zero, cm.momentum_block.row(r).transpose()});
  }
  // relative momenta p_rj = mu_0j (p_j/m_j - p_0/m_0)
  for (Eigen::Index j = 1; j < n; ++j) {
    LinearObservable prj{"p_r" + std::to_string(j), zero, zero};
    prj.p_coeffs(0) = -m.reduced(j) / m.mass(0);
    prj.p_coeffs(j) = m.reduced(j) / m.mass(j);
    cat.push_back(prj);
  }
  if (n == 3) {
    const auto q = catalog::qpr3(m);
    cat.push_back({"q1", q.position_block.row(1).transpose(), zero});
    cat.push_back({"q2", q.position_block.row(2).transpose(), zero});
  }
  return cat;
}

LinearObservable observable_by_label(const MassConfig& m, const std::string& label) {
  for (auto& o : observable_catalog(m))
    if (o.label == label) return o;
  throw config_error("unknown observable label '" + label + "'");
}

double commutator_value(const LinearObservable& a, const LinearObservable& b) {
  return a.x_coeffs.dot(b.p_coeffs) - b.x_coeffs.dot(a.p_coeffs);
}

namespace {

// Re-express absolute-coordinate coefficients in the state's frame:
// u.x_abs = (A^-T u).x_F,  v.p_abs = (A v).pi_F.
void frame_coefficients(const CoordinateFrame& frame, const MassConfig& m,
                        const LinearObservable& o, Eigen::VectorXd& ux, Eigen::VectorXd& up) {
  const auto t = transform_to_frame(frame, m);
  ux = t.position_block.transpose().fullPivLu().solve(o.x_coeffs);
  up = t.position_block * o.p_coeffs;
}

std::complex<double> gaussian_linear(const GaussianSuperposition& s, const Eigen::VectorXd& ux,
                                     const Eigen::VectorXd& up) {
  std::complex<double> acc = 0.0;
  for (const auto& a : s.branches())
    for (const auto& b : s.branches()) {
      const detail::PairGauss pg(a, b, s.hbar());
      acc += std::conj(a.coefficient) * b.coefficient * detail::pair_linear_moment(pg, ux, up);
    }
  return acc;
}

std::complex<double> gaussian_quadratic(const GaussianSuperposition& s,
                                        const Eigen::VectorXd& u1x, const Eigen::VectorXd& u1p,
                                        const Eigen::VectorXd& u2x, const Eigen::VectorXd& u2p) {
  std::complex<double> acc = 0.0;
  for (const auto& a : s.branches())
    for (const auto& b : s.branches()) {
      const detail::PairGauss pg(a, b, s.hbar());
      acc += std::conj(a.coefficient) * b.coefficient *
             detail::pair_quadratic_moment(pg, u1x, u1p, u2x, u2p);
    }
  return acc;
}

// O psi on the grid: pointwise position part plus spectral momentum part.
Eigen::VectorXcd grid_apply(const GridState& s, const Eigen::VectorXd& ux,
                            const Eigen::VectorXd& up) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(s.total_points());
  if ((ux.array() != 0.0).any()) {
    for (Eigen::Index i = 0; i < s.total_points(); ++i)
      out(i) = ux.dot(s.point(i)) * s.amplitudes()(i);
  }
  if ((up.array() != 0.0).any()) {
    GridState work = s;
    const double hbar = s.hbar();
    apply_momentum_multiplier(work, [&](const Eigen::VectorXd& k) {
      return std::complex<double>(hbar * up.dot(k), 0.0);
    });
    out += work.amplitudes();
  }
  return out;
}

}  // namespace

double expectation(const GaussianSuperposition& s, const LinearObservable& o) {
  Eigen::VectorXd ux, up;
  frame_coefficients(s.frame(), s.masses(), o, ux, up);
  return gaussian_linear(s, ux, up).real();
}

double expectation(const GridState& s, const LinearObservable& o) {
  Eigen::VectorXd ux, up;
  frame_coefficients(s.frame(), s.masses(), o, ux, up);
  const Eigen::VectorXcd phi = grid_apply(s, ux, up);
  return (s.amplitudes().dot(phi) * s.cell_volume()).real();
}

double covariance(const GaussianSuperposition& s, const LinearObservable& a,
                  const LinearObservable& b) {
  Eigen::VectorXd ax, ap, bx, bp;
  frame_coefficients(s.frame(), s.masses(), a, ax, ap);
  frame_coefficients(s.frame(), s.masses(), b, bx, bp);
  const std::complex<double> ab = gaussian_quadratic(s, ax, ap, bx, bp);
  const std::complex<double> ba = gaussian_quadratic(s, bx, bp, ax, ap);
  const double ma = gaussian_linear(s, ax, ap).real();
  const double mb = gaussian_linear(s, bx, bp).real();
  return 0.5 * (ab + ba).real() - ma * mb;
}

double covariance(const GridState& s, const LinearObservable& a, const LinearObservable& b) {
  Eigen::VectorXd ax, ap, bx, bp;
  frame_coefficients(s.frame(), s.masses(), a, ax, ap);
  frame_coefficients(s.frame(), s.masses(), b, bx, bp);
  const Eigen::VectorXcd fa = grid_apply(s, ax, ap);
  const Eigen::VectorXcd fb = grid_apply(s, bx, bp);
  const double ma = (s.amplitudes().dot(fa) * s.cell_volume()).real();
  const double mb = (s.amplitudes().dot(fb) * s.cell_volume()).real();
  return (fa.dot(fb) * s.cell_volume()).real() - ma * mb;
}

}  // namespace qrf
