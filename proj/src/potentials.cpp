#include "qrf/potentials.hpp"

#include <algorithm>
#include <cmath>

namespace qrf {

CubicSpline::CubicSpline(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  const std::size_t n = xs_.size();
  if (n < 3 || ys_.size() != n)
    throw config_error("CubicSpline: need at least three samples");
  for (std::size_t i = 1; i < n; ++i)
    if (!(xs_[i] > xs_[i - 1])) throw config_error("CubicSpline: x samples must increase");

  // Tridiagonal solve for natural boundary conditions.
  std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
  m_.assign(n, 0.0);
  b[0] = b[n - 1] = 1.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = xs_[i] - xs_[i - 1], h1 = xs_[i + 1] - xs_[i];
    a[i] = h0 / 6.0;
    b[i] = (h0 + h1) / 3.0;
    c[i] = h1 / 6.0;
    d[i] = (ys_[i + 1] - ys_[i]) / h1 - (ys_[i] - ys_[i - 1]) / h0;
  }
  for (std::size_t i = 1; i < n; ++i) {
    const double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    d[i] -= w * d[i - 1];
  }
  m_[n - 1] = d[n - 1] / b[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) m_[i] = (d[i] - c[i] * m_[i + 1]) / b[i];
}

double CubicSpline::value(double x) const {
  if (x <= xs_.front()) {
    return ys_.front() + derivative(xs_.front()) * (x - xs_.front());
  }
  if (x >= xs_.back()) {
    return ys_.back() + derivative(xs_.back()) * (x - xs_.back());
  }
  std::size_t i = std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin() - 1;
  const double h = xs_[i + 1] - xs_[i];
  const double t0 = (xs_[i + 1] - x) / h, t1 = (x - xs_[i]) / h;
  return t0 * ys_[i] + t1 * ys_[i + 1] +
         ((t0 * t0 * t0 - t0) * m_[i] + (t1 * t1 * t1 - t1) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double x) const {
  const std::size_t n = xs_.size();
  std::size_t i;
  if (x <= xs_.front())
    i = 0;
  else if (x >= xs_.back())
    i = n - 2;
  else
    i = std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin() - 1;
  const double xc = std::min(std::max(x, xs_.front()), xs_.back());
  const double h = xs_[i + 1] - xs_[i];
  const double t0 = (xs_[i + 1] - xc) / h, t1 = (xc - xs_[i]) / h;
  return (ys_[i + 1] - ys_[i]) / h +
         ((3.0 * t1 * t1 - 1.0) * m_[i + 1] - (3.0 * t0 * t0 - 1.0) * m_[i]) * h / 6.0;
}

double PotentialTerm::value(double x) const {
  switch (kind) {
    case Kind::harmonic:
      return 0.5 * spring * x * x;
    case Kind::gaussian_well:
      return -depth * std::exp(-x * x / (2.0 * width * width));
    case Kind::tabulated:
      return table.value(x);
  }
  throw config_error("PotentialTerm: bad kind");
}

double PotentialTerm::derivative(double x) const {
  switch (kind) {
    case Kind::harmonic:
      return spring * x;
    case Kind::gaussian_well:
      return depth * (x / (width * width)) * std::exp(-x * x / (2.0 * width * width));
    case Kind::tabulated:
      return table.derivative(x);
  }
  throw config_error("PotentialTerm: bad kind");
}

PotentialSpec::PotentialSpec(std::vector<PotentialTerm> terms, std::size_t n_particles)
    : terms_(std::move(terms)), n_particles_(n_particles) {
  for (const auto& t : terms_) {
    if (t.j < 0 || t.k <= t.j || t.k >= static_cast<int>(n_particles_))
      throw config_error("PotentialSpec: term needs particle indices 0 <= j < k <= N");
  }
}

double PotentialSpec::absolute(const Eigen::VectorXd& x) const {
  double v = 0.0;
  for (const auto& t : terms_) v += t.value(x(t.k) - x(t.j));
  return v;
}

double PotentialSpec::relative(const Eigen::VectorXd& xr) const {
  double v = 0.0;
  for (const auto& t : terms_) {
    const double xj = t.j == 0 ? 0.0 : xr(t.j - 1);
    v += t.value(xr(t.k - 1) - xj);
  }
  return v;
}

Eigen::VectorXd PotentialSpec::relative_gradient(const Eigen::VectorXd& xr) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(xr.size());
  for (const auto& t : terms_) {
    const double xj = t.j == 0 ? 0.0 : xr(t.j - 1);
    const double dv = t.derivative(xr(t.k - 1) - xj);
    g(t.k - 1) += dv;
    if (t.j > 0) g(t.j - 1) -= dv;
  }
  return g;
}

}  // namespace qrf
