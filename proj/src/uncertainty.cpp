#include "qrf/uncertainty.hpp"

#include <cmath>

namespace qrf {

namespace {

template <typename State>
MomentReport moments_impl(const State& s, const std::vector<LinearObservable>& obs) {
  const auto n = static_cast<Eigen::Index>(obs.size());
  MomentReport r;
  r.means.resize(n);
  r.variances.resize(n);
  r.covariance.resize(n, n);
  r.bounds.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    r.labels.push_back(obs[i].label);
    r.means(i) = expectation(s, obs[i]);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double c = covariance(s, obs[i], obs[j]);
      r.covariance(i, j) = c;
      r.covariance(j, i) = c;
      const double bound = 0.5 * s.hbar() * std::abs(commutator_value(obs[i], obs[j]));
      r.bounds(i, j) = bound;
      r.bounds(j, i) = bound;
    }
    r.variances(i) = r.covariance(i, i);
  }
  return r;
}

template <typename State>
std::vector<BoundCheck> verify_bounds_impl(const State& s) {
  const MassConfig& m = s.masses();
  const auto N = static_cast<int>(m.relative_count());
  std::vector<BoundCheck> checks;
  for (int j = 1; j <= N; ++j) {
    const auto xrj = observable_by_label(m, "x_r" + std::to_string(j));
    const double dx = std::sqrt(std::max(0.0, covariance(s, xrj, xrj)));
    for (int k = 1; k <= N; ++k) {
      const auto prk = observable_by_label(m, "p_r" + std::to_string(k));
      const double dp = std::sqrt(std::max(0.0, covariance(s, prk, prk)));
      BoundCheck c;
      c.position_label = xrj.label;
      c.momentum_label = prk.label;
      c.product = dx * dp;
      c.bound = relative_bound(j, k, m);
      c.margin = c.product - c.bound;
      checks.push_back(c);
    }
  }
  return checks;
}

}  // namespace

MomentReport moments(const GaussianSuperposition& s,
                     const std::vector<LinearObservable>& observables) {
  return moments_impl(s, observables);
}

MomentReport moments(const GridState& s, const std::vector<LinearObservable>& observables) {
  return moments_impl(s, observables);
}

double relative_bound(int j, int k, const MassConfig& m) {
  const auto N = static_cast<int>(m.relative_count());
  if (j < 1 || j > N || k < 1 || k > N)
    throw config_error("relative_bound: indices must be in 1..N");
  if (j == k) return 0.5 * m.hbar();
  return 0.5 * m.hbar() * m.mass(k) / (m.mass(0) + m.mass(k));
}

std::vector<BoundCheck> verify_bounds(const GaussianSuperposition& s) {
  return verify_bounds_impl(s);
}

std::vector<BoundCheck> verify_bounds(const GridState& s) { return verify_bounds_impl(s); }

}  // namespace qrf
