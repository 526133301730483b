#include "qrf/dynamics.hpp"

#include <cmath>
#include <functional>

#include "qrf/reduction.hpp"

namespace qrf {

double RelativeHamiltonian::kinetic(const Eigen::VectorXd& k) const {
  const double hbar = masses.hbar();
  double t = 0.0, ksum = 0.0;
  for (Eigen::Index j = 0; j < k.size(); ++j) {
    const double pk = hbar * k(j);
    t += pk * pk / (2.0 * masses.mass(j + 1));
    ksum += pk;
  }
  return t + ksum * ksum / (2.0 * masses.mass(0));
}

FrameTrajectory FrameTrajectory::polynomial(const Eigen::VectorXd& coeffs) {
  FrameTrajectory f;
  f.poly_ = true;
  f.coeffs_ = coeffs;
  return f;
}

FrameTrajectory FrameTrajectory::sampled(std::vector<double> ts, std::vector<double> xs) {
  FrameTrajectory f;
  f.poly_ = false;
  f.spline_ = CubicSpline(std::move(ts), std::move(xs));
  return f;
}

double FrameTrajectory::velocity(double t) const {
  if (poly_) {
    double v = 0.0;
    for (Eigen::Index i = 1; i < coeffs_.size(); ++i)
      v += coeffs_(i) * i * std::pow(t, static_cast<double>(i - 1));
    return v;
  }
  return spline_.derivative(t);
}

double FrameTrajectory::acceleration(double t) const {
  if (poly_) {
    double a = 0.0;
    for (Eigen::Index i = 2; i < coeffs_.size(); ++i)
      a += coeffs_(i) * i * (i - 1) * std::pow(t, static_cast<double>(i - 2));
    return a;
  }
  // second derivative of the spline via a symmetric difference of the first
  const double h = 1e-5;
  return (spline_.derivative(t + h) - spline_.derivative(t - h)) / (2.0 * h);
}

namespace {

struct GridGeometry {
  std::vector<int> dims;
  std::vector<Eigen::VectorXd> coords;  // per-axis coordinate values
  std::vector<Eigen::VectorXd> waves;   // per-axis FFT wavenumbers
  double cell = 1.0;
  Eigen::Index total = 1;

  explicit GridGeometry(const GridState& s) {
    for (const auto& a : s.axes()) {
      dims.push_back(a.n);
      Eigen::VectorXd c(a.n);
      for (int i = 0; i < a.n; ++i) c(i) = a.coord(i);
      coords.push_back(c);
      waves.push_back(a.wavenumbers());
      cell *= a.step();
      total *= a.n;
    }
  }

  template <typename F>
  Eigen::VectorXd tabulate(const std::vector<Eigen::VectorXd>& per_axis, F f) const {
    Eigen::VectorXd out(total);
    std::vector<int> idx(dims.size(), 0);
    Eigen::VectorXd v(dims.size());
    for (Eigen::Index flat = 0; flat < total; ++flat) {
      for (std::size_t a = 0; a < dims.size(); ++a) v(a) = per_axis[a](idx[a]);
      out(flat) = f(v);
      for (std::size_t a = dims.size(); a-- > 0;) {
        if (++idx[a] < dims[a]) break;
        idx[a] = 0;
      }
    }
    return out;
  }
};

// Mean of a position-diagonal table on the current amplitudes.
double position_mean(const Eigen::VectorXcd& amp, const Eigen::VectorXd& table, double cell) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < amp.size(); ++i) acc += std::norm(amp(i)) * table(i);
  return acc * cell;
}

// Means of momentum-diagonal tables; one FFT for all of them.
std::vector<double> momentum_means(const GridGeometry& g, const Eigen::VectorXcd& amp,
                                   const std::vector<Eigen::VectorXd>& tables) {
  Eigen::VectorXcd hat = amp;
  fft::forward(g.dims, hat);
  const double wsum = hat.squaredNorm();
  std::vector<double> out(tables.size(), 0.0);
  for (std::size_t t = 0; t < tables.size(); ++t) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < hat.size(); ++i) acc += std::norm(hat(i)) * tables[t](i);
    out[t] = acc / wsum;
  }
  return out;
}

struct TrackTables {
  std::vector<Eigen::VectorXd> xj;      // per axis coordinate table
  std::vector<Eigen::VectorXd> gradvj;  // per axis dV/dx table
  Eigen::VectorXd vpos;
  std::vector<Eigen::VectorXd> pmom;  // per tracked momentum table (k-space)
  Eigen::VectorXd tkin;               // kinetic table (k-space)
  Eigen::VectorXd pi;                 // Pi table (k-space); empty unless relative mode
  Eigen::VectorXd pi2;
};

enum class Mode { relative, classical, absolute };

EvolutionResult run_split_step(const GridState& s0, double dt, int steps, int snapshot_stride,
                               Mode mode, bool time_dependent, const TrackTables& tab,
                               const std::function<void(double, Eigen::VectorXd&, Eigen::VectorXd&)>&
                                   step_tables) {
  GridGeometry g(s0);
  const double hbar = s0.hbar();
  const std::size_t naxes = g.dims.size();

  EvolutionResult res;
  res.mean_positions.resize(steps + 1, naxes);
  res.mean_rel_momenta.resize(steps + 1, naxes);
  res.grad_v_means.resize(steps + 1, naxes);
  res.energies.resize(steps + 1);
  res.norms.resize(steps + 1);
  if (mode == Mode::relative) {
    res.pi_means.resize(steps + 1);
    res.pi_sigmas.resize(steps + 1);
  }

  Eigen::VectorXcd amp = s0.amplitudes();

  const auto track = [&](int step, double t) {
    res.times.push_back(t);
    for (std::size_t a = 0; a < naxes; ++a) {
      res.mean_positions(step, a) = position_mean(amp, tab.xj[a], g.cell);
      res.grad_v_means(step, a) = position_mean(amp, tab.gradvj[a], g.cell);
    }
    std::vector<Eigen::VectorXd> mom = tab.pmom;
    mom.push_back(tab.tkin);
    if (mode == Mode::relative) {
      mom.push_back(tab.pi);
      mom.push_back(tab.pi2);
    }
    const auto mm = momentum_means(g, amp, mom);
    for (std::size_t a = 0; a < naxes; ++a) res.mean_rel_momenta(step, a) = mm[a];
    res.energies(step) = mm[naxes] + position_mean(amp, tab.vpos, g.cell);
    if (mode == Mode::relative) {
      res.pi_means(step) = mm[naxes + 1];
      const double var = mm[naxes + 2] - mm[naxes + 1] * mm[naxes + 1];
      res.pi_sigmas(step) = std::sqrt(std::max(0.0, var));
    }
    res.norms(step) = amp.squaredNorm() * g.cell;
  };

  const auto snapshot = [&](double t) {
    GridState snap(s0.frame(), s0.masses(), s0.axes(), amp, /*renormalize=*/false);
    if (snap.edge_mass(0.05) > 1e-8)
      throw numeric_error("evolve: support reached the grid edge at t = " + std::to_string(t));
    res.snapshots.emplace_back(t, std::move(snap));
  };

  track(0, 0.0);
  snapshot(0.0);

  Eigen::VectorXd vstep, tstep;
  Eigen::VectorXcd vphase(g.total), tphase(g.total);
  const double inv_size = 1.0 / static_cast<double>(g.total);
  const auto build_phases = [&](double tmid) {
    step_tables(tmid, vstep, tstep);
    for (Eigen::Index i = 0; i < g.total; ++i)
      vphase(i) = std::exp(std::complex<double>(0.0, -0.5 * dt * vstep(i) / hbar));
    for (Eigen::Index i = 0; i < g.total; ++i)
      tphase(i) = std::exp(std::complex<double>(0.0, -dt * tstep(i) / hbar));
  };
  if (!time_dependent) build_phases(0.5 * dt);

  for (int n = 0; n < steps; ++n) {
    if (time_dependent) build_phases((n + 0.5) * dt);
    // Strang: half kick, full drift, half kick.
    amp.array() *= vphase.array();
    fft::forward(g.dims, amp);
    amp.array() *= tphase.array();
    fft::backward(g.dims, amp);
    amp *= inv_size;
    amp.array() *= vphase.array();

    track(n + 1, (n + 1) * dt);
    if (snapshot_stride > 0 && (n + 1) % snapshot_stride == 0 && n + 1 < steps)
      snapshot((n + 1) * dt);
  }
  snapshot(steps * dt);
  return res;
}

}  // namespace

EvolutionResult evolve_relative(const RelativeHamiltonian& h, const GridState& s, double dt,
                                int steps, int snapshot_stride) {
  if (!s.frame().is_relative_only())
    throw config_error("evolve_relative: grid must be over the relative coordinates");
  if (s.dim() != h.masses.relative_count())
    throw config_error("evolve_relative: grid axes != relative coordinate count");
  GridGeometry g(s);
  const double hbar = h.masses.hbar();

  TrackTables tab;
  const auto& masses = h.masses;
  for (std::size_t a = 0; a < g.dims.size(); ++a) {
    tab.xj.push_back(g.tabulate(g.coords, [&](const Eigen::VectorXd& x) { return x(a); }));
    tab.gradvj.push_back(g.tabulate(
        g.coords, [&](const Eigen::VectorXd& x) { return h.potential.relative_gradient(x)(a); }));
  }
  tab.vpos = g.tabulate(g.coords, [&](const Eigen::VectorXd& x) { return h.potential.relative(x); });
  tab.tkin = g.tabulate(g.waves, [&](const Eigen::VectorXd& k) { return h.kinetic(k); });
  // p_rj = mu_0j (pi_j/m_j + Pi/m_0), diagonal in k space
  for (std::size_t j = 1; j <= g.dims.size(); ++j) {
    tab.pmom.push_back(g.tabulate(g.waves, [&](const Eigen::VectorXd& k) {
      return masses.reduced(j) * hbar * (k(j - 1) / masses.mass(j) + k.sum() / masses.mass(0));
    }));
  }
  tab.pi = g.tabulate(g.waves, [&](const Eigen::VectorXd& k) { return hbar * k.sum(); });
  tab.pi2 = g.tabulate(g.waves, [&](const Eigen::VectorXd& k) {
    const double p = hbar * k.sum();
    return p * p;
  });

  const double tmax = tab.tkin.cwiseAbs().maxCoeff();
  if (dt * tmax / hbar >= 0.5)
    throw numeric_error("evolve_relative: dt exceeds the phase-step stability budget");

  return run_split_step(s, dt, steps, snapshot_stride, Mode::relative, /*time_dependent=*/false,
                        tab, [&](double, Eigen::VectorXd& v, Eigen::VectorXd& t) {
                          v = tab.vpos;
                          t = tab.tkin;
                        });
}

EvolutionResult evolve_classical_frame(const ClassicalFrameHamiltonian& h, const GridState& s,
                                       double dt, int steps, int snapshot_stride) {
  const std::size_t N = h.masses.size();
  if (s.dim() != N)
    throw config_error("evolve_classical_frame: grid axes != particle count");
  for (const auto& term : h.potential.terms())
    if (term.j == 0)
      throw config_error("evolve_classical_frame: potential terms must not involve the frame");
  GridGeometry g(s);
  const double hbar = s.hbar();

  TrackTables tab;
  for (std::size_t a = 0; a < N; ++a) {
    tab.xj.push_back(g.tabulate(g.coords, [&](const Eigen::VectorXd& x) { return x(a); }));
    tab.gradvj.push_back(g.tabulate(
        g.coords, [&](const Eigen::VectorXd& x) { return h.potential.relative_gradient(x)(a); }));
    tab.pmom.push_back(
        g.tabulate(g.waves, [&](const Eigen::VectorXd& k) { return hbar * k(a); }));
  }
  tab.vpos = g.tabulate(g.coords, [&](const Eigen::VectorXd& x) { return h.potential.relative(x); });
  tab.tkin = g.tabulate(g.waves, [&](const Eigen::VectorXd& k) {
    double t = 0.0;
    for (std::size_t a = 0; a < N; ++a) t += hbar * hbar * k(a) * k(a) / (2.0 * h.masses[a]);
    return t;
  });
  // M X' = sum_k m_k x'_k and P' = sum_k p'_k tables for the drive terms
  const Eigen::VectorXd mx = g.tabulate(g.coords, [&](const Eigen::VectorXd& x) {
    double v = 0.0;
    for (std::size_t a = 0; a < N; ++a) v += h.masses[a] * x(a);
    return v;
  });
  const Eigen::VectorXd ptot = g.tabulate(g.waves, [&](const Eigen::VectorXd& k) {
    return hbar * k.sum();
  });

  const double tmax = tab.tkin.cwiseAbs().maxCoeff();
  if (dt * tmax / hbar >= 0.5)
    throw numeric_error("evolve_classical_frame: dt exceeds the phase-step stability budget");

  const double eps = h.epsilon;
  return run_split_step(s, dt, steps, snapshot_stride, Mode::classical, /*time_dependent=*/true,
                        tab, [&, eps](double tmid, Eigen::VectorXd& v, Eigen::VectorXd& t) {
                          const double xdot = h.trajectory.velocity(tmid);
                          const double xddot = h.trajectory.acceleration(tmid);
                          v = tab.vpos + (0.5 * (1.0 - eps) * xddot) * mx;
                          t = tab.tkin - (0.5 * (1.0 + eps) * xdot) * ptot;
                        });
}

EvolutionResult evolve_absolute(const MassConfig& masses, const PotentialSpec& pot,
                                const GridState& s, double dt, int steps, int snapshot_stride) {
  if (!s.frame().is_absolute())
    throw config_error("evolve_absolute: grid must be over absolute coordinates");
  if (s.dim() != masses.count())
    throw config_error("evolve_absolute: grid axes != particle count");
  GridGeometry g(s);
  const double hbar = masses.hbar();

  TrackTables tab;
  for (std::size_t a = 0; a < g.dims.size(); ++a) {
    tab.xj.push_back(g.tabulate(g.coords, [&](const Eigen::VectorXd& x) { return x(a); }));
    // gradient of the absolute potential via its pairwise terms
    tab.gradvj.push_back(g.tabulate(g.coords, [&](const Eigen::VectorXd& x) {
      double acc = 0.0;
      for (const auto& term : pot.terms()) {
        const double dv = term.derivative(x(term.k) - x(term.j));
        if (term.k == static_cast<int>(a)) acc += dv;
        if (term.j == static_cast<int>(a)) acc -= dv;
      }
      return acc;
    }));
    tab.pmom.push_back(
        g.tabulate(g.waves, [&](const Eigen::VectorXd& k) { return hbar * k(a); }));
  }
  tab.vpos = g.tabulate(g.coords, [&](const Eigen::VectorXd& x) { return pot.absolute(x); });
  tab.tkin = g.tabulate(g.waves, [&](const Eigen::VectorXd& k) {
    double t = 0.0;
    for (Eigen::Index a = 0; a < k.size(); ++a)
      t += hbar * hbar * k(a) * k(a) / (2.0 * masses.mass(a));
    return t;
  });

  const double tmax = tab.tkin.cwiseAbs().maxCoeff();
  if (dt * tmax / hbar >= 0.5)
    throw numeric_error("evolve_absolute: dt exceeds the phase-step stability budget");

  return run_split_step(s, dt, steps, snapshot_stride, Mode::absolute, /*time_dependent=*/false,
                        tab, [&](double, Eigen::VectorXd& v, Eigen::VectorXd& t) {
                          v = tab.vpos;
                          t = tab.tkin;
                        });
}

EhrenfestReport ehrenfest_check(const EvolutionResult& traj, const RelativeHamiltonian& h) {
  const auto steps = static_cast<Eigen::Index>(traj.times.size());
  if (steps < 5) throw config_error("ehrenfest_check: trajectory too short (< 5 samples)");
  const double dt = traj.times[1] - traj.times[0];
  const auto N = static_cast<Eigen::Index>(traj.mean_positions.cols());
  if (traj.pi_means.size() != steps)
    throw config_error("ehrenfest_check: needs a relative-mode trajectory");
  EhrenfestReport rep;
  const double m0 = h.masses.mass(0);
  for (Eigen::Index t = 1; t + 1 < steps; ++t) {
    double gsum = 0.0;
    for (Eigen::Index j = 0; j < N; ++j) gsum += traj.grad_v_means(t, j);
    const double dpi_dt = (traj.pi_means(t + 1) - traj.pi_means(t - 1)) / (2.0 * dt);
    for (Eigen::Index j = 0; j < N; ++j) {
      const double mu = h.masses.reduced(j + 1);
      const double mj = h.masses.mass(j + 1);
      const double vel =
          (traj.mean_positions(t + 1, j) - traj.mean_positions(t - 1, j)) / (2.0 * dt);
      rep.velocity_residual = std::max(
          rep.velocity_residual, std::abs(vel - traj.mean_rel_momenta(t, j) / mu));
      const double acc = (traj.mean_positions(t + 1, j) - 2.0 * traj.mean_positions(t, j) +
                          traj.mean_positions(t - 1, j)) /
                         (dt * dt);
      // two routes to the same force law: direct gradient sums and dPi/dt
      const double predicted = -traj.grad_v_means(t, j) / mj - gsum / m0;
      rep.acceleration_residual =
          std::max(rep.acceleration_residual, std::abs(acc - predicted));
      const double fictitious = -traj.grad_v_means(t, j) / mj + dpi_dt / m0;
      rep.fictitious_residual =
          std::max(rep.fictitious_residual, std::abs(acc - fictitious));
    }
  }
  return rep;
}

std::pair<double, double> pi_observable(const GridState& s) {
  if (!s.frame().is_relative_only())
    throw config_error("pi_observable: relative-coordinate grid expected");
  GridGeometry g(s);
  const double hbar = s.hbar();
  const Eigen::VectorXd pi =
      g.tabulate(g.waves, [&](const Eigen::VectorXd& k) { return hbar * k.sum(); });
  const Eigen::VectorXd pi2 = g.tabulate(g.waves, [&](const Eigen::VectorXd& k) {
    const double p = hbar * k.sum();
    return p * p;
  });
  const auto mm = momentum_means(g, s.amplitudes(), {pi, pi2});
  return {mm[0], std::sqrt(std::max(0.0, mm[1] - mm[0] * mm[0]))};
}

double relative_axis_entropy(const GridState& s, int axis) {
  std::vector<int> traced;
  for (std::size_t a = 0; a < s.dim(); ++a)
    if (static_cast<int>(a) != axis) traced.push_back(static_cast<int>(a));
  return 1.0 - partial_trace(s, traced).purity();
}

}  // namespace qrf
