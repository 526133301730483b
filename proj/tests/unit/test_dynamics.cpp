#include <doctest.h>

#include <cmath>

#include "qrf/dynamics.hpp"
#include "qrf/reduction.hpp"
#include "qrf/transforms.hpp"
#include "support.hpp"

using namespace qrf;
using namespace qrf::testing;

namespace {

GridState relative_gaussian(const MassConfig& m, const Eigen::VectorXd& centers,
                            const Eigen::VectorXd& widths, const Eigen::VectorXd& momenta,
                            const std::vector<GridAxis>& axes) {
  GaussianSuperposition psi(CoordinateFrame::relative_only(m.relative_count()), m,
                            {GaussianBranch::axis_aligned(1.0, centers, widths, momenta)});
  return rasterize(psi, axes);
}

}  // namespace

TEST_CASE("free relative flight: velocities, norm, Pi and energy") {
  MassConfig m({1.0, 1.0, 1.0});
  RelativeHamiltonian h{m, PotentialSpec({}, 3)};
  auto s0 = relative_gaussian(m, vec({0.0, 0.5}), vec({1.0, 1.0}), vec({0.4, -0.3}),
                              square_axes(2, -10.0, 10.0, 64));
  auto traj = evolve_relative(h, s0, 1e-3, 400);

  // exact linear drift: d<x_rj>/dt = <p_rj>/mu_0j
  auto rep = ehrenfest_check(traj, h);
  CHECK(rep.velocity_residual < 1e-8);

  // norm preserved to 1e-10 per 1e3 steps
  CHECK(std::abs(traj.norms(400) - traj.norms(0)) < 1e-10);
  // <Pi> is a constant of the free motion
  CHECK(std::abs(traj.pi_means(400) - traj.pi_means(0)) < 1e-10);
  // energy exactly conserved by the spectral drift
  CHECK(std::abs(traj.energies(400) - traj.energies(0)) /
            std::abs(traj.energies(0)) <
        1e-12);

  // slope against the initial spectral momenta
  const double slope = (traj.mean_positions(400, 0) - traj.mean_positions(0, 0)) / 0.4;
  CHECK(slope == doctest::Approx(traj.mean_rel_momenta(0, 0) / m.reduced(1)).epsilon(1e-8));
}

TEST_CASE("interacting pair: second-order accuracy and the force law") {
  MassConfig m({1.5, 1.0});
  PotentialTerm spring;
  spring.kind = PotentialTerm::Kind::harmonic;
  spring.j = 0;
  spring.k = 1;
  spring.spring = 4.0;
  RelativeHamiltonian h{m, PotentialSpec({spring}, 2)};
  const auto axes = std::vector<GridAxis>{GridAxis(-12.0, 12.0, 128)};
  auto s0 = relative_gaussian(m, vec({1.0}), vec({0.8}), vec({0.0}), axes);

  // Richardson on the d<Pi>/dt force-law residual: the finite-difference of
  // <Pi> against the drift is second order in dt
  auto coarse = evolve_relative(h, s0, 2e-3, 500);
  auto fine = evolve_relative(h, s0, 1e-3, 1000);
  auto rc = ehrenfest_check(coarse, h);
  auto rf = ehrenfest_check(fine, h);
  CHECK(rc.fictitious_residual / rf.fictitious_residual ==
        doctest::Approx(4.0).epsilon(0.13));
  // the direct-gradient acceleration route sits at the quadrature floor
  CHECK(rf.acceleration_residual < 1e-8);
  CHECK(rf.velocity_residual < 1e-10);

  // the fictitious-force budget at dt = 1e-3
  auto run = evolve_relative(h, s0, 1e-3, 1000);
  auto rr = ehrenfest_check(run, h);
  CHECK(rr.fictitious_residual < 1e-4);

  // energy conservation under the interaction
  const auto& e = run.energies;
  CHECK(std::abs(e(1000) - e(0)) / std::abs(e(0)) < 1e-6);
  CHECK(std::abs(run.norms(1000) - 1.0) < 1e-10);

  // a soft well shows the same second-order collapse
  PotentialTerm well;
  well.kind = PotentialTerm::Kind::gaussian_well;
  well.j = 0;
  well.k = 1;
  well.depth = 1.2;
  well.width = 1.5;
  RelativeHamiltonian hw{m, PotentialSpec({well}, 2)};
  auto wr = ehrenfest_check(evolve_relative(hw, s0, 1e-3, 500), hw);
  CHECK(wr.velocity_residual < 1e-5);
  CHECK(wr.fictitious_residual < 1e-4);
}

TEST_CASE("d<Pi>/dt equals the interaction force on the frame") {
  MassConfig m({1.0, 1.0, 1.0});
  PotentialTerm spring;
  spring.kind = PotentialTerm::Kind::harmonic;
  spring.j = 0;
  spring.k = 1;
  spring.spring = 1.0;
  RelativeHamiltonian h{m, PotentialSpec({spring}, 3)};
  auto s0 = relative_gaussian(m, vec({0.8, -0.3}), vec({0.8, 0.8}), vec({0.0, 0.0}),
                              square_axes(2, -9.0, 9.0, 64));
  auto traj = evolve_relative(h, s0, 1e-3, 500);

  // iħ dPi/dt = [Pi, V] -> d<Pi>/dt = -k <x_r1> for the harmonic frame term
  for (int t = 100; t <= 400; t += 100) {
    const double fd = (traj.pi_means(t + 1) - traj.pi_means(t - 1)) / 2e-3;
    CHECK(std::abs(fd + spring.spring * traj.mean_positions(t, 0)) < 1e-4);
  }

  // zero-momentum product state starts at <Pi> = 0
  CHECK(std::abs(traj.pi_means(0)) < 1e-12);
  auto [pi_mean, pi_sigma] = pi_observable(s0);
  CHECK(std::abs(pi_mean) < 1e-12);
  CHECK(pi_sigma > 0.0);
}

TEST_CASE("recoil coupling generates relative entanglement, heavy frames do not") {
  PotentialTerm spring;
  spring.kind = PotentialTerm::Kind::harmonic;
  spring.j = 0;
  spring.k = 1;
  spring.spring = 1.0;

  spring.spring = 16.0;  // short period keeps the free axis from spreading out

  SUBCASE("light frame") {
    MassConfig m({1.0, 1.0, 1.0});
    RelativeHamiltonian h{m, PotentialSpec({spring}, 3)};
    auto s0 = relative_gaussian(m, vec({0.9, -0.2}), vec({0.7, 0.7}), vec({0.0, 0.0}),
                                square_axes(2, -14.0, 14.0, 128));
    // the coupling is periodic: it entangles hardest mid-period
    const double period = 2.0 * M_PI / std::sqrt(spring.spring / m.reduced(1));
    const int steps = static_cast<int>(0.5 * period / 5e-4);
    auto traj = evolve_relative(h, s0, 5e-4, steps);
    CHECK(relative_axis_entropy(traj.snapshots.back().second, 0) > 1e-3);
  }

  SUBCASE("heavy frame") {
    MassConfig m({1e6, 1.0, 1.0});
    RelativeHamiltonian h{m, PotentialSpec({spring}, 3)};
    auto s0 = relative_gaussian(m, vec({0.9, -0.2}), vec({0.7, 0.7}), vec({0.0, 0.0}),
                                square_axes(2, -14.0, 14.0, 128));
    const double period = 2.0 * M_PI / std::sqrt(spring.spring / m.reduced(1));
    const int steps = static_cast<int>(0.5 * period / 5e-4);
    auto traj = evolve_relative(h, s0, 5e-4, steps);
    CHECK(relative_axis_entropy(traj.snapshots.back().second, 0) < 1e-6);
  }
}

TEST_CASE("stability and edge guards") {
  MassConfig m({1.0, 1.0});
  RelativeHamiltonian h{m, PotentialSpec({}, 2)};
  auto s0 = relative_gaussian(m, vec({0.0}), vec({1.0}), vec({0.0}),
                              {GridAxis(-10.0, 10.0, 256)});
  CHECK_THROWS_AS((void)evolve_relative(h, s0, 0.5, 10), numeric_error);

  // a hard momentum kick walks the packet off the grid
  auto kicked = relative_gaussian(m, vec({4.0}), vec({0.8}), vec({6.0}),
                                  {GridAxis(-10.0, 10.0, 128)});
  CHECK_THROWS_AS((void)evolve_relative(h, kicked, 5e-4, 2000, 100), numeric_error);
}

TEST_CASE("classical frame: every epsilon gives the same trajectories") {
  // x0(t) = a t^2 / 2
  const double a = 1.0;
  auto x0 = FrameTrajectory::polynomial(vec({0.0, 0.0, 0.5 * a}));

  SUBCASE("free particle matches the driven closed form at epsilon = -1") {
    ClassicalFrameHamiltonian h{-1.0, {1.0}, PotentialSpec({}, 2), x0};
    GaussianSuperposition psi(CoordinateFrame::classical(1), MassConfig({1.0}),
                              {GaussianBranch::axis_aligned(1.0, vec({0.3}), vec({1.0}),
                                                            vec({0.5}))});
    auto s0 = rasterize(psi, {GridAxis(-12.0, 12.0, 256)});
    const int steps = 1000;
    const double dt = 5e-4;
    auto traj = evolve_classical_frame(h, s0, dt, steps);
    for (int t = 0; t <= steps; t += 200) {
      const double tt = t * dt;
      const double want = 0.3 + 0.5 * tt - 0.5 * a * tt * tt;
      CHECK(std::abs(traj.mean_positions(t, 0) - want) < 1e-6);
    }
  }

  SUBCASE("epsilon sweep agrees pointwise with a pair interaction") {
    PotentialTerm spring;
    spring.kind = PotentialTerm::Kind::harmonic;
    spring.j = 1;
    spring.k = 2;
    spring.spring = 0.7;
    const std::vector<double> masses{1.0, 1.3};
    GaussianSuperposition psi(
        CoordinateFrame::classical(2), MassConfig(masses),
        {GaussianBranch::axis_aligned(1.0, vec({0.6, -0.4}), vec({0.8, 0.9}),
                                      vec({0.0, 0.2}))});
    auto s0 = rasterize(psi, square_axes(2, -10.0, 10.0, 64));
    const int steps = 1000;
    const double dt = 1e-3;
    EvolutionResult runs[3];
    int i = 0;
    for (double eps : {-1.0, 0.0, 1.0}) {
      ClassicalFrameHamiltonian h{eps, masses, PotentialSpec({spring}, 3), x0};
      runs[i++] = evolve_classical_frame(h, s0, dt, steps);
    }
    for (int t = 0; t <= steps; t += 100) {
      for (int k = 0; k < 2; ++k) {
        CHECK(std::abs(runs[0].mean_positions(t, k) - runs[1].mean_positions(t, k)) < 1e-6);
        CHECK(std::abs(runs[0].mean_positions(t, k) - runs[2].mean_positions(t, k)) < 1e-6);
      }
    }

    // Heisenberg force law m_k d2<x'_k>/dt2 = -<dV/dx'_k> - m_k a
    const auto& r = runs[0];
    for (int t = 200; t <= 800; t += 200) {
      for (int k = 0; k < 2; ++k) {
        const double acc = (r.mean_positions(t + 1, k) - 2.0 * r.mean_positions(t, k) +
                            r.mean_positions(t - 1, k)) /
                           (dt * dt);
        const double want = -r.grad_v_means(t, k) / masses[k] - a;
        CHECK(std::abs(acc - want) < 1e-4);
      }
    }
  }

  SUBCASE("a frame at rest reduces to the inertial engine") {
    auto rest = FrameTrajectory::polynomial(vec({0.0}));
    ClassicalFrameHamiltonian h{0.0, {1.0}, PotentialSpec({}, 2), rest};
    GaussianSuperposition psi(CoordinateFrame::classical(1), MassConfig({1.0}),
                              {GaussianBranch::axis_aligned(1.0, vec({0.0}), vec({1.0}),
                                                            vec({0.4}))});
    auto s0 = rasterize(psi, {GridAxis(-12.0, 12.0, 256)});
    auto moving = evolve_classical_frame(h, s0, 5e-4, 400);

    GaussianSuperposition psi_abs(CoordinateFrame::absolute(1), MassConfig({1.0}),
                                  {GaussianBranch::axis_aligned(1.0, vec({0.0}), vec({1.0}),
                                                                vec({0.4}))});
    auto s0_abs = rasterize(psi_abs, {GridAxis(-12.0, 12.0, 256)});
    auto inertial = evolve_absolute(MassConfig({1.0}), PotentialSpec({}, 1), s0_abs, 5e-4, 400);
    CHECK((moving.snapshots.back().second.amplitudes() -
           inertial.snapshots.back().second.amplitudes())
              .cwiseAbs()
              .maxCoeff() < 1e-10);
  }
}

TEST_CASE("center of mass factors out of the full evolution") {
  // two particles: evolve the absolute pair and compare the reduced state
  // against the directly evolved relative line
  MassConfig m({1.0, 1.4});
  PotentialTerm well;
  well.kind = PotentialTerm::Kind::gaussian_well;
  well.j = 0;
  well.k = 1;
  well.depth = 0.8;
  well.width = 1.2;

  // initial state: product of a cm packet and a relative packet
  GaussianSuperposition rel_part(
      CoordinateFrame::cm_relative(2), m,
      {GaussianBranch::axis_aligned(1.0, vec({0.0, 0.9}), vec({1.0, 0.8}), vec({0.0, 0.0}))});
  auto abs_state = apply_to_gaussian(catalog::cm_relative_inverse(m), rel_part);
  auto abs_grid = rasterize(abs_state, square_axes(2, -12.0, 12.0, 256));

  const double dt = 4e-4;
  const int steps = 500;
  auto abs_traj = evolve_absolute(m, PotentialSpec({well}, 2), abs_grid, dt, steps);

  auto rel0 = relative_gaussian(m, vec({0.9}), vec({0.8}), vec({0.0}),
                                {GridAxis(-12.0, 12.0, 256)});
  RelativeHamiltonian h{m, PotentialSpec({well}, 2)};
  auto rel_traj = evolve_relative(h, rel0, dt, steps);

  // reduce the evolved absolute state and compare kernels on the same axis
  const auto& final_abs = abs_traj.snapshots.back().second;
  auto moved = apply_to_grid(catalog::cm_relative(m), final_abs,
                             square_axes(2, -12.0, 12.0, 256));
  auto rho_from_abs = partial_trace(moved, {0});
  const auto& final_rel = rel_traj.snapshots.back().second;
  Eigen::MatrixXcd rho_direct =
      final_rel.amplitudes() * final_rel.amplitudes().adjoint();
  CHECK((rho_from_abs.rho - rho_direct).cwiseAbs().maxCoeff() < 1e-5);

  // purity of the relative block stays 1 along the way
  for (const auto& [t, snap] : abs_traj.snapshots) {
    auto shot = apply_to_grid(catalog::cm_relative(m), snap, square_axes(2, -12.0, 12.0, 256));
    CHECK(partial_trace(shot, {0}).purity() == doctest::Approx(1.0).epsilon(1e-5));
  }
}

TEST_CASE("tabulated potential matches its analytic source") {
  std::vector<double> xs, ys;
  for (int i = 0; i <= 200; ++i) {
    const double x = -10.0 + 0.1 * i;
    xs.push_back(x);
    ys.push_back(0.5 * 0.7 * x * x);
  }
  PotentialTerm tab;
  tab.kind = PotentialTerm::Kind::tabulated;
  tab.j = 0;
  tab.k = 1;
  tab.table = CubicSpline(xs, ys);
  for (double x : {-3.05, -0.17, 0.0, 1.33, 4.71}) {
    CHECK(tab.value(x) == doctest::Approx(0.35 * x * x).epsilon(1e-6));
    CHECK(tab.derivative(x) == doctest::Approx(0.7 * x).epsilon(1e-4));
  }
}
