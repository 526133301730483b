#include <doctest.h>

#include <cmath>
#include <random>

#include "qrf/observables.hpp"
#include "qrf/reduction.hpp"
#include "qrf/transforms.hpp"
#include "support.hpp"

using namespace qrf;
using namespace qrf::testing;

TEST_CASE("catalog transforms are symplectic to 1e-12") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> um(0.2, 9.0);
  for (int trial = 0; trial < 20; ++trial) {
    MassConfig m2({um(rng), um(rng)});
    MassConfig m3({um(rng), um(rng), um(rng)});
    MassConfig m4({um(rng), um(rng), um(rng), um(rng)});
    CHECK(catalog::cm_relative(m2).symplectic_defect() < 1e-12);
    CHECK(catalog::cm_relative(m3).symplectic_defect() < 1e-12);
    CHECK(catalog::cm_relative(m4).symplectic_defect() < 1e-12);
    CHECK(catalog::cm_relative_inverse(m3).symplectic_defect() < 1e-12);
    CHECK(catalog::xrpi3(m3).symplectic_defect() < 1e-12);
    CHECK(catalog::qpr3(m3).symplectic_defect() < 1e-12);
    CHECK(catalog::ak(m2).symplectic_defect() < 1e-12);
    // compositions stay symplectic
    const auto round = compose(catalog::cm_relative_inverse(m3), catalog::cm_relative(m3));
    CHECK(round.symplectic_defect() < 1e-12);
    CHECK((round.position_block - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <
          1e-12);
    // the explicit inverse map matches the numeric inverse
    const auto inv = catalog::cm_relative(m3).inverse();
    CHECK((inv.position_block - catalog::cm_relative_inverse(m3).position_block)
              .cwiseAbs()
              .maxCoeff() < 1e-12);
    CHECK((inv.momentum_block - catalog::cm_relative_inverse(m3).momentum_block)
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
}

TEST_CASE("cm_relative maps centers (0,2) to (1,2) at equal masses") {
  MassConfig m({1.0, 1.0});
  auto psi = product_state(m, vec({0.0, 2.0}), vec({1.0, 1.0}), vec({0.0, 0.0}));
  auto rel = apply_to_gaussian(catalog::cm_relative(m), psi);
  CHECK(rel.branches()[0].centers(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rel.branches()[0].centers(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(inner_product(rel, rel) - 1.0) < 1e-12);
}

TEST_CASE("identity transform leaves branches unchanged") {
  MassConfig m({1.0, 2.0});
  auto psi = two_branch(m, vec({0.0, 0.5}), vec({1.0, -0.5}), vec({1.0, 0.8}), 0.7);
  auto same = apply_to_gaussian(catalog::identity(psi.frame()), psi);
  for (std::size_t b = 0; b < psi.branches().size(); ++b) {
    CHECK((psi.branches()[b].centers - same.branches()[b].centers).cwiseAbs().maxCoeff() <
          1e-15);
    CHECK((psi.branches()[b].covariance - same.branches()[b].covariance)
              .cwiseAbs()
              .maxCoeff() < 1e-15);
  }
}

TEST_CASE("qpr3 centers at unit masses: q1 of (0,1,2) vanishes, gamma = 4/3") {
  MassConfig m({1.0, 1.0, 1.0});
  CHECK(m.gamma3() == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  auto psi = product_state(m, vec({0.0, 1.0, 2.0}), vec({1.0, 1.0, 1.0}), vec({0, 0, 0}));
  auto q = apply_to_gaussian(catalog::qpr3(m), psi);
  // q1 = gamma (x1 - (x0 + x2)/2) = 4/3 (1 - 1) = 0
  CHECK(std::abs(q.branches()[0].centers(1)) < 1e-14);
  // q2 = gamma (x2 - (x0 + x1)/2) = 4/3 (2 - 1/2) = 2
  CHECK(q.branches()[0].centers(2) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("grid transform matches the exact gaussian route") {
  MassConfig m({1.0, 2.0});
  auto psi = two_branch(m, vec({-0.4, 0.3}), vec({0.9, 0.9}), vec({0.9, 1.1}), 0.4);
  auto grid = rasterize(psi, square_axes(2, -14.0, 14.0, 256));
  const auto t = catalog::cm_relative(m);
  const auto target = square_axes(2, -14.0, 14.0, 256);
  auto moved = apply_to_grid(t, grid, target);
  auto exact = rasterize_transformed(t, psi, target);
  CHECK((moved.amplitudes() - exact.amplitudes()).cwiseAbs().maxCoeff() < 1e-5);
  CHECK(std::abs(moved.norm2() - 1.0) < 1e-12);
}

TEST_CASE("heavy sharp frame: relative state equals the shifted external one") {
  // m0 = 1e3 m1 with phi0 sharp: rho_r approaches the projector onto
  // phi1(. + x0bar), the external description shifted into the frame.
  // The joint regime needs m0 D0^2 >> m1 D1^2 as well as D0 << D1; at the
  // pinned mass ratio that puts D0 near D1 sqrt(m1/m0).
  MassConfig m({1000.0, 1.0});
  const double x0bar = 0.3;
  const double d1 = 0.0316;
  auto psi = product_state(m, vec({x0bar, 1.1}), vec({1e-3, d1}), vec({0.0, 0.0}));
  const GridAxis chi(1.1 - x0bar - 8.0 * d1, 1.1 - x0bar + 8.0 * d1, 128);
  auto rho = reduce_relative(psi, {chi});

  auto shifted = GaussianSuperposition(
      CoordinateFrame::relative_only(1), m,
      {GaussianBranch::axis_aligned(1.0, vec({1.1 - x0bar}), vec({d1}), vec({0.0}))});
  Eigen::MatrixXcd proj(chi.n, chi.n);
  for (int i = 0; i < chi.n; ++i)
    for (int j = 0; j < chi.n; ++j)
      proj(i, j) = shifted.evaluate(vec({chi.coord(i)})) *
                   std::conj(shifted.evaluate(vec({chi.coord(j)})));
  CHECK((rho.rho - proj).cwiseAbs().maxCoeff() * rho.cell_volume() < 1e-3);
  CHECK(rho.purity() > 0.999);
}

TEST_CASE("identity grid transform with the same axes is exact") {
  MassConfig m({1.0, 1.0});
  auto psi = product_state(m, vec({0.0, 1.0}), vec({1.0, 1.0}), vec({0.3, 0.0}));
  auto grid = rasterize(psi, square_axes(2, -9.0, 9.0, 64));
  auto same = apply_to_grid(catalog::identity(grid.frame()), grid, grid.axes());
  CHECK((same.amplitudes() - grid.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("grid transform detects clipped support") {
  MassConfig m({1.0, 1.0});
  auto psi = product_state(m, vec({0.0, 6.0}), vec({1.0, 1.0}), vec({0.0, 0.0}));
  auto grid = rasterize(psi, {GridAxis(-8, 8, 64), GridAxis(-2, 14, 64)});
  // cm+relative image of x_r1 = x1 - x0 = 6 does not fit in [-2, 2]
  CHECK_THROWS_AS(
      apply_to_grid(catalog::cm_relative(m), grid,
                    {GridAxis(-2, 14, 64), GridAxis(-2, 2, 64)}),
      numeric_error);
}

TEST_CASE("round trip through the inverse returns the original grid") {
  MassConfig m({2.0, 1.0});
  auto psi = product_state(m, vec({0.2, 0.9}), vec({0.8, 1.0}), vec({0.0, -0.4}));
  auto grid = rasterize(psi, square_axes(2, -12.0, 12.0, 512));
  const auto fwd = catalog::cm_relative(m);
  const auto bwd = catalog::cm_relative_inverse(m);
  auto mid = apply_to_grid(fwd, grid, square_axes(2, -12.0, 12.0, 512));
  auto back = apply_to_grid(bwd, mid, grid.axes());
  CHECK((back.amplitudes() - grid.amplitudes()).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("ak q1 marginal equals the cm_relative x_r1 marginal") {
  MassConfig m({1.0, 2.5});
  auto psi = two_branch(m, vec({0.0, 0.4}), vec({0.7, -0.7}), vec({0.9, 1.0}), 0.2);
  const GridAxis axis(-9.0, 9.0, 256);
  // both coordinates are x1 - x0; compare the diagonal of the two reductions
  auto rho_ak = ak_reduce(psi, axis);
  auto rho_rel = reduce_relative(psi, {axis});
  CHECK((rho_ak.diagonal() - rho_rel.diagonal()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("commutator table from the blocks") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> um(0.3, 5.0);
  for (int trial = 0; trial < 10; ++trial) {
    MassConfig m({um(rng), um(rng), um(rng)});
    const auto cm = catalog::cm_relative(m);
    const auto q = catalog::qpr3(m);
    for (int j = 1; j <= 2; ++j) {
      for (int k = 1; k <= 2; ++k) {
        // [x_rj, pi_k] = i hbar delta_jk
        const double c_pi = commutator_coefficient(cm.position_block.row(j).transpose(),
                                                   cm.momentum_block.row(k).transpose());
        CHECK(std::abs(c_pi - (j == k ? 1.0 : 0.0)) < 1e-12);
        // [x_rj, p_rk] = i hbar (delta_jk + (1 - delta_jk) m_k/(m0 + m_k))
        const double c_pr = commutator_coefficient(cm.position_block.row(j).transpose(),
                                                   q.momentum_block.row(k).transpose());
        const double want = j == k ? 1.0 : m.mass(k) / (m.mass(0) + m.mass(k));
        CHECK(std::abs(c_pr - want) < 1e-12);
        // [q_j, p_rk] = i hbar delta_jk (conjugate pairs of the second family)
        const double c_q = commutator_coefficient(q.position_block.row(j).transpose(),
                                                  q.momentum_block.row(k).transpose());
        CHECK(std::abs(c_q - (j == k ? 1.0 : 0.0)) < 1e-12);
      }
    }
  }
}

TEST_CASE("relative momentum shift: kickback moves the other relative coordinate") {
  MassConfig m({1.0, 1.0, 1.0});
  auto abs = product_state(m, vec({0.0, 0.6, -0.4}), vec({1, 1, 1}), vec({0, 0, 0}));
  auto rel = apply_to_gaussian(catalog::cm_relative(m), abs);

  SUBCASE("equal masses: delta/2 on the spectator") {
    auto shifted = relative_momentum_shift(rel, 1, 1.0);
    const auto& before = rel.branches()[0].centers;
    const auto& after = shifted.branches()[0].centers;
    CHECK(after(0) - before(0) == doctest::Approx(0.0).epsilon(1e-14));  // x_cm untouched
    CHECK(after(1) - before(1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(after(2) - before(2) == doctest::Approx(0.5).epsilon(1e-14));
  }

  SUBCASE("grid backend agrees") {
    auto grid = rasterize(rel, square_axes(3, -12.0, 12.0, 64));
    auto shifted = relative_momentum_shift(grid, 1, 0.6);
    auto exact = rasterize(relative_momentum_shift(rel, 1, 0.6), grid.axes());
    CHECK((shifted.amplitudes() - exact.amplitudes()).cwiseAbs().maxCoeff() *
              std::sqrt(grid.cell_volume()) <
          1e-6);
  }

  SUBCASE("heavy frame: no kickback") {
    MassConfig heavy({1e6, 1.0, 1.0});
    auto abs_h = product_state(heavy, vec({0.0, 0.6, -0.4}), vec({1, 1, 1}), vec({0, 0, 0}));
    auto rel_h = apply_to_gaussian(catalog::cm_relative(heavy), abs_h);
    auto shifted = relative_momentum_shift(rel_h, 1, 1.0);
    CHECK(std::abs(shifted.branches()[0].centers(2) - rel_h.branches()[0].centers(2)) < 1e-5);
  }

  SUBCASE("zero shift is the identity") {
    auto shifted = relative_momentum_shift(rel, 2, 0.0);
    CHECK((shifted.branches()[0].centers - rel.branches()[0].centers).cwiseAbs().maxCoeff() ==
          0.0);
  }
}
