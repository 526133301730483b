#include <doctest.h>

#include <cmath>

#include "qrf/report_io.hpp"
#include "qrf/scenarios.hpp"
#include "qrf/reduction.hpp"
#include "support.hpp"

using namespace qrf;

TEST_CASE("detector probabilities always split the unit") {
  for (double phase : {0.0, M_PI / 2.0, 1.3}) {
    for (std::complex<double> o : {std::complex<double>(1.0, 0.0),
                                   std::complex<double>(0.3, -0.2),
                                   std::complex<double>(0.0, 0.0)}) {
      auto [p1, p2] = detector_probabilities(o, phase);
      CHECK(p1 + p2 == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(p1 >= 0.0);
      CHECK(p2 >= 0.0);
    }
  }
  // pi/2 convention: full coherence darkens port 2
  auto [bright, dark] = detector_probabilities({1.0, 0.0}, M_PI / 2.0);
  CHECK(bright == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dark == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("board scenario") {
  ScenarioConfig cfg;
  cfg.id = "board";
  cfg.m_p = 1.0;
  cfg.m_b = 3.0;
  cfg.L = 1.0;

  SUBCASE("recoil formula and bookkeeping") {
    auto rep = run_board(cfg);
    CHECK(rep.recoil == doctest::Approx(0.5).epsilon(1e-15));  // 2L m_p/(m_p+m_b)
    // the board itself holds no which-way record: the phase stays observable
    // inside even though the external frame has lost it
    CHECK(rep.phase_accessible);
    CHECK(rep.port1_probability + rep.port2_probability == doctest::Approx(1.0).epsilon(1e-12));
    // a single initial cm center: branch centers share the mass-weighted mean
    CHECK(rep.center_spread < 1e-12);
    // cm column of the relative table equals d/2 in both branches
    const auto& rel = rep.branch_tables[1];
    CHECK(rel.centers[0][0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(rel.centers[1][0] == doctest::Approx(0.25).epsilon(1e-12));
  }

  SUBCASE("massive board recovers the lab interferometer") {
    cfg.m_b = 1e6;
    auto rep = run_board(cfg);
    CHECK(rep.recoil < 3e-6);
    CHECK(rep.visibility_external > 1.0 - 1e-6);
    CHECK(rep.port2_probability < 1e-3);
  }

  SUBCASE("comparable masses leak which-way information") {
    // d = 0.5 >> width: the board records the path
    auto rep = run_board(cfg);
    CHECK(rep.visibility_external < 1e-5);  // exp(-d^2/8w^2) ~ 4e-6
    CHECK(std::abs(rep.port1_probability - 0.5) < 1e-5);
    CHECK(std::abs(rep.port2_probability - 0.5) < 1e-5);
  }

  SUBCASE("visibility ties to the purity of the record subsystem") {
    cfg.m_b = 40.0;  // d = 2/41: partially resolved against width 0.05
    auto rep = run_board(cfg);
    const MassConfig masses({cfg.m_b, cfg.m_p});
    Eigen::VectorXd c1(2), c2(2), w(2);
    const double d = rep.recoil;
    c1 << d, -cfg.L + d;
    c2 << 0.0, cfg.L;
    w << cfg.width, cfg.width;
    GaussianSuperposition psi(
        CoordinateFrame::absolute(2), masses,
        {GaussianBranch::axis_aligned(1.0, c1, w, Eigen::VectorXd::Zero(2)),
         GaussianBranch::axis_aligned(std::exp(std::complex<double>(0, cfg.phase)), c2, w,
                                      Eigen::VectorXd::Zero(2))});
    const double record_purity = subsystem_purity(psi, {1});  // trace the particle
    CHECK(std::sqrt(2.0 * record_purity - 1.0) ==
          doctest::Approx(rep.visibility_external).epsilon(1e-8));
    CHECK(rep.visibility_external > 0.05);
    CHECK(rep.visibility_external < 0.95);
  }

  SUBCASE("width guard") {
    cfg.width = 0.2;  // > L/20
    CHECK_THROWS_AS((void)run_board(cfg), config_error);
  }
}

TEST_CASE("board with the measuring device") {
  ScenarioConfig cfg;
  cfg.id = "board-md";
  cfg.m_p = 1.0;
  cfg.m_b = 1.0;
  cfg.m_md = 2.0;
  cfg.L = 1.0;

  SUBCASE("external attachment: the MD and the board record the path") {
    cfg.attachment = "external";
    auto rep = run_board_with_md(cfg);
    CHECK(rep.scenario == "board-md-external");
    // both detectors click
    CHECK(rep.port1_probability == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(rep.port2_probability == doctest::Approx(0.5).epsilon(1e-6));
    // seen from the board, the record sits in the MD coordinate
    CHECK(rep.visibility_internal < 1e-6);
    CHECK(rep.center_spread < 1e-9);
    // the board coordinate records the path inside the MD frame
    CHECK_FALSE(rep.phase_accessible);
  }

  SUBCASE("board attachment: which-way erased before detection") {
    cfg.attachment = "board";
    auto rep = run_board_with_md(cfg);
    CHECK(rep.scenario == "board-md-board");
    CHECK(rep.recoil == doctest::Approx(0.5).epsilon(1e-15));  // 2L/(1+1+2)
    // mid-flight the interferometer as a whole records the path externally
    CHECK(rep.visibility_external < 1e-6);
    // but not internally: the board and MD agree on the phase
    CHECK(rep.visibility_internal > 1.0 - 1e-9);
    // the closing beam splitter merges the branch centers
    CHECK(rep.final_branch_overlap > 1.0 - 1e-6);
    CHECK(rep.port2_probability < 1e-3);
    CHECK(rep.center_spread < 1e-12);
    CHECK(rep.phase_accessible);
  }

  SUBCASE("unknown attachment") {
    cfg.attachment = "sideways";
    CHECK_THROWS_AS((void)run_board_with_md(cfg), config_error);
  }
}

TEST_CASE("third particle: a distant mass decides the accessibility") {
  ScenarioConfig cfg;
  cfg.id = "third-particle";
  cfg.m_md = 1.0;
  cfg.m_p = 1.0;
  cfg.L = 1.0;
  cfg.x = 0.0;

  SUBCASE("light third particle: the cm records the path") {
    cfg.m_3 = 1.0;
    auto rep = run_third_particle(cfg);
    CHECK(rep.relative_purity < 0.9);
    CHECK_FALSE(rep.phase_accessible);
  }

  SUBCASE("heavy third particle plays the external frame") {
    cfg.m_3 = 1e6;
    auto rep = run_third_particle(cfg);
    CHECK(rep.relative_purity > 1.0 - 1e-4);
    CHECK(rep.phase_accessible);

    // S on the second relative family approaches the heavy-limit pair
    CHECK((rep.s_qpr_exact - rep.s_qpr_limit).cwiseAbs().maxCoeff() /
              rep.s_qpr_limit.cwiseAbs().maxCoeff() <
          1e-6);
    // pi-basis: S = 2L((m_p/M) pi_cm + pi_p)
    CHECK(rep.s_pi_exact(0) ==
          doctest::Approx(2.0 * cfg.L * cfg.m_p / (cfg.m_md + cfg.m_p + cfg.m_3))
              .epsilon(1e-12));
    CHECK(rep.s_pi_exact(1) == doctest::Approx(2.0 * cfg.L).epsilon(1e-14));
    CHECK(rep.s_pi_truncated(0) == 0.0);
  }

  SUBCASE("the distance of the third particle is irrelevant") {
    cfg.m_3 = 1e6;
    auto near = run_third_particle(cfg);
    cfg.x = 1000.0 * cfg.L;
    auto far = run_third_particle(cfg);
    CHECK(near.phase_accessible == far.phase_accessible);
    CHECK(near.relative_purity == doctest::Approx(far.relative_purity).epsilon(1e-9));

    cfg.m_3 = 1.0;
    auto far_light = run_third_particle(cfg);
    cfg.x = 0.0;
    auto near_light = run_third_particle(cfg);
    CHECK(near_light.phase_accessible == far_light.phase_accessible);
  }
}

TEST_CASE("reports are pure functions of the configuration") {
  ScenarioConfig cfg;
  cfg.id = "third-particle";
  cfg.m_3 = 1e6;
  auto a = scenario_report_json(run_scenario(cfg)).dump(2);
  auto b = scenario_report_json(run_scenario(cfg)).dump(2);
  CHECK(a == b);
  CHECK(a.find("\"schema\": \"qrf-report/1\"") != std::string::npos);
}
