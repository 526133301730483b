#include "qrf/scenarios.hpp"

#include <cmath>

#include "qrf/phase_probe.hpp"
#include "qrf/reduction.hpp"
#include "qrf/transforms.hpp"

namespace qrf {

void ScenarioConfig::validate() const {
  if (!(m_p > 0 && m_b > 0 && m_md > 0 && m_3 > 0))
    throw config_error("scenario: masses must be positive");
  if (!(width > 0) || width > L / 20.0)
    throw config_error("scenario: width must satisfy 0 < width <= L/20");
  if (!(sharp_ratio > 0) || sharp_ratio > 1.0)
    throw config_error("scenario: sharp_ratio must lie in (0, 1]");
}

std::pair<double, double> detector_probabilities(std::complex<double> record_overlap,
                                                 double phase) {
  const std::complex<double> i(0.0, 1.0);
  const double cross = (i * std::exp(-i * phase) * record_overlap).real();
  return {0.5 * (1.0 + cross), 0.5 * (1.0 - cross)};
}

namespace {

GaussianSuperposition two_branch_state(const MassConfig& masses,
                                       const Eigen::VectorXd& centers1,
                                       const Eigen::VectorXd& centers2,
                                       const Eigen::VectorXd& widths, double phase) {
  const Eigen::VectorXd k0 = Eigen::VectorXd::Zero(centers1.size());
  std::vector<GaussianBranch> branches;
  branches.push_back(GaussianBranch::axis_aligned(1.0, centers1, widths, k0));
  branches.push_back(GaussianBranch::axis_aligned(std::exp(std::complex<double>(0, phase)),
                                                  centers2, widths, k0));
  return GaussianSuperposition(CoordinateFrame::absolute(masses.count()), masses,
                               std::move(branches));
}

// <rec_2|rec_1> over a coordinate subset of a two-branch axis-aligned state.
std::complex<double> record_overlap(const GaussianSuperposition& s,
                                    const std::vector<int>& coords) {
  const auto& b1 = s.branches()[0];
  const auto& b2 = s.branches()[1];
  std::complex<double> o = 1.0;
  for (int c : coords) {
    Eigen::VectorXd c1(1), c2(1), w1(1), w2(1), k1(1), k2(1);
    c1 << b1.centers(c);
    c2 << b2.centers(c);
    w1 << b1.width(c);
    w2 << b2.width(c);
    k1 << b1.momentum_offsets(c);
    k2 << b2.momentum_offsets(c);
    const auto g1 = GaussianBranch::axis_aligned(1.0, c1, w1, k1);
    const auto g2 = GaussianBranch::axis_aligned(1.0, c2, w2, k2);
    o *= branch_overlap(g2, g1, s.hbar());
  }
  return o;
}

BranchTable table_of(const std::string& name, const GaussianSuperposition& s) {
  BranchTable t;
  t.coordinates = name;
  t.labels = s.frame().positions();
  for (const auto& b : s.branches()) {
    std::vector<double> row(b.centers.data(), b.centers.data() + b.centers.size());
    t.centers.push_back(row);
  }
  return t;
}

double center_spread(const GaussianSuperposition& s) {
  const auto& m = s.masses();
  double lo = 1e300, hi = -1e300;
  for (const auto& b : s.branches()) {
    double c = 0.0;
    for (std::size_t i = 0; i < m.count(); ++i) c += m.mass(i) * b.centers(i);
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  return hi - lo;
}

}  // namespace

ScenarioReport run_board(const ScenarioConfig& cfg) {
  cfg.validate();
  ScenarioReport rep;
  rep.scenario = "board";
  const double d = 2.0 * cfg.L * cfg.m_p / (cfg.m_p + cfg.m_b);
  rep.recoil = d;

  // particle 0 = board (the candidate frame), particle 1 = impinging particle
  const MassConfig masses({cfg.m_b, cfg.m_p});
  Eigen::VectorXd c1(2), c2(2), w(2);
  c1 << d, -cfg.L + d;
  c2 << 0.0, cfg.L;
  w << cfg.width, cfg.width;
  const auto psi = two_branch_state(masses, c1, c2, w, cfg.phase);

  const std::complex<double> o = record_overlap(psi, {0});  // board is the record
  rep.visibility_external = std::abs(o);
  std::tie(rep.port1_probability, rep.port2_probability) =
      detector_probabilities(o, cfg.phase);

  const auto rel = apply_to_gaussian(catalog::cm_relative(masses), psi);
  rep.relative_purity = subsystem_purity(rel, {0});
  // the phase survives for the board iff nothing outside the particle's
  // relative coordinate records the path; here that is the cm alone
  rep.phase_accessible = std::abs(record_overlap(rel, {0})) > 1.0 - 1e-4;
  rep.center_spread = center_spread(psi);
  rep.branch_tables.push_back(table_of("absolute (board, particle)", psi));
  rep.branch_tables.push_back(table_of("cm_relative", rel));
  return rep;
}

ScenarioReport run_board_with_md(const ScenarioConfig& cfg) {
  cfg.validate();
  ScenarioReport rep;
  const bool external = cfg.attachment == "external";
  if (!external && cfg.attachment != "board")
    throw config_error("board-md: attachment must be 'external' or 'board'");
  rep.scenario = external ? "board-md-external" : "board-md-board";

  if (external) {
    // The MD plays the external frame: apparent mass 10^6 x everything else,
    // sharply localized at the origin.
    const double m_md = 1e6 * std::max(cfg.m_p, cfg.m_b);
    const double d = 2.0 * cfg.L * cfg.m_p / (cfg.m_p + cfg.m_b);
    rep.recoil = d;
    const MassConfig masses({m_md, cfg.m_b, cfg.m_p});
    Eigen::VectorXd c1(3), c2(3), w(3);
    c1 << 0.0, d, -cfg.L + d;
    c2 << 0.0, 0.0, cfg.L;
    w << cfg.sharp_ratio * cfg.width, cfg.width, cfg.width;
    const auto psi = two_branch_state(masses, c1, c2, w, cfg.phase);

    // Which-way record available to the MD: the board.
    const std::complex<double> o = record_overlap(psi, {0, 1});
    rep.visibility_external = std::abs(o);
    std::tie(rep.port1_probability, rep.port2_probability) =
        detector_probabilities(o, cfg.phase);

    const auto rel_md = apply_to_gaussian(catalog::cm_relative(masses), psi);
    rep.relative_purity = subsystem_purity(rel_md, {0});
    // the board coordinate inside the MD frame still records the path
    rep.phase_accessible = std::abs(record_overlap(rel_md, {0, 1})) > 1.0 - 1e-4;

    // Seen from the board, the MD itself records the path.
    const MassConfig board_frame({cfg.m_b, m_md, cfg.m_p});
    Eigen::VectorXd b1(3), b2(3), wb(3);
    b1 << d, 0.0, -cfg.L + d;
    b2 << 0.0, 0.0, cfg.L;
    wb << cfg.width, cfg.sharp_ratio * cfg.width, cfg.width;
    const auto psi_board = two_branch_state(board_frame, b1, b2, wb, cfg.phase);
    const auto rel_board = apply_to_gaussian(catalog::cm_relative(board_frame), psi_board);
    rep.visibility_internal = std::abs(record_overlap(rel_board, {1}));  // r'_MD record

    rep.center_spread = center_spread(psi);
    rep.branch_tables.push_back(table_of("absolute (MD, board, particle)", psi));
    rep.branch_tables.push_back(table_of("cm_relative (MD frame)", rel_md));
    rep.branch_tables.push_back(table_of("cm_relative (board frame)", rel_board));
    return rep;
  }

  // MD rigidly attached to the board: the pair recoils together.
  const double dp = 2.0 * cfg.L * cfg.m_p / (cfg.m_p + cfg.m_b + cfg.m_md);
  rep.recoil = dp;
  const MassConfig masses({cfg.m_md, cfg.m_b, cfg.m_p});
  Eigen::VectorXd c1(3), c2(3), w(3);
  c1 << dp, dp, -cfg.L + dp;
  c2 << 0.0, 0.0, cfg.L;
  w << cfg.width, cfg.width, cfg.width;
  const auto psi_mid = two_branch_state(masses, c1, c2, w, cfg.phase);

  // Mid-flight: the moving interferometer still carries which-way information
  // externally, none internally.
  rep.visibility_external = std::abs(record_overlap(psi_mid, {0, 1}));
  const auto rel_md = apply_to_gaussian(catalog::cm_relative(masses), psi_mid);
  rep.visibility_internal = std::abs(record_overlap(rel_md, {1}));
  rep.relative_purity = subsystem_purity(rel_md, {0});
  // cm and the rigidly attached board both keep quiet about the path
  rep.phase_accessible = std::abs(record_overlap(rel_md, {0, 1})) > 1.0 - 1e-4;

  // Momentum bookkeeping through the closing beam splitter: both branches
  // converge on the same centers, erasing the external record right before
  // detection.
  Eigen::VectorXd cf(3);
  cf << dp, dp, -cfg.L + dp;
  const auto psi_final = two_branch_state(masses, cf, cf, w, cfg.phase);
  rep.final_branch_overlap = std::abs(record_overlap(psi_final, {0, 1, 2}));
  std::tie(rep.port1_probability, rep.port2_probability) =
      detector_probabilities(record_overlap(psi_final, {0, 1}), cfg.phase);

  rep.center_spread = center_spread(psi_mid);
  rep.branch_tables.push_back(table_of("absolute (MD, board, particle)", psi_mid));
  rep.branch_tables.push_back(table_of("cm_relative (MD frame)", rel_md));
  rep.branch_tables.push_back(table_of("absolute final (MD, board, particle)", psi_final));
  return rep;
}

ScenarioReport run_third_particle(const ScenarioConfig& cfg) {
  cfg.validate();
  ScenarioReport rep;
  rep.scenario = "third-particle";
  rep.recoil = 0.0;

  // particle 0 = MD (the candidate frame), 1 = impinging particle, 2 = third
  const MassConfig masses({cfg.m_md, cfg.m_p, cfg.m_3});
  Eigen::VectorXd c1(3), c2(3), w(3);
  c1 << 0.0, -cfg.L, cfg.x;
  c2 << 0.0, cfg.L, cfg.x;
  // The distant particle sits in a sharp state; the MD is light and free.
  w << cfg.width, cfg.width, cfg.sharp_ratio * cfg.width;
  const auto psi = two_branch_state(masses, c1, c2, w, cfg.phase);

  const auto rel = apply_to_gaussian(catalog::cm_relative(masses), psi);
  rep.relative_purity = subsystem_purity(rel, {0});
  // everything but r_p must stay coherent: the cm and the distant particle
  rep.phase_accessible = std::abs(record_overlap(rel, {0, 2})) > 1.0 - 1e-4;

  // cm record coherence between the branches (the entanglement witness).
  rep.visibility_external = std::abs(record_overlap(rel, {0}));
  std::tie(rep.port1_probability, rep.port2_probability) =
      detector_probabilities(record_overlap(rel, {0}), cfg.phase);

  // Shift-operator decompositions for S = 2L p_p.
  Eigen::VectorXd delta(3);
  delta << 0.0, 2.0 * cfg.L, 0.0;
  const auto qpr = decompose_shift(delta, masses, "qpr3");
  rep.s_qpr_labels = qpr.momentum_labels;
  rep.s_qpr_exact = qpr.coefficients;
  rep.s_qpr_limit = Eigen::VectorXd::Zero(3);
  rep.s_qpr_limit(1) = 2.0 * cfg.L * (1.0 + cfg.m_p / cfg.m_md);
  rep.s_qpr_limit(2) = -2.0 * cfg.L * cfg.m_p / cfg.m_md;
  const auto piform = heavy_limit_pi_form(delta, masses);
  rep.s_pi_labels = piform.labels;
  rep.s_pi_exact = piform.exact;
  rep.s_pi_truncated = piform.truncated;

  rep.center_spread = center_spread(psi);
  rep.branch_tables.push_back(table_of("absolute (MD, particle, third)", psi));
  rep.branch_tables.push_back(table_of("cm_relative (MD frame)", rel));
  return rep;
}

ScenarioReport run_scenario(const ScenarioConfig& cfg) {
  if (cfg.id == "board") return run_board(cfg);
  if (cfg.id == "board-md") return run_board_with_md(cfg);
  if (cfg.id == "third-particle") return run_third_particle(cfg);
  throw config_error("unknown scenario '" + cfg.id + "'");
}

}  // namespace qrf
