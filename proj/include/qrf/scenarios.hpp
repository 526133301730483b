#pragma once
#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "qrf/gaussian_state.hpp"

namespace qrf {

// Interferometer scenarios driven entirely by momentum-conservation
// bookkeeping on branch centers: a particle impinging on a free board, the
// same setup with a measuring device attached outside or to the board, and
// the distant third particle that silently plays the reference frame.
struct ScenarioConfig {
  std::string id;                  // board | board-md | third-particle
  std::string attachment = "external";  // board-md: external | board
  double m_p = 1.0;                // impinging particle
  double m_b = 3.0;                // board
  double m_md = 2.0;               // measuring device (board attachment case)
  double m_3 = 1.0;                // third particle
  double L = 1.0;                  // interferometer arm
  double x = 0.0;                  // third-particle position
  double phase = M_PI / 2.0;       // beam-splitter phase
  double width = 0.05;             // impinging-particle Gaussian width
  double sharp_ratio = 0.005;      // sharp states' width as a fraction of `width`

  void validate() const;  // width <= L/20 and positive masses
};

struct BranchTable {
  std::string coordinates;                    // which coordinate system
  std::vector<std::string> labels;
  std::vector<std::vector<double>> centers;   // one row per branch
};

struct ScenarioReport {
  std::string scenario;
  double recoil = 0.0;                // d = 2L m_p/(m_p+m_b) or d'
  double visibility_external = 0.0;   // |<record_1|record_2>| in absolute coordinates
  double visibility_internal = -1.0;  // from the frame's own perspective; <0 = n/a
  double port1_probability = 0.0;
  double port2_probability = 0.0;
  double relative_purity = 0.0;       // purity of the relative block (cm traced)
  bool phase_accessible = false;      // relative purity > 1 - 1e-4
  double final_branch_overlap = -1.0; // board-attached MD after full traversal
  double center_spread = 0.0;         // mass-weighted center mismatch across branches
  std::vector<BranchTable> branch_tables;
  // third-particle shift-operator decompositions
  std::vector<std::string> s_qpr_labels;
  Eigen::VectorXd s_qpr_exact;
  Eigen::VectorXd s_qpr_limit;
  std::vector<std::string> s_pi_labels;
  Eigen::VectorXd s_pi_exact;
  Eigen::VectorXd s_pi_truncated;
};

ScenarioReport run_board(const ScenarioConfig& cfg);
ScenarioReport run_board_with_md(const ScenarioConfig& cfg);
ScenarioReport run_third_particle(const ScenarioConfig& cfg);
ScenarioReport run_scenario(const ScenarioConfig& cfg);

// Interference of a two-branch state at the closing beam splitter: the record
// overlap o = <rec_2|rec_1> sets P = 1/2 (1 +- Re(i e^{-i phase} o)); at the
// pi/2 convention and full coherence port 2 goes dark.
std::pair<double, double> detector_probabilities(std::complex<double> record_overlap,
                                                 double phase);

}  // namespace qrf
