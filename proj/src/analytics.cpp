#include "qrf/analytics.hpp"

#include <cmath>

#include "qrf/errors.hpp"

namespace qrf {

double two_branch_purity(double alpha) {
  if (alpha < 0.0) throw config_error("two_branch_purity: alpha must be nonnegative");
  const double t = std::tanh(alpha);
  return 1.0 - 0.5 * t * t;
}

double two_branch_entanglement(double alpha) { return 1.0 - two_branch_purity(alpha); }

double internal_purity(double m0, double m1, double width0, double width1) {
  if (!(m0 > 0.0 && m1 > 0.0 && width0 > 0.0 && width1 > 0.0))
    throw config_error("internal_purity: all arguments must be positive");
  const double num = (m0 + m1) * width0 * width1;
  // Equivalent to the textbook denominator but exact at the separability
  // point m0 w0^2 = m1 w1^2 (purity 1 with no cancellation).
  const double imbalance = m0 * width0 * width0 - m1 * width1 * width1;
  return num / std::sqrt(num * num + imbalance * imbalance);
}

double dispersion_ratio(double entanglement) {
  if (entanglement < 0.0 || entanglement >= 0.5)
    throw config_error("dispersion_ratio: entanglement must lie in [0, 1/2)");
  double x = std::sqrt(2.0 * entanglement);
  x = std::min(x, 1.0 - 1e-12);  // artanh guard at the asymptote
  return std::sqrt(0.5 + 0.5 * (1.0 + x) * std::atanh(x));
}

double dispersion_ratio_alpha(double alpha) {
  if (alpha < 0.0) throw config_error("dispersion_ratio_alpha: alpha must be nonnegative");
  return std::sqrt(0.5 + 0.5 * alpha * (1.0 + std::tanh(alpha)));
}

std::pair<double, double> variance_pair(double delta, double width) {
  if (!(width > 0.0)) throw config_error("variance_pair: width must be positive");
  const double alpha = delta * delta / (8.0 * width * width);
  const double dxr = std::sqrt(2.0) * width;
  return {dxr, dxr * dispersion_ratio_alpha(alpha)};
}

BranchPairDiagnostics branch_pair_diagnostics(double delta, double width) {
  if (!(width > 0.0)) throw config_error("branch_pair_diagnostics: width must be positive");
  const double alpha = delta * delta / (8.0 * width * width);
  return {alpha, std::exp(-alpha), two_branch_purity(alpha), two_branch_entanglement(alpha)};
}

}  // namespace qrf
