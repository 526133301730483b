#pragma once
#include <utility>

namespace qrf {

// Closed forms for the equal-mass two-branch Gaussian superposition
// |x0,x1> + |x0+delta,x1+delta| with per-coordinate width Delta. The branch
// separation enters only through alpha = delta^2/(8 Delta^2), the log of the
// single-coordinate overlap <x|x+delta> = exp(-alpha).

// External purity of either particle: 1 - tanh^2(alpha)/2.
double two_branch_purity(double alpha);

// Linear entropy E = 1 - purity = tanh^2(alpha)/2, in [0, 1/2).
double two_branch_entanglement(double alpha);

// Purity of the relative state of a product of two Gaussians after tracing
// the center of mass:
//   (m0+m1) D0 D1 / sqrt((m0^2 D0^2 + m1^2 D1^2)(D0^2 + D1^2)).
// Equals 1 exactly when m0 D0^2 = m1 D1^2.
double internal_purity(double m0, double m1, double width0, double width1);

// Dx1/Dx_r1 as a function of the linear entropy E in [0, 1/2):
//   sqrt(1/2 + (1 + sqrt(2E)) artanh(sqrt(2E)) / 2),
// monotone increasing, sqrt(1/2) at E = 0, divergent toward E = 1/2.
double dispersion_ratio(double entanglement);

// Same curve parametrized by alpha: sqrt(1/2 + alpha (1 + tanh alpha)/2).
double dispersion_ratio_alpha(double alpha);

// (Dx_r1, Dx1) of the two-branch state: Dx_r1 = sqrt(2) Delta exactly,
// Dx1 = Dx_r1 * dispersion_ratio_alpha(alpha).
std::pair<double, double> variance_pair(double delta, double width);

struct BranchPairDiagnostics {
  double alpha;
  double overlap;       // exp(-alpha)
  double purity;        // 1 - E
  double entanglement;  // E = tanh^2(alpha)/2
};

BranchPairDiagnostics branch_pair_diagnostics(double delta, double width);

}  // namespace qrf
