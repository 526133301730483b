#pragma once
#include <Eigen/Dense>
#include <vector>

#include "qrf/density_matrix.hpp"
#include "qrf/gaussian_state.hpp"
#include "qrf/grid_state.hpp"
#include "qrf/transforms.hpp"

namespace qrf {

// Relative-coordinate displacements delta_j (j = 1..N) with the derived
// integrand shifts of the center-of-mass trace. Derived values are always
// recomputed from the masses.
struct DisplacementSpec {
  Eigen::VectorXd delta;

  // two-particle shifts: d0 = m1 delta/M, d1 = m0 delta/M
  double d0(const MassConfig& m) const;
  double d1(const MassConfig& m) const;
  // many-particle: sum_j m_j delta_j / M
  double weighted_total(const MassConfig& m) const;
};

// General closed-form partial trace of a Gaussian superposition: integrates
// out the `traced` coordinates and evaluates the kernel on the retained axes.
DensityMatrix partial_trace(const GaussianSuperposition& s, const std::vector<int>& traced,
                            const std::vector<GridAxis>& retained_axes);

// Exact Tr rho^2 of the reduced state, no grids involved: contracts two trace
// kernels over the retained coordinates in closed form.
double subsystem_purity(const GaussianSuperposition& s, const std::vector<int>& traced);

// Grid partial trace by direct summation over the traced axes.
DensityMatrix partial_trace(const GridState& s, const std::vector<int>& traced);

// The state seen from particle 0: trace over the center of mass.
// Gaussian input may be in the absolute frame (transform applied on the fly)
// or already in the cm+relative frame.
DensityMatrix reduce_relative(const GaussianSuperposition& s,
                              const std::vector<GridAxis>& retained_axes);
DensityMatrix reduce_relative(const GridState& s_cm_relative);

// External reduced state of one particle, everything else traced out.
DensityMatrix reduce_external(const GaussianSuperposition& s_absolute, int keep,
                              const GridAxis& axis);
DensityMatrix reduce_external(const GridState& s_absolute, int keep);

// Active variant of the cm+relative map: same numbers, same labels.
GaussianSuperposition active_transform(const GaussianSuperposition& s_absolute);
GridState active_transform(const GridState& s_absolute, const std::vector<GridAxis>& target_axes);

// Average over center-of-mass translations, evaluated as the explicit
// two-particle integral on the grid. Equals reduce_relative of the transformed
// state.
DensityMatrix twirl(const GridState& s_absolute, const GridAxis& chi_axis);

// Same, starting from a full two-axis density matrix; rejects mixed input.
DensityMatrix twirl(const DensityMatrix& full, const MassConfig& masses,
                    const GridAxis& chi_axis);

// Two-particle reduction in the Aharonov-Kaufherr coordinates (q0 traced):
// mass-independent coherences by construction.
DensityMatrix ak_reduce(const GaussianSuperposition& s_absolute, const GridAxis& axis);
DensityMatrix ak_reduce(const GridState& s_absolute, const GridAxis& axis);

}  // namespace qrf
