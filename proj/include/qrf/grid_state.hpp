#pragma once
#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "qrf/frame.hpp"
#include "qrf/gaussian_state.hpp"
#include "qrf/masses.hpp"

namespace qrf {

// One periodic grid axis: points x_j = min + j*h, h = (max-min)/n, right
// endpoint excluded. n must be a power of two (spectral propagator).
struct GridAxis {
  double min = 0.0;
  double max = 0.0;
  int n = 0;

  GridAxis() = default;
  GridAxis(double min_, double max_, int n_);
  double step() const { return (max - min) / n; }
  double length() const { return max - min; }
  double coord(int i) const { return min + i * step(); }
  // FFT-ordered angular wavenumbers (index m -> 2*pi*f_m/length)
  Eigen::VectorXd wavenumbers() const;
  bool operator==(const GridAxis&) const = default;
};

// Complex amplitudes over a regular multi-axis periodic grid, row-major with
// the last axis fastest. The numeric oracle backend for every closed form.
class GridState {
 public:
  GridState(CoordinateFrame frame, MassConfig masses, std::vector<GridAxis> axes,
            Eigen::VectorXcd amplitudes, bool renormalize = true);

  const CoordinateFrame& frame() const { return frame_; }
  const MassConfig& masses() const { return masses_; }
  double hbar() const { return masses_.hbar(); }
  const std::vector<GridAxis>& axes() const { return axes_; }
  const Eigen::VectorXcd& amplitudes() const { return amp_; }
  Eigen::VectorXcd& amplitudes() { return amp_; }
  std::size_t dim() const { return axes_.size(); }
  Eigen::Index total_points() const { return amp_.size(); }
  double cell_volume() const;
  double norm2() const;  // sum |psi|^2 * cell volume

  Eigen::Index flatten(const std::vector<int>& idx) const;
  std::vector<int> unflatten(Eigen::Index flat) const;
  Eigen::VectorXd point(Eigen::Index flat) const;

  // Periodic tensor-product Catmull-Rom interpolation at an arbitrary point.
  std::complex<double> interpolate(const Eigen::VectorXd& x) const;

  // Fraction of |psi|^2 inside the outer `band` fraction of any axis.
  double edge_mass(double band = 0.05) const;

  GridState with_frame(CoordinateFrame f) const;

 private:
  CoordinateFrame frame_;
  MassConfig masses_;
  std::vector<GridAxis> axes_;
  Eigen::VectorXcd amp_;
};

std::complex<double> inner_product(const GridState& a, const GridState& b);

// Pointwise evaluation of the analytic state, renormalized on the grid.
// Requires 6-sigma clearance of every branch center on every axis.
GridState rasterize(const GaussianSuperposition& state, const std::vector<GridAxis>& axes);

// Rigid translation psi(x) -> psi(x - d), applied spectrally (exact for
// band-limited periodic data).
GridState translated(const GridState& s, const Eigen::VectorXd& d);

// In-place momentum-space multiply: psi <- IFFT( f(kappa) .* FFT(psi) ).
// f receives the wavenumber vector of each momentum-grid point.
void apply_momentum_multiplier(GridState& s,
                               const std::function<std::complex<double>(const Eigen::VectorXd&)>& f);

// Axes that cover every branch with the given sigma clearance.
std::vector<GridAxis> choose_axes(const GaussianSuperposition& s, int n_points,
                                  double clearance = 8.0);

namespace fft {
// Unnormalized in-place transforms (backward . forward = size * identity).
void forward(const std::vector<int>& dims, Eigen::VectorXcd& data);
void backward(const std::vector<int>& dims, Eigen::VectorXcd& data);
}  // namespace fft

}  // namespace qrf
