#include "qrf/grid_state.hpp"

#include <fftw3.h>

#include <cmath>
#include <string>

namespace qrf {

GridAxis::GridAxis(double min_, double max_, int n_) : min(min_), max(max_), n(n_) {
  if (!(max > min)) throw config_error("GridAxis: max must exceed min");
  if (n < 8 || (n & (n - 1)) != 0)
    throw config_error("GridAxis: point count must be a power of two >= 8");
}

Eigen::VectorXd GridAxis::wavenumbers() const {
  Eigen::VectorXd k(n);
  const double dk = 2.0 * M_PI / length();
  for (int m = 0; m < n; ++m) k(m) = dk * (m < n / 2 ? m : m - n);
  return k;
}

GridState::GridState(CoordinateFrame frame, MassConfig masses, std::vector<GridAxis> axes,
                     Eigen::VectorXcd amplitudes, bool renormalize)
    : frame_(std::move(frame)), masses_(std::move(masses)), axes_(std::move(axes)),
      amp_(std::move(amplitudes)) {
  if (axes_.empty() || axes_.size() != frame_.size())
    throw config_error("GridState: axes must match frame coordinates");
  Eigen::Index expect = 1;
  for (const auto& a : axes_) expect *= a.n;
  if (amp_.size() != expect) throw config_error("GridState: amplitude count != grid size");
  const double n2 = norm2();
  if (renormalize) {
    if (!(n2 > 1e-300)) throw numeric_error("GridState: vanishing norm");
    amp_ /= std::sqrt(n2);
  } else if (std::abs(n2 - 1.0) > 1e-6) {
    throw numeric_error("GridState: norm " + std::to_string(n2) + " is not 1");
  }
}

double GridState::cell_volume() const {
  double v = 1.0;
  for (const auto& a : axes_) v *= a.step();
  return v;
}

double GridState::norm2() const { return amp_.squaredNorm() * cell_volume(); }

Eigen::Index GridState::flatten(const std::vector<int>& idx) const {
  Eigen::Index flat = 0;
  for (std::size_t d = 0; d < axes_.size(); ++d) flat = flat * axes_[d].n + idx[d];
  return flat;
}

std::vector<int> GridState::unflatten(Eigen::Index flat) const {
  std::vector<int> idx(axes_.size());
  for (std::size_t d = axes_.size(); d-- > 0;) {
    idx[d] = static_cast<int>(flat % axes_[d].n);
    flat /= axes_[d].n;
  }
  return idx;
}

Eigen::VectorXd GridState::point(Eigen::Index flat) const {
  const auto idx = unflatten(flat);
  Eigen::VectorXd x(axes_.size());
  for (std::size_t d = 0; d < axes_.size(); ++d) x(d) = axes_[d].coord(idx[d]);
  return x;
}

namespace {
inline void catmull_rom_weights(double s, double w[4]) {
  const double s2 = s * s, s3 = s2 * s;
  w[0] = -0.5 * s3 + s2 - 0.5 * s;
  w[1] = 1.5 * s3 - 2.5 * s2 + 1.0;
  w[2] = -1.5 * s3 + 2.0 * s2 + 0.5 * s;
  w[3] = 0.5 * s3 - 0.5 * s2;
}
inline int wrap(int i, int n) {
  i %= n;
  return i < 0 ? i + n : i;
}
}  // namespace

std::complex<double> GridState::interpolate(const Eigen::VectorXd& x) const {
  const std::size_t d = axes_.size();
  if (static_cast<std::size_t>(x.size()) != d)
    throw config_error("GridState::interpolate: wrong point dimension");
  if (d > 3) throw config_error("GridState::interpolate: supports up to three axes");
  int base[3];
  double w[3][4];
  for (std::size_t a = 0; a < d; ++a) {
    const double u = (x(a) - axes_[a].min) / axes_[a].step();
    const double fl = std::floor(u);
    base[a] = static_cast<int>(fl);
    catmull_rom_weights(u - fl, w[a]);
  }
  std::complex<double> acc = 0.0;
  const int terms = 1 << (2 * d);  // 4^d
  std::vector<int> idx(d);
  for (int t = 0; t < terms; ++t) {
    double weight = 1.0;
    int tt = t;
    for (std::size_t a = 0; a < d; ++a) {
      const int o = tt & 3;
      tt >>= 2;
      weight *= w[a][o];
      idx[a] = wrap(base[a] - 1 + o, axes_[a].n);
    }
    if (weight != 0.0) acc += weight * amp_(flatten(idx));
  }
  return acc;
}

double GridState::edge_mass(double band) const {
  double mass = 0.0;
  const double vol = cell_volume();
  for (Eigen::Index i = 0; i < amp_.size(); ++i) {
    const auto idx = unflatten(i);
    bool outer = false;
    for (std::size_t a = 0; a < axes_.size(); ++a) {
      const int margin = static_cast<int>(band * axes_[a].n);
      if (idx[a] < margin || idx[a] >= axes_[a].n - margin) outer = true;
    }
    if (outer) mass += std::norm(amp_(i)) * vol;
  }
  return mass;
}

GridState GridState::with_frame(CoordinateFrame f) const {
  if (f.size() != frame_.size()) throw config_error("GridState::with_frame: size mismatch");
  GridState out = *this;
  out.frame_ = std::move(f);
  return out;
}

std::complex<double> inner_product(const GridState& a, const GridState& b) {
  require_same_frame(a.frame(), b.frame(), "inner_product");
  if (!(a.masses() == b.masses())) throw config_error("inner_product: mass configurations differ");
  if (!(a.axes() == b.axes())) throw config_error("inner_product: grids differ");
  return a.amplitudes().dot(b.amplitudes()) * a.cell_volume();  // Eigen dot conjugates a
}

GridState rasterize(const GaussianSuperposition& state, const std::vector<GridAxis>& axes) {
  if (axes.size() != state.dim()) throw config_error("rasterize: axes/state dimension mismatch");
  // Clearance precondition: every branch needs 6 sigma of room on every axis.
  for (std::size_t bi = 0; bi < state.branches().size(); ++bi) {
    const auto& b = state.branches()[bi];
    for (std::size_t a = 0; a < axes.size(); ++a) {
      const double sigma = b.width(a);
      if (b.centers(a) - 6.0 * sigma < axes[a].min || b.centers(a) + 6.0 * sigma > axes[a].max)
        throw numeric_error("rasterize: branch " + std::to_string(bi) +
                            " lacks 6-sigma clearance on axis '" +
                            state.frame().position(a) + "'");
    }
  }

  // Precompute per-branch inverse covariance and normalization.
  struct Pre {
    Eigen::MatrixXd P;
    double log_norm;
    const GaussianBranch* b;
  };
  std::vector<Pre> pre;
  for (const auto& b : state.branches()) {
    Eigen::LLT<Eigen::MatrixXd> llt(b.covariance);
    if (llt.info() != Eigen::Success)
      throw numeric_error("rasterize: branch covariance not positive definite");
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < b.covariance.rows(); ++i)
      logdet += 2.0 * std::log(llt.matrixL()(i, i));
    pre.push_back({llt.solve(Eigen::MatrixXd::Identity(b.covariance.rows(), b.covariance.cols())),
                   -0.25 * (b.covariance.rows() * std::log(2.0 * M_PI) + logdet), &b});
  }

  Eigen::Index total = 1;
  for (const auto& a : axes) total *= a.n;
  Eigen::VectorXcd amp(total);
  const double hbar = state.hbar();
  std::vector<int> idx(axes.size(), 0);
  Eigen::VectorXd x(axes.size());
  for (Eigen::Index flat = 0; flat < total; ++flat) {
    for (std::size_t a = 0; a < axes.size(); ++a) x(a) = axes[a].coord(idx[a]);
    std::complex<double> v = 0.0;
    for (const auto& p : pre) {
      const Eigen::VectorXd d = x - p.b->centers;
      const std::complex<double> expo(-0.25 * d.dot(p.P * d) + p.log_norm,
                                      p.b->momentum_offsets.dot(d) / hbar);
      v += p.b->coefficient * std::exp(expo);
    }
    amp(flat) = v;
    for (std::size_t a = axes.size(); a-- > 0;) {
      if (++idx[a] < axes[a].n) break;
      idx[a] = 0;
    }
  }
  return GridState(state.frame(), state.masses(), axes, std::move(amp), /*renormalize=*/true);
}

void apply_momentum_multiplier(
    GridState& s, const std::function<std::complex<double>(const Eigen::VectorXd&)>& f) {
  std::vector<int> dims;
  std::vector<Eigen::VectorXd> ks;
  for (const auto& a : s.axes()) {
    dims.push_back(a.n);
    ks.push_back(a.wavenumbers());
  }
  fft::forward(dims, s.amplitudes());
  Eigen::VectorXcd& amp = s.amplitudes();
  std::vector<int> idx(dims.size(), 0);
  Eigen::VectorXd k(dims.size());
  for (Eigen::Index flat = 0; flat < amp.size(); ++flat) {
    for (std::size_t a = 0; a < dims.size(); ++a) k(a) = ks[a](idx[a]);
    amp(flat) *= f(k);
    for (std::size_t a = dims.size(); a-- > 0;) {
      if (++idx[a] < dims[a]) break;
      idx[a] = 0;
    }
  }
  fft::backward(dims, amp);
  amp /= static_cast<double>(amp.size());
}

GridState translated(const GridState& s, const Eigen::VectorXd& d) {
  if (d.size() != static_cast<Eigen::Index>(s.dim()))
    throw config_error("translated: wrong displacement dimension");
  GridState out = s;
  apply_momentum_multiplier(out, [&](const Eigen::VectorXd& k) {
    return std::exp(std::complex<double>(0.0, -k.dot(d)));
  });
  return out;
}

std::vector<GridAxis> choose_axes(const GaussianSuperposition& s, int n_points,
                                  double clearance) {
  std::vector<GridAxis> axes;
  for (std::size_t a = 0; a < s.dim(); ++a) {
    double lo = 1e300, hi = -1e300;
    for (const auto& b : s.branches()) {
      const double sigma = b.width(a);
      lo = std::min(lo, b.centers(a) - clearance * sigma);
      hi = std::max(hi, b.centers(a) + clearance * sigma);
    }
    axes.emplace_back(lo, hi, n_points);
  }
  return axes;
}

namespace fft {

void forward(const std::vector<int>& dims, Eigen::VectorXcd& data) {
  fftw_complex* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), p, p,
                                 FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
}

void backward(const std::vector<int>& dims, Eigen::VectorXcd& data) {
  fftw_complex* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), p, p,
                                 FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
}

}  // namespace fft

}  // namespace qrf
