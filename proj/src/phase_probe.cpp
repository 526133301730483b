#include "qrf/phase_probe.hpp"

#include <cmath>

namespace qrf {

ShiftDecomposition decompose_shift(const Eigen::VectorXd& delta,
                                   const LinearCanonicalTransform& t) {
  if (delta.size() != static_cast<Eigen::Index>(t.size()))
    throw config_error("decompose_shift: delta dimension mismatch");
  ShiftDecomposition d;
  d.transform_name = t.name;
  d.momentum_labels = t.output.momenta();
  d.delta_absolute = delta;
  // delta.p = (A delta).P_new, equivalently coefficients via (B^T)^{-1}.
  d.coefficients = t.position_block * delta;
  d.reconstruction_error =
      (t.momentum_block.transpose() * d.coefficients - delta).cwiseAbs().maxCoeff();
  d.delta_cm = d.coefficients(0);
  d.accessible = std::abs(d.delta_cm) < 1e-12 * delta.norm();
  return d;
}

ShiftDecomposition decompose_shift(const Eigen::VectorXd& delta, const MassConfig& m,
                                   const std::string& transform_name) {
  if (transform_name == "cm_relative")
    return decompose_shift(delta, catalog::cm_relative(m));
  if (transform_name == "xrpi3") return decompose_shift(delta, catalog::xrpi3(m));
  if (transform_name == "qpr3") return decompose_shift(delta, catalog::qpr3(m));
  if (transform_name == "ak") return decompose_shift(delta, catalog::ak(m));
  throw config_error("decompose_shift: unknown transform '" + transform_name + "'");
}

namespace {
// exp(i S/hbar) translates the frame coordinates by -A_F delta.
Eigen::VectorXd frame_shift(const CoordinateFrame& f, const MassConfig& m,
                            const Eigen::VectorXd& delta) {
  const auto t = transform_to_frame(f, m);
  if (delta.size() != static_cast<Eigen::Index>(t.size()))
    throw config_error("shift_expectation: delta dimension mismatch");
  return t.position_block * delta;
}
}  // namespace

std::complex<double> shift_expectation(const GaussianSuperposition& s,
                                       const Eigen::VectorXd& delta) {
  return inner_product(s, s.translated(-frame_shift(s.frame(), s.masses(), delta)));
}

std::complex<double> shift_expectation(const GridState& s, const Eigen::VectorXd& delta) {
  return inner_product(s, translated(s, -frame_shift(s.frame(), s.masses(), delta)));
}

std::complex<double> shift_expectation_internal(const GaussianSuperposition& s,
                                                const Eigen::VectorXd& delta) {
  Eigen::VectorXd c = frame_shift(s.frame(), s.masses(), delta);
  if (!s.frame().is_cm_relative() && !s.frame().is_absolute())
    throw config_error("shift_expectation_internal: unsupported frame");
  if (s.frame().is_absolute()) {
    // Re-express on the cm+relative momenta, drop p_cm, map back.
    const auto t = catalog::cm_relative(s.masses());
    Eigen::VectorXd coeff = t.position_block * delta;
    coeff(0) = 0.0;
    // On the cm+relative frame the remaining generator shifts nothing along
    // x_cm, so translate the absolute state by the pulled-back displacement.
    const Eigen::VectorXd back = t.position_block.inverse() * coeff;
    return inner_product(s, s.translated(-back));
  }
  c(0) = 0.0;
  return inner_product(s, s.translated(-c));
}

std::complex<double> total_momentum_characteristic(const GridState& s, double c) {
  GridState work = s;
  std::vector<int> dims;
  std::vector<Eigen::VectorXd> ks;
  for (const auto& a : s.axes()) {
    dims.push_back(a.n);
    ks.push_back(a.wavenumbers());
  }
  fft::forward(dims, work.amplitudes());
  const Eigen::VectorXcd& amp = work.amplitudes();
  std::complex<double> acc = 0.0;
  double weight = 0.0;
  std::vector<int> idx(dims.size(), 0);
  for (Eigen::Index flat = 0; flat < amp.size(); ++flat) {
    double ksum = 0.0;
    for (std::size_t a = 0; a < dims.size(); ++a) ksum += ks[a](idx[a]);
    const double w = std::norm(amp(flat));
    acc += w * std::exp(std::complex<double>(0.0, c * ksum));
    weight += w;
    for (std::size_t a = dims.size(); a-- > 0;) {
      if (++idx[a] < dims[a]) break;
      idx[a] = 0;
    }
  }
  return acc / weight;
}

PiFormCoefficients heavy_limit_pi_form(const Eigen::VectorXd& delta, const MassConfig& m) {
  const auto t = catalog::cm_relative(m);
  PiFormCoefficients out;
  out.labels = t.output.momenta();
  out.exact = t.position_block * delta;
  out.truncated = out.exact;
  out.truncated(0) = 0.0;
  out.pi_cm_coefficient = out.exact(0);
  const double dmax = delta.cwiseAbs().maxCoeff();
  out.mass_ratio = dmax > 0.0 ? std::abs(out.pi_cm_coefficient) / dmax : 0.0;
  return out;
}

}  // namespace qrf
