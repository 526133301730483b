#pragma once
#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qrf/gaussian_state.hpp"

namespace qrf::detail {

using cplx = std::complex<double>;

// Gaussian integral over R^n:  integral exp(-x^T M x/2 + J^T x + c) dx
// with M real SPD and J, c complex. Returns the value, principal branch.
cplx gauss_integral(const Eigen::MatrixXd& M, const Eigen::VectorXcd& J, cplx c);

// Shared pieces of the <a| ... |b> integrals for one branch pair:
// exponent(x) = -x^T M x/2 + J^T x + c with complex mean m = M^{-1} J.
struct PairGauss {
  Eigen::MatrixXd M;     // (Pa + Pb)/2, P = Sigma^{-1}
  Eigen::MatrixXd Minv;
  Eigen::VectorXcd J;
  cplx c;
  Eigen::VectorXcd mean;  // M^{-1} J
  cplx overlap;           // <a|b> including branch normalizations

  PairGauss(const GaussianBranch& a, const GaussianBranch& b, double hbar);

  const GaussianBranch* bra;  // a
  const GaussianBranch* ket;  // b
  double hbar;
};

// <a| O |b> for O = x_const + ux^T x + up^T p (Hermitian linear form).
cplx pair_linear_moment(const PairGauss& pg, const Eigen::VectorXd& ux,
                        const Eigen::VectorXd& up, double constant = 0.0);

// <a| O1 O2 |b> for two linear forms.
cplx pair_quadratic_moment(const PairGauss& pg, const Eigen::VectorXd& u1x,
                           const Eigen::VectorXd& u1p, const Eigen::VectorXd& u2x,
                           const Eigen::VectorXd& u2p);

// Closed-form partial trace kernel for a branch pair:
//   I(r, r') = integral dt  psi_ket(t, r) * conj(psi_bra(t, r'))
// where t runs over the traced coordinate indices and r over the retained
// ones. The whole integral collapses to exp of a quadratic form in (r, r'),
// precomputed here so grid evaluation is a handful of flops per element.
class PairTraceKernel {
 public:
  PairTraceKernel(const GaussianBranch& ket, const GaussianBranch& bra,
                  const std::vector<int>& traced, const std::vector<int>& retained,
                  double hbar);

  // r for the ket side (row), rp for the bra side (column).
  cplx operator()(const Eigen::VectorXd& r, const Eigen::VectorXd& rp) const;

  // The collapsed exponent I(r,r') = exp(s0 + lin.(r;r') + (r;r')^T quad (r;r')/2),
  // exposed so four-kernel contractions (purities) can stay in closed form.
  struct Quadratic {
    cplx s0;
    Eigen::VectorXcd lin;
    Eigen::MatrixXd quad;
  };
  Quadratic quadratic() const { return {s0_, lin_, quad_}; }

 private:
  int nr_;
  cplx s0_;             // includes log of all prefactors
  Eigen::VectorXcd lin_;  // length 2*nr
  Eigen::MatrixXd quad_;  // 2*nr x 2*nr, real symmetric
};

}  // namespace qrf::detail
