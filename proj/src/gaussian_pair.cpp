#include "qrf/detail/gaussian_pair.hpp"

#include <cmath>

namespace qrf::detail {

namespace {

double log_det_spd(const Eigen::MatrixXd& M, Eigen::LLT<Eigen::MatrixXd>& llt) {
  llt.compute(M);
  if (llt.info() != Eigen::Success)
    throw numeric_error("gaussian integral: quadratic form is not positive definite");
  double logdet = 0.0;
  const auto& L = llt.matrixL();
  for (Eigen::Index i = 0; i < M.rows(); ++i) logdet += 2.0 * std::log(L(i, i));
  return logdet;
}

// log of the branch normalization det(2 pi Sigma)^(-1/4)
double log_branch_norm(const GaussianBranch& b) {
  Eigen::LLT<Eigen::MatrixXd> llt;
  const double logdet = log_det_spd(b.covariance, llt);
  return -0.25 * (static_cast<double>(b.covariance.rows()) * std::log(2.0 * M_PI) + logdet);
}

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& S) {
  Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success)
    throw numeric_error("covariance is not positive definite");
  return llt.solve(Eigen::MatrixXd::Identity(S.rows(), S.cols()));
}

// plain (unconjugated) bilinear form a^T b
cplx bilinear(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  cplx acc = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) acc += a(i) * b(i);
  return acc;
}

}  // namespace

cplx gauss_integral(const Eigen::MatrixXd& M, const Eigen::VectorXcd& J, cplx c) {
  Eigen::LLT<Eigen::MatrixXd> llt;
  const double logdet = log_det_spd(M, llt);
  const Eigen::VectorXcd MinvJ =
      llt.solve(J.real()).cast<cplx>() + cplx(0, 1) * llt.solve(J.imag()).cast<cplx>();
  const double n = static_cast<double>(M.rows());
  return std::exp(0.5 * bilinear(J, MinvJ) + c + 0.5 * n * std::log(2.0 * M_PI) -
                  0.5 * logdet);
}

PairGauss::PairGauss(const GaussianBranch& a, const GaussianBranch& b, double hbar_in)
    : bra(&a), ket(&b), hbar(hbar_in) {
  const Eigen::Index n = a.centers.size();
  if (b.centers.size() != n) throw config_error("branch pair: dimensions differ");
  const Eigen::MatrixXd Pa = spd_inverse(a.covariance);
  const Eigen::MatrixXd Pb = spd_inverse(b.covariance);
  M = 0.5 * (Pa + Pb);
  Eigen::LLT<Eigen::MatrixXd> llt;
  const double logdetM = log_det_spd(M, llt);
  Minv = llt.solve(Eigen::MatrixXd::Identity(n, n));

  // Work relative to the pair midpoint: the overlap is translation invariant
  // in the center-referenced phase convention, and far-away states would
  // otherwise cancel catastrophically in the quadratic forms.
  const Eigen::VectorXd mid = 0.5 * (a.centers + b.centers);
  const Eigen::VectorXd ca = a.centers - mid;
  const Eigen::VectorXd cb = b.centers - mid;

  const cplx I(0.0, 1.0);
  J = (0.5 * (Pa * ca + Pb * cb)).cast<cplx>() +
      (I / hbar) * (b.momentum_offsets - a.momentum_offsets).cast<cplx>();
  c = cplx(-0.25 * ca.dot(Pa * ca) - 0.25 * cb.dot(Pb * cb),
           (a.momentum_offsets.dot(ca) - b.momentum_offsets.dot(cb)) / hbar) +
      log_branch_norm(a) + log_branch_norm(b);

  mean = Minv.cast<cplx>() * J + mid.cast<cplx>();
  overlap = std::exp(0.5 * bilinear(J, Minv.cast<cplx>() * J) + c +
                     0.5 * static_cast<double>(n) * std::log(2.0 * M_PI) - 0.5 * logdetM);
}

cplx pair_linear_moment(const PairGauss& pg, const Eigen::VectorXd& ux,
                        const Eigen::VectorXd& up, double constant) {
  const cplx I(0.0, 1.0);
  const GaussianBranch& b = *pg.ket;
  const Eigen::MatrixXcd Pb = spd_inverse(b.covariance).cast<cplx>();
  // p psi_b = (k_b + (i hbar/2) Pb (x - c_b)) psi_b evaluated at the complex mean
  const Eigen::VectorXcd g =
      b.momentum_offsets.cast<cplx>() +
      (I * pg.hbar / 2.0) * (Pb * (pg.mean - b.centers.cast<cplx>()));
  cplx val = constant;
  val += bilinear(ux.cast<cplx>(), pg.mean);
  val += bilinear(up.cast<cplx>(), g);
  return val * pg.overlap;
}

cplx pair_quadratic_moment(const PairGauss& pg, const Eigen::VectorXd& u1x,
                           const Eigen::VectorXd& u1p, const Eigen::VectorXd& u2x,
                           const Eigen::VectorXd& u2p) {
  const cplx I(0.0, 1.0);
  const GaussianBranch& b = *pg.ket;
  const Eigen::MatrixXcd Pb = spd_inverse(b.covariance).cast<cplx>();
  // O psi_b = (A + B.x) psi_b for O = ux.x + up.p:
  //   A = up.k_b - (i hbar/2) up^T Pb c_b,   B = ux + (i hbar/2) Pb up
  const auto affine_form = [&](const Eigen::VectorXd& ux, const Eigen::VectorXd& up, cplx& A,
                               Eigen::VectorXcd& B) {
    const Eigen::VectorXcd Pbup = Pb * up.cast<cplx>();
    A = up.dot(b.momentum_offsets) - (I * pg.hbar / 2.0) * bilinear(Pbup, b.centers.cast<cplx>());
    B = ux.cast<cplx>() + (I * pg.hbar / 2.0) * Pbup;
  };
  cplx A1, A2;
  Eigen::VectorXcd B1, B2;
  affine_form(u1x, u1p, A1, B1);
  affine_form(u2x, u2p, A2, B2);

  // O1 O2 psi_b = [-i hbar u1p.B2 + (A1 + B1.x)(A2 + B2.x)] psi_b,
  // then <x> = mean, <x x^T> = mean mean^T + Minv under the pair measure.
  const Eigen::VectorXcd& m = pg.mean;
  cplx val = -I * pg.hbar * bilinear(u1p.cast<cplx>(), B2);
  val += A1 * A2;
  val += A1 * bilinear(B2, m) + A2 * bilinear(B1, m);
  val += bilinear(B1, m) * bilinear(B2, m);
  val += bilinear(B1, pg.Minv.cast<cplx>() * B2);
  return val * pg.overlap;
}

PairTraceKernel::PairTraceKernel(const GaussianBranch& ket, const GaussianBranch& bra,
                                 const std::vector<int>& traced,
                                 const std::vector<int>& retained, double hbar) {
  const int nt = static_cast<int>(traced.size());
  const int nr = static_cast<int>(retained.size());
  nr_ = nr;
  const Eigen::Index n = ket.centers.size();
  if (nt + nr != n || bra.centers.size() != n)
    throw config_error("PairTraceKernel: traced+retained must cover all coordinates");
  const cplx I(0.0, 1.0);

  // Permute each branch into (traced; retained) order.
  auto permute = [&](const GaussianBranch& b, Eigen::MatrixXd& P, Eigen::VectorXd& c,
                     Eigen::VectorXd& k) {
    std::vector<int> idx;
    idx.insert(idx.end(), traced.begin(), traced.end());
    idx.insert(idx.end(), retained.begin(), retained.end());
    Eigen::MatrixXd S(n, n);
    c.resize(n);
    k.resize(n);
    for (Eigen::Index r = 0; r < n; ++r) {
      c(r) = b.centers(idx[r]);
      k(r) = b.momentum_offsets(idx[r]);
      for (Eigen::Index s = 0; s < n; ++s) S(r, s) = b.covariance(idx[r], idx[s]);
    }
    P = spd_inverse(S);
  };

  Eigen::MatrixXd P, Q;
  Eigen::VectorXd ca, ka, cb, kb;
  permute(ket, P, ca, ka);
  permute(bra, Q, cb, kb);

  const Eigen::MatrixXd Ptt = P.topLeftCorner(nt, nt), Ptr = P.topRightCorner(nt, nr),
                        Prr = P.bottomRightCorner(nr, nr);
  const Eigen::MatrixXd Qtt = Q.topLeftCorner(nt, nt), Qtr = Q.topRightCorner(nt, nr),
                        Qrr = Q.bottomRightCorner(nr, nr);
  const Eigen::VectorXd cta = ca.head(nt), cra = ca.tail(nr);
  const Eigen::VectorXd ctb = cb.head(nt), crb = cb.tail(nr);
  const Eigen::VectorXd kta = ka.head(nt), kra = ka.tail(nr);
  const Eigen::VectorXd ktb = kb.head(nt), krb = kb.tail(nr);

  const Eigen::MatrixXd M = 0.5 * (Ptt + Qtt);
  Eigen::LLT<Eigen::MatrixXd> llt;
  const double logdetM = log_det_spd(M, llt);
  const Eigen::MatrixXd Minv = llt.solve(Eigen::MatrixXd::Identity(nt, nt));

  // Integrand exponent grouped in the traced block t:
  //   -t^T M t/2 + w(r,r')^T t + g(r,r'),  w = w0 + Wr r + Wrp r'
  const Eigen::VectorXcd w0 =
      (0.5 * (Ptt * cta + Qtt * ctb + Ptr * cra + Qtr * crb)).cast<cplx>() +
      (I / hbar) * (kta - ktb).cast<cplx>();
  Eigen::MatrixXd W(nt, 2 * nr);
  W << -0.5 * Ptr, -0.5 * Qtr;

  const cplx g0 =
      cplx(-0.25 * cta.dot(Ptt * cta) - 0.25 * ctb.dot(Qtt * ctb) - 0.5 * cta.dot(Ptr * cra) -
               0.5 * ctb.dot(Qtr * crb) - 0.25 * cra.dot(Prr * cra) - 0.25 * crb.dot(Qrr * crb),
           -(kta.dot(cta) - ktb.dot(ctb)) / hbar - (kra.dot(cra) - krb.dot(crb)) / hbar);
  const Eigen::VectorXcd gr =
      (0.5 * (Ptr.transpose() * cta + Prr * cra)).cast<cplx>() + (I / hbar) * kra.cast<cplx>();
  const Eigen::VectorXcd grp =
      (0.5 * (Qtr.transpose() * ctb + Qrr * crb)).cast<cplx>() - (I / hbar) * krb.cast<cplx>();

  // Integrating t collapses everything to exp(s0 + lin.u + u^T quad u/2), u = (r; r').
  const Eigen::MatrixXd WtMinv = W.transpose() * Minv;
  quad_ = WtMinv * W;
  quad_.topLeftCorner(nr, nr) -= 0.5 * Prr;
  quad_.bottomRightCorner(nr, nr) -= 0.5 * Qrr;

  lin_ = (WtMinv * w0.real()).cast<cplx>() + I * (WtMinv * w0.imag()).cast<cplx>();
  lin_.head(nr) += gr;
  lin_.tail(nr) += grp;

  const Eigen::VectorXcd Minvw0 =
      (Minv * w0.real()).cast<cplx>() + I * (Minv * w0.imag()).cast<cplx>();
  cplx w0Minvw0 = 0.0;
  for (Eigen::Index i = 0; i < w0.size(); ++i) w0Minvw0 += w0(i) * Minvw0(i);

  s0_ = log_branch_norm(ket) + log_branch_norm(bra) +
        0.5 * static_cast<double>(nt) * std::log(2.0 * M_PI) - 0.5 * logdetM +
        0.5 * w0Minvw0 + g0;
}

cplx PairTraceKernel::operator()(const Eigen::VectorXd& r, const Eigen::VectorXd& rp) const {
  cplx e = s0_;
  const int nr = nr_;
  for (int i = 0; i < nr; ++i) e += lin_(i) * r(i) + lin_(nr + i) * rp(i);
  for (int i = 0; i < 2 * nr; ++i) {
    const double ui = i < nr ? r(i) : rp(i - nr);
    double qi = 0.0;
    for (int j = 0; j < 2 * nr; ++j) {
      const double uj = j < nr ? r(j) : rp(j - nr);
      qi += quad_(i, j) * uj;
    }
    e += 0.5 * ui * qi;
  }
  return std::exp(e);
}

}  // namespace qrf::detail
