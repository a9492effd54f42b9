#include "pqep/decomposition.hpp"

#include <cmath>
#include <limits>

namespace pqep {

PalindromicPolynomial reconstruct(const Mat& X, const Mat& J, const ParameterMatrix& gamma,
                                  const ReconstructOptions& opts) {
  const Mat& G = gamma.gamma;
  const Flavor& f = gamma.flavor;
  if (J.rows() != J.cols() || G.rows() != J.rows() || G.cols() != J.cols() || X.cols() != J.rows())
    throw Error(ErrorCode::DimensionMismatch, "X, J, Gamma not conformal");
  const Mat Xs = star(X, f);
  const Mat XJ = X * J;
  const Mat core = XJ * G * Xs;
  if (smallest_singular_ratio(core) < opts.singular_core)
    throw Error(ErrorCode::SingularCore, "X J Gamma X^star is numerically singular");
  if (opts.check_condition) {
    const double xgx = (X * G * Xs).norm();
    if (xgx > opts.condition * X.squaredNorm() * G.norm())
      throw Error(ErrorCode::ConditionViolation, "X Gamma X^star is not negligible");
  }
  const Mat A = inverse(core);
  const Mat Q = -A * (XJ * J * G * Xs) * A;
  return PalindromicPolynomial::assembled(f, A, Q);
}

DecompositionReport verify_decomposition(const PalindromicPolynomial& poly, const Mat& X,
                                         const Mat& J, double tol, const Mat& gamma) {
  DecompositionReport r;
  r.pair_residual = residual(poly, X, J);
  const double scale = residual_scale(poly, X, J);
  r.pair_residual_relative = scale > 0 ? r.pair_residual / scale : r.pair_residual;
  const Flavor& f = poly.flavor();
  r.gamma = gamma.size() ? gamma
                         : compute_gamma(poly, {X, J}, std::numeric_limits<double>::infinity()).gamma;
  const MembershipReport m = gamma_membership(r.gamma, J, f, tol);
  r.skew_defect = m.skew_defect;
  r.intertwine_defect = m.intertwine_defect;
  r.xgx_defect = (X * r.gamma * star(X, f)).norm() / (X.squaredNorm() * r.gamma.norm());
  ReconstructOptions opts;
  opts.check_condition = false;
  const PalindromicPolynomial back = reconstruct(X, J, {r.gamma, f}, opts);
  r.roundtrip_error_A = (back.A() - poly.A()).norm() / poly.A().norm();
  const double qn = poly.Q().norm();
  r.roundtrip_error_Q = (back.Q() - poly.Q()).norm() / (qn > 0 ? qn : 1.0);
  r.pass = r.pair_residual_relative <= tol && m.pass && r.xgx_defect <= tol &&
           r.roundtrip_error_A <= tol && r.roundtrip_error_Q <= tol;
  return r;
}

Mat real_frame(const SpectralLayout& layout) {
  Mat F = Mat::Zero(layout.dim, layout.dim);
  const double h = 1.0 / std::sqrt(2.0);
  for (const auto& b : layout.blocks) {
    if (b.size == 1) {
      F(b.offset, b.offset) = 1.0;
    } else {
      F.block(b.offset, b.offset, 2, 2) << h, h, cplx(0, -h), cplx(0, h);
    }
  }
  return F;
}

namespace {

// Columns scaled so their largest-magnitude entry is real positive.
void fix_column_phases(Mat& U, Mat* V = nullptr) {
  for (Index j = 0; j < U.cols(); ++j) {
    Index k = 0;
    U.col(j).cwiseAbs().maxCoeff(&k);
    const double mag = std::abs(U(k, j));
    if (mag == 0.0) continue;
    const cplx ph = std::conj(U(k, j)) / mag;
    U.col(j) *= ph;
    if (V) V->col(j) *= ph;
  }
}

struct Cluster {
  cplx value;
  std::vector<Index> idx;
};

Mat gather(const Mat& M, const std::vector<Index>& rows, const std::vector<Index>& cols) {
  Mat out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = M(rows[i], cols[j]);
  return out;
}

void scatter(Mat& M, const std::vector<Index>& rows, const std::vector<Index>& cols, const Mat& B) {
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) M(rows[i], cols[j]) = B(i, j);
}

// T with T H T^H = sign(H) for Hermitian H.
Mat hermitian_normalizer(const Mat& H, double singular_tol) {
  const Mat Hs = 0.5 * (H + H.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(Hs);
  Mat Qv = es.eigenvectors().rowwise().reverse();  // descending eigenvalues
  Eigen::VectorXd ev = es.eigenvalues().reverse();
  fix_column_phases(Qv);
  Mat T = Qv.adjoint();
  for (Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= singular_tol)
      throw Error(ErrorCode::SingularBlock, "zero eigenvalue in a modulus-one block");
    T.row(i) /= std::sqrt(std::abs(ev(i)));
  }
  return T;
}

}  // namespace

NormalizedPair normalize_semisimple(const Mat& X, const Mat& J, const ParameterMatrix& gamma,
                                    Flavor flavor) {
  const Index k = J.rows();
  if (X.cols() != k || gamma.gamma.rows() != k || gamma.gamma.cols() != k)
    throw Error(ErrorCode::DimensionMismatch, "X, J, Gamma not conformal");
  const SpectralLayout layout = scan_spectral_matrix(J, flavor);
  const double eps = flavor.epsilon;

  // Diagonal of the complex frame.
  std::vector<cplx> d;
  for (const auto& b : layout.blocks) {
    if (b.size == 2) {
      d.push_back(std::conj(b.value));
      d.push_back(b.value);
    } else {
      if (flavor.real() && (std::abs(b.value - 1.0) <= 1e-8 || std::abs(b.value + 1.0) <= 1e-8))
        throw Error(ErrorCode::UnimodularUnsupported, "normalization excludes eigenvalues +-1");
      d.push_back(b.value);
    }
  }
  const Mat F = flavor.real() ? real_frame(layout) : Mat(Mat::Identity(k, k));
  const Mat F_inv = inverse(F);
  const Mat Xc = X * F;
  const Mat Gc = F_inv * gamma.gamma * F_inv.transpose();

  std::vector<Cluster> clusters;
  std::vector<int> cluster_of(k);
  for (Index i = 0; i < k; ++i) {
    int c = -1;
    for (std::size_t j = 0; j < clusters.size(); ++j)
      if (std::abs(clusters[j].value - d[i]) <= 1e-8 * std::abs(d[i])) c = int(j);
    if (c < 0) {
      c = int(clusters.size());
      clusters.push_back({d[i], {}});
    }
    clusters[c].idx.push_back(i);
    cluster_of[i] = c;
  }
  auto find_cluster = [&](cplx v) {
    for (std::size_t j = 0; j < clusters.size(); ++j)
      if (std::abs(clusters[j].value - v) <= 1e-8 * std::abs(v)) return int(j);
    return -1;
  };

  const double singular_tol = 1e-12 * gamma.gamma.norm();
  Mat T = Mat::Zero(k, k);
  std::vector<bool> done(clusters.size(), false);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    if (done[c]) continue;
    const Cluster& cl = clusters[c];
    const int cp = find_cluster(partner(cl.value, flavor));
    if (cp < 0) throw Error(ErrorCode::SingularBlock, "eigenvalue without a pairing partner");
    if (clusters[cp].idx.size() != cl.idx.size())
      throw Error(ErrorCode::SingularBlock, "partner clusters differ in size");
    const int cc = flavor.real() ? find_cluster(std::conj(cl.value)) : int(c);

    if (cp == int(c)) {
      // Self-paired modulus-one cluster (H flavors).
      const Mat S = gather(Gc, cl.idx, cl.idx);
      const Mat H = eps < 0 ? S : Mat(cplx(0, -1) * S);
      scatter(T, cl.idx, cl.idx, hermitian_normalizer(H, singular_tol));
      done[c] = true;
      continue;
    }
    const Mat W = gather(Gc, cl.idx, clusters[cp].idx);
    if (flavor.real() && cc == cp) {
      // Modulus-one T pair: the two clusters are conjugates of each other.
      const Mat H = eps < 0 ? W : Mat(cplx(0, 1) * W);
      const Mat Tc = hermitian_normalizer(H, singular_tol);
      scatter(T, cl.idx, cl.idx, Tc);
      scatter(T, clusters[cp].idx, clusters[cp].idx, Tc.conjugate());
      done[c] = done[cp] = true;
      continue;
    }

    Mat Tc, Tp;
    if (flavor.real() && cc == int(c)) {
      const RMat Wr = W.real();
      Eigen::JacobiSVD<RMat> svd(Wr, Eigen::ComputeFullU | Eigen::ComputeFullV);
      Mat U = svd.matrixU().cast<cplx>();
      Mat V = svd.matrixV().cast<cplx>();
      fix_column_phases(U, &V);
      const Eigen::VectorXd s = svd.singularValues();
      if (s(s.size() - 1) <= singular_tol) throw Error(ErrorCode::SingularBlock, "zero singular value");
      const Eigen::VectorXd is = s.cwiseSqrt().cwiseInverse();
      Tc = is.cast<cplx>().asDiagonal() * U.adjoint();
      Tp = is.cast<cplx>().asDiagonal() * V.transpose();
      Tc = Tc.real().cast<cplx>();
      Tp = Tp.real().cast<cplx>();
    } else {
      Eigen::JacobiSVD<Mat> svd(W, Eigen::ComputeFullU | Eigen::ComputeFullV);
      Mat U = svd.matrixU();
      Mat V = svd.matrixV();
      fix_column_phases(U, &V);
      const Eigen::VectorXd s = svd.singularValues();
      if (s(s.size() - 1) <= singular_tol) throw Error(ErrorCode::SingularBlock, "zero singular value");
      const Eigen::VectorXd is = s.cwiseSqrt().cwiseInverse();
      Tc = is.cast<cplx>().asDiagonal() * U.adjoint();
      Tp = is.cast<cplx>().asDiagonal() * (flavor.real() ? Mat(V.transpose()) : Mat(V.adjoint()));
    }
    scatter(T, cl.idx, cl.idx, Tc);
    scatter(T, clusters[cp].idx, clusters[cp].idx, Tp);
    done[c] = done[cp] = true;
    if (flavor.real() && cc != int(c)) {
      const int ccp = find_cluster(std::conj(clusters[cp].value));
      if (cc < 0 || ccp < 0) throw Error(ErrorCode::SingularBlock, "missing conjugate cluster");
      scatter(T, clusters[cc].idx, clusters[cc].idx, Tc.conjugate());
      scatter(T, clusters[ccp].idx, clusters[ccp].idx, Tp.conjugate());
      done[cc] = done[ccp] = true;
    }
  }

  const Mat Gt_c = T * Gc * star(T, flavor);
  const Mat Xt_c = Xc * inverse(T);
  NormalizedPair out;
  Mat Xt = Xt_c * F_inv;
  Mat Gt = F * Gt_c * F.transpose();
  Mat Tr = F * T * F_inv;
  if (flavor.real()) {
    const double leak = Xt.imag().norm() + Gt.imag().norm();
    if (leak > 1e-8 * (Xt.norm() + Gt.norm()))
      throw Error(ErrorCode::InvariantViolation, "normalization left the real representation");
    Xt = Xt.real().cast<cplx>();
    Gt = Gt.real().cast<cplx>();
    Tr = Tr.real().cast<cplx>();
  }
  out.X = Xt;
  out.gamma = {Gt, flavor};
  out.transform = Tr;
  return out;
}

}  // namespace pqep
