#include "pqep/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace pqep {

namespace {

// Unit norm, entry sum real positive; largest entry real positive when the sum vanishes.
void normalize_phase(Vec& v) {
  v.normalize();
  const cplx s = v.sum();
  if (std::abs(s) > 1e-8) {
    v *= std::conj(s) / std::abs(s);
    return;
  }
  Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  if (std::abs(v(k)) > 0) v *= std::conj(v(k)) / std::abs(v(k));
}

// Newton steps on P(lambda) v = 0 with v^H dv = 0; kept only when the residual drops
// and lambda moves by a small relative amount (a near-multiple eigenvalue makes the
// bordered system singular).
void refine(const PalindromicPolynomial& poly, cplx& lambda, Vec& v) {
  const Index n = poly.size();
  auto rel_residual = [&](cplx l, const Vec& x) { return (poly.evaluate(l) * x).norm() / x.norm(); };
  double best = rel_residual(lambda, v);
  for (int step = 0; step < 2; ++step) {
    Mat B = Mat::Zero(n + 1, n + 1);
    B.topLeftCorner(n, n) = poly.evaluate(lambda);
    B.topRightCorner(n, 1) = (2.0 * lambda * poly.A() + poly.Q()) * v;
    B.bottomLeftCorner(1, n) = v.adjoint();
    Vec rhs = Vec::Zero(n + 1);
    rhs.head(n) = -B.topLeftCorner(n, n) * v;
    const Vec d = B.fullPivLu().solve(rhs);
    if (!d.allFinite()) return;
    const cplx l2 = lambda + d(n);
    Vec v2 = v + d.head(n);
    if (std::abs(d(n)) > 1e-6 * std::max(1.0, std::abs(lambda))) return;
    const double r2 = rel_residual(l2, v2);
    if (!(r2 < best)) return;
    best = r2;
    lambda = l2;
    v = v2 / v2.norm();
  }
}

}  // namespace

std::vector<Eigenpair> qep_eigensolve(const PalindromicPolynomial& poly) {
  const Index n = poly.size();
  const Mat& A = poly.A();
  Eigen::PartialPivLU<Mat> lu(A);
  if (smallest_singular_ratio(A) <= 1e-14) throw Error(ErrorCode::SingularA, "A is singular");
  Mat C = Mat::Zero(2 * n, 2 * n);
  C.topRightCorner(n, n).setIdentity();
  C.bottomLeftCorner(n, n) = -double(poly.flavor().epsilon) * lu.solve(star(A, poly.flavor()));
  C.bottomRightCorner(n, n) = -lu.solve(poly.Q());

  Eigen::ComplexEigenSolver<Mat> es(C);
  if (es.info() != Eigen::Success)
    throw Error(ErrorCode::ConvergenceFailure, "companion eigensolver did not converge");

  const double na = A.norm();
  const double nq = poly.Q().norm();
  std::vector<Eigenpair> out;
  out.reserve(2 * n);
  for (Index k = 0; k < 2 * n; ++k) {
    cplx lambda = es.eigenvalues()(k);
    Vec v = es.eigenvectors().col(k).head(n);
    v.normalize();
    refine(poly, lambda, v);
    normalize_phase(v);
    const double res = (poly.evaluate(lambda) * v).norm();
    const double bound = 1e-8 * (na * (1.0 + std::norm(lambda)) + nq * std::abs(lambda));
    if (!(res <= bound))
      throw Error(ErrorCode::ConvergenceFailure, "eigenpair residual above bound");
    out.push_back({lambda, std::move(v)});
  }
  return out;
}

std::vector<cplx> qep_eigenvalues(const PalindromicPolynomial& poly) {
  std::vector<cplx> out;
  for (const auto& p : qep_eigensolve(poly)) out.push_back(p.value);
  return out;
}

Mat jordan_nilpotent(const std::vector<int>& block_sizes) {
  int total = 0;
  for (int s : block_sizes) total += s;
  Mat N = Mat::Zero(total, total);
  int off = 0;
  for (int s : block_sizes) {
    for (int k = 0; k + 1 < s; ++k) N(off + k, off + k + 1) = 1.0;
    off += s;
  }
  return N;
}

Mat theta_nullspace_basis(const std::vector<int>& block_sizes, cplx a, cplx b) {
  const Mat N = jordan_nilpotent(block_sizes);
  const Index m = N.rows();
  const Mat I = Mat::Identity(m, m);
  // vec(L Z R) = (R^T kron L) vec(Z), column-major.
  auto kron = [](const Mat& x, const Mat& y) {
    Mat out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Index i = 0; i < x.rows(); ++i)
      for (Index j = 0; j < x.cols(); ++j)
        out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    return out;
  };
  const Mat op = a * kron(N, I) + b * kron(I, N) + kron(N, N);
  Eigen::JacobiSVD<Mat> svd(op, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double scale = std::max(1.0, s.size() ? s(0) : 0.0);
  Index rank = 0;
  while (rank < s.size() && s(rank) > 1e-10 * scale) ++rank;
  return svd.matrixV().rightCols(op.cols() - rank);
}

std::vector<std::vector<bool>> brute_force_theta_nullspace(const std::vector<int>& block_sizes,
                                                           cplx a, cplx b) {
  const Mat basis = theta_nullspace_basis(block_sizes, a, b);
  const Index m = Index(std::sqrt(double(basis.rows())) + 0.5);
  std::vector<std::vector<bool>> support(m, std::vector<bool>(m, false));
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < m; ++i)
      support[i][j] = basis.row(j * m + i).norm() > 1e-10;
  return support;
}

PalindromicPolynomial random_palindromic(int n, Flavor flavor, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto draw = [&]() {
    Mat m(n, n);
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i) {
        const double re = unif(rng);
        const double im = flavor.real() ? 0.0 : unif(rng);
        m(i, j) = cplx(re, im);
      }
    return m;
  };
  Mat A = draw();
  while (smallest_singular_ratio(A) < 1e-6) A = draw();
  const Mat Z = draw();
  Mat Q = Z + double(flavor.epsilon) * star(Z, flavor);
  return PalindromicPolynomial(flavor, std::move(A), std::move(Q));
}

double spectrum_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const cplx& z : a) {
    std::size_t best = b.size();
    for (std::size_t j = 0; j < b.size(); ++j)
      if (!used[j] && (best == b.size() || std::abs(b[j] - z) < std::abs(b[best] - z))) best = j;
    used[best] = true;
    worst = std::max(worst, std::abs(b[best] - z) / std::max(std::abs(z), 1e-300));
  }
  return worst;
}

double pairing_defect(const std::vector<cplx>& eigs, Flavor flavor) {
  std::vector<cplx> mapped;
  for (const cplx& z : eigs) mapped.push_back(partner(z, flavor));
  double d = spectrum_distance(eigs, mapped);
  if (flavor.real()) {
    std::vector<cplx> conj;
    for (const cplx& z : eigs) conj.push_back(std::conj(z));
    d = std::max(d, spectrum_distance(eigs, conj));
  }
  return d;
}

}  // namespace pqep
