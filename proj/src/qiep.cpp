#include "pqep/qiep.hpp"

#include <cmath>
#include <random>

namespace pqep {

CanonicalT build_canonical_T(Flavor flavor, int n, const SpectrumSpec& spec) {
  if (spec.has_unimodular())
    throw Error(ErrorCode::UnimodularInSpectrum, "the simple form excludes modulus-one groups");
  const ParameterMatrix gamma =
      canonical_gamma(spec, flavor, CanonicalGammaParams::defaults(spec, flavor));
  if (gamma.gamma.rows() != 2 * n)
    throw Error(ErrorCode::DimensionMismatch, "spectrum size must be 2n");
  const GammaLayout layout = gamma_layout(spec, flavor);
  Mat P = Mat::Zero(2 * n, 2 * n);
  Index first = 0, second = n;
  for (const auto& blk : layout.blocks) {
    if (blk.kind == GammaBlockKind::Quad) {
      // U = diag(1, -1): flip the second first-partner row.
      P(first++, blk.index[0]) = 1.0;
      P(first++, blk.index[1]) = -1.0;
      P(second++, blk.index[2]) = 1.0;
      P(second++, blk.index[3]) = 1.0;
    } else {
      P(first++, blk.index[0]) = 1.0;
      P(second++, blk.index[1]) = 1.0;
    }
  }
  return {gamma, P};
}

namespace {

Mat random_matrix(std::mt19937_64& rng, Index n, bool real) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Mat m(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) {
      const double re = unif(rng);
      const double im = real ? 0.0 : unif(rng);
      m(i, j) = cplx(re, im);
    }
  return m;
}

double condition(const Mat& m) {
  const double r = smallest_singular_ratio(m);
  return r > 0 ? 1.0 / r : INFINITY;
}

}  // namespace

QiepSolution solve_qiep(const SpectrumSpec& spec, Flavor flavor, const QiepOptions& opts) {
  if (opts.max_retries < 1 || opts.cond_limit <= 1)
    throw Error(ErrorCode::InvariantViolation, "max_retries >= 1 and cond_limit > 1 required");
  if (spec.total_size % 2 != 0)
    throw Error(ErrorCode::SpectrumSizeOdd, "QIEP needs an even number of eigenvalues");
  if (spec.has_unimodular())
    throw Error(ErrorCode::UnimodularInSpectrum, "prescribed eigenvalues must satisfy |lambda| != 1");
  const int n = spec.total_size / 2;
  const Mat Lambda = build_spectral_matrix(spec, flavor);
  const CanonicalT canon = build_canonical_T(flavor, n, spec);
  const Mat& G = canon.gamma.gamma;
  const Mat T = skew_canonical(n, flavor.epsilon);
  const double eps = flavor.epsilon;

  std::mt19937_64 rng(opts.seed);
  const bool user = opts.xi_choice == XiChoice::UserSupplied;
  if (user && (!opts.y1 || !opts.xi))
    throw Error(ErrorCode::InvariantViolation, "user-supplied Y1 and Xi required");
  const int attempts = user ? 1 : opts.max_retries;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    Mat Y1, Xi;
    if (user) {
      Y1 = *opts.y1;
      Xi = *opts.xi;
      if (Y1.rows() != n || Y1.cols() != n || Xi.rows() != n || Xi.cols() != n)
        throw Error(ErrorCode::DimensionMismatch, "Y1 and Xi must be n x n");
    } else {
      Y1 = random_matrix(rng, n, flavor.real());
      const Mat Z = random_matrix(rng, n, flavor.real());
      Xi = Z + eps * star(Z, flavor);
    }
    if (condition(Y1) > opts.cond_limit || condition(Xi) > opts.cond_limit) continue;
    Mat Y(n, 2 * n);
    Y << Y1, Y1 * Xi;
    const double ycheck = (Y * T * star(Y, flavor)).norm();
    if (ycheck > 1e-12 * Y1.squaredNorm() * (1.0 + Xi.norm())) continue;
    const Mat X = Y * canon.P;
    const Mat core = X * Lambda * G * star(X, flavor);
    if (condition(core) > opts.cond_limit) continue;
    PalindromicPolynomial poly = reconstruct(X, Lambda, canon.gamma);
    return {std::move(poly), X, Lambda, canon.gamma, attempt};
  }
  throw Error(ErrorCode::RetriesExhausted, "no draw produced a well-conditioned core");
}

}  // namespace pqep
