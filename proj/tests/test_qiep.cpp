#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "pqep/oracle.hpp"
#include "pqep/qiep.hpp"

using namespace pqep;

namespace {

void check_solution(const QiepSolution& sol, const std::vector<cplx>& eigs, Flavor f) {
  const PalindromicPolynomial& p = sol.poly;
  const double scale = p.A().norm() + p.Q().norm();
  CHECK(residual(p, sol.X, sol.Lambda) <= 1e-10 * scale);
  CHECK(spectrum_distance(qep_eigenvalues(p), eigs) <= 1e-6);
  CHECK((star(p.Q(), f) - double(f.epsilon) * p.Q()).norm() == 0.0);
  if (f.real()) {
    CHECK(imag_is_zero(p.A()));
    CHECK(imag_is_zero(p.Q()));
  }
  const Mat& G = sol.gamma.gamma;
  CHECK((sol.X * G * star(sol.X, f)).norm() <= 1e-10 * sol.X.squaredNorm() * G.norm());
}

const fixtures::QiepCase& printed(Flavor f) {
  static const fixtures::QiepCase tp = fixtures::t_plus_qiep(), tm = fixtures::t_minus_qiep(),
                                  hp = fixtures::h_plus_qiep(), hm = fixtures::h_minus_qiep();
  if (f == kTPlus) return tp;
  if (f == kTMinus) return tm;
  if (f == kHPlus) return hp;
  return hm;
}

std::vector<cplx> listed_spectrum(Flavor f) {
  return f.real() ? fixtures::t_qiep_spectrum() : fixtures::h_qiep_spectrum();
}

}  // namespace

TEST_CASE("solve_qiep: printed eigenvalue lists, random draws") {
  for (const Flavor& f : kAllFlavors) {
    const auto eigs = listed_spectrum(f);
    const SpectrumSpec spec = classify_spectrum(eigs, f);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      QiepOptions o;
      o.seed = seed;
      const QiepSolution sol = solve_qiep(spec, f, o);
      CAPTURE(f.code());
      CAPTURE(seed);
      check_solution(sol, eigs, f);
      CHECK(sol.attempts >= 1);
    }
  }
}

TEST_CASE("solve_qiep: printed Y1 and Xi reproduce the printed coefficients") {
  for (const Flavor& f : kAllFlavors) {
    const auto eigs = listed_spectrum(f);
    const fixtures::QiepCase& fx = printed(f);
    QiepOptions o;
    o.xi_choice = XiChoice::UserSupplied;
    o.y1 = fx.Y1;
    o.xi = fx.Xi;
    const QiepSolution sol = solve_qiep(classify_spectrum(eigs, f), f, o);
    CAPTURE(f.code());
    // Xi is printed to four digits, so its structure holds only to print precision.
    const double rel = 1e-2;
    CHECK(fixtures::max_abs_diff(sol.poly.A(), fx.A) <= rel * fx.A.cwiseAbs().maxCoeff());
    CHECK(fixtures::max_abs_diff(sol.poly.Q(), fx.Q) <= rel * fx.Q.cwiseAbs().maxCoeff());
    CHECK(spectrum_distance(qep_eigenvalues(sol.poly), eigs) <= 1e-6);
  }
}

TEST_CASE("solve_qiep: scalar {2, 1/2}") {
  const SpectrumSpec spec = classify_spectrum({2.0, 0.5}, kTPlus);
  const QiepSolution sol = solve_qiep(spec, kTPlus);
  const cplx a = sol.poly.A()(0, 0);
  const cplx q = sol.poly.Q()(0, 0);
  CHECK(std::abs(q / a + 2.5) <= 1e-12);
  CHECK(std::abs(a.imag()) == 0.0);
}

TEST_CASE("solve_qiep: determinism") {
  const SpectrumSpec spec = classify_spectrum(fixtures::h_qiep_spectrum(), kHMinus);
  QiepOptions o;
  o.seed = 42;
  const QiepSolution a = solve_qiep(spec, kHMinus, o);
  const QiepSolution b = solve_qiep(spec, kHMinus, o);
  CHECK(a.poly.A() == b.poly.A());
  CHECK(a.poly.Q() == b.poly.Q());
  CHECK(a.X == b.X);
  o.seed = 43;
  const QiepSolution c = solve_qiep(spec, kHMinus, o);
  CHECK(c.poly.A() != a.poly.A());
}

TEST_CASE("solve_qiep: random spectra round trip") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> mod(1.2, 6.0), ang(0.2, 2.9), coin(0.0, 1.0);
  for (const Flavor& f : kAllFlavors)
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const int n = 2 + int(seed % 4);
      std::vector<cplx> eigs;
      while (int(eigs.size()) < 2 * n) {
        const double r = mod(rng);
        if (f.real()) {
          if (2 * n - int(eigs.size()) >= 4 && coin(rng) < 0.5) {
            const cplx z = std::polar(r, ang(rng));
            for (cplx w : {z, std::conj(z), 1.0 / z, 1.0 / std::conj(z)}) eigs.push_back(w);
          } else {
            const double x = coin(rng) < 0.5 ? r : -r;
            eigs.push_back(x);
            eigs.push_back(1.0 / x);
          }
        } else {
          const cplx z = std::polar(r, 2 * M_PI * coin(rng));
          eigs.push_back(z);
          eigs.push_back(1.0 / std::conj(z));
        }
      }
      QiepOptions o;
      o.seed = seed;
      CAPTURE(f.code());
      CAPTURE(seed);
      const SpectrumSpec spec = classify_spectrum(eigs, f);
      if (f == kTMinus && n % 2 == 1) {
        // Real skew Xi of odd order is singular; such spectra have no T-anti realization.
        CHECK_THROWS_AS(solve_qiep(spec, f, o), Error);
        continue;
      }
      const QiepSolution sol = solve_qiep(spec, f, o);
      const PalindromicPolynomial& p = sol.poly;
      CHECK(residual(p, sol.X, sol.Lambda) <= 1e-10 * residual_scale(p, sol.X, sol.Lambda));
      CHECK(spectrum_distance(qep_eigenvalues(p), eigs) <= 1e-6);
      CHECK((star(p.Q(), f) - double(f.epsilon) * p.Q()).norm() == 0.0);
      if (f.real()) CHECK(imag_is_zero(p.A()));
    }
}

TEST_CASE("solve_qiep: Gamma is block diagonal for the certificate") {
  const SpectrumSpec spec = classify_spectrum(fixtures::t_qiep_spectrum(), kTPlus);
  const QiepSolution sol = solve_qiep(spec, kTPlus);
  const Mat G = compute_gamma(sol.poly, {sol.X, sol.Lambda}).gamma;
  CHECK((G - sol.gamma.gamma).norm() <= 1e-8 * G.norm());
}

TEST_CASE("solve_qiep: rejected inputs") {
  try {
    const cplx z = std::polar(1.0, M_PI / 3);
    solve_qiep(classify_spectrum({z, std::conj(z)}, kTPlus), kTPlus);
    FAIL("expected UnimodularInSpectrum");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnimodularInSpectrum);
  }
  try {
    solve_qiep(classify_spectrum({cplx(0, 1), cplx(0, 3), cplx(0, 1.0 / 3)}, kHPlus), kHPlus);
    FAIL("expected SpectrumSizeOdd");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SpectrumSizeOdd);
  }
  QiepOptions bad;
  bad.max_retries = 0;
  CHECK_THROWS_AS(solve_qiep(classify_spectrum({2.0, 0.5}, kTPlus), kTPlus, bad), Error);
  // A cap no draw can meet.
  QiepOptions tight;
  tight.cond_limit = 1.0 + 1e-15;
  try {
    solve_qiep(classify_spectrum(fixtures::t_qiep_spectrum(), kTPlus), kTPlus, tight);
    FAIL("expected RetriesExhausted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RetriesExhausted);
  }
}

TEST_CASE("build_canonical_T") {
  for (const Flavor& f : kAllFlavors) {
    SUBCASE("real pair") {
      if (!f.real()) return;
      const CanonicalT c = build_canonical_T(f, 1, classify_spectrum({2.0, 0.5}, f));
      Mat expected = Mat::Zero(2, 2);
      expected(0, 1) = 1.0;
      expected(1, 0) = -double(f.epsilon);
      CHECK(c.gamma.gamma == expected);
      CHECK(c.P == Mat(Mat::Identity(2, 2)));
    }
    SUBCASE("listed spectra") {
      const auto eigs = listed_spectrum(f);
      const CanonicalT c = build_canonical_T(f, 4, classify_spectrum(eigs, f));
      const Mat T = skew_canonical(4, f.epsilon);
      CHECK((c.P * c.gamma.gamma * star(c.P, f) - T).norm() == 0.0);
      // Signed permutation.
      for (Index i = 0; i < 8; ++i) CHECK(c.P.row(i).cwiseAbs().sum() == doctest::Approx(1.0));
    }
  }
  SUBCASE("one T quadruple") {
    const cplx z(-1, 2);
    const SpectrumSpec spec = classify_spectrum({z, std::conj(z), 1.0 / z, 1.0 / std::conj(z)}, kTPlus);
    const CanonicalT c = build_canonical_T(kTPlus, 2, spec);
    Mat U = Mat::Zero(2, 2);
    U(0, 0) = 1.0;
    U(1, 1) = -1.0;
    CHECK(c.gamma.gamma.topRightCorner(2, 2) == U);
    CHECK(c.gamma.gamma.bottomLeftCorner(2, 2) == Mat(-U));
  }
  SUBCASE("unimodular refused") {
    CHECK_THROWS_AS(build_canonical_T(kHPlus, 1, classify_spectrum({cplx(0, 1), cplx(0, -1)}, kHPlus)), Error);
  }
}

TEST_CASE("accepted draws satisfy the Y T Y^star check") {
  for (const Flavor& f : kAllFlavors) {
    const SpectrumSpec spec = classify_spectrum(listed_spectrum(f), f);
    const CanonicalT c = build_canonical_T(f, 4, spec);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      QiepOptions o;
      o.seed = seed;
      const QiepSolution sol = solve_qiep(spec, f, o);
      // X = Y P, so Y = X P^-1.
      const Mat Y = sol.X * inverse(c.P);
      const Mat Y1 = Y.leftCols(4);
      const Mat Xi = Y1.fullPivLu().solve(Y.rightCols(4));
      const Mat T = skew_canonical(4, f.epsilon);
      CHECK((Y * T * star(Y, f)).norm() <= 1e-12 * Y1.squaredNorm() * (1.0 + Xi.norm()));
    }
  }
}
