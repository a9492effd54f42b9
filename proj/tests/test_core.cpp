#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "pqep/core.hpp"
#include "pqep/oracle.hpp"

using namespace pqep;

namespace {

int count(const SpectrumSpec& s, Category c) {
  return int(std::count_if(s.groups.begin(), s.groups.end(),
                           [&](const EigGroup& g) { return g.category == c; }));
}

bool same_multiset(std::vector<cplx> a, std::vector<cplx> b, double tol) {
  return spectrum_distance(a, b) <= tol;
}

Mat scalar_pair_poly_A() { return Mat::Constant(1, 1, 2.0 / 3.0); }
Mat scalar_pair_poly_Q() { return Mat::Constant(1, 1, -5.0 / 3.0); }

}  // namespace

TEST_CASE("flavor codes round trip") {
  for (const Flavor& f : kAllFlavors) CHECK(Flavor::parse(f.code()) == f);
  CHECK_THROWS_AS(Flavor::parse("X+"), Error);
  CHECK(kTPlus.real());
  CHECK_FALSE(kHMinus.real());
}

TEST_CASE("polynomial construction validates structure") {
  const Mat A = Mat::Identity(2, 2);
  Mat Q(2, 2);
  Q << 1, 2, 3, 4;
  CHECK_THROWS_WITH_AS(PalindromicPolynomial(kTPlus, A, Q), doctest::Contains("StructureViolation"),
                       Error);
  CHECK_THROWS_AS(PalindromicPolynomial(kTPlus, Mat::Zero(2, 2), Mat::Zero(2, 2)), Error);
  Mat Qc = Mat::Zero(2, 2);
  Qc(0, 1) = cplx(0, 1);
  Qc(1, 0) = cplx(0, 1);
  CHECK_THROWS_AS(PalindromicPolynomial(kTPlus, A, Qc), Error);  // T flavors are real
  const PalindromicPolynomial ok(kHMinus, A, Mat::Identity(2, 2) * cplx(0, 1));
  CHECK((ok.Q().adjoint() + ok.Q()).norm() == 0.0);
  try {
    PalindromicPolynomial(kTPlus, Mat::Zero(2, 2), Mat::Zero(2, 2));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularA);
  }
}

TEST_CASE("classify: worked T list gives one quadruple and two real pairs") {
  const SpectrumSpec s = classify_spectrum(fixtures::t_qiep_spectrum(), kTPlus);
  CHECK(s.groups.size() == 3);
  CHECK(count(s, Category::TQuadruple) == 1);
  CHECK(count(s, Category::TRealPair) == 2);
  CHECK(s.groups[0].category == Category::TQuadruple);
  CHECK(s.total_size == 8);
}

TEST_CASE("classify: reciprocal real pair") {
  const SpectrumSpec s = classify_spectrum({2.0, 0.5}, kTPlus);
  REQUIRE(s.groups.size() == 1);
  CHECK(s.groups[0].category == Category::TRealPair);
}

TEST_CASE("classify: unpaired values are rejected for every flavor") {
  for (const Flavor& f : kAllFlavors) {
    try {
      classify_spectrum({2.0, 3.0}, f);
      FAIL("expected PairingViolation");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::PairingViolation);
    }
  }
}

TEST_CASE("classify: worked H list gives four H-pairs") {
  const SpectrumSpec s = classify_spectrum(fixtures::h_qiep_spectrum(), kHPlus);
  CHECK(s.groups.size() == 4);
  CHECK(count(s, Category::HPair) == 4);
}

TEST_CASE("classify: zero and parity errors") {
  try {
    classify_spectrum({0.0, 1.0}, kTMinus);
    FAIL("expected ZeroEigenvalue");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroEigenvalue);
  }
  try {
    classify_spectrum({1.0, -1.0}, kTPlus);  // odd multiplicities of +-1
    FAIL("expected ParityViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParityViolation);
  }
  const SpectrumSpec ok = classify_spectrum({1.0, -1.0}, kTMinus);
  CHECK(count(ok, Category::TUnit) == 2);
  const SpectrumSpec uni = classify_spectrum({cplx(0.6, 0.8), cplx(0.6, -0.8)}, kTMinus);
  CHECK(count(uni, Category::TUnimodularPair) == 1);
  const SpectrumSpec h_uni = classify_spectrum({cplx(0, 1)}, kHPlus);
  CHECK(count(h_uni, Category::HUnimodular) == 1);
}

TEST_CASE("classify then flatten is the identity on the multiset") {
  for (const auto& [eigs, f] :
       std::vector<std::pair<std::vector<cplx>, Flavor>>{{fixtures::t_qiep_spectrum(), kTPlus},
                                                         {fixtures::t_qiep_spectrum(), kTMinus},
                                                         {fixtures::h_qiep_spectrum(), kHMinus},
                                                         {{1.0, -1.0, 3.0, 1.0 / 3.0}, kTMinus}}) {
    const SpectrumSpec s = classify_spectrum(eigs, f);
    CHECK(same_multiset(s.flatten(), eigs, 1e-15));
  }
}

TEST_CASE("spectral matrix blocks") {
  SUBCASE("real pair") {
    const Mat J = build_spectral_matrix(classify_spectrum({-4.0, -0.25}, kTPlus), kTPlus);
    Mat expect = Mat::Zero(2, 2);
    expect(0, 0) = -4.0;
    expect(1, 1) = -0.25;
    CHECK((J - expect).norm() == 0.0);
  }
  SUBCASE("quadruple") {
    const cplx z(-1, 2);
    const Mat J = build_spectral_matrix(
        classify_spectrum({z, std::conj(z), 1.0 / z, 1.0 / std::conj(z)}, kTPlus), kTPlus);
    const Mat expect = fixtures::rows(4, 4, {-1, 2, 0, 0, -2, -1, 0, 0,
                                             0, 0, -0.2, -0.4, 0, 0, 0.4, -0.2});
    CHECK((J - expect).norm() <= 1e-15);
    CHECK(imag_is_zero(J));
  }
  SUBCASE("H pair") {
    const cplx z(-3, -5);
    const Mat J = build_spectral_matrix(classify_spectrum({z, 1.0 / std::conj(z)}, kHPlus), kHPlus);
    CHECK(std::abs(J(0, 0) - z) <= 1e-15);
    // 1/conj(z) = 1/(-3+5i) = (-3-5i)/34
    CHECK(std::abs(J(1, 1) - cplx(-3, -5) / 34.0) <= 1e-15);
  }
}

TEST_CASE("spectral matrix eigenvalues equal the requested multiset") {
  const auto eigs = fixtures::t_qiep_spectrum();
  const Mat J = build_spectral_matrix(classify_spectrum(eigs, kTPlus), kTPlus);
  Eigen::ComplexEigenSolver<Mat> es(J);
  std::vector<cplx> got(es.eigenvalues().data(), es.eigenvalues().data() + J.rows());
  CHECK(spectrum_distance(got, eigs) <= 1e-12);
}

TEST_CASE("defective groups are refused in simple-spectrum mode") {
  const SpectrumSpec s = classify_spectrum({2.0, 2.0, 0.5, 0.5}, kTPlus);
  SpectrumSpec d = s;
  d.groups[0].partial_multiplicities = {2};
  try {
    build_spectral_matrix(d, kTPlus);
    FAIL("expected UnsupportedDefective");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedDefective);
  }
}

TEST_CASE("residual examples") {
  const PalindromicPolynomial poly(kTPlus, scalar_pair_poly_A(), scalar_pair_poly_Q());
  Mat X(1, 2);
  X << 1, 1;
  Mat J = Mat::Zero(2, 2);
  J(0, 0) = 2.0;
  J(1, 1) = 0.5;
  CHECK(residual(poly, X, J) < 1e-15);
  CHECK(residual(poly, Mat::Zero(1, 2), J) == 0.0);
  CHECK_THROWS_AS(residual(poly, Mat::Zero(2, 2), J), Error);
}

TEST_CASE("residual of the printed T-palindromic system with oracle eigenpairs") {
  const fixtures::TPalindromicEep fx;
  const PalindromicPolynomial poly(kTPlus, fx.A, fx.Q);
  const auto pairs = qep_eigensolve(poly);
  Mat X(4, 8);
  Mat L = Mat::Zero(8, 8);
  for (int k = 0; k < 8; ++k) {
    X.col(k) = pairs[k].vector;
    L(k, k) = pairs[k].value;
  }
  CHECK(residual(poly, X, L) <= 1e-10 * fx.A.norm());
}

TEST_CASE("residual is absolutely homogeneous") {
  const PalindromicPolynomial poly = random_palindromic(4, kHPlus, 7);
  const auto pairs = qep_eigensolve(poly);
  Mat X(4, 8);
  Mat L = Mat::Zero(8, 8);
  for (int k = 0; k < 8; ++k) {
    X.col(k) = pairs[k].vector + Vec::Constant(4, 0.01);  // not eigenvectors
    L(k, k) = pairs[k].value;
  }
  const double c = 3.7;
  const PalindromicPolynomial scaled(kHPlus, c * poly.A(), c * poly.Q());
  const double r = residual(poly, X, L);
  CHECK(std::abs(residual(scaled, X, L) - c * r) <= 1e-13 * c * r);
}

TEST_CASE("spectral matrix scan rejects coupling") {
  Mat J = Mat::Identity(3, 3) * 2.0;
  J(0, 2) = 1.0;
  try {
    scan_spectral_matrix(J, kHPlus);
    FAIL("expected DefectiveInput");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DefectiveInput);
  }
}
