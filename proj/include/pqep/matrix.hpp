#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <string_view>

namespace pqep {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using Index = Eigen::Index;

enum class Star { Transpose, Conjugate };

// One of the four palindromic structures (star, epsilon).
struct Flavor {
  Star star = Star::Transpose;
  int epsilon = 1;

  bool real() const { return star == Star::Transpose; }
  std::string code() const;
  static Flavor parse(std::string_view code);

  friend bool operator==(const Flavor&, const Flavor&) = default;
};

inline constexpr Flavor kTPlus{Star::Transpose, 1};
inline constexpr Flavor kTMinus{Star::Transpose, -1};
inline constexpr Flavor kHPlus{Star::Conjugate, 1};
inline constexpr Flavor kHMinus{Star::Conjugate, -1};
inline constexpr Flavor kAllFlavors[] = {kTPlus, kTMinus, kHPlus, kHMinus};

inline Mat star(const Mat& m, Star s) {
  return s == Star::Transpose ? Mat(m.transpose()) : Mat(m.adjoint());
}
inline Mat star(const Mat& m, const Flavor& f) { return star(m, f.star); }
inline cplx star(cplx z, const Flavor& f) { return f.real() ? z : std::conj(z); }

// The partner 1/lambda^star under the flavor's pairing.
inline cplx partner(cplx z, const Flavor& f) { return 1.0 / star(z, f); }

bool all_finite(const Mat& m);
bool imag_is_zero(const Mat& m);
double smallest_singular_ratio(const Mat& m);
Mat inverse(const Mat& m);
Mat block_diag2(const Mat& a, const Mat& b);
// [[0, I_q], [-eps I_q, 0]]
Mat skew_canonical(Index q, int epsilon);

}  // namespace pqep
