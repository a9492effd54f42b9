#pragma once

#include "pqep/gamma.hpp"

namespace pqep {

struct ReconstructOptions {
  double singular_core = 1e-12;  // smallest/largest singular value of X J Gamma X^star
  double condition = 1e-8;       // ||X Gamma X^star|| relative to ||X||^2 ||Gamma||
  bool check_condition = true;
};

// A = (X J Gamma X^star)^-1, Q = -A X J^2 Gamma X^star A.
PalindromicPolynomial reconstruct(const Mat& X, const Mat& J, const ParameterMatrix& gamma,
                                  const ReconstructOptions& opts = {});

struct DecompositionReport {
  double pair_residual = 0;
  double pair_residual_relative = 0;
  double skew_defect = 0;
  double intertwine_defect = 0;
  double xgx_defect = 0;  // ||X Gamma X^star|| / (||X||^2 ||Gamma||)
  double roundtrip_error_A = 0;
  double roundtrip_error_Q = 0;
  Mat gamma;
  bool pass = false;
};

// Computes Gamma when gamma is empty, otherwise verifies the supplied one.
DecompositionReport verify_decomposition(const PalindromicPolynomial& poly, const Mat& X,
                                         const Mat& J, double tol, const Mat& gamma = Mat());

struct NormalizedPair {
  Mat X;
  ParameterMatrix gamma;
  Mat transform;  // T with X_new = X T^-1, Gamma_new = T Gamma T^star
};

NormalizedPair normalize_semisimple(const Mat& X, const Mat& J, const ParameterMatrix& gamma,
                                    Flavor flavor);

// Real-representation transform for T flavors: X_real = X_complex * frame_inverse.
// Each 2x2 rotation block uses M = (1/sqrt 2) [[1, 1], [-i, i]].
Mat real_frame(const SpectralLayout& layout);

}  // namespace pqep
