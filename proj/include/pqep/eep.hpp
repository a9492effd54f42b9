#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pqep/decomposition.hpp"

namespace pqep {

enum class PhiChoice { Identity, RandomStructured };

// [[F1, F2], [-eps F2, F1]] with Phi^star Phi = I, hence Phi R Phi^star = R.
Mat solve_phi_tilde(Flavor flavor, int q, std::uint64_t seed, PhiChoice choice);

Mat extract_gamma1(const PalindromicPolynomial& poly, const Mat& X1, const Mat& Lambda1,
                   double residual_gate = 1e-8);

// Frobenius norm of [X2^*, L2^-* X2^*] [[Q, A], [A, 0]] [X1; X1 L1].
double check_decoupling(const PalindromicPolynomial& poly, const Mat& X1, const Mat& Lambda1,
                        const Mat& X2, const Mat& Lambda2);

// Pairs the blocks of a measured spectral matrix into canonical Gamma blocks.
GammaLayout gamma_layout_from_spectral(const Mat& J, Flavor flavor, double tol_pair = 1e-8);

struct MeasuredEigenpairs {
  Mat X;
  Mat Lambda;
  SpectrumSpec spec;
};

// Picks oracle eigenpairs nearest to targets (within tol_select relative) and
// lays them out as (X1, Lambda1) in the canonical group order.
MeasuredEigenpairs select_eigenpairs(const PalindromicPolynomial& poly,
                                     const std::vector<cplx>& targets, double tol_select = 1e-3);

struct EmbeddingRequest {
  PalindromicPolynomial poly;
  Mat X1;
  Mat Lambda1;
  Mat Lambda1_new;
  std::uint64_t seed = 0;
  PhiChoice phi_choice = PhiChoice::Identity;
  std::optional<Mat> gamma1_new;  // defaults to the canonical form
  double tol_pair = 1e-8;
  double residual_gate = 1e-8;
  bool check_spectrum = true;  // a posteriori oracle checks
};

struct EmbeddingReport {
  double new_residual = 0;
  double new_residual_relative = 0;
  double retained_residual = 0;
  double retained_residual_relative = 0;
  double retained_deviation = 0;
  double retained_angle = 0;
  double new_eigen_deviation = 0;
  double phi_defect = 0;
  double structure_defect = 0;
  bool spectrum_checked = false;
};

struct EmbeddingResult {
  PalindromicPolynomial poly_new;
  Mat X1_new;
  Mat gamma1;
  Mat gamma1_new;
  Mat phi;
  EmbeddingReport report;
};

EmbeddingResult embed(const EmbeddingRequest& req);

// Builds the request from eigenvalue lists: from-values select oracle eigenpairs.
EmbeddingRequest make_request(const PalindromicPolynomial& poly, const std::vector<cplx>& from,
                              const std::vector<cplx>& to, double tol_select = 1e-3,
                              double tol_pair = 1e-8);

}  // namespace pqep
