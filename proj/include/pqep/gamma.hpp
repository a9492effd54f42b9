#pragma once

#include <vector>

#include "pqep/core.hpp"

namespace pqep {

struct ParameterMatrix {
  Mat gamma;
  Flavor flavor;
};

// Inverse of Y_L^star [[Q, A], [A, 0]] X_L with X_L = [X; XJ], Y_L = [X; XJ^-1].
// residual_gate is relative to residual_scale(); pass infinity to skip the check.
ParameterMatrix compute_gamma(const PalindromicPolynomial& poly, const StandardPair& pair,
                              double residual_gate = 1e-8);

struct MembershipReport {
  double skew_defect = 0;
  double intertwine_defect = 0;
  bool pass = false;
};

MembershipReport gamma_membership(const Mat& gamma, const Mat& J, Flavor flavor, double tol);

struct ThetaMask {
  std::vector<int> block_sizes;
  std::vector<std::vector<bool>> allowed;
};

ThetaMask theta_mask(const std::vector<int>& block_sizes);
bool verify_theta(const Mat& Z, const Mat& N, cplx a, cplx b, double tol);

// Free parameters of the canonical Gamma, one entry per group in spec order.
//  T-quadruple: U = [[a, b], [b, -a]] from (first, second) = (a, b)
//  T pairs: first = xi (xi_hat for T- unimodular pairs)
//  T-unit (T- only): first = the scalar
//  H-pair: first = eta
//  H-unimodular: first = sign value (+-i for H+, +-1 for H-)
struct GroupParams {
  cplx first{1.0, 0.0};
  cplx second{0.0, 0.0};
};

struct CanonicalGammaParams {
  std::vector<GroupParams> groups;
  // U = diag(1, -1), xi = eta = 1, unimodular signs +1 (or +i).
  static CanonicalGammaParams defaults(const SpectrumSpec& spec, Flavor flavor);
};

ParameterMatrix canonical_gamma(const SpectrumSpec& spec, Flavor flavor,
                                const CanonicalGammaParams& params);

// Block structure of a Gamma in canonical-group layout.
enum class GammaBlockKind { Pair, Quad, Scalar };

struct GammaBlock {
  GammaBlockKind kind;
  // Pair: {first, second}; Quad: {f1, f2, s1, s2}; Scalar: {index}.
  std::vector<int> index;
};

struct GammaLayout {
  std::vector<GammaBlock> blocks;
  int dim = 0;
};

// Layout of a canonical Gamma for the given spectral layout (simple spectra).
GammaLayout gamma_layout(const SpectrumSpec& spec, Flavor flavor);
// Layout read off the sparsity pattern of gamma.
GammaLayout gamma_layout_from_pattern(const Mat& gamma, Flavor flavor, double tol = 1e-8);

enum class PairScaling {
  Symmetric,    // diag(conj(sgn xi)/sqrt|xi|, 1/sqrt|xi|)
  PartnerSwap,  // [[0, -eps/conj(xi)], [1, 0]]
};

struct Congruence {
  Mat P;
  Mat R;
  int q = 0;
  // Sign blocks of the modulus-one part, in the order they appear in R.
  std::vector<cplx> signature;
};

// P gamma P^star = R = diag([[0, I_q], [-eps I_q, 0]], E).
Congruence congruence_to_canonical(const Mat& gamma1, Flavor flavor,
                                   PairScaling scaling = PairScaling::Symmetric);
Congruence congruence_to_canonical(const Mat& gamma1, Flavor flavor, const GammaLayout& layout,
                                   PairScaling scaling);

}  // namespace pqep
