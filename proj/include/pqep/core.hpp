#pragma once

#include <vector>

#include "pqep/error.hpp"
#include "pqep/matrix.hpp"

namespace pqep {

struct Tolerances {
  double pair = 1e-8;
  double unimodular = 1e-8;
  double structure = 1e-12;
  double rank = 1e-12;
};

// lambda^2 A + lambda Q + eps A^star with Q^star = eps Q.
class PalindromicPolynomial {
 public:
  // Validates structure within tol.structure, then symmetrizes Q exactly.
  PalindromicPolynomial(Flavor flavor, Mat A, Mat Q, const Tolerances& tol = {});

  // For coefficients assembled from floating-point products: symmetrizes
  // without the structure gate (T flavors drop imaginary round-off).
  static PalindromicPolynomial assembled(Flavor flavor, Mat A, Mat Q,
                                         const Tolerances& tol = {});

  const Flavor& flavor() const { return flavor_; }
  const Mat& A() const { return A_; }
  const Mat& Q() const { return Q_; }
  Index size() const { return A_.rows(); }

  Mat evaluate(cplx lambda) const;

 private:
  PalindromicPolynomial() = default;
  Flavor flavor_;
  Mat A_;
  Mat Q_;
};

struct StandardPair {
  Mat X;
  Mat J;
};

enum class Category {
  TQuadruple,
  TUnimodularPair,
  TRealPair,
  TUnit,
  HPair,
  HUnimodular,
};

const char* to_string(Category c);

struct EigGroup {
  Category category = Category::HPair;
  cplx representative;
  int multiplicity = 1;
  std::vector<int> partial_multiplicities{1};
  // Input values belonging to this group, first partners before second partners.
  std::vector<cplx> members;

  // Number of eigenvalues the group contributes (size of its J block).
  int dimension() const;
  bool semisimple() const;
};

struct SpectrumSpec {
  std::vector<EigGroup> groups;
  int total_size = 0;

  std::vector<cplx> flatten() const;
  bool simple() const;
  bool has_unimodular() const;
};

SpectrumSpec classify_spectrum(const std::vector<cplx>& eigs, Flavor flavor,
                               double tol_pair = 1e-8, double tol_unimodular = 1e-8);

enum class BlockRole { First, Second, Self };

// One diagonal block of a spectral matrix: 1x1 entry or 2x2 rotation block.
struct SpectralBlock {
  int group = 0;
  int offset = 0;
  int size = 1;
  cplx value;  // for rotation blocks, alpha + i beta of [[alpha, beta], [-beta, alpha]]
  BlockRole role = BlockRole::Self;
};

struct SpectralLayout {
  std::vector<SpectralBlock> blocks;
  int dim = 0;
};

SpectralLayout spectral_layout(const SpectrumSpec& spec, Flavor flavor);
Mat build_spectral_matrix(const SpectrumSpec& spec, Flavor flavor);
// [[a, b], [-b, a]] for z = a + ib.
Mat rotation_block(cplx z);

// Scans a block-diagonal spectral matrix into 1x1 and 2x2 rotation blocks.
// Throws DefectiveInput if coupling outside such blocks is present.
SpectralLayout scan_spectral_matrix(const Mat& J, Flavor flavor, double tol = 1e-12);

// Eigenvalues of a spectral matrix read off its blocks (rotation block z gives z, conj z).
std::vector<cplx> spectral_values(const Mat& J, Flavor flavor);

double residual(const PalindromicPolynomial& poly, const Mat& X, const Mat& J);
// Natural scale for residual comparisons: ||X|| (||A|| ||J||^2 + ||Q|| ||J|| + ||A||).
double residual_scale(const PalindromicPolynomial& poly, const Mat& X, const Mat& J);

}  // namespace pqep
