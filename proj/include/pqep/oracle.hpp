#pragma once

#include <cstdint>
#include <vector>

#include "pqep/core.hpp"

namespace pqep {

struct Eigenpair {
  cplx value;
  Vec vector;
};

// Companion linearization [[0, I], [-eps A^-1 A^star, -A^-1 Q]].
// Eigenvectors: unit 2-norm, entry sum real positive (largest entry if the sum is ~0).
std::vector<Eigenpair> qep_eigensolve(const PalindromicPolynomial& poly);
std::vector<cplx> qep_eigenvalues(const PalindromicPolynomial& poly);

// Support of the nullspace of Z -> a Z N^T + b N Z + N Z N^T for the
// nilpotent Jordan structure with the given block sizes.
std::vector<std::vector<bool>> brute_force_theta_nullspace(const std::vector<int>& block_sizes,
                                                           cplx a, cplx b);
// Orthonormal basis (columns, column-major vec(Z)) of the same nullspace.
Mat theta_nullspace_basis(const std::vector<int>& block_sizes, cplx a, cplx b);
// Block-diagonal nilpotent matrix with ones on the superdiagonal of each block.
Mat jordan_nilpotent(const std::vector<int>& block_sizes);

PalindromicPolynomial random_palindromic(int n, Flavor flavor, std::uint64_t seed);

// Max relative distance after greedy nearest matching of two multisets.
// Returns +inf when sizes differ.
double spectrum_distance(const std::vector<cplx>& a, const std::vector<cplx>& b);
// Max relative defect of closure under lambda -> 1/lambda^star (and conjugation for T).
double pairing_defect(const std::vector<cplx>& eigs, Flavor flavor);

}  // namespace pqep
