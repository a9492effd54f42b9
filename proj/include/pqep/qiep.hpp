#pragma once

#include <cstdint>
#include <optional>

#include "pqep/decomposition.hpp"

namespace pqep {

enum class XiChoice { StructuredRandom, UserSupplied };

struct QiepOptions {
  std::uint64_t seed = 0;
  int max_retries = 20;
  double cond_limit = 1e8;
  double tol_unimodular = 1e-8;
  XiChoice xi_choice = XiChoice::StructuredRandom;
  // Used when xi_choice is UserSupplied.
  std::optional<Mat> y1;
  std::optional<Mat> xi;
};

struct QiepSolution {
  PalindromicPolynomial poly;
  Mat X;
  Mat Lambda;
  ParameterMatrix gamma;
  int attempts = 0;
};

struct CanonicalT {
  ParameterMatrix gamma;
  Mat P;  // P Gamma P^star = [[0, I_n], [-eps I_n, 0]]
};

CanonicalT build_canonical_T(Flavor flavor, int n, const SpectrumSpec& spec);

QiepSolution solve_qiep(const SpectrumSpec& spec, Flavor flavor, const QiepOptions& opts = {});

}  // namespace pqep
