#include "pqep/matrix.hpp"

#include <cmath>

#include "pqep/error.hpp"

namespace pqep {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::StructureViolation: return "StructureViolation";
    case ErrorCode::SingularA: return "SingularA";
    case ErrorCode::ZeroEigenvalue: return "ZeroEigenvalue";
    case ErrorCode::PairingViolation: return "PairingViolation";
    case ErrorCode::ParityViolation: return "ParityViolation";
    case ErrorCode::UnsupportedDefective: return "UnsupportedDefective";
    case ErrorCode::SingularAssembly: return "SingularAssembly";
    case ErrorCode::NotAStandardPair: return "NotAStandardPair";
    case ErrorCode::SingularJ: return "SingularJ";
    case ErrorCode::UnimodularUnsupported: return "UnimodularUnsupported";
    case ErrorCode::NotCongruent: return "NotCongruent";
    case ErrorCode::SingularCore: return "SingularCore";
    case ErrorCode::ConditionViolation: return "ConditionViolation";
    case ErrorCode::DefectiveInput: return "DefectiveInput";
    case ErrorCode::SingularBlock: return "SingularBlock";
    case ErrorCode::UnimodularInSpectrum: return "UnimodularInSpectrum";
    case ErrorCode::RetriesExhausted: return "RetriesExhausted";
    case ErrorCode::SpectrumSizeOdd: return "SpectrumSizeOdd";
    case ErrorCode::CategoryMismatch: return "CategoryMismatch";
    case ErrorCode::SingularUpdate: return "SingularUpdate";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::NotEigenpairs: return "NotEigenpairs";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
  }
  return "Unknown";
}

std::string Flavor::code() const {
  std::string s = star == Star::Transpose ? "T" : "H";
  s += epsilon > 0 ? "+" : "-";
  return s;
}

Flavor Flavor::parse(std::string_view code) {
  if (code == "T+") return kTPlus;
  if (code == "T-") return kTMinus;
  if (code == "H+") return kHPlus;
  if (code == "H-") return kHMinus;
  throw Error(ErrorCode::ParseError, "unknown flavor '" + std::string(code) + "'");
}

bool all_finite(const Mat& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

bool imag_is_zero(const Mat& m) { return (m.imag().array() == 0.0).all(); }

double smallest_singular_ratio(const Mat& m) {
  if (m.size() == 0) return 1.0;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  if (s(0) == 0.0) return 0.0;
  return s(s.size() - 1) / s(0);
}

Mat inverse(const Mat& m) { return m.partialPivLu().inverse(); }

Mat block_diag2(const Mat& a, const Mat& b) {
  Mat out = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

Mat skew_canonical(Index q, int epsilon) {
  Mat r = Mat::Zero(2 * q, 2 * q);
  r.topRightCorner(q, q).setIdentity();
  r.bottomLeftCorner(q, q) = -double(epsilon) * Mat::Identity(q, q);
  return r;
}

}  // namespace pqep
