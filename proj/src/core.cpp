#include "pqep/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

namespace pqep {

namespace {

void check_square_pair(const Mat& A, const Mat& Q) {
  if (A.rows() != A.cols() || Q.rows() != Q.cols() || A.rows() != Q.rows() || A.rows() == 0)
    throw Error(ErrorCode::DimensionMismatch, "A and Q must be square of equal size");
}

Mat symmetrize(const Mat& Q, const Flavor& f) {
  return 0.5 * (Q + double(f.epsilon) * star(Q, f));
}

}  // namespace

PalindromicPolynomial::PalindromicPolynomial(Flavor flavor, Mat A, Mat Q, const Tolerances& tol)
    : flavor_(flavor) {
  check_square_pair(A, Q);
  if (!all_finite(A) || !all_finite(Q))
    throw Error(ErrorCode::StructureViolation, "non-finite coefficient");
  if (flavor.real() && (!imag_is_zero(A) || !imag_is_zero(Q)))
    throw Error(ErrorCode::StructureViolation, "T flavors require real coefficients");
  const double defect = (star(Q, flavor) - double(flavor.epsilon) * Q).norm();
  if (defect > tol.structure * Q.norm())
    throw Error(ErrorCode::StructureViolation,
                "Q^star != eps Q (defect " + std::to_string(defect) + ")");
  if (smallest_singular_ratio(A) <= tol.rank)
    throw Error(ErrorCode::SingularA, "A is numerically singular");
  A_ = std::move(A);
  Q_ = symmetrize(Q, flavor);
}

PalindromicPolynomial PalindromicPolynomial::assembled(Flavor flavor, Mat A, Mat Q,
                                                       const Tolerances& tol) {
  check_square_pair(A, Q);
  if (flavor.real()) {
    A = A.real().cast<cplx>();
    Q = Q.real().cast<cplx>();
  }
  if (!all_finite(A) || !all_finite(Q))
    throw Error(ErrorCode::StructureViolation, "non-finite coefficient");
  if (smallest_singular_ratio(A) <= tol.rank)
    throw Error(ErrorCode::SingularA, "A is numerically singular");
  PalindromicPolynomial p;
  p.flavor_ = flavor;
  p.A_ = std::move(A);
  p.Q_ = symmetrize(Q, flavor);
  return p;
}

Mat PalindromicPolynomial::evaluate(cplx lambda) const {
  return lambda * lambda * A_ + lambda * Q_ + double(flavor_.epsilon) * star(A_, flavor_);
}

const char* to_string(Category c) {
  switch (c) {
    case Category::TQuadruple: return "T-quadruple";
    case Category::TUnimodularPair: return "T-unimodular-pair";
    case Category::TRealPair: return "T-real-pair";
    case Category::TUnit: return "T-unit";
    case Category::HPair: return "H-pair";
    case Category::HUnimodular: return "H-unimodular";
  }
  return "?";
}

int EigGroup::dimension() const {
  switch (category) {
    case Category::TQuadruple: return 4 * multiplicity;
    case Category::TUnimodularPair:
    case Category::TRealPair:
    case Category::HPair: return 2 * multiplicity;
    case Category::TUnit:
    case Category::HUnimodular: return multiplicity;
  }
  return 0;
}

bool EigGroup::semisimple() const {
  return std::all_of(partial_multiplicities.begin(), partial_multiplicities.end(),
                     [](int m) { return m == 1; });
}

std::vector<cplx> SpectrumSpec::flatten() const {
  std::vector<cplx> out;
  for (const auto& g : groups) out.insert(out.end(), g.members.begin(), g.members.end());
  return out;
}

bool SpectrumSpec::simple() const {
  return std::all_of(groups.begin(), groups.end(),
                     [](const EigGroup& g) { return g.multiplicity == 1; });
}

bool SpectrumSpec::has_unimodular() const {
  return std::any_of(groups.begin(), groups.end(), [](const EigGroup& g) {
    return g.category == Category::TUnimodularPair || g.category == Category::TUnit ||
           g.category == Category::HUnimodular;
  });
}

namespace {

int category_rank(Category c) {
  switch (c) {
    case Category::TQuadruple: return 0;
    case Category::TUnimodularPair: return 1;
    case Category::TRealPair: return 2;
    case Category::TUnit: return 3;
    case Category::HPair: return 0;
    case Category::HUnimodular: return 1;
  }
  return 9;
}

// Members that precede the second-partner half of a copy.
int first_partner_count(Category c) {
  switch (c) {
    case Category::TQuadruple: return 2;
    case Category::TRealPair:
    case Category::HPair: return 1;
    default: return -1;  // self-paired: no split
  }
}

struct Copy {
  Category category;
  cplx representative;
  std::vector<cplx> members;
  std::size_t first_index;
};

class Matcher {
 public:
  Matcher(const std::vector<cplx>& eigs, double tol) : eigs_(eigs), tol_(tol) {
    order_.resize(eigs.size());
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      if (eigs[a].real() != eigs[b].real()) return eigs[a].real() < eigs[b].real();
      return eigs[a].imag() < eigs[b].imag();
    });
    used_.assign(eigs.size(), false);
  }

  const std::vector<std::size_t>& order() const { return order_; }
  bool used(std::size_t i) const { return used_[i]; }
  void take(std::size_t i) { used_[i] = true; }

  // Nearest unused value to target within tol relative to |target|; ties go
  // to the lexicographically smaller value.
  std::optional<std::size_t> take_nearest(cplx target) {
    std::optional<std::size_t> best;
    double best_d = 0.0;
    for (std::size_t i : order_) {
      if (used_[i]) continue;
      const double d = std::abs(eigs_[i] - target);
      if (!best || d < best_d) {
        best = i;
        best_d = d;
      }
    }
    if (!best || best_d > tol_ * std::abs(target)) return std::nullopt;
    used_[*best] = true;
    return best;
  }

 private:
  const std::vector<cplx>& eigs_;
  double tol_;
  std::vector<std::size_t> order_;
  std::vector<bool> used_;
};

[[noreturn]] void missing_partner(cplx z, const char* what) {
  throw Error(ErrorCode::PairingViolation,
              "no " + std::string(what) + " for eigenvalue (" + std::to_string(z.real()) + ", " +
                  std::to_string(z.imag()) + ")");
}

Copy classify_one(Matcher& m, const std::vector<cplx>& eigs, std::size_t i, const Flavor& f,
                  double tol_pair, double tol_uni) {
  const cplx z = eigs[i];
  m.take(i);
  if (!f.real()) {
    if (std::abs(std::abs(z) - 1.0) <= tol_uni) return {Category::HUnimodular, z, {z}, i};
    auto j = m.take_nearest(1.0 / std::conj(z));
    if (!j) missing_partner(z, "partner 1/conj(lambda)");
    const cplx w = eigs[*j];
    const bool big_first = std::abs(z) > 1.0;
    const cplx big = big_first ? z : w;
    const cplx small = big_first ? w : z;
    return {Category::HPair, big, {big, small}, std::min(i, *j)};
  }

  if (std::abs(z - 1.0) <= tol_uni) return {Category::TUnit, cplx(1.0, 0.0), {z}, i};
  if (std::abs(z + 1.0) <= tol_uni) return {Category::TUnit, cplx(-1.0, 0.0), {z}, i};

  if (std::abs(z.imag()) <= tol_pair * std::abs(z)) {
    auto j = m.take_nearest(1.0 / z);
    if (!j) missing_partner(z, "reciprocal partner");
    const cplx w = eigs[*j];
    const bool big_first = std::abs(z) > 1.0;
    const cplx big = big_first ? z : w;
    const cplx small = big_first ? w : z;
    return {Category::TRealPair, cplx(big.real(), 0.0), {big, small}, std::min(i, *j)};
  }

  if (std::abs(std::abs(z) - 1.0) <= tol_uni) {
    auto j = m.take_nearest(std::conj(z));
    if (!j) missing_partner(z, "conjugate partner");
    const cplx w = eigs[*j];
    const cplx up = z.imag() > 0 ? z : w;
    const cplx down = z.imag() > 0 ? w : z;
    return {Category::TUnimodularPair, up, {up, down}, std::min(i, *j)};
  }

  auto jc = m.take_nearest(std::conj(z));
  if (!jc) missing_partner(z, "conjugate partner");
  auto jr = m.take_nearest(1.0 / z);
  if (!jr) missing_partner(z, "reciprocal partner");
  auto jrc = m.take_nearest(1.0 / std::conj(z));
  if (!jrc) missing_partner(z, "conjugate-reciprocal partner");
  std::vector<cplx> four = {z, eigs[*jc], eigs[*jr], eigs[*jrc]};
  cplx rep = z;
  if (std::abs(rep) < 1.0) rep = 1.0 / rep;
  if (rep.imag() < 0) rep = std::conj(rep);
  // Order the actual input values as (rep, conj rep, 1/rep, 1/conj rep).
  std::vector<cplx> ordered;
  std::vector<bool> taken(4, false);
  for (cplx target : {rep, std::conj(rep), 1.0 / rep, 1.0 / std::conj(rep)}) {
    int best = -1;
    for (int k = 0; k < 4; ++k)
      if (!taken[k] && (best < 0 || std::abs(four[k] - target) < std::abs(four[best] - target)))
        best = k;
    taken[best] = true;
    ordered.push_back(four[best]);
  }
  const std::size_t first = std::min({i, *jc, *jr, *jrc});
  return {Category::TQuadruple, rep, ordered, first};
}

}  // namespace

SpectrumSpec classify_spectrum(const std::vector<cplx>& eigs, Flavor flavor, double tol_pair,
                               double tol_unimodular) {
  if (eigs.empty()) throw Error(ErrorCode::InvariantViolation, "empty eigenvalue list");
  for (const cplx& z : eigs) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw Error(ErrorCode::InvariantViolation, "non-finite eigenvalue");
    if (std::abs(z) <= tol_pair) throw Error(ErrorCode::ZeroEigenvalue, "zero eigenvalue");
  }

  Matcher matcher(eigs, tol_pair);
  std::vector<Copy> copies;
  for (std::size_t i : matcher.order()) {
    if (matcher.used(i)) continue;
    copies.push_back(classify_one(matcher, eigs, i, flavor, tol_pair, tol_unimodular));
  }

  // Merge copies of the same eigenvalue group into one group with multiplicity.
  struct Merged {
    Category category;
    cplx representative;
    std::size_t first_index;
    std::vector<std::vector<cplx>> copies;
  };
  std::vector<Merged> merged;
  for (const Copy& c : copies) {
    auto it = std::find_if(merged.begin(), merged.end(), [&](const Merged& g) {
      return g.category == c.category &&
             std::abs(g.representative - c.representative) <=
                 tol_pair * std::abs(c.representative);
    });
    if (it == merged.end()) {
      merged.push_back({c.category, c.representative, c.first_index, {c.members}});
    } else {
      it->copies.push_back(c.members);
      it->first_index = std::min(it->first_index, c.first_index);
    }
  }
  std::stable_sort(merged.begin(), merged.end(), [](const Merged& a, const Merged& b) {
    if (category_rank(a.category) != category_rank(b.category))
      return category_rank(a.category) < category_rank(b.category);
    if (a.category == Category::TUnit && a.representative != b.representative)
      return a.representative.real() > b.representative.real();
    return a.first_index < b.first_index;
  });

  SpectrumSpec spec;
  spec.total_size = int(eigs.size());
  int units[2] = {0, 0};
  for (const Merged& g : merged) {
    EigGroup out;
    out.category = g.category;
    out.representative = g.representative;
    out.multiplicity = int(g.copies.size());
    out.partial_multiplicities.assign(g.copies.size(), 1);
    const int split = first_partner_count(g.category);
    if (split < 0) {
      for (const auto& c : g.copies) out.members.insert(out.members.end(), c.begin(), c.end());
    } else {
      for (const auto& c : g.copies) out.members.insert(out.members.end(), c.begin(), c.begin() + split);
      for (const auto& c : g.copies) out.members.insert(out.members.end(), c.begin() + split, c.end());
    }
    if (g.category == Category::TUnit) units[g.representative.real() > 0 ? 0 : 1] += out.multiplicity;
    spec.groups.push_back(std::move(out));
  }

  if (flavor == kTPlus && (units[0] % 2 != 0 || units[1] % 2 != 0))
    throw Error(ErrorCode::ParityViolation,
                "T-palindromic spectra need even multiplicities of +1 and -1");
  if (flavor == kTMinus && (units[0] + units[1]) % 2 != 0)
    throw Error(ErrorCode::ParityViolation,
                "T-anti-palindromic spectra need multiplicities of +1 and -1 of equal parity");
  return spec;
}

Mat rotation_block(cplx z) {
  Mat r(2, 2);
  r << z.real(), z.imag(), -z.imag(), z.real();
  return r;
}

SpectralLayout spectral_layout(const SpectrumSpec& spec, Flavor flavor) {
  SpectralLayout layout;
  int offset = 0;
  auto push = [&](int group, int size, cplx value, BlockRole role) {
    layout.blocks.push_back({group, offset, size, value, role});
    offset += size;
  };
  for (int gi = 0; gi < int(spec.groups.size()); ++gi) {
    const EigGroup& g = spec.groups[gi];
    if (!g.semisimple())
      throw Error(ErrorCode::UnsupportedDefective, "partial multiplicity > 1 requested");
    const int m = g.multiplicity;
    const cplx z = g.representative;
    const bool t_cat = g.category == Category::TQuadruple || g.category == Category::TRealPair ||
                       g.category == Category::TUnimodularPair || g.category == Category::TUnit;
    if (t_cat != flavor.real())
      throw Error(ErrorCode::InvariantViolation, "spectrum groups do not match the flavor");
    switch (g.category) {
      case Category::TQuadruple:
        for (int k = 0; k < m; ++k) push(gi, 2, z, BlockRole::First);
        for (int k = 0; k < m; ++k) push(gi, 2, 1.0 / z, BlockRole::Second);
        break;
      case Category::TUnimodularPair:
        for (int k = 0; k < m; ++k) push(gi, 2, z, BlockRole::Self);
        break;
      case Category::TRealPair:
        for (int k = 0; k < m; ++k) push(gi, 1, z.real(), BlockRole::First);
        for (int k = 0; k < m; ++k) push(gi, 1, 1.0 / z.real(), BlockRole::Second);
        break;
      case Category::TUnit:
        for (int k = 0; k < m; ++k) push(gi, 1, z.real(), BlockRole::Self);
        break;
      case Category::HPair:
        for (int k = 0; k < m; ++k) push(gi, 1, z, BlockRole::First);
        for (int k = 0; k < m; ++k) push(gi, 1, 1.0 / std::conj(z), BlockRole::Second);
        break;
      case Category::HUnimodular:
        for (int k = 0; k < m; ++k) push(gi, 1, z, BlockRole::Self);
        break;
    }
  }
  layout.dim = offset;
  return layout;
}

Mat build_spectral_matrix(const SpectrumSpec& spec, Flavor flavor) {
  const SpectralLayout layout = spectral_layout(spec, flavor);
  Mat J = Mat::Zero(layout.dim, layout.dim);
  for (const auto& b : layout.blocks) {
    if (b.size == 2)
      J.block(b.offset, b.offset, 2, 2) = rotation_block(b.value);
    else
      J(b.offset, b.offset) = b.value;
  }
  return J;
}

SpectralLayout scan_spectral_matrix(const Mat& J, Flavor flavor, double tol) {
  if (J.rows() != J.cols()) throw Error(ErrorCode::DimensionMismatch, "J must be square");
  const Index n = J.rows();
  const double thresh = tol * std::max(1.0, J.norm());
  SpectralLayout layout;
  Index k = 0;
  auto outside_zero = [&](Index off, Index size) {
    for (Index r = off; r < off + size; ++r)
      for (Index c = 0; c < n; ++c) {
        if (c >= off && c < off + size) continue;
        if (std::abs(J(r, c)) > thresh || std::abs(J(c, r)) > thresh) return false;
      }
    return true;
  };
  while (k < n) {
    const bool rot = flavor.real() && k + 1 < n && std::abs(J(k + 1, k)) > thresh;
    const Index size = rot ? 2 : 1;
    if (!outside_zero(k, size))
      throw Error(ErrorCode::DefectiveInput, "spectral matrix has coupling outside its blocks");
    cplx value = J(k, k);
    if (rot) {
      if (std::abs(J(k, k) - J(k + 1, k + 1)) > thresh ||
          std::abs(J(k, k + 1) + J(k + 1, k)) > thresh)
        throw Error(ErrorCode::DefectiveInput, "2x2 block is not a rotation block");
      value = cplx(J(k, k).real(), J(k, k + 1).real());
    }
    layout.blocks.push_back({int(layout.blocks.size()), int(k), int(size), value, BlockRole::Self});
    k += size;
  }
  layout.dim = int(n);
  return layout;
}

std::vector<cplx> spectral_values(const Mat& J, Flavor flavor) {
  std::vector<cplx> out;
  for (const auto& b : scan_spectral_matrix(J, flavor).blocks) {
    out.push_back(b.value);
    if (b.size == 2) out.push_back(std::conj(b.value));
  }
  return out;
}

double residual(const PalindromicPolynomial& poly, const Mat& X, const Mat& J) {
  const Mat& A = poly.A();
  if (X.rows() != A.rows() || J.rows() != J.cols() || X.cols() != J.rows())
    throw Error(ErrorCode::DimensionMismatch, "X must be n x k and J k x k");
  const Mat XJ = X * J;
  const Mat R = A * XJ * J + poly.Q() * XJ +
                double(poly.flavor().epsilon) * star(A, poly.flavor()) * X;
  return R.norm();
}

double residual_scale(const PalindromicPolynomial& poly, const Mat& X, const Mat& J) {
  const double a = poly.A().norm();
  const double j = J.norm();
  return X.norm() * (a * j * j + poly.Q().norm() * j + a);
}

}  // namespace pqep
