#include "pqep/eep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "pqep/oracle.hpp"

namespace pqep {

namespace {

Mat random_unitary(std::mt19937_64& rng, Index q, bool real) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat Z(q, q);
  for (Index j = 0; j < q; ++j)
    for (Index i = 0; i < q; ++i) {
      const double re = normal(rng);
      const double im = real ? 0.0 : normal(rng);
      Z(i, j) = cplx(re, im);
    }
  Eigen::HouseholderQR<Mat> qr(Z);
  Mat Qm = qr.householderQ() * Mat::Identity(q, q);
  const Mat R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < q; ++j) {
    const double mag = std::abs(R(j, j));
    if (mag > 0) Qm.col(j) *= R(j, j) / mag;
  }
  if (real) Qm = Qm.real().cast<cplx>();
  return Qm;
}

Mat two_by_two(const Mat& f1, const Mat& f2, double lower_sign) {
  const Index q = f1.rows();
  Mat out(2 * q, 2 * q);
  out << f1, f2, lower_sign * f2, f1;
  return out;
}

Mat diag_of(const std::vector<cplx>& values) {
  Mat D = Mat::Zero(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) D(i, i) = values[i];
  return D;
}

// Greedy nearest matching of each a-value to an unused b-index.
std::vector<std::size_t> greedy_match(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  std::vector<bool> used(b.size(), false);
  std::vector<std::size_t> out;
  for (const cplx& z : a) {
    std::size_t best = b.size();
    for (std::size_t j = 0; j < b.size(); ++j)
      if (!used[j] && (best == b.size() || std::abs(b[j] - z) < std::abs(b[best] - z))) best = j;
    if (best == b.size()) throw Error(ErrorCode::InvariantViolation, "spectrum too small to match");
    used[best] = true;
    out.push_back(best);
  }
  return out;
}

double rel_dist(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(a), 1e-300); }

}  // namespace

Mat solve_phi_tilde(Flavor flavor, int q, std::uint64_t seed, PhiChoice choice) {
  if (q < 1) throw Error(ErrorCode::InvariantViolation, "q >= 1 required");
  if (choice == PhiChoice::Identity) return Mat::Identity(2 * q, 2 * q);
  std::mt19937_64 rng(seed);
  const double eps = flavor.epsilon;
  if (flavor.real()) {
    if (eps > 0) {
      const Mat U = random_unitary(rng, q, false);
      return two_by_two(U.real().cast<cplx>(), U.imag().cast<cplx>(), -1.0);
    }
    const Mat O1 = random_unitary(rng, q, true);
    const Mat O2 = random_unitary(rng, q, true);
    return two_by_two(0.5 * (O1 + O2), 0.5 * (O1 - O2), 1.0);
  }
  const Mat W1 = random_unitary(rng, q, false);
  const Mat W2 = random_unitary(rng, q, false);
  if (eps > 0) return two_by_two(0.5 * (W1 + W2), (W1 - W2) / cplx(0.0, 2.0), -1.0);
  return two_by_two(0.5 * (W1 + W2), 0.5 * (W1 - W2), 1.0);
}

Mat extract_gamma1(const PalindromicPolynomial& poly, const Mat& X1, const Mat& Lambda1,
                   double residual_gate) {
  try {
    return compute_gamma(poly, {X1, Lambda1}, residual_gate).gamma;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotAStandardPair)
      throw Error(ErrorCode::NotEigenpairs, "measured pairs are not eigenpairs of the polynomial");
    if (e.code() == ErrorCode::SingularJ)
      throw Error(ErrorCode::SingularAssembly, "Lambda1 is singular");
    throw;
  }
}

double check_decoupling(const PalindromicPolynomial& poly, const Mat& X1, const Mat& Lambda1,
                        const Mat& X2, const Mat& Lambda2) {
  if (X1.cols() == 0 || X2.cols() == 0) return 0.0;
  const Index n = poly.size();
  if (X1.rows() != n || X2.rows() != n || Lambda1.rows() != X1.cols() ||
      Lambda2.rows() != X2.cols() || Lambda1.cols() != Lambda1.rows() ||
      Lambda2.cols() != Lambda2.rows())
    throw Error(ErrorCode::DimensionMismatch, "eigenpair blocks not conformal");
  const Flavor& f = poly.flavor();
  const Mat X2s = star(X2, f);
  const Mat L2is = star(inverse(Lambda2), f);
  const Mat prod = X2s * poly.Q() * X1 + X2s * poly.A() * X1 * Lambda1 + L2is * X2s * poly.A() * X1;
  return prod.norm();
}

GammaLayout gamma_layout_from_spectral(const Mat& J, Flavor flavor, double tol_pair) {
  const SpectralLayout sl = scan_spectral_matrix(J, flavor);
  const auto& blocks = sl.blocks;
  const std::size_t nb = blocks.size();
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t j = i + 1; j < nb; ++j) {
      const cplx a = blocks[i].value, b = blocks[j].value;
      const bool same = std::abs(a - b) <= tol_pair * std::abs(a) ||
                        (blocks[i].size == 2 && std::abs(std::conj(a) - b) <= tol_pair * std::abs(a));
      if (same) throw Error(ErrorCode::InvariantViolation, "repeated eigenvalue in measured set");
    }

  auto unimodular = [&](cplx z) { return std::abs(std::abs(z) - 1.0) <= tol_pair; };
  GammaLayout layout;
  layout.dim = sl.dim;
  std::vector<bool> done(nb, false);
  for (std::size_t i = 0; i < nb; ++i) {
    if (done[i]) continue;
    const SpectralBlock& b = blocks[i];
    done[i] = true;
    const bool self = flavor.real() ? (b.size == 2 ? unimodular(b.value)
                                                   : (std::abs(b.value - 1.0) <= tol_pair ||
                                                      std::abs(b.value + 1.0) <= tol_pair))
                                    : unimodular(b.value);
    if (self) {
      if (flavor == kTPlus && b.size == 1)
        throw Error(ErrorCode::UnimodularUnsupported,
                    "+1 and -1 cannot be simple eigenvalues of a T-palindromic polynomial");
      if (flavor == kTPlus) {
        layout.blocks.push_back({GammaBlockKind::Pair, {b.offset, b.offset + 1}});
      } else {
        for (int k = 0; k < b.size; ++k)
          layout.blocks.push_back({GammaBlockKind::Scalar, {b.offset + k}});
      }
      continue;
    }
    const cplx target = partner(b.value, flavor);
    std::size_t match = nb;
    for (std::size_t j = 0; j < nb; ++j) {
      if (done[j] || blocks[j].size != b.size) continue;
      const cplx v = blocks[j].value;
      if (std::abs(v - target) <= tol_pair * std::abs(target) ||
          (b.size == 2 && std::abs(v - std::conj(target)) <= tol_pair * std::abs(target))) {
        match = j;
        break;
      }
    }
    if (match == nb) throw Error(ErrorCode::PairingViolation, "measured set is not pairing-closed");
    done[match] = true;
    const SpectralBlock& big = std::abs(b.value) > 1.0 ? b : blocks[match];
    const SpectralBlock& small = std::abs(b.value) > 1.0 ? blocks[match] : b;
    if (b.size == 2)
      layout.blocks.push_back({GammaBlockKind::Quad,
                               {big.offset, big.offset + 1, small.offset, small.offset + 1}});
    else
      layout.blocks.push_back({GammaBlockKind::Pair, {big.offset, small.offset}});
  }
  return layout;
}

MeasuredEigenpairs select_eigenpairs(const PalindromicPolynomial& poly,
                                     const std::vector<cplx>& targets, double tol_select) {
  const auto pairs = qep_eigensolve(poly);
  std::vector<cplx> values;
  for (const auto& p : pairs) values.push_back(p.value);
  std::vector<bool> used(values.size(), false);
  std::vector<cplx> picked;
  std::vector<std::size_t> picked_index;
  for (const cplx& t : targets) {
    std::size_t best = values.size();
    for (std::size_t j = 0; j < values.size(); ++j)
      if (!used[j] && (best == values.size() || std::abs(values[j] - t) < std::abs(values[best] - t)))
        best = j;
    if (best == values.size() || std::abs(values[best] - t) > tol_select * std::max(1.0, std::abs(t)))
      throw Error(ErrorCode::InvariantViolation, "requested eigenvalue not found in the spectrum");
    used[best] = true;
    picked.push_back(values[best]);
    picked_index.push_back(best);
  }
  const Flavor& f = poly.flavor();
  SpectrumSpec spec;
  try {
    spec = classify_spectrum(picked, f, 1e-6, 1e-6);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::PairingViolation || e.code() == ErrorCode::ParityViolation)
      throw Error(ErrorCode::InvariantViolation, std::string("measured set: ") + e.what());
    throw;
  }
  auto vector_of = [&](cplx member) -> const Vec& {
    for (std::size_t k = 0; k < picked.size(); ++k)
      if (picked[k] == member) return pairs[picked_index[k]].vector;
    throw Error(ErrorCode::InvariantViolation, "internal: member not found");
  };

  const Index n = poly.size();
  const double r2 = std::sqrt(2.0);
  std::vector<Vec> cols;
  std::vector<std::pair<cplx, int>> blocks;  // value, size
  auto add_real = [&](cplx z) {
    cols.push_back(vector_of(z).real().cast<cplx>());
    blocks.push_back({z.real(), 1});
  };
  auto add_rot = [&](cplx z) {
    const Vec& v = vector_of(z);
    cols.push_back(r2 * v.real().cast<cplx>());
    cols.push_back(r2 * v.imag().cast<cplx>());
    blocks.push_back({z, 2});
  };
  auto add_complex = [&](cplx z) {
    cols.push_back(vector_of(z));
    blocks.push_back({z, 1});
  };
  for (const auto& g : spec.groups) {
    if (g.multiplicity != 1)
      throw Error(ErrorCode::InvariantViolation, "repeated eigenvalue in measured set");
    switch (g.category) {
      case Category::TQuadruple: add_rot(g.members[0]); add_rot(g.members[2]); break;
      case Category::TUnimodularPair: add_rot(g.members[0]); break;
      case Category::TRealPair: add_real(g.members[0]); add_real(g.members[1]); break;
      case Category::TUnit: add_real(g.members[0]); break;
      case Category::HPair: add_complex(g.members[0]); add_complex(g.members[1]); break;
      case Category::HUnimodular: add_complex(g.members[0]); break;
    }
  }
  MeasuredEigenpairs out;
  out.spec = spec;
  out.X = Mat(n, cols.size());
  for (std::size_t k = 0; k < cols.size(); ++k) out.X.col(k) = cols[k];
  out.Lambda = Mat::Zero(cols.size(), cols.size());
  Index off = 0;
  for (const auto& [z, size] : blocks) {
    if (size == 2)
      out.Lambda.block(off, off, 2, 2) = rotation_block(z);
    else
      out.Lambda(off, off) = z;
    off += size;
  }
  return out;
}

EmbeddingRequest make_request(const PalindromicPolynomial& poly, const std::vector<cplx>& from,
                              const std::vector<cplx>& to, double tol_select, double tol_pair) {
  MeasuredEigenpairs m = select_eigenpairs(poly, from, tol_select);
  SpectrumSpec target;
  try {
    target = classify_spectrum(to, poly.flavor(), tol_pair, tol_pair);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::PairingViolation || e.code() == ErrorCode::ParityViolation)
      throw Error(ErrorCode::InvariantViolation, std::string("replacement set: ") + e.what());
    throw;
  }
  EmbeddingRequest req{poly, m.X, m.Lambda, build_spectral_matrix(target, poly.flavor()), 0,
                       PhiChoice::Identity, std::nullopt};
  req.tol_pair = tol_pair;
  return req;
}

namespace {

Mat canonical_target(const GammaLayout& layout, Flavor flavor, const std::vector<cplx>& signs) {
  const double eps = flavor.epsilon;
  Mat G = Mat::Zero(layout.dim, layout.dim);
  std::size_t e = 0;
  for (const auto& blk : layout.blocks) {
    switch (blk.kind) {
      case GammaBlockKind::Pair:
        G(blk.index[0], blk.index[1]) = 1.0;
        G(blk.index[1], blk.index[0]) = -eps;
        break;
      case GammaBlockKind::Quad:
        G(blk.index[0], blk.index[2]) = 1.0;
        G(blk.index[1], blk.index[3]) = -1.0;
        G(blk.index[2], blk.index[0]) = -eps;
        G(blk.index[3], blk.index[1]) = eps;
        break;
      case GammaBlockKind::Scalar: {
        cplx s = flavor.epsilon > 0 ? cplx(0, 1) : cplx(1, 0);
        if (e < signs.size()) s = signs[e];
        ++e;
        G(blk.index[0], blk.index[0]) = s;
        break;
      }
    }
  }
  return G;
}

Congruence reduce(const Mat& G, Flavor flavor, const GammaLayout& layout, PairScaling scaling) {
  try {
    return congruence_to_canonical(G, flavor, layout, scaling);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotCongruent)
      throw Error(ErrorCode::CategoryMismatch, e.what());
    throw;
  }
}

}  // namespace

EmbeddingResult embed(const EmbeddingRequest& req) {
  const PalindromicPolynomial& poly = req.poly;
  const Flavor& f = poly.flavor();
  const double eps = f.epsilon;
  const Index n = poly.size();
  const Index p = req.X1.cols();
  if (req.X1.rows() != n || req.Lambda1.rows() != p || req.Lambda1.cols() != p ||
      req.Lambda1_new.rows() != p || req.Lambda1_new.cols() != p)
    throw Error(ErrorCode::DimensionMismatch, "X1, Lambda1, Lambda1_new not conformal");
  if (p == 0 || p % 2 != 0) throw Error(ErrorCode::InvariantViolation, "p must be even and positive");
  if (f.real() && (!imag_is_zero(req.X1) || !imag_is_zero(req.Lambda1) ||
                   !imag_is_zero(req.Lambda1_new)))
    throw Error(ErrorCode::InvariantViolation, "T flavors need real measured data");

  GammaLayout layout_old, layout_new;
  try {
    layout_old = gamma_layout_from_spectral(req.Lambda1, f, req.tol_pair);
    layout_new = gamma_layout_from_spectral(req.Lambda1_new, f, req.tol_pair);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::PairingViolation || e.code() == ErrorCode::DefectiveInput)
      throw Error(ErrorCode::InvariantViolation, e.what());
    throw;
  }

  const std::vector<cplx> old_values = spectral_values(req.Lambda1, f);
  const std::vector<cplx> new_values = spectral_values(req.Lambda1_new, f);
  for (const cplx& a : old_values)
    for (const cplx& b : new_values)
      if (std::abs(a - b) <= req.tol_pair * std::abs(a))
        throw Error(ErrorCode::InvariantViolation, "replaced and replacement eigenvalues overlap");

  const Mat gamma1 = extract_gamma1(poly, req.X1, req.Lambda1, req.residual_gate);

  // Retained part from the oracle: the a posteriori disjointness check and report data.
  std::vector<Eigenpair> retained;
  if (req.check_spectrum) {
    const auto all = qep_eigensolve(poly);
    std::vector<cplx> values;
    for (const auto& e : all) values.push_back(e.value);
    const auto removed = greedy_match(old_values, values);
    for (std::size_t k = 0; k < all.size(); ++k)
      if (std::find(removed.begin(), removed.end(), k) == removed.end()) retained.push_back(all[k]);
    for (const cplx& a : old_values)
      for (const auto& r : retained)
        if (std::abs(a - partner(r.value, f)) <= req.tol_pair * std::abs(a))
          throw Error(ErrorCode::InvariantViolation,
                      "replaced eigenvalue pairs with a retained eigenvalue");
  }

  const Congruence c_old = reduce(gamma1, f, layout_old, PairScaling::PartnerSwap);
  const Mat gamma1_new = req.gamma1_new ? *req.gamma1_new
                                        : canonical_target(layout_new, f, c_old.signature);
  if (gamma1_new.rows() != p || gamma1_new.cols() != p)
    throw Error(ErrorCode::DimensionMismatch, "gamma1_new must be p x p");
  const Congruence c_new = reduce(gamma1_new, f, layout_new, PairScaling::Symmetric);

  if (c_old.q != c_new.q)
    throw Error(ErrorCode::CategoryMismatch,
                "modulus-one eigenvalues can only be replaced by modulus-one eigenvalues");
  // Align the sign blocks of the new Gamma with those of the old one.
  const int q = c_old.q;
  Mat align = Mat::Identity(p, p);
  {
    std::vector<bool> used(c_new.signature.size(), false);
    for (std::size_t i = 0; i < c_old.signature.size(); ++i) {
      std::size_t hit = c_new.signature.size();
      for (std::size_t j = 0; j < c_new.signature.size(); ++j)
        if (!used[j] && std::abs(c_new.signature[j] - c_old.signature[i]) < 1e-12) {
          hit = j;
          break;
        }
      if (hit == c_new.signature.size())
        throw Error(ErrorCode::CategoryMismatch, "sign characteristics of the modulus-one blocks differ");
      used[hit] = true;
      align.row(2 * q + i).setZero();
      align(2 * q + i, 2 * q + hit) = 1.0;
    }
  }

  Mat phi_tilde = Mat::Identity(p, p);
  if (q > 0) phi_tilde.topLeftCorner(2 * q, 2 * q) = solve_phi_tilde(f, q, req.seed, req.phi_choice);
  Mat phi = c_old.P.partialPivLu().solve(phi_tilde * align * c_new.P);
  if (f.real()) phi = phi.real().cast<cplx>();

  EmbeddingReport report;
  report.phi_defect = (phi * gamma1_new * star(phi, f) - gamma1).norm() / gamma1.norm();
  if (report.phi_defect > 1e-9)
    throw Error(ErrorCode::InvariantViolation, "assembled Phi fails Phi Gamma1_new Phi^* = Gamma1");

  const Mat& X1 = req.X1;
  const Mat& L1 = req.Lambda1;
  const Mat& Lt = req.Lambda1_new;
  const Mat Xt = X1 * phi;
  const Mat A_inv = inverse(poly.A());
  const Mat X1s = star(X1, f), Xts = star(Xt, f);
  const Mat inner = A_inv + Xt * Lt * gamma1_new * Xts - X1 * L1 * gamma1 * X1s;
  if (smallest_singular_ratio(inner) <= 1e-14)
    throw Error(ErrorCode::SingularUpdate, "updated A^-1 is singular");
  const Mat At = inverse(inner);
  const Mat Qt = At * A_inv * poly.Q() * A_inv * At +
                 At * (X1 * L1 * L1 * gamma1 * X1s - Xt * Lt * Lt * gamma1_new * Xts) * At;
  PalindromicPolynomial poly_new = PalindromicPolynomial::assembled(f, At, Qt);

  report.structure_defect = (star(poly_new.Q(), f) - eps * poly_new.Q()).norm();
  report.new_residual = residual(poly_new, Xt, Lt);
  report.new_residual_relative = report.new_residual / residual_scale(poly_new, Xt, Lt);

  if (req.check_spectrum) {
    report.spectrum_checked = true;
    if (!retained.empty()) {
      Mat X2(n, retained.size());
      std::vector<cplx> r_values;
      for (std::size_t k = 0; k < retained.size(); ++k) {
        X2.col(k) = retained[k].vector;
        r_values.push_back(retained[k].value);
      }
      const Mat L2 = diag_of(r_values);
      report.retained_residual = residual(poly_new, X2, L2);
      report.retained_residual_relative = report.retained_residual / residual_scale(poly_new, X2, L2);
    }
    const auto updated = qep_eigensolve(poly_new);
    std::vector<cplx> up_values;
    for (const auto& e : updated) up_values.push_back(e.value);
    std::vector<cplx> expected;
    for (const auto& r : retained) expected.push_back(r.value);
    expected.insert(expected.end(), new_values.begin(), new_values.end());
    const auto match = greedy_match(expected, up_values);
    for (std::size_t k = 0; k < expected.size(); ++k) {
      const double d = rel_dist(expected[k], up_values[match[k]]);
      if (k < retained.size())
        report.retained_deviation = std::max(report.retained_deviation, d);
      else
        report.new_eigen_deviation = std::max(report.new_eigen_deviation, d);
    }
    // Principal angle between each retained eigenvector and the updated
    // eigenspace of the matched eigenvalue.
    for (std::size_t k = 0; k < retained.size(); ++k) {
      const cplx mu = up_values[match[k]];
      std::vector<Vec> span;
      for (const auto& e : updated)
        if (std::abs(e.value - mu) <= 1e-6 * std::abs(mu)) span.push_back(e.vector);
      Mat S(n, span.size());
      for (std::size_t j = 0; j < span.size(); ++j) S.col(j) = span[j];
      Eigen::HouseholderQR<Mat> qr(S);
      const Mat Qs = qr.householderQ() * Mat::Identity(n, span.size());
      const Vec x = retained[k].vector.normalized();
      const double off = (x - Qs * (Qs.adjoint() * x)).norm();
      report.retained_angle = std::max(report.retained_angle, std::asin(std::min(1.0, off)));
    }
  }

  return {std::move(poly_new), Xt, gamma1, gamma1_new, phi, report};
}

}  // namespace pqep
