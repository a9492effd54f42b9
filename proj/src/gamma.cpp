#include "pqep/gamma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pqep {

ParameterMatrix compute_gamma(const PalindromicPolynomial& poly, const StandardPair& pair,
                              double residual_gate) {
  const Index n = poly.size();
  const Mat& X = pair.X;
  const Mat& J = pair.J;
  if (X.rows() != n || J.rows() != J.cols() || X.cols() != J.rows())
    throw Error(ErrorCode::DimensionMismatch, "X must be n x k and J k x k");
  if (std::isfinite(residual_gate)) {
    const double res = residual(poly, X, J);
    if (res > residual_gate * residual_scale(poly, X, J))
      throw Error(ErrorCode::NotAStandardPair, "residual " + std::to_string(res) + " above gate");
  }
  if (smallest_singular_ratio(J) <= 1e-14) throw Error(ErrorCode::SingularJ, "J is singular");

  const Index k = J.rows();
  Mat XL(2 * n, k), YL(2 * n, k);
  XL << X, X * J;
  YL << X, X * inverse(J);
  Mat M = Mat::Zero(2 * n, 2 * n);
  M.topLeftCorner(n, n) = poly.Q();
  M.topRightCorner(n, n) = poly.A();
  M.bottomLeftCorner(n, n) = poly.A();
  const Mat assembly = star(YL, poly.flavor()) * M * XL;
  if (smallest_singular_ratio(assembly) <= 1e-14)
    throw Error(ErrorCode::SingularAssembly, "Y_L^star [[Q,A],[A,0]] X_L is singular");
  Mat gamma = inverse(assembly);
  if (poly.flavor().real() && imag_is_zero(X) && imag_is_zero(J)) gamma = gamma.real().cast<cplx>();
  return {gamma, poly.flavor()};
}

MembershipReport gamma_membership(const Mat& gamma, const Mat& J, Flavor flavor, double tol) {
  if (gamma.rows() != gamma.cols() || J.rows() != J.cols() || J.rows() != gamma.rows())
    throw Error(ErrorCode::DimensionMismatch, "gamma and J must be conformal squares");
  if (smallest_singular_ratio(J) <= 1e-14) throw Error(ErrorCode::SingularJ, "J is singular");
  MembershipReport r;
  r.skew_defect = (star(gamma, flavor) + double(flavor.epsilon) * gamma).norm();
  const Mat J_inv_star = star(inverse(J), flavor);
  r.intertwine_defect = (J * gamma - gamma * J_inv_star).norm();
  const double bound = tol * gamma.norm();
  r.pass = r.skew_defect <= bound && r.intertwine_defect <= bound;
  return r;
}

ThetaMask theta_mask(const std::vector<int>& block_sizes) {
  ThetaMask mask;
  mask.block_sizes = block_sizes;
  const int total = std::accumulate(block_sizes.begin(), block_sizes.end(), 0);
  mask.allowed.assign(total, std::vector<bool>(total, false));
  int row_off = 0;
  for (int ni : block_sizes) {
    int col_off = 0;
    for (int nk : block_sizes) {
      const int limit = std::min(ni, nk) + 1;
      for (int s = 1; s <= ni; ++s)
        for (int t = 1; t <= nk; ++t)
          mask.allowed[row_off + s - 1][col_off + t - 1] = s + t <= limit;
      col_off += nk;
    }
    row_off += ni;
  }
  return mask;
}

bool verify_theta(const Mat& Z, const Mat& N, cplx a, cplx b, double tol) {
  const Mat r = a * Z * N.transpose() + b * N * Z + N * Z * N.transpose();
  return r.norm() <= tol * Z.norm();
}

namespace {

bool is_t_category(Category c) {
  return c == Category::TQuadruple || c == Category::TUnimodularPair ||
         c == Category::TRealPair || c == Category::TUnit;
}

struct GroupBlocks {
  std::vector<const SpectralBlock*> first, second, self;
};

}  // namespace

GammaLayout gamma_layout(const SpectrumSpec& spec, Flavor flavor) {
  const SpectralLayout sl = spectral_layout(spec, flavor);
  std::vector<GroupBlocks> per_group(spec.groups.size());
  for (const auto& b : sl.blocks) {
    auto& g = per_group[b.group];
    (b.role == BlockRole::First ? g.first : b.role == BlockRole::Second ? g.second : g.self)
        .push_back(&b);
  }
  GammaLayout layout;
  layout.dim = sl.dim;
  for (std::size_t gi = 0; gi < spec.groups.size(); ++gi) {
    const EigGroup& g = spec.groups[gi];
    const GroupBlocks& gb = per_group[gi];
    switch (g.category) {
      case Category::TQuadruple:
        for (std::size_t k = 0; k < gb.first.size(); ++k) {
          const int f = gb.first[k]->offset, s = gb.second[k]->offset;
          layout.blocks.push_back({GammaBlockKind::Quad, {f, f + 1, s, s + 1}});
        }
        break;
      case Category::TRealPair:
      case Category::HPair:
        for (std::size_t k = 0; k < gb.first.size(); ++k)
          layout.blocks.push_back({GammaBlockKind::Pair, {gb.first[k]->offset, gb.second[k]->offset}});
        break;
      case Category::TUnimodularPair:
        for (const auto* b : gb.self) {
          if (flavor.epsilon > 0) {
            layout.blocks.push_back({GammaBlockKind::Pair, {b->offset, b->offset + 1}});
          } else {
            layout.blocks.push_back({GammaBlockKind::Scalar, {b->offset}});
            layout.blocks.push_back({GammaBlockKind::Scalar, {b->offset + 1}});
          }
        }
        break;
      case Category::TUnit:
        if (flavor.epsilon > 0)
          throw Error(ErrorCode::UnimodularUnsupported,
                      "+1 and -1 cannot be simple eigenvalues of a T-palindromic polynomial");
        for (const auto* b : gb.self) layout.blocks.push_back({GammaBlockKind::Scalar, {b->offset}});
        break;
      case Category::HUnimodular:
        for (const auto* b : gb.self) layout.blocks.push_back({GammaBlockKind::Scalar, {b->offset}});
        break;
    }
  }
  return layout;
}

CanonicalGammaParams CanonicalGammaParams::defaults(const SpectrumSpec& spec, Flavor flavor) {
  CanonicalGammaParams p;
  for (const auto& g : spec.groups) {
    GroupParams gp;
    if (g.category == Category::HUnimodular && flavor.epsilon > 0) gp.first = cplx(0.0, 1.0);
    p.groups.push_back(gp);
  }
  return p;
}

ParameterMatrix canonical_gamma(const SpectrumSpec& spec, Flavor flavor,
                                const CanonicalGammaParams& params) {
  if (params.groups.size() != spec.groups.size())
    throw Error(ErrorCode::DimensionMismatch, "one parameter set per group required");
  const SpectralLayout sl = spectral_layout(spec, flavor);
  const GammaLayout gl = gamma_layout(spec, flavor);
  for (const auto& g : spec.groups)
    if (is_t_category(g.category) != flavor.real())
      throw Error(ErrorCode::InvariantViolation, "spectrum groups do not match the flavor");

  // Map each gamma block back to its group through the spectral block offsets.
  std::vector<int> group_of(sl.dim, -1);
  for (const auto& b : sl.blocks)
    for (int k = 0; k < b.size; ++k) group_of[b.offset + k] = b.group;

  const double eps = flavor.epsilon;
  Mat G = Mat::Zero(sl.dim, sl.dim);
  for (const auto& blk : gl.blocks) {
    const int gi = group_of[blk.index[0]];
    const GroupParams& gp = params.groups[gi];
    const Category cat = spec.groups[gi].category;
    if (flavor.real() && (gp.first.imag() != 0.0 || gp.second.imag() != 0.0))
      throw Error(ErrorCode::InvariantViolation, "T-flavor parameters must be real");
    switch (blk.kind) {
      case GammaBlockKind::Quad: {
        const double a = gp.first.real(), b = gp.second.real();
        if (a == 0.0 && b == 0.0) throw Error(ErrorCode::InvariantViolation, "U must be nonzero");
        const int f1 = blk.index[0], f2 = blk.index[1], s1 = blk.index[2], s2 = blk.index[3];
        G(f1, s1) = a; G(f1, s2) = b; G(f2, s1) = b; G(f2, s2) = -a;
        G(s1, f1) = -eps * a; G(s1, f2) = -eps * b; G(s2, f1) = -eps * b; G(s2, f2) = eps * a;
        break;
      }
      case GammaBlockKind::Pair: {
        const cplx x = gp.first;
        if (x == 0.0) throw Error(ErrorCode::InvariantViolation, "pair parameter must be nonzero");
        G(blk.index[0], blk.index[1]) = x;
        G(blk.index[1], blk.index[0]) = -eps * star(x, flavor);
        break;
      }
      case GammaBlockKind::Scalar: {
        const cplx x = gp.first;
        if (x == 0.0) throw Error(ErrorCode::InvariantViolation, "scalar parameter must be nonzero");
        if (cat == Category::HUnimodular && star(x, flavor) != -eps * x)
          throw Error(ErrorCode::InvariantViolation,
                      "H-unimodular sign must satisfy conj(s) = -eps s");
        G(blk.index[0], blk.index[0]) = x;
        break;
      }
    }
  }
  return {G, flavor};
}

GammaLayout gamma_layout_from_pattern(const Mat& gamma, Flavor flavor, double tol) {
  if (gamma.rows() != gamma.cols()) throw Error(ErrorCode::DimensionMismatch, "gamma not square");
  const int p = int(gamma.rows());
  const double thresh = tol * gamma.norm();
  std::vector<int> parent(p);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      if (i != j && std::abs(gamma(i, j)) > thresh) parent[find(i)] = find(j);
  std::vector<std::vector<int>> comps;
  std::vector<int> comp_of(p, -1);
  for (int i = 0; i < p; ++i) {
    const int r = find(i);
    if (comp_of[r] < 0) {
      comp_of[r] = int(comps.size());
      comps.emplace_back();
    }
    comps[comp_of[r]].push_back(i);
  }
  auto small = [&](int i, int j) { return std::abs(gamma(i, j)) <= thresh; };
  GammaLayout layout;
  layout.dim = p;
  for (const auto& c : comps) {
    if (c.size() == 1) {
      layout.blocks.push_back({GammaBlockKind::Scalar, {c[0]}});
    } else if (c.size() == 2 && small(c[0], c[0]) && small(c[1], c[1])) {
      layout.blocks.push_back({GammaBlockKind::Pair, {c[0], c[1]}});
    } else if (c.size() == 4 && flavor.real() && small(c[0], c[0]) && small(c[0], c[1]) &&
               small(c[1], c[0]) && small(c[1], c[1]) && small(c[2], c[2]) &&
               small(c[2], c[3]) && small(c[3], c[2]) && small(c[3], c[3])) {
      layout.blocks.push_back({GammaBlockKind::Quad, {c[0], c[1], c[2], c[3]}});
    } else {
      throw Error(ErrorCode::NotCongruent, "gamma is not in canonical-group block layout");
    }
  }
  return layout;
}

namespace {

cplx unit_phase(cplx z) { return z / std::abs(z); }

// Rows of the second-partner factor for a quadruple block U.
RMat quad_row_factor(const RMat& U) {
  const RMat sym = 0.5 * (U + U.transpose());
  Eigen::SelfAdjointEigenSolver<RMat> es(sym);
  const auto& ev = es.eigenvalues();  // ascending
  const double scale = U.norm();
  RMat W(2, 2);
  if (std::abs(ev(0)) <= 1e-12 * scale || std::abs(ev(1)) <= 1e-12 * scale) {
    W = RMat::Identity(2, 2) / std::sqrt(scale);
  } else {
    W.row(0) = es.eigenvectors().col(1).transpose() / std::sqrt(std::abs(ev(1)));
    W.row(1) = es.eigenvectors().col(0).transpose() / std::sqrt(std::abs(ev(0)));
  }
  Index k = 0;
  W.row(0).cwiseAbs().maxCoeff(&k);
  if (W(0, k) < 0) W.row(0) *= -1.0;
  if (W.determinant() < 0) W.row(1) *= -1.0;
  return W;
}

}  // namespace

Congruence congruence_to_canonical(const Mat& gamma1, Flavor flavor, PairScaling scaling) {
  return congruence_to_canonical(gamma1, flavor, gamma_layout_from_pattern(gamma1, flavor),
                                 scaling);
}

Congruence congruence_to_canonical(const Mat& G, Flavor flavor, const GammaLayout& layout,
                                   PairScaling scaling) {
  const Index p = G.rows();
  if (G.cols() != p || layout.dim != p)
    throw Error(ErrorCode::DimensionMismatch, "gamma and layout disagree");
  const double eps = flavor.epsilon;
  const double gnorm = G.norm();
  const double tol = 1e-8 * gnorm;
  if (gnorm == 0.0) throw Error(ErrorCode::NotCongruent, "gamma is zero");

  std::vector<Eigen::RowVectorXcd> firsts, seconds, scalars;
  std::vector<cplx> signature;
  auto unit_row = [&](Index k, cplx v) {
    Eigen::RowVectorXcd r = Eigen::RowVectorXcd::Zero(p);
    r(k) = v;
    return r;
  };

  for (const auto& blk : layout.blocks) {
    switch (blk.kind) {
      case GammaBlockKind::Pair: {
        const int a = blk.index[0], b = blk.index[1];
        const cplx g = G(a, b);
        if (std::abs(g) <= tol || std::abs(G(b, a) + eps * star(g, flavor)) > tol ||
            std::abs(G(a, a)) > tol || std::abs(G(b, b)) > tol)
          throw Error(ErrorCode::NotCongruent, "pair block is not of the form [[0,x],[-eps x*,0]]");
        if (scaling == PairScaling::Symmetric) {
          const double r = std::sqrt(std::abs(g));
          firsts.push_back(unit_row(a, std::conj(unit_phase(g)) / r));
          seconds.push_back(unit_row(b, 1.0 / r));
        } else {
          firsts.push_back(unit_row(b, -eps / star(g, flavor)));
          seconds.push_back(unit_row(a, 1.0));
        }
        break;
      }
      case GammaBlockKind::Quad: {
        if (!flavor.real())
          throw Error(ErrorCode::NotCongruent, "4x4 blocks only arise for T flavors");
        const int f[2] = {blk.index[0], blk.index[1]};
        const int s[2] = {blk.index[2], blk.index[3]};
        RMat U(2, 2), V(2, 2);
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            U(i, j) = G(f[i], s[j]).real();
            V(i, j) = G(s[i], f[j]).real();
            if (std::abs(G(f[i], f[j])) > tol || std::abs(G(s[i], s[j])) > tol)
              throw Error(ErrorCode::NotCongruent, "quadruple block has nonzero diagonal part");
          }
        if ((V + eps * U.transpose()).norm() > tol)
          throw Error(ErrorCode::NotCongruent, "quadruple block is not [[0,U],[-eps U^T,0]]");
        if (std::abs(U.determinant()) <= 1e-14 * U.squaredNorm())
          throw Error(ErrorCode::NotCongruent, "quadruple block U is singular");
        const RMat W = quad_row_factor(U);
        const RMat K = (U * W.transpose()).inverse();
        for (int i = 0; i < 2; ++i) {
          Eigen::RowVectorXcd rf = Eigen::RowVectorXcd::Zero(p);
          Eigen::RowVectorXcd rs = Eigen::RowVectorXcd::Zero(p);
          for (int j = 0; j < 2; ++j) {
            rf(f[j]) = K(i, j);
            rs(s[j]) = W(i, j);
          }
          firsts.push_back(rf);
          seconds.push_back(rs);
        }
        break;
      }
      case GammaBlockKind::Scalar: {
        const int k = blk.index[0];
        const cplx s = G(k, k);
        const double mag = std::abs(s);
        if (mag <= tol) throw Error(ErrorCode::NotCongruent, "scalar block is zero");
        cplx sign;
        if (flavor == kTPlus) {
          throw Error(ErrorCode::NotCongruent, "T-palindromic gamma has no scalar blocks");
        } else if (flavor.epsilon < 0) {
          if (std::abs(s.imag()) > 1e-8 * mag)
            throw Error(ErrorCode::NotCongruent, "scalar block must be real");
          sign = s.real() > 0 ? 1.0 : -1.0;
        } else {
          if (std::abs(s.real()) > 1e-8 * mag)
            throw Error(ErrorCode::NotCongruent, "scalar block must be imaginary");
          sign = s.imag() > 0 ? cplx(0, 1) : cplx(0, -1);
        }
        scalars.push_back(unit_row(k, 1.0 / std::sqrt(mag)));
        signature.push_back(sign);
        break;
      }
    }
  }

  Congruence c;
  c.q = int(firsts.size());
  c.signature = signature;
  c.P = Mat::Zero(p, p);
  Index row = 0;
  for (const auto* group : {&firsts, &seconds, &scalars})
    for (const auto& r : *group) c.P.row(row++) = r;
  if (row != p) throw Error(ErrorCode::NotCongruent, "layout does not cover gamma");
  c.R = Mat::Zero(p, p);
  c.R.topLeftCorner(2 * c.q, 2 * c.q) = skew_canonical(c.q, flavor.epsilon);
  for (std::size_t k = 0; k < signature.size(); ++k) c.R(2 * c.q + k, 2 * c.q + k) = signature[k];
  const double defect = (c.P * G * star(c.P, flavor) - c.R).norm();
  if (defect > 1e-6 * c.R.norm())
    throw Error(ErrorCode::NotCongruent, "gamma has coupling outside the block layout");
  return c;
}

}  // namespace pqep
