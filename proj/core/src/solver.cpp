#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "valfit/conic.hpp"
#include "valfit/errors.hpp"

// Dense infeasible-start primal-dual interior-point method for the
// equality-form cone program
//
//   (P)  min c'x   s.t.  A x = b,   x in K = R^f x R^l_+ x S^{d1}_+ x ...
//   (D)  max b'y   s.t.  A'y + s = c,   s in {0}^f x K*
//
// PSD variables are scalarized as scaled upper triangles (svec: off-diagonal
// entries carry sqrt(2)), so the cone algebra below works on one flat vector
// and <svec X, svec S> = tr(XS).  Each iteration computes the Nesterov-Todd
// scaling (w = sqrt(x/s) on the nonneg part; per PSD block the unique PD
// matrix W with W S W = X), eliminates dx_c and ds from the Newton system,
// and solves the remaining saddle system
//
//   [ Ac G Ac'  Af ] [ dy  ]   [ rp - Ac Rc + Ac G rd_c ]
//   [ Af'       0  ] [ dxf ] = [ rd_f                   ]
//
// by LU with a tiny static regularization plus iterative refinement, where
// G = blkdiag(diag(x/s), W (.) W) is the quadratic representation of the
// scaling and Rc the complementarity target.  A Mehrotra predictor-corrector
// step with boundary fraction 0.99 follows.  Termination always measures
// relative residuals of the *original* (unscaled, unreduced) problem, so
// Ruiz equilibration and redundant-row removal never change what "solved"
// means.  Everything is deterministic: no randomized pivoting, no threads.

namespace valfit::conic {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kSqrt2 = 1.4142135623730951;

int svec_len(int d) { return d * (d + 1) / 2; }

MatrixXd smat(const Eigen::Ref<const VectorXd>& v, int d) {
  MatrixXd x(d, d);
  int k = 0;
  for (int h = 0; h < d; ++h)
    for (int g = 0; g <= h; ++g, ++k) {
      const double val = g == h ? v(k) : v(k) / kSqrt2;
      x(g, h) = val;
      x(h, g) = val;
    }
  return x;
}

void svec_into(const MatrixXd& x, Eigen::Ref<VectorXd> v) {
  const int d = static_cast<int>(x.rows());
  int k = 0;
  for (int h = 0; h < d; ++h)
    for (int g = 0; g <= h; ++g, ++k) v(k) = g == h ? x(g, h) : kSqrt2 * 0.5 * (x(g, h) + x(h, g));
}

// Dense signed LDL' factorization in a caller-fixed order (no pivoting for
// magnitude) with delayed pivots.  Interior-point saddle matrices become
// extremely ill-conditioned near convergence, but that ill-conditioning is
// benign for a fixed-order factorization: errors stay confined to the
// subspaces the recovery step crushes again, whereas pivoting for magnitude
// mixes the huge and tiny scaling subspaces and the recovered steps destroy
// primal feasibility.  A pivot that cancels to rounding noise relative to
// its natural magnitude marks a row whose equation needs cross coupling
// with columns eliminated later; such pivots are deferred to the end of the
// order, where the remaining (small, fully updated) block is solved densely
// with ordinary pivoting.
struct SkipPivotLdl {
  MatrixXd l;            // unit lower factor over the final order
  VectorXd d;            // leading 1x1 pivots
  std::vector<int> ord;  // final elimination order (indices into K)
  int mainCount = 0;     // 1x1 pivots; the rest forms the dense tail block
  Eigen::PartialPivLU<MatrixXd> tailLu;
  bool tailZero = false;
  bool ok = false;

  // ref gives each pivot's natural magnitude (indexed like K); a computed
  // pivot at or below rounding noise relative to it counts as cancelled.
  void compute(const MatrixXd& k, const VectorXd& ref, const std::vector<int>& order) {
    const int n = static_cast<int>(k.rows());
    std::vector<char> deferred(static_cast<std::size_t>(n), 0);
    int nDeferred = 0;
    ok = false;
    for (int attempt = 0;; ++attempt) {
      if (attempt > 8) return;
      ord.clear();
      for (int i : order)
        if (!deferred[static_cast<std::size_t>(i)]) ord.push_back(i);
      for (int i : order)
        if (deferred[static_cast<std::size_t>(i)]) ord.push_back(i);
      mainCount = n - nDeferred;
      l.resize(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          l(i, j) = k(ord[static_cast<std::size_t>(i)], ord[static_cast<std::size_t>(j)]);
      d = VectorXd::Zero(n);
      bool newSkip = false;
      for (int j = 0; j < mainCount; ++j) {
        const double dj = l(j, j);
        const int rem = n - j - 1;
        if (!(std::abs(dj) > 1e-14 * ref(ord[static_cast<std::size_t>(j)])) || !std::isfinite(dj)) {
          deferred[static_cast<std::size_t>(ord[static_cast<std::size_t>(j)])] = 1;
          ++nDeferred;
          newSkip = true;
          d(j) = 1.0;
          if (rem > 0) l.col(j).tail(rem).setZero();
          continue;
        }
        d(j) = dj;
        if (rem > 0) {
          l.col(j).tail(rem) /= dj;
          const VectorXd lj = l.col(j).tail(rem);
          l.bottomRightCorner(rem, rem).selfadjointView<Eigen::Lower>().rankUpdate(lj, -dj);
        }
      }
      if (!l.allFinite()) return;
      if (!newSkip) break;
    }
    const int tail = n - mainCount;
    if (tail > 0) {
      MatrixXd s = MatrixXd(l.bottomRightCorner(tail, tail).selfadjointView<Eigen::Lower>());
      tailZero = s.cwiseAbs().maxCoeff() <= 0.0;
      if (!tailZero) tailLu.compute(s);
    }
    ok = true;
  }

  VectorXd solve(const VectorXd& rIn) const {
    const int n = static_cast<int>(rIn.size());
    VectorXd r(n);
    for (int i = 0; i < n; ++i) r(i) = rIn(ord[static_cast<std::size_t>(i)]);
    for (int j = 0; j < mainCount; ++j) {
      const int rem = n - j - 1;
      if (rem > 0) r.tail(rem).noalias() -= l.col(j).tail(rem) * r(j);
    }
    const int tail = n - mainCount;
    if (tail > 0) {
      if (tailZero)
        r.tail(tail).setZero();
      else
        r.tail(tail) = tailLu.solve(r.tail(tail).eval());
    }
    for (int j = 0; j < mainCount; ++j) r(j) /= d(j);
    for (int j = mainCount - 1; j >= 0; --j) {
      const int rem = n - j - 1;
      if (rem > 0) r(j) -= l.col(j).tail(rem).dot(r.tail(rem));
    }
    VectorXd out(n);
    for (int i = 0; i < n; ++i) out(ord[static_cast<std::size_t>(i)]) = r(i);
    return out;
  }
};

struct Layout {
  int nf = 0;
  int nl = 0;
  std::vector<int> dims;
  std::vector<int> off;  // offset of each block inside the cone segment
  int nCone = 0;         // scalarized cone length (nonneg + svec blocks)
  int n = 0;             // nf + nCone
  double nu = 0.0;       // barrier degree: nl + sum dims
};

Layout make_layout(const Problem::Scalarized& s) {
  Layout l;
  l.nf = s.numFree;
  l.nl = s.numNonneg;
  l.dims = s.psdDims;
  int off = l.nl;
  for (int d : l.dims) {
    l.off.push_back(off);
    off += svec_len(d);
  }
  l.nCone = off;
  l.n = l.nf + l.nCone;
  l.nu = static_cast<double>(l.nl);
  for (int d : l.dims) l.nu += static_cast<double>(d);
  return l;
}

struct NtBlock {
  MatrixXd w;
  MatrixXd whalf;
  MatrixXd winvhalf;
  MatrixXd uv;       // eigenvectors of the scaled point V
  VectorXd lambdaV;  // eigenvalues of V
};

// Symmetric square root / inverse square root via eigendecomposition with a
// floor on the eigenvalues; all iterates are kept strictly inside the cone
// so the floor only guards against harmless rounding.
void sym_sqrts(const MatrixXd& m, MatrixXd& half, MatrixXd& invHalf) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m);
  VectorXd lam = es.eigenvalues().cwiseMax(1e-300);
  const VectorXd sq = lam.cwiseSqrt();
  half.noalias() = es.eigenvectors() * sq.asDiagonal() * es.eigenvectors().transpose();
  invHalf.noalias() = es.eigenvectors() * sq.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
}

struct Scaling {
  VectorXd glp;  // x/s on the nonneg part
  std::vector<NtBlock> blocks;
};

// Largest alpha with x + alpha*d in the cone (smat'd); +inf when d points
// inward everywhere.
double cone_step_bound(const Layout& lay, const VectorXd& x, const VectorXd& d) {
  double bound = std::numeric_limits<double>::infinity();
  for (int i = 0; i < lay.nl; ++i)
    if (d(i) < 0.0) bound = std::min(bound, -x(i) / d(i));
  for (std::size_t b = 0; b < lay.dims.size(); ++b) {
    const int dim = lay.dims[b];
    const MatrixXd xb = smat(x.segment(lay.off[b], svec_len(dim)), dim);
    const MatrixXd db = smat(d.segment(lay.off[b], svec_len(dim)), dim);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(xb);
    const VectorXd lam = es.eigenvalues().cwiseMax(1e-300);
    const MatrixXd linv = lam.cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
    MatrixXd m = linv * db * linv.transpose();
    m = 0.5 * (m + m.transpose());
    const double lmin = Eigen::SelfAdjointEigenSolver<MatrixXd>(m).eigenvalues().minCoeff();
    if (lmin < -1e-14) bound = std::min(bound, 1.0 / -lmin);
  }
  return bound;
}

struct OriginalData {
  MatrixXd a;   // all rows, unscaled
  VectorXd b;
  VectorXd c;
  double normA = 1.0;
};

// Iterate diagnostics measured against the original problem.
IterationStat measure(const OriginalData& od, const Layout& lay, const VectorXd& x,
                      const VectorXd& yFull, const VectorXd& sCone, double mu) {
  IterationStat st;
  st.mu = mu;
  st.primalObj = od.c.dot(x);
  st.dualObj = od.b.dot(yFull);
  const VectorXd rp = od.b - od.a * x;
  VectorXd rd = od.c - od.a.transpose() * yFull;
  rd.tail(lay.nCone) -= sCone;
  st.presAbs = rp.norm();
  st.dresAbs = rd.norm();
  st.pres = st.presAbs / (1.0 + od.b.norm());
  st.dres = st.dresAbs / (1.0 + od.c.norm());
  st.gap = std::abs(st.primalObj - st.dualObj) / (1.0 + std::abs(st.primalObj) + std::abs(st.dualObj));
  st.xNorm = x.norm();
  st.yNorm = yFull.norm();
  return st;
}

}  // namespace

SolveReport solve(const Problem& prob, const Settings& settings) {
  SolveReport rep;
  const Problem::Scalarized sc = prob.scalarize();
  const Layout lay = make_layout(sc);
  const int m0 = static_cast<int>(sc.a.rows());

  OriginalData od{sc.a, sc.b, sc.c, std::max(1.0, sc.a.norm())};

  auto finalize = [&](SolveStatus status, const VectorXd& x, const VectorXd& yFull,
                      const VectorXd& sCone, double mu) {
    rep.status = status;
    const IterationStat st = measure(od, lay, x, yFull, sCone, mu);
    rep.objective = st.primalObj;
    rep.dualObjective = st.dualObj;
    rep.primalResidual = st.pres;
    rep.dualResidual = st.dres;
    rep.gap = st.gap;
    rep.freeValues.assign(x.data(), x.data() + lay.nf);
    rep.nonnegValues.assign(x.data() + lay.nf, x.data() + lay.nf + lay.nl);
    rep.nonnegDuals.assign(sCone.data(), sCone.data() + lay.nl);
    for (std::size_t b = 0; b < lay.dims.size(); ++b) {
      const int d = lay.dims[b];
      rep.psdValues.push_back(smat(x.segment(lay.nf + lay.off[b], svec_len(d)), d));
      rep.psdDuals.push_back(smat(sCone.segment(lay.off[b], svec_len(d)), d));
    }
    rep.dualY.assign(yFull.data(), yFull.data() + m0);
    return rep;
  };

  // Degenerate shells first: no variables / no constraints / no cone part.
  if (lay.n == 0) {
    VectorXd x(0), yv = VectorXd::Zero(m0), s0(0);
    const bool feasible = m0 == 0 || sc.b.lpNorm<Eigen::Infinity>() <= settings.tol * (1.0 + sc.b.norm());
    return finalize(feasible ? SolveStatus::Optimal : SolveStatus::Infeasible, x, yv, s0, 0.0);
  }

  // ---- presolve 0: fold rows without cone support into the free block ----
  //
  // A row touching only free variables pins those variables to an affine
  // subspace x_f = x0 + N u; substituting that subspace removes the row and
  // re-parameterizes the free block by u.  Afterwards every remaining row
  // touches the cone, which is the shape the iteration's fixed-order
  // factorization needs.  The substitution only mixes free columns, so the
  // cone geometry the scaling acts on is untouched, and both feasibility and
  // Farkas certificates map between the two formulations exactly.
  bool redOn = false;
  std::vector<int> rRows, cRows;
  MatrixXd afA;     // free columns of the kept rows, original scaling
  MatrixXd nBasis;  // orthonormal null basis of the folded rows' free part
  VectorXd xf0;     // particular solution of the folded rows
  Eigen::CompleteOrthogonalDecomposition<MatrixXd> codAfcT;  // of Af_C'
  MatrixXd aw = sc.a;
  VectorXd bw = sc.b;
  VectorXd cw = sc.c;
  Layout law = lay;
  if (lay.nf > 0 && lay.nCone > 0 && m0 > 0) {
    for (int i = 0; i < m0; ++i) {
      if (sc.a.row(i).tail(lay.nCone).cwiseAbs().maxCoeff() > 0.0)
        rRows.push_back(i);
      else
        cRows.push_back(i);
    }
    if (!cRows.empty()) {
      redOn = true;
      const int nc = static_cast<int>(cRows.size());
      const int mr = static_cast<int>(rRows.size());
      MatrixXd afC(nc, lay.nf);
      VectorXd bC(nc);
      for (int i = 0; i < nc; ++i) {
        afC.row(i) = sc.a.row(cRows[static_cast<std::size_t>(i)]).head(lay.nf);
        bC(i) = sc.b(cRows[static_cast<std::size_t>(i)]);
      }
      Eigen::CompleteOrthogonalDecomposition<MatrixXd> codAfc;
      codAfc.setThreshold(1e-10);
      codAfc.compute(afC);
      codAfcT.setThreshold(1e-10);
      codAfcT.compute(afC.transpose());
      xf0 = codAfc.solve(bC);
      const VectorXd rC = bC - afC * xf0;
      if (rC.lpNorm<Eigen::Infinity>() > 1e-9 * (1.0 + bC.lpNorm<Eigen::Infinity>())) {
        // The folded rows are inconsistent among themselves; the least-squares
        // residual is orthogonal to their range, so it is a Farkas certificate.
        VectorXd x = VectorXd::Zero(lay.n), yv = VectorXd::Zero(m0);
        for (int i = 0; i < nc; ++i) yv(cRows[static_cast<std::size_t>(i)]) = rC(i);
        VectorXd s0 = VectorXd::Zero(lay.nCone);
        return finalize(SolveStatus::Infeasible, x, yv, s0, 0.0);
      }
      Eigen::ColPivHouseholderQR<MatrixXd> qrn(afC.transpose());
      qrn.setThreshold(1e-10);
      const int rankC = static_cast<int>(qrn.rank());
      const MatrixXd qfull = qrn.householderQ();
      nBasis = qfull.rightCols(lay.nf - rankC);
      afA.resize(mr, lay.nf);
      MatrixXd acA(mr, lay.nCone);
      VectorXd bA(mr);
      for (int i = 0; i < mr; ++i) {
        afA.row(i) = sc.a.row(rRows[static_cast<std::size_t>(i)]).head(lay.nf);
        acA.row(i) = sc.a.row(rRows[static_cast<std::size_t>(i)]).tail(lay.nCone);
        bA(i) = sc.b(rRows[static_cast<std::size_t>(i)]) - afA.row(i).dot(xf0);
      }
      // Drop u directions invisible to the remaining rows: they are exact
      // feasible rays, so a nonzero cost along one means unboundedness and a
      // zero cost means the direction can be pinned at zero.
      MatrixXd afu = afA * nBasis;
      const VectorXd cu = nBasis.transpose() * sc.c.head(lay.nf);
      std::vector<int> keepU;
      for (int j = 0; j < nBasis.cols(); ++j) {
        if (mr > 0 && afu.col(j).cwiseAbs().maxCoeff() > 0.0) {
          keepU.push_back(j);
        } else if (std::abs(cu(j)) > 1e-10 * (1.0 + sc.c.head(lay.nf).norm())) {
          VectorXd x = VectorXd::Zero(lay.n), yv = VectorXd::Zero(m0);
          VectorXd s0 = VectorXd::Zero(lay.nCone);
          return finalize(SolveStatus::Unbounded, x, yv, s0, 0.0);
        }
      }
      if (keepU.size() != static_cast<std::size_t>(nBasis.cols())) {
        MatrixXd nk(lay.nf, static_cast<int>(keepU.size()));
        for (std::size_t j = 0; j < keepU.size(); ++j) nk.col(static_cast<int>(j)) = nBasis.col(keepU[j]);
        nBasis = nk;
        afu = afA * nBasis;
      }
      const int nu = static_cast<int>(nBasis.cols());
      aw.resize(mr, nu + lay.nCone);
      aw.leftCols(nu) = afu;
      aw.rightCols(lay.nCone) = acA;
      bw = bA;
      cw.resize(nu + lay.nCone);
      cw.head(nu) = nBasis.transpose() * sc.c.head(lay.nf);
      cw.tail(lay.nCone) = sc.c.tail(lay.nCone);
      Problem::Scalarized swk;
      swk.numFree = nu;
      swk.numNonneg = lay.nl;
      swk.psdDims = sc.psdDims;
      law = make_layout(swk);
    }
  }
  const int mw = static_cast<int>(aw.rows());
  const double normAw = std::max(1.0, aw.norm());
  const VectorXd cfFull = od.c.head(lay.nf);
  const VectorXd zeroF = VectorXd::Zero(lay.nf);

  // Map working-problem points back to the full formulation.  freeTarget is
  // what A'y should reproduce on the free columns: the free cost for
  // solution-type iterates, zero for infeasibility certificates.
  auto expand_x = [&](const VectorXd& xW) -> VectorXd {
    if (!redOn) return xW;
    VectorXd x(lay.n);
    x.head(lay.nf) = xf0 + nBasis * xW.head(law.nf);
    x.tail(lay.nCone) = xW.tail(lay.nCone);
    return x;
  };
  auto expand_y = [&](const VectorXd& yW, const VectorXd& freeTarget) -> VectorXd {
    if (!redOn) return yW;
    VectorXd yF = VectorXd::Zero(m0);
    for (std::size_t i = 0; i < rRows.size(); ++i) yF(rRows[i]) = yW(static_cast<int>(i));
    const VectorXd yC = codAfcT.solve(freeTarget - afA.transpose() * yW);
    for (std::size_t i = 0; i < cRows.size(); ++i) yF(cRows[i]) = yC(static_cast<int>(i));
    return yF;
  };
  auto expandFinalize = [&](SolveStatus status, const VectorXd& xW, const VectorXd& yW,
                            const VectorXd& sCone, double mu) {
    const VectorXd& target = status == SolveStatus::Infeasible ? zeroF : cfFull;
    return finalize(status, expand_x(xW), expand_y(yW, target), sCone, mu);
  };

  // min c'x over the bare cone (no effective equality rows): bounded iff
  // c_f = 0 and c_cone is dual feasible, in which case x = 0 is optimal.
  // Also reached when presolve drops every row as redundant.
  auto bare_cone = [&]() {
    bool bounded = law.nf == 0 || cw.head(law.nf).lpNorm<Eigen::Infinity>() <= 0.0;
    for (int i = 0; i < law.nl && bounded; ++i) bounded = cw(law.nf + i) >= 0.0;
    for (std::size_t b = 0; b < law.dims.size() && bounded; ++b) {
      const int d = law.dims[b];
      const MatrixXd cb = smat(cw.segment(law.nf + law.off[b], svec_len(d)), d);
      bounded = Eigen::SelfAdjointEigenSolver<MatrixXd>(cb).eigenvalues().minCoeff() >= -1e-12;
    }
    VectorXd x = VectorXd::Zero(law.n), yv = VectorXd::Zero(mw);
    VectorXd s0 = cw.tail(law.nCone);
    return expandFinalize(bounded ? SolveStatus::Optimal : SolveStatus::Unbounded, x, yv, s0, 0.0);
  };
  if (mw == 0) return bare_cone();

  // ---- presolve: Ruiz equilibration (cone-aware) + redundant row removal --

  VectorXd dr = VectorXd::Ones(mw);          // row scales
  VectorXd dc = VectorXd::Ones(law.n);       // column scales (uniform per block)
  MatrixXd a = aw;
  if (settings.equilibrate) {
    for (int pass = 0; pass < 6; ++pass) {
      for (int i = 0; i < mw; ++i) {
        const double nrm = a.row(i).lpNorm<Eigen::Infinity>();
        if (nrm > 0) {
          const double f = 1.0 / std::sqrt(nrm);
          a.row(i) *= f;
          dr(i) *= f;
        }
      }
      for (int j = 0; j < law.nf + law.nl; ++j) {
        const double nrm = a.col(j).lpNorm<Eigen::Infinity>();
        if (nrm > 0) {
          const double f = 1.0 / std::sqrt(nrm);
          a.col(j) *= f;
          dc(j) *= f;
        }
      }
      // One factor per PSD block keeps the cone invariant under scaling.
      for (std::size_t b = 0; b < law.dims.size(); ++b) {
        const int j0 = law.nf + law.off[b];
        const int len = svec_len(law.dims[b]);
        const double nrm = a.middleCols(j0, len).lpNorm<Eigen::Infinity>();
        if (nrm > 0) {
          const double f = 1.0 / std::sqrt(nrm);
          a.middleCols(j0, len) *= f;
          dc.segment(j0, len) *= f;
        }
      }
    }
  }
  VectorXd bS = dr.asDiagonal() * bw;
  VectorXd cS = dc.asDiagonal() * cw;
  const double bscale = std::max(1.0, bS.lpNorm<Eigen::Infinity>());
  const double cscale = std::max(1.0, cS.lpNorm<Eigen::Infinity>());
  bS /= bscale;
  cS /= cscale;

  // Rank-revealing removal of dependent equality rows.
  std::vector<int> kept;
  {
    Eigen::ColPivHouseholderQR<MatrixXd> qr(a.transpose());
    qr.setThreshold(1e-10);
    const int rank = static_cast<int>(qr.rank());
    if (rank < mw) {
      MatrixXd abT(law.n + 1, mw);
      abT.topRows(law.n) = a.transpose();
      abT.bottomRows(1) = bS.transpose();
      Eigen::ColPivHouseholderQR<MatrixXd> qrb(abT);
      qrb.setThreshold(1e-10);
      if (static_cast<int>(qrb.rank()) > rank) {
        VectorXd x = VectorXd::Zero(law.n), yv = VectorXd::Zero(mw);
        VectorXd s0 = VectorXd::Zero(law.nCone);
        return expandFinalize(SolveStatus::Infeasible, x, yv, s0, 0.0);
      }
      const auto perm = qr.colsPermutation().indices();
      kept.assign(perm.data(), perm.data() + rank);
      std::sort(kept.begin(), kept.end());
      std::vector<char> isKept(static_cast<std::size_t>(mw), 0);
      for (int i : kept) isKept[static_cast<std::size_t>(i)] = 1;
      for (int i = 0; i < mw; ++i)
        if (!isKept[static_cast<std::size_t>(i)])
          rep.droppedRows.push_back(redOn ? rRows[static_cast<std::size_t>(i)] : i);
    } else {
      kept.resize(static_cast<std::size_t>(mw));
      for (int i = 0; i < mw; ++i) kept[static_cast<std::size_t>(i)] = i;
    }
  }
  const int m = static_cast<int>(kept.size());
  if (m == 0) return bare_cone();
  MatrixXd ak(m, law.n);
  VectorXd bk(m), drk(m);
  for (int i = 0; i < m; ++i) {
    ak.row(i) = a.row(kept[static_cast<std::size_t>(i)]);
    bk(i) = bS(kept[static_cast<std::size_t>(i)]);
    drk(i) = dr(kept[static_cast<std::size_t>(i)]);
  }

  // Maps a scaled iterate back to working-problem coordinates.
  auto unscale = [&](const VectorXd& xs, const VectorXd& ys, const VectorXd& ss, VectorXd& x,
                     VectorXd& yW, VectorXd& sOrig) {
    x = bscale * dc.asDiagonal() * xs;
    yW = VectorXd::Zero(mw);
    for (int i = 0; i < m; ++i) yW(kept[static_cast<std::size_t>(i)]) = cscale * drk(i) * ys(i);
    sOrig = cscale * ss.cwiseQuotient(dc.tail(law.nCone));
  };

  // ---- pure linear-algebra path when there is no cone part ----
  if (law.nCone == 0) {
    Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(ak);
    cod.setThreshold(1e-12);
    const VectorXd xs = cod.solve(bk);
    VectorXd x, yW, sOrig;
    if ((ak * xs - bk).norm() > 1e-9 * (1.0 + bk.norm())) {
      unscale(VectorXd::Zero(law.n), VectorXd::Zero(m), VectorXd(0), x, yW, sOrig);
      return expandFinalize(SolveStatus::Infeasible, x, yW, sOrig, 0.0);
    }
    Eigen::CompleteOrthogonalDecomposition<MatrixXd> codT(ak.transpose());
    codT.setThreshold(1e-12);
    const VectorXd ys = codT.solve(cS);
    const bool bounded = (ak.transpose() * ys - cS).norm() <= 1e-9 * (1.0 + cS.norm());
    unscale(xs, ys, VectorXd(0), x, yW, sOrig);
    return expandFinalize(bounded ? SolveStatus::Optimal : SolveStatus::Unbounded, x, yW, sOrig, 0.0);
  }

  // ---- interior-point iteration ----

  const MatrixXd af = ak.leftCols(law.nf);
  const MatrixXd ac = ak.rightCols(law.nCone);

  // Unweighted Gram matrix of the kept rows.  The step recovery multiplies
  // rounding noise by the scaling G, whose spread near convergence makes
  // A dx = rp unattainable through the weighted system alone; the
  // minimum-norm correction through A A' (well-conditioned, constant)
  // restores it to working precision.
  const MatrixXd aatM = ak * ak.transpose();
  Eigen::LDLT<MatrixXd> aat(aatM);
  const bool aatOk = aat.info() == Eigen::Success && aat.vectorD().minCoeff() > 0.0;

  // After the fold every row touches the cone, so the saddle factorization
  // can use the fixed order "rows first, free columns last": row pivots
  // carry the scaling G and stay meaningful in natural order, and the free
  // columns' pivots materialize from the rows eliminated before them.
  // Pivoting for magnitude instead would mix the huge and tiny scaling
  // subspaces and the recovered steps would lose primal feasibility.
  const int kdim = m + law.nf;
  std::vector<int> elimOrder;
  elimOrder.reserve(static_cast<std::size_t>(kdim));
  for (int i = 0; i < m; ++i)
    if (ac.row(i).cwiseAbs().maxCoeff() > 0.0) elimOrder.push_back(i);
  for (int j = 0; j < law.nf; ++j) elimOrder.push_back(m + j);
  for (int i = 0; i < m; ++i)
    if (!(ac.row(i).cwiseAbs().maxCoeff() > 0.0)) elimOrder.push_back(i);

  VectorXd xs(law.n);
  xs.setZero();
  VectorXd scone = VectorXd::Zero(law.nCone);
  for (int i = 0; i < law.nl; ++i) {
    xs(law.nf + i) = 1.0;
    scone(i) = 1.0;
  }
  for (std::size_t b = 0; b < law.dims.size(); ++b) {
    const int d = law.dims[b];
    VectorXd id(svec_len(d));
    svec_into(MatrixXd::Identity(d, d), id);
    xs.segment(law.nf + law.off[b], svec_len(d)) = id;
    scone.segment(law.off[b], svec_len(d)) = id;
  }
  VectorXd ys = VectorXd::Zero(m);

  const double eta = 0.99;
  double bestPhi = std::numeric_limits<double>::infinity();
  int sinceImprove = 0;
  VectorXd xWu, yWu, sOrig;  // working-problem coordinates
  VectorXd x, yFull;         // full-problem coordinates
  // Best iterate seen so far (in original coordinates); late iterations can
  // degrade once rounding in the direction solves dominates, so failure-type
  // exits report this one rather than the last.
  VectorXd xB, yB, sB;
  double muB = 0.0;
  // Sharpest Farkas certificates seen along the way: failure-type exits fall
  // back on these, since the transient iterate carrying the ray is often
  // sharper than the final one.
  double qInfBest = std::numeric_limits<double>::infinity();
  double qUnbBest = std::numeric_limits<double>::infinity();
  VectorXd xI, yI, sI, xU, yU, sU;
  double muI = 0.0, muU = 0.0;

  auto finalize_best = [&](SolveStatus status) {
    if (qInfBest <= 1e-7) return finalize(SolveStatus::Infeasible, xI, yI, sI, muI);
    if (qUnbBest <= 1e-7) return finalize(SolveStatus::Unbounded, xU, yU, sU, muU);
    if (xB.size() == 0) return finalize(status, x, yFull, sOrig, muB);
    return finalize(status, xB, yB, sB, muB);
  };

  for (int iter = 0;; ++iter) {
    const double mu = xs.tail(law.nCone).dot(scone) / law.nu;
    unscale(xs, ys, scone, xWu, yWu, sOrig);
    x = expand_x(xWu);
    yFull = expand_y(yWu, cfFull);
    IterationStat st = measure(od, lay, x, yFull, sOrig, mu);
    rep.trace.push_back(st);
    rep.iterations = iter;

    const double phi = std::max({st.pres, st.dres, st.gap});
    if (std::isfinite(phi) && phi < bestPhi) {
      xB = x;
      yB = yFull;
      sB = sOrig;
      muB = mu;
    }
    if (phi < bestPhi * 0.99) {
      bestPhi = phi;
      sinceImprove = 0;
    } else {
      bestPhi = std::min(bestPhi, phi);
      ++sinceImprove;
    }

    if (st.pres <= settings.tol && st.dres <= settings.tol && st.gap <= settings.tol)
      return finalize(SolveStatus::Optimal, x, yFull, sOrig, mu);

    // Farkas-style certificates, scale-free quality measures.  Tested in
    // working coordinates (the fold maps both certificate kinds exactly).
    const double by = bw.dot(yWu);
    if (by > 0.0) {
      VectorXd atY = aw.transpose() * yWu;
      atY.tail(law.nCone) += sOrig;
      const double q = atY.norm() * std::max(1.0, bw.norm()) / (by * normAw);
      if (q <= 1e-8) return finalize(SolveStatus::Infeasible, x, expand_y(yWu, zeroF), sOrig, mu);
      if (q < qInfBest) {
        qInfBest = q;
        xI = x;
        yI = expand_y(yWu, zeroF);
        sI = sOrig;
        muI = mu;
      }
    }
    const double cx = cw.dot(xWu);
    if (cx < 0.0) {
      const double q = (aw * xWu).norm() * std::max(1.0, cw.norm()) / (-cx * normAw);
      if (q <= 1e-8) return finalize(SolveStatus::Unbounded, x, yFull, sOrig, mu);
      if (q < qUnbBest) {
        qUnbBest = q;
        xU = x;
        yU = yFull;
        sU = sOrig;
        muU = mu;
      }
    }

    if (!std::isfinite(phi) || !std::isfinite(mu) || st.xNorm > 1e14 || st.yNorm > 1e14)
      return finalize_best(SolveStatus::NumericalFailure);
    if (iter >= settings.maxIter) return finalize_best(SolveStatus::MaxIter);
    if (sinceImprove > 30 || mu < 1e-20) return finalize_best(SolveStatus::NumericalFailure);

    // Nesterov-Todd scaling of the current iterate.
    Scaling w;
    w.glp = xs.segment(law.nf, law.nl).cwiseQuotient(scone.head(law.nl));
    bool scaleOk = w.glp.allFinite() && (law.nl == 0 || w.glp.minCoeff() > 0.0);
    for (std::size_t b = 0; b < law.dims.size() && scaleOk; ++b) {
      const int d = law.dims[b];
      const MatrixXd xb = smat(xs.segment(law.nf + law.off[b], svec_len(d)), d);
      const MatrixXd sb = smat(scone.segment(law.off[b], svec_len(d)), d);
      MatrixXd shalf, sinvhalf;
      sym_sqrts(sb, shalf, sinvhalf);
      MatrixXd mid = shalf * xb * shalf;
      mid = 0.5 * (mid + mid.transpose());
      MatrixXd midhalf, midinvhalf;
      sym_sqrts(mid, midhalf, midinvhalf);
      NtBlock nb;
      nb.w = sinvhalf * midhalf * sinvhalf;
      nb.w = 0.5 * (nb.w + nb.w.transpose());
      sym_sqrts(nb.w, nb.whalf, nb.winvhalf);
      MatrixXd v = nb.whalf * sb * nb.whalf;
      v = 0.5 * (v + v.transpose());
      Eigen::SelfAdjointEigenSolver<MatrixXd> esv(v);
      nb.uv = esv.eigenvectors();
      nb.lambdaV = esv.eigenvalues();
      scaleOk = nb.lambdaV.allFinite() && nb.lambdaV.minCoeff() > 0.0;
      w.blocks.push_back(std::move(nb));
    }
    if (!scaleOk) return finalize_best(SolveStatus::NumericalFailure);

    auto apply_g = [&](const VectorXd& v) {
      VectorXd r(law.nCone);
      r.head(law.nl) = w.glp.cwiseProduct(v.head(law.nl));
      for (std::size_t b = 0; b < law.dims.size(); ++b) {
        const int d = law.dims[b];
        const MatrixXd vb = smat(v.segment(law.off[b], svec_len(d)), d);
        const MatrixXd gb = w.blocks[b].w * vb * w.blocks[b].w;
        svec_into(0.5 * (gb + gb.transpose()), r.segment(law.off[b], svec_len(d)));
      }
      return r;
    };

    // Saddle matrix [Ac G Ac', Af; Af', 0], factored without pivoting in the
    // fixed structural order.
    MatrixXd gact(law.nCone, m);
    for (int i = 0; i < m; ++i) gact.col(i) = apply_g(ac.row(i).transpose());
    MatrixXd kkt = MatrixXd::Zero(kdim, kdim);
    kkt.topLeftCorner(m, m).noalias() = ac * gact;
    kkt.topRightCorner(m, law.nf) = af;
    kkt.bottomLeftCorner(law.nf, m) = af.transpose();
    // Natural pivot magnitudes: a row's own diagonal; for a free column
    // (diagonal zero until the rows are eliminated) the smallest magnitude
    // its Schur pivot -a'H^-1 a can take, |a|^2 / max diag(H).
    VectorXd ref(kdim);
    const double hmax = std::max(kkt.diagonal().maxCoeff(), 1e-300);
    for (int j = 0; j < kdim; ++j) {
      const double dj = std::abs(kkt(j, j));
      if (dj > 0.0) {
        ref(j) = dj;
      } else {
        const double cmax = kkt.col(j).cwiseAbs().maxCoeff();
        ref(j) = cmax * cmax / hmax;
      }
    }
    SkipPivotLdl kFact;
    kFact.compute(kkt, ref, elimOrder);
    if (!kFact.ok) return finalize_best(SolveStatus::NumericalFailure);

    auto saddle_solve = [&](const VectorXd& rhs) { return kFact.solve(rhs); };

    // Shared residuals of the scaled problem.
    const VectorXd rp = bk - ak * xs;
    VectorXd rd = cS - ak.transpose() * ys;
    const VectorXd rdc = rd.tail(law.nCone) - scone;
    const VectorXd rdf = rd.head(law.nf);
    const VectorXd gRdc = apply_g(rdc);

    auto direction = [&](const VectorXd& rc, VectorXd& dx, VectorXd& dy, VectorXd& ds) {
      VectorXd rhs(kdim);
      rhs.head(m) = rp - ac * rc + ac * gRdc;
      rhs.tail(law.nf) = rdf;
      VectorXd z = saddle_solve(rhs);
      VectorXd dys = z.head(m);
      VectorXd dsc = rdc - ac.transpose() * dys;
      VectorXd dxs(law.n);
      dxs.head(law.nf) = z.tail(law.nf);
      dxs.tail(law.nCone) = rc - apply_g(dsc);

      // The recovered step violates A dx = rp by whatever the factorized
      // solves lost; re-solving against the measured defect contracts that
      // error geometrically while it is above rounding level.  The dual and
      // complementarity rows are recovered directly and need no correction.
      const double scale = 1.0 + bk.norm() + rdf.norm();
      double best = std::numeric_limits<double>::infinity();
      VectorXd bx = dxs, by = dys, bs = dsc;
      for (int pass = 0;; ++pass) {
        VectorXd rhs2(kdim);
        rhs2.head(m) = rp - ak * dxs;
        rhs2.tail(law.nf) = rdf - af.transpose() * dys;
        const double defect = rhs2.lpNorm<Eigen::Infinity>();
        if (!std::isfinite(defect) || defect >= best) break;
        best = defect;
        bx = dxs;
        by = dys;
        bs = dsc;
        if (defect <= 1e-13 * scale || pass == 2) break;
        const VectorXd z2 = saddle_solve(rhs2);
        const VectorXd dy2 = z2.head(m);
        const VectorXd ds2 = -(ac.transpose() * dy2);
        dys += dy2;
        dsc += ds2;
        dxs.head(law.nf) += z2.tail(law.nf);
        dxs.tail(law.nCone) -= apply_g(ds2);
        if (!(dxs.allFinite() && dys.allFinite() && dsc.allFinite())) break;
      }
      dx = bx;
      dy = by;
      ds = bs;

      // The recovery's rounding noise, amplified by the largest scaling
      // entries, lands as absolute junk on cone coordinates that sit near
      // the boundary, and a negative component far beyond such a
      // coordinate's own scale collapses the step-length bound.  Cap those
      // components at a generous multiple of the coordinate scale — a real
      // descent direction never exceeds it, and positive (growth)
      // components never block — then let the feasibility restoration below
      // re-route the clamped mass.
      {
        const double theta = 10.0;
        for (int i = 0; i < law.nl; ++i) {
          const double cap = theta * xs(law.nf + i);
          if (dx(law.nf + i) < -cap) dx(law.nf + i) = -cap;
        }
        for (std::size_t b = 0; b < law.dims.size(); ++b) {
          const int dim = law.dims[b];
          const int base = law.nf + law.off[b];
          const int len = svec_len(dim);
          const MatrixXd xb = smat(xs.segment(base, len), dim);
          const MatrixXd dxb = smat(dx.segment(base, len), dim);
          Eigen::SelfAdjointEigenSolver<MatrixXd> es(xb);
          const VectorXd lam = es.eigenvalues().cwiseMax(0.0);
          const MatrixXd& u = es.eigenvectors();
          MatrixXd dt = u.transpose() * dxb * u;
          bool touched = false;
          for (int i = 0; i < dim; ++i) {
            const double cap = theta * lam(i);
            if (dt(i, i) < -cap) { dt(i, i) = -cap; touched = true; }
          }
          for (int i = 0; i < dim; ++i)
            for (int j = i + 1; j < dim; ++j) {
              const double si = lam(i) + std::max(dt(i, i), 0.0);
              const double sj = lam(j) + std::max(dt(j, j), 0.0);
              const double cap = theta * std::sqrt(si * sj);
              const double v = 0.5 * (dt(i, j) + dt(j, i));
              const double w2 = std::clamp(v, -cap, cap);
              if (w2 != v) touched = true;
              dt(i, j) = dt(j, i) = w2;
            }
          if (touched) {
            const MatrixXd fixed = u * dt * u.transpose();
            svec_into(0.5 * (fixed + fixed.transpose()), dx.segment(base, len));
          }
        }
      }

      // What survives the re-solves is noise amplified by the scaling spread;
      // it lives in A dx = rp, where the unweighted minimum-norm correction
      // removes it without touching the (already accurate) dual rows.
      // What survives the re-solves above is noise amplified by the scaling
      // spread, and it lives in A dx = rp.  Restore that equation with
      // corrections that are minimal in the scaled metric — the saddle solve
      // against [resid; 0] yields exactly that — so their mass lands on the
      // large-scaling coordinates where it is relatively invisible and the
      // cone step bound is unaffected.
      const double presScale = 1.0 + bk.norm();
      for (int pass = 0; pass < 3; ++pass) {
        const VectorXd resid = rp - ak * dx;
        if (resid.lpNorm<Eigen::Infinity>() <= 1e-13 * presScale) break;
        VectorXd rhsP = VectorXd::Zero(kdim);
        rhsP.head(m) = resid;
        const VectorXd zp = saddle_solve(rhsP);
        VectorXd delta(law.n);
        delta.head(law.nf) = zp.tail(law.nf);
        delta.tail(law.nCone) = apply_g(ac.transpose() * zp.head(m));
        const VectorXd d2 = dx + delta;
        if (!d2.allFinite() || (ak * d2 - rp).norm() >= resid.norm()) break;
        dx = d2;
      }
      // Whatever the scaled corrections cannot reach, take from the
      // unweighted minimum-norm correction — but cap it so no cone
      // coordinate moves by more than a small fraction of its value, which
      // would collapse the step length.
      if (aatOk) {
        const VectorXd resid = rp - ak * dx;
        if (resid.lpNorm<Eigen::Infinity>() > 1e-13 * presScale) {
          VectorXd delta = ak.transpose() * aat.solve(resid);
          // Re-route any part of the correction that would move a cone
          // coordinate by a meaningful fraction of its value: such kicks
          // collapse the step-length bound.  Excluding the offending columns
          // keeps A delta = resid exact while the mass lands on coordinates
          // that can absorb it; if the exclusions exhaust a row's support the
          // restricted Gram goes singular and the unrestricted correction is
          // kept — feasibility outranks step length.
          MatrixXd gram = aatM;
          std::vector<char> excl(static_cast<std::size_t>(law.nCone), 0);
          for (int round = 0; round < 4 && delta.allFinite(); ++round) {
            bool grew = false;
            for (int i = 0; i < law.nCone; ++i) {
              if (excl[static_cast<std::size_t>(i)]) continue;
              if (std::abs(delta(law.nf + i)) > 0.1 * std::abs(xs(law.nf + i))) {
                excl[static_cast<std::size_t>(i)] = 1;
                gram.selfadjointView<Eigen::Lower>().rankUpdate(ak.col(law.nf + i), -1.0);
                grew = true;
              }
            }
            if (!grew) break;
            const MatrixXd gramFull = gram.selfadjointView<Eigen::Lower>();
            Eigen::LDLT<MatrixXd> ldl(gramFull);
            if (ldl.info() != Eigen::Success ||
                ldl.vectorD().minCoeff() <= 1e-12 * std::abs(ldl.vectorD().maxCoeff())) {
              delta = ak.transpose() * aat.solve(resid);
              break;
            }
            delta = ak.transpose() * ldl.solve(resid);
            for (int i = 0; i < law.nCone; ++i)
              if (excl[static_cast<std::size_t>(i)]) delta(law.nf + i) = 0.0;
          }
          if (delta.allFinite()) dx += delta;
        }
      }
      return dx.allFinite() && dy.allFinite() && ds.allFinite();
    };

    // Predictor: drive residuals and complementarity straight to zero.
    const VectorXd rcAff = -xs.tail(law.nCone);
    VectorXd dxA, dyA, dsA;
    if (!direction(rcAff, dxA, dyA, dsA))
      return finalize_best(SolveStatus::NumericalFailure);

    const double apAff = std::min(1.0, cone_step_bound(law, xs.tail(law.nCone), dxA.tail(law.nCone)));
    const double adAff = std::min(1.0, cone_step_bound(law, scone, dsA));
    const double muAff = std::max(0.0, (xs.tail(law.nCone) + apAff * dxA.tail(law.nCone))
                                           .dot(scone + adAff * dsA) /
                                       law.nu);
    const double sigma = std::clamp(std::pow(muAff / std::max(mu, 1e-300), 3.0), 1e-8, 1.0);

    // Corrector target per cone, in NT-scaled coordinates.
    VectorXd rc(law.nCone);
    for (int i = 0; i < law.nl; ++i) {
      const int xi = law.nf + i;
      rc(i) = (sigma * mu - xs(xi) * scone(i) - dxA(xi) * dsA(i)) / scone(i);
    }
    for (std::size_t b = 0; b < law.dims.size(); ++b) {
      const int d = law.dims[b];
      const NtBlock& nb = w.blocks[b];
      const MatrixXd dxb = smat(dxA.segment(law.nf + law.off[b], svec_len(d)), d);
      const MatrixXd dsb = smat(dsA.segment(law.off[b], svec_len(d)), d);
      const MatrixXd dxh = nb.winvhalf * dxb * nb.winvhalf;
      const MatrixXd dsh = nb.whalf * dsb * nb.whalf;
      MatrixXd rv = -nb.uv * nb.lambdaV.cwiseAbs2().asDiagonal() * nb.uv.transpose();
      rv.diagonal().array() += sigma * mu;
      const MatrixXd cross = dxh * dsh;
      rv -= 0.5 * (cross + cross.transpose());
      // Jordan solve V o U = Rv in V's eigenbasis.
      MatrixXd rt = nb.uv.transpose() * rv * nb.uv;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          rt(i, j) = 2.0 * rt(i, j) / std::max(nb.lambdaV(i) + nb.lambdaV(j), 1e-300);
      const MatrixXd u = nb.uv * rt * nb.uv.transpose();
      MatrixXd rcb = nb.whalf * 0.5 * (u + u.transpose()) * nb.whalf;
      svec_into(0.5 * (rcb + rcb.transpose()), rc.segment(law.off[b], svec_len(d)));
    }

    VectorXd dx, dy, ds;
    if (!direction(rc, dx, dy, ds))
      return finalize_best(SolveStatus::NumericalFailure);

    const double ap = std::min(1.0, eta * cone_step_bound(law, xs.tail(law.nCone), dx.tail(law.nCone)));
    const double ad = std::min(1.0, eta * cone_step_bound(law, scone, ds));
    if (ap < 1e-3) {
      const VectorXd xc = xs.tail(law.nCone), dc = dx.tail(law.nCone);
      int argl = -1;
      double bl = 1e300;
      for (int i = 0; i < law.nl; ++i)
        if (dc(i) < 0.0 && -xc(i) / dc(i) < bl) { bl = -xc(i) / dc(i); argl = i; }
      std::fprintf(stderr, "[s] it=%d ap=%.2e ad=%.2e lpArg=%d lpBound=%.2e xs=%.2e dx=%.2e\n", iter,
                   ap, ad, argl, bl, argl >= 0 ? xc(argl) : 0.0, argl >= 0 ? dc(argl) : 0.0);
      for (std::size_t b = 0; b < law.dims.size(); ++b) {
        const int d2 = law.dims[b];
        const MatrixXd xb = smat(xc.segment(law.off[b], svec_len(d2)), d2);
        const MatrixXd db = smat(dc.segment(law.off[b], svec_len(d2)), d2);
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(xb);
        const VectorXd lam = es.eigenvalues().cwiseMax(1e-300);
        const MatrixXd linv =
            lam.cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
        MatrixXd mb = linv * db * linv.transpose();
        mb = 0.5 * (mb + mb.transpose());
        const double lmin = Eigen::SelfAdjointEigenSolver<MatrixXd>(mb).eigenvalues().minCoeff();
        std::fprintf(stderr, "    [s] blk=%d lamX=[%.2e..%.2e] lmin=%.2e bound=%.2e\n",
                     static_cast<int>(b), es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff(),
                     lmin, lmin < -1e-14 ? 1.0 / -lmin : 1e300);
      }
    }
    rep.trace.back().stepPrimal = ap;
    rep.trace.back().stepDual = ad;
    if (ap < 1e-11 && ad < 1e-11)
      return finalize_best(SolveStatus::NumericalFailure);

    xs += ap * dx;
    ys += ad * dy;
    scone += ad * ds;
  }
}

}  // namespace valfit::conic
