#include "valfit/learn.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "valfit/errors.hpp"

namespace valfit {

FitSpec FitSpec::piecewise_linear(int k) {
  FitSpec s;
  s.form = MarginalForm::PiecewiseLinear;
  s.degree = 1;
  s.pieces = k;
  s.continuity = 0;
  return s;
}

FitSpec FitSpec::poly(int degree, SosScope scope) {
  FitSpec s;
  s.form = MarginalForm::Polynomial;
  s.degree = degree;
  s.pieces = 1;
  s.continuity = 0;
  s.scope = scope;
  return s;
}

FitSpec FitSpec::spline(int degree, int pieces, int continuity) {
  FitSpec s;
  s.form = MarginalForm::Spline;
  s.degree = degree;
  s.pieces = pieces;
  s.continuity = continuity;
  return s;
}

FitSpec FitSpec::sorting(int cat) const {
  FitSpec s = *this;
  s.categories = cat;
  return s;
}

void FitSpec::validate() const {
  if (degree < 1) throw SpecError("degree must be at least 1");
  if (pieces < 1) throw SpecError("pieces must be at least 1");
  if (epsStrict <= 0.0) throw SpecError("epsStrict must be positive");
  if (categories != 0 && categories < 2) throw SpecError("sorting needs at least two categories");
  switch (form) {
    case MarginalForm::PiecewiseLinear:
      if (degree != 1) throw SpecError("piecewise-linear marginals have degree 1");
      if (continuity != 0) throw SpecError("piecewise-linear marginals match values only");
      break;
    case MarginalForm::Polynomial:
      if (pieces != 1) throw SpecError("plain polynomial marginals have a single piece");
      if (scope == SosScope::Global && degree % 2 == 0)
        throw SpecError("a global certificate needs an odd degree");
      break;
    case MarginalForm::Spline:
      if (scope == SosScope::Global) throw SpecError("spline pieces certify on their own interval");
      if (continuity < 0 || continuity > degree - 1)
        throw SpecError("continuity order must lie in [0, degree-1]");
      break;
  }
  for (const auto& bp : customBreakpoints)
    if (!bp.empty() && static_cast<int>(bp.size()) != pieces + 1)
      throw SpecError("custom breakpoints need pieces+1 entries");
}

int FitSpec::block_dim() const {
  switch (form) {
    case MarginalForm::PiecewiseLinear:
      return 1;
    case MarginalForm::Polynomial:
      // global scope requires odd degree, where floor((D-1)/2) is exact;
      // interval scope uses the floor for any degree
      return (degree - 1) / 2 + 1;
    case MarginalForm::Spline:
      return (degree % 2 == 1 ? (degree - 1) / 2 : degree / 2) + 1;  // ceil((D-1)/2) + 1
  }
  return 1;
}

bool FitSpec::scaling_enabled() const {
  switch (domainScaling) {
    case Scaling::On: return true;
    case Scaling::Off: return false;
    case Scaling::Auto: return degree >= 5;
  }
  return false;
}

ProblemSizes problem_size(long long m, long long n, long long k, long long d, long long dc) {
  if (m < 0 || n < 1 || k < 1 || d < 1 || dc < 0) throw SpecError("problem_size: invalid arguments");
  const long long ceilHalf = (d + 1) / 2;
  ProblemSizes s;
  s.constraints = m + n + 2 * n * k + n * k * d + (1 + dc) * n * (k - 1);
  s.variables = n * k * (d + 1) + 2 * n * k * ceilHalf * ceilHalf + 2 * m;
  return s;
}

namespace {

// Left-closed piece lookup mirroring Marginal::piece_index.
int piece_of(const std::vector<double>& bp, double x) {
  const int k = static_cast<int>(bp.size()) - 1;
  for (int l = 1; l <= k; ++l)
    if (x <= bp[static_cast<std::size_t>(l)]) return l - 1;
  return k - 1;
}

// Adds the value functional of one alternative: sum_j sum_i perf_j^i *
// coeff[j][piece][i], scaled by sign.
void add_value_terms(conic::LinExpr& e, const Formulation& f, const std::vector<double>& perf,
                     double sign, int degree) {
  const std::size_t n = f.coeff.size();
  for (std::size_t j = 0; j < n; ++j) {
    const double x = perf[j];
    const int l = piece_of(f.breakpoints[j], x);
    double pw = 1.0;
    for (int i = 0; i <= degree; ++i) {
      e.add(f.coeff[j][static_cast<std::size_t>(l)][static_cast<std::size_t>(i)], sign * pw);
      pw *= x;
    }
  }
}

double scale_perf(const CriterionScale& c, double x, bool scaled) {
  return scaled ? (x - c.lower) / (c.upper - c.lower) : x;
}

}  // namespace

Formulation formulate(const LearningSet& ls, const FitSpec& spec) {
  ls.validate();
  spec.validate();
  if (ls.sorting_mode() && spec.categories < 2)
    throw ModeError("learning set assigns categories but the spec has none");
  if (!ls.sorting_mode() && spec.categories >= 2)
    throw ModeError("sorting spec needs category assignments in the learning set");
  if (ls.sorting_mode()) {
    for (const auto& [id, cat] : ls.assignments)
      if (cat > spec.categories) throw ModeError("assignment of " + id + " exceeds category count");
  }
  if (!spec.customBreakpoints.empty() &&
      spec.customBreakpoints.size() != ls.criteria.size())
    throw SpecError("custom breakpoints must cover every criterion");

  const int n = static_cast<int>(ls.criteria.size());
  const int k = spec.pieces;
  const int deg = spec.degree;
  const int dim = spec.block_dim();
  const bool interval = !(spec.form == MarginalForm::Polynomial && spec.scope == SosScope::Global);

  Formulation f;
  f.domainScaled = spec.scaling_enabled();
  f.reported = problem_size(static_cast<long long>(ls.statement_count()), n, k, deg,
                            spec.form == MarginalForm::Spline ? spec.continuity : 0);

  // Breakpoints in formulation coordinates.
  for (int j = 0; j < n; ++j) {
    const auto& c = ls.criteria[static_cast<std::size_t>(j)];
    std::vector<double> bp(static_cast<std::size_t>(k) + 1);
    if (!spec.customBreakpoints.empty() && !spec.customBreakpoints[static_cast<std::size_t>(j)].empty()) {
      bp = spec.customBreakpoints[static_cast<std::size_t>(j)];
      const double span = std::max({1.0, std::abs(c.lower), std::abs(c.upper)});
      if (std::abs(bp.front() - c.lower) > 1e-9 * span || std::abs(bp.back() - c.upper) > 1e-9 * span)
        throw SpecError("custom breakpoints must span the criterion scale: " + c.id);
      for (std::size_t l = 1; l < bp.size(); ++l)
        if (!(bp[l - 1] < bp[l])) throw SpecError("custom breakpoints must increase: " + c.id);
      if (f.domainScaled)
        for (double& v : bp) v = (v - c.lower) / (c.upper - c.lower);
    } else {
      for (int l = 0; l <= k; ++l) {
        const double t = static_cast<double>(l) / static_cast<double>(k);
        bp[static_cast<std::size_t>(l)] = f.domainScaled ? t : c.lower + t * (c.upper - c.lower);
      }
    }
    f.breakpoints.push_back(std::move(bp));
  }

  auto& p = f.problem;

  // Variables, in a fixed order: piece coefficients, thresholds, slack pairs,
  // strict-row surpluses are created on the fly, certificate blocks last.
  f.coeff.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    f.coeff[static_cast<std::size_t>(j)].resize(static_cast<std::size_t>(k));
    for (int l = 0; l < k; ++l) {
      auto& cs = f.coeff[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)];
      cs.reserve(static_cast<std::size_t>(deg) + 1);
      for (int i = 0; i <= deg; ++i) cs.push_back(p.add_free_var());
    }
  }
  if (ls.sorting_mode())
    for (int h = 1; h < spec.categories; ++h) f.thresholdVars.push_back(p.add_free_var());
  for (std::size_t a = 0; a < ls.alternatives.size(); ++a) {
    f.sigmaPlus.push_back(p.add_nonneg_var());
    f.sigmaMinus.push_back(p.add_nonneg_var());
  }
  f.qblock.resize(static_cast<std::size_t>(n));
  f.rblock.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < k; ++l) {
      f.qblock[static_cast<std::size_t>(j)].push_back(p.add_psd_block(dim));
      if (interval) f.rblock[static_cast<std::size_t>(j)].push_back(p.add_psd_block(dim));
    }

  // Scaled performances per alternative.
  std::vector<std::vector<double>> perf(ls.alternatives.size());
  for (std::size_t a = 0; a < ls.alternatives.size(); ++a) {
    perf[a].resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
      perf[a][static_cast<std::size_t>(j)] = scale_perf(ls.criteria[static_cast<std::size_t>(j)],
                                                        ls.alternatives[a].performances[static_cast<std::size_t>(j)],
                                                        f.domainScaled);
  }

  // Statement rows.
  auto sigma_terms = [&](conic::LinExpr& e, std::size_t a, double plus, double minus) {
    e.add(f.sigmaPlus[a], plus);
    e.add(f.sigmaMinus[a], minus);
  };
  if (!ls.sorting_mode()) {
    for (const auto& [idA, idB] : ls.strict) {
      const std::size_t a = ls.index_of(idA), b = ls.index_of(idB);
      conic::LinExpr e;
      add_value_terms(e, f, perf[a], 1.0, deg);
      add_value_terms(e, f, perf[b], -1.0, deg);
      sigma_terms(e, a, 1.0, -1.0);
      sigma_terms(e, b, -1.0, 1.0);
      e.add(p.add_nonneg_var(), -1.0);  // surplus: left side >= epsStrict
      p.add_eq(std::move(e), spec.epsStrict, "pref[" + idA + ">" + idB + "]");
    }
    for (const auto& [idA, idB] : ls.indiff) {
      const std::size_t a = ls.index_of(idA), b = ls.index_of(idB);
      conic::LinExpr e;
      add_value_terms(e, f, perf[a], 1.0, deg);
      add_value_terms(e, f, perf[b], -1.0, deg);
      sigma_terms(e, a, 1.0, -1.0);
      sigma_terms(e, b, -1.0, 1.0);
      p.add_eq(std::move(e), 0.0, "ind[" + idA + "~" + idB + "]");
    }
  } else {
    for (const auto& [id, cat] : ls.assignments) {
      const std::size_t a = ls.index_of(id);
      if (cat >= 2) {  // value reaches above the lower boundary of its category
        conic::LinExpr e;
        add_value_terms(e, f, perf[a], 1.0, deg);
        e.add(f.sigmaPlus[a], 1.0);
        e.add(f.thresholdVars[static_cast<std::size_t>(cat) - 2], -1.0);
        e.add(p.add_nonneg_var(), -1.0);
        p.add_eq(std::move(e), 0.0, "cat_lo[" + id + "]");
      }
      if (cat <= spec.categories - 1) {  // and stays strictly below the upper one
        conic::LinExpr e;
        add_value_terms(e, f, perf[a], 1.0, deg);
        e.add(f.sigmaMinus[a], -1.0);
        e.add(f.thresholdVars[static_cast<std::size_t>(cat) - 1], -1.0);
        e.add(p.add_nonneg_var(), 1.0);
        p.add_eq(std::move(e), -spec.epsStrict, "cat_hi[" + id + "]");
      }
    }
    for (int h = 2; h < spec.categories; ++h) {
      conic::LinExpr e;
      e.add(f.thresholdVars[static_cast<std::size_t>(h) - 1], 1.0);
      e.add(f.thresholdVars[static_cast<std::size_t>(h) - 2], -1.0);
      e.add(p.add_nonneg_var(), -1.0);
      p.add_eq(std::move(e), spec.epsStrict, "thr[" + std::to_string(h) + "]");
    }
  }

  // Normalization: marginal tops sum to one.
  {
    conic::LinExpr e;
    for (int j = 0; j < n; ++j) {
      const double top = f.breakpoints[static_cast<std::size_t>(j)].back();
      double pw = 1.0;
      for (int i = 0; i <= deg; ++i) {
        e.add(f.coeff[static_cast<std::size_t>(j)][static_cast<std::size_t>(k) - 1][static_cast<std::size_t>(i)], pw);
        pw *= top;
      }
    }
    p.add_eq(std::move(e), 1.0, "norm");
  }

  // Zero anchoring at each scale's lower end.
  for (int j = 0; j < n; ++j) {
    conic::LinExpr e;
    const double lo = f.breakpoints[static_cast<std::size_t>(j)].front();
    double pw = 1.0;
    for (int i = 0; i <= deg; ++i) {
      e.add(f.coeff[static_cast<std::size_t>(j)][0][static_cast<std::size_t>(i)], pw);
      pw *= lo;
    }
    p.add_eq(std::move(e), 0.0, "zero[" + std::to_string(j) + "]");
  }

  // Continuity of value and the first Dc derivatives at interior breakpoints.
  if (spec.form != MarginalForm::Polynomial && k > 1) {
    const int dc = spec.form == MarginalForm::Spline ? spec.continuity : 0;
    for (int j = 0; j < n; ++j)
      for (int l = 1; l < k; ++l) {
        const double t = f.breakpoints[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)];
        for (int o = 0; o <= dc; ++o) {
          conic::LinExpr e;
          for (int i = o; i <= deg; ++i) {
            double w = 1.0;
            for (int q = 0; q < o; ++q) w *= static_cast<double>(i - q);
            w *= std::pow(t, i - o);
            e.add(f.coeff[static_cast<std::size_t>(j)][static_cast<std::size_t>(l) - 1][static_cast<std::size_t>(i)], w);
            e.add(f.coeff[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)][static_cast<std::size_t>(i)], -w);
          }
          p.add_eq(std::move(e), 0.0,
                   "cont[" + std::to_string(j) + "," + std::to_string(l) + "," + std::to_string(o) + "]");
        }
      }
  }

  // Certificate linking: the coefficients of each piece's derivative equal
  // the expansion of its certificate.
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < k; ++l) {
      const auto q = f.qblock[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)];
      if (!interval) {
        // global: derivative is z'Qz, degree 2(dim-1) = D-1
        for (int i = 0; i <= deg - 1; ++i) {
          conic::LinExpr e;
          e.add(f.coeff[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)][static_cast<std::size_t>(i) + 1],
                static_cast<double>(i + 1));
          for (int g = 0; g < dim; ++g) {
            const int h = i - g;
            if (h >= 0 && h < dim) e.add(conic::EntryRef{q.index, g, h}, -1.0);
          }
          p.add_eq(std::move(e), 0.0,
                   "link[" + std::to_string(j) + "," + std::to_string(l) + "," + std::to_string(i) + "]");
        }
      } else {
        const auto r = f.rblock[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)];
        const double lo = f.breakpoints[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)];
        const double hi = f.breakpoints[static_cast<std::size_t>(j)][static_cast<std::size_t>(l) + 1];
        // expansion degree 2*dim - 1; derivative coefficients above D-1 are
        // forced to zero by rows without a coefficient term
        for (int i = 0; i <= 2 * dim - 1; ++i) {
          conic::LinExpr e;
          if (i + 1 <= deg)
            e.add(f.coeff[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)][static_cast<std::size_t>(i) + 1],
                  static_cast<double>(i + 1));
          for (int g = 0; g < dim; ++g) {
            const int hPrev = i - 1 - g;  // terms of x * z'Qz and x * z'Rz
            if (hPrev >= 0 && hPrev < dim) {
              e.add(conic::EntryRef{q.index, g, hPrev}, -1.0);
              e.add(conic::EntryRef{r.index, g, hPrev}, 1.0);
            }
            const int h = i - g;  // terms of -lo * z'Qz and +hi * z'Rz
            if (h >= 0 && h < dim) {
              e.add(conic::EntryRef{q.index, g, h}, lo);
              e.add(conic::EntryRef{r.index, g, h}, -hi);
            }
          }
          p.add_eq(std::move(e), 0.0,
                   "link[" + std::to_string(j) + "," + std::to_string(l) + "," + std::to_string(i) + "]");
        }
      }
    }

  // Objective: total deviation.
  conic::LinExpr obj;
  for (std::size_t a = 0; a < ls.alternatives.size(); ++a) {
    obj.add(f.sigmaPlus[a], 1.0);
    obj.add(f.sigmaMinus[a], 1.0);
  }
  p.set_objective(std::move(obj));
  return f;
}

namespace {

Eigen::MatrixXd psd_project(const Eigen::MatrixXd& m) {
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  Eigen::MatrixXd p = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (p + p.transpose());
}

}  // namespace

AdditiveModel extract_model(const conic::SolveReport& report, const Formulation& f,
                            const LearningSet& ls, const FitSpec& spec) {
  if (report.status != conic::SolveStatus::Optimal)
    throw ExtractionError("cannot extract a model from a non-optimal solve");
  const int n = static_cast<int>(ls.criteria.size());
  const int k = spec.pieces;
  std::vector<Marginal> marginals;
  for (int j = 0; j < n; ++j) {
    const auto& c = ls.criteria[static_cast<std::size_t>(j)];
    const auto& bp = f.breakpoints[static_cast<std::size_t>(j)];
    std::vector<Polynomial> pieces;
    double carry = 0.0;  // piece value at its left breakpoint
    for (int l = 0; l < k; ++l) {
      const Eigen::MatrixXd q = psd_project(report.block(f.qblock[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)]));
      Polynomial deriv;
      if (spec.form == MarginalForm::Polynomial && spec.scope == SosScope::Global) {
        deriv = sos_poly_from_gram(q);
      } else {
        const Eigen::MatrixXd r = psd_project(report.block(f.rblock[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)]));
        IntervalCertificate cert{q, r, bp[static_cast<std::size_t>(l)], bp[static_cast<std::size_t>(l) + 1]};
        deriv = sos_poly_from_interval(cert);
      }
      // Degrees above D-1 only hold solver residue; the linking rows pin
      // them to zero, so dropping them loses nothing real.
      deriv = deriv.truncated(spec.degree - 1);
      Polynomial piece = deriv.antiderivative(0.0);
      const double left = bp[static_cast<std::size_t>(l)];
      Polynomial shifted = piece + Polynomial::constant(carry - piece(left));
      carry = shifted(bp[static_cast<std::size_t>(l) + 1]);
      pieces.push_back(std::move(shifted));
    }
    if (f.domainScaled) {
      // map [0,1] pieces back to the raw scale
      const double a = -c.lower / (c.upper - c.lower);
      const double b = 1.0 / (c.upper - c.lower);
      std::vector<Polynomial> raw;
      for (auto& pc : pieces) raw.push_back(pc.compose_affine(a, b));
      std::vector<double> rawBp(bp.size());
      for (std::size_t l = 0; l < bp.size(); ++l) rawBp[l] = c.lower + bp[l] * (c.upper - c.lower);
      rawBp.front() = c.lower;
      rawBp.back() = c.upper;
      marginals.emplace_back(spec.form, std::move(rawBp), std::move(raw));
    } else {
      marginals.emplace_back(spec.form, bp, std::move(pieces));
    }
  }
  double top = 0.0;
  for (int j = 0; j < n; ++j) top += marginals[static_cast<std::size_t>(j)](ls.criteria[static_cast<std::size_t>(j)].upper);
  if (std::abs(top - 1.0) > 1e-6)
    throw ExtractionError("extracted marginals break normalization beyond tolerance");
  std::vector<double> thresholds;
  for (const auto& tv : f.thresholdVars) thresholds.push_back(report.value(tv));
  return AdditiveModel(ls.criteria, std::move(marginals), std::move(thresholds));
}

FitResult fit(const LearningSet& ls, const FitSpec& spec) {
  Formulation f = formulate(ls, spec);
  FitResult res;
  res.sizes = f.reported;
  res.domainScaled = f.domainScaled;
  res.report = conic::solve(f.problem, spec.solver);
  if (res.report.status != conic::SolveStatus::Optimal) return res;

  // Slack-minimal models are often a face rather than a point (the paper's
  // single-linear-piece example leaves a whole interval of optimal weight
  // vectors).  When slack is unavoidable, a second pass pins the total at
  // its optimum and minimizes the largest per-alternative slack; balancing
  // the errors selects the symmetric solution out of the face (the all-equal
  // scores of the example).  Representable sets skip the pass: every slack
  // is already zero, and the budget row would have no interior.
  const double sigmaStar = res.report.objective;
  if (sigmaStar > 1e-6) {
    conic::Problem balanced = f.problem;
    const conic::VarRef cap = balanced.add_nonneg_var();
    conic::LinExpr budget;
    for (std::size_t a = 0; a < ls.alternatives.size(); ++a) {
      budget.add(f.sigmaPlus[a], 1.0);
      budget.add(f.sigmaMinus[a], 1.0);
      conic::LinExpr bal;
      bal.add(f.sigmaPlus[a], 1.0);
      bal.add(f.sigmaMinus[a], 1.0);
      bal.add(balanced.add_nonneg_var(), 1.0);
      bal.add(cap, -1.0);
      balanced.add_eq(std::move(bal), 0.0, "balance[" + ls.alternatives[a].id + "]");
    }
    budget.add(balanced.add_nonneg_var(), 1.0);
    // Headroom tracks the solver tolerance: stage one reports its optimum
    // only to that accuracy, and a budget tighter than the report's error
    // would cut the true optimum off.
    const double headroom = 10.0 * spec.solver.tol * (1.0 + sigmaStar);
    balanced.add_eq(std::move(budget), sigmaStar + headroom, "budget");
    conic::LinExpr obj;
    obj.add(cap, 1.0);
    balanced.set_objective(std::move(obj));
    conic::SolveReport second = conic::solve(balanced, spec.solver);
    if (second.status == conic::SolveStatus::Optimal) {
      // The report carries the deviation total, not the internal cap value.
      second.objective = 0.0;
      for (std::size_t a = 0; a < ls.alternatives.size(); ++a)
        second.objective += second.value(f.sigmaPlus[a]) + second.value(f.sigmaMinus[a]);
      res.report = std::move(second);
    }
  }

  res.model = extract_model(res.report, f, ls, spec);
  for (std::size_t a = 0; a < ls.alternatives.size(); ++a)
    res.totalSlack += res.report.value(f.sigmaPlus[a]) + res.report.value(f.sigmaMinus[a]);

  // Certificates, PSD-projected exactly like extraction saw them.
  res.certificates.resize(static_cast<std::size_t>(ls.criteria.size()));
  for (std::size_t j = 0; j < ls.criteria.size(); ++j)
    for (int l = 0; l < spec.pieces; ++l) {
      PieceCertificate pc;
      pc.q = psd_project(res.report.block(f.qblock[j][static_cast<std::size_t>(l)]));
      pc.lower = f.breakpoints[j][static_cast<std::size_t>(l)];
      pc.upper = f.breakpoints[j][static_cast<std::size_t>(l) + 1];
      pc.global = spec.form == MarginalForm::Polynomial && spec.scope == SosScope::Global;
      if (!pc.global) pc.r = psd_project(res.report.block(f.rblock[j][static_cast<std::size_t>(l)]));
      res.certificates[j].push_back(std::move(pc));
    }

  // Slack per statement, as consumed by the extracted model.
  const AdditiveModel& m = *res.model;
  auto score = [&](const std::string& id) { return m.evaluate(ls.by_id(id)); };
  for (const auto& [a, b] : ls.strict)
    res.perStatementSlack[a + ">" + b] = std::max(0.0, spec.epsStrict - (score(a) - score(b)));
  for (const auto& [a, b] : ls.indiff) res.perStatementSlack[a + "~" + b] = std::abs(score(a) - score(b));
  for (const auto& [id, cat] : ls.assignments) {
    const double u = score(id);
    double s = 0.0;
    if (cat >= 2) s += std::max(0.0, m.thresholds()[static_cast<std::size_t>(cat) - 2] - u);
    if (cat <= spec.categories - 1)
      s += std::max(0.0, u - (m.thresholds()[static_cast<std::size_t>(cat) - 1] - spec.epsStrict));
    res.perStatementSlack[id + ":" + std::to_string(cat)] = s;
  }
  return res;
}

}  // namespace valfit
