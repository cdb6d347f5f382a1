#include "valfit/synth.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <tuple>

#include "valfit/errors.hpp"
#include "valfit/metrics.hpp"
#include "valfit/rng.hpp"
#include "valfit/sos.hpp"

namespace valfit {

namespace {

// ---- marginal shape builders, all on [0,1] with u(0) = 0, u(1) = w ----

Marginal pwl_marginal(std::vector<double> breakpoints, std::vector<double> values, double w) {
  std::vector<Polynomial> pieces;
  for (std::size_t l = 1; l < breakpoints.size(); ++l) {
    const double x0 = breakpoints[l - 1], x1 = breakpoints[l];
    const double v0 = values[l - 1] * w, v1 = values[l] * w;
    const double slope = (v1 - v0) / (x1 - x0);
    pieces.push_back(Polynomial({v0 - slope * x0, slope}));
  }
  return Marginal(MarginalForm::PiecewiseLinear, std::move(breakpoints), std::move(pieces));
}

// Monotone cubic interpolant (Fritsch-Carlson limited slopes) through
// samples of fn on 16 uniform knots, rescaled so the ends hit 0 and w.
template <typename F>
Marginal smooth_marginal(F fn, double w) {
  constexpr int kKnots = 17;
  std::vector<double> x(kKnots), v(kKnots);
  const double f0 = fn(0.0), f1 = fn(1.0);
  for (int i = 0; i < kKnots; ++i) {
    x[static_cast<std::size_t>(i)] = static_cast<double>(i) / (kKnots - 1);
    v[static_cast<std::size_t>(i)] = w * (fn(x[static_cast<std::size_t>(i)]) - f0) / (f1 - f0);
  }
  std::vector<double> d(kKnots - 1), m(kKnots);
  for (int i = 0; i < kKnots - 1; ++i)
    d[static_cast<std::size_t>(i)] = (v[static_cast<std::size_t>(i) + 1] - v[static_cast<std::size_t>(i)]) /
                                     (x[static_cast<std::size_t>(i) + 1] - x[static_cast<std::size_t>(i)]);
  m[0] = d[0];
  m[kKnots - 1] = d[kKnots - 2];
  for (int i = 1; i < kKnots - 1; ++i)
    m[static_cast<std::size_t>(i)] = d[static_cast<std::size_t>(i) - 1] * d[static_cast<std::size_t>(i)] <= 0.0
                                         ? 0.0
                                         : 0.5 * (d[static_cast<std::size_t>(i) - 1] + d[static_cast<std::size_t>(i)]);
  for (int i = 0; i < kKnots - 1; ++i) {
    const double di = d[static_cast<std::size_t>(i)];
    if (di == 0.0) {
      m[static_cast<std::size_t>(i)] = m[static_cast<std::size_t>(i) + 1] = 0.0;
      continue;
    }
    const double alpha = m[static_cast<std::size_t>(i)] / di;
    const double beta = m[static_cast<std::size_t>(i) + 1] / di;
    const double norm2 = alpha * alpha + beta * beta;
    if (norm2 > 9.0) {
      const double tau = 3.0 / std::sqrt(norm2);
      m[static_cast<std::size_t>(i)] = tau * alpha * di;
      m[static_cast<std::size_t>(i) + 1] = tau * beta * di;
    }
  }
  std::vector<Polynomial> pieces;
  for (int i = 0; i < kKnots - 1; ++i) {
    const double h = x[static_cast<std::size_t>(i) + 1] - x[static_cast<std::size_t>(i)];
    // Hermite basis in t = (x - x_i) / h, expanded into the power basis.
    const Polynomial h00({1, 0, -3, 2});
    const Polynomial h10({0, 1, -2, 1});
    const Polynomial h01({0, 0, 3, -2});
    const Polynomial h11({0, 0, -1, 1});
    Polynomial inT = h00 * v[static_cast<std::size_t>(i)] + h10 * (h * m[static_cast<std::size_t>(i)]) +
                     h01 * v[static_cast<std::size_t>(i) + 1] + h11 * (h * m[static_cast<std::size_t>(i) + 1]);
    pieces.push_back(inT.compose_affine(-x[static_cast<std::size_t>(i)] / h, 1.0 / h));
  }
  return Marginal(MarginalForm::Spline, std::move(x), std::move(pieces));
}

Marginal sigmoid_marginal(double alpha, double beta, double w) {
  return smooth_marginal([=](double t) { return 1.0 / (1.0 + std::exp(-alpha * (t - beta))); }, w);
}

Marginal exponential_marginal(double gamma, double w) {
  return smooth_marginal([=](double t) { return (std::exp(gamma * t) - 1.0) / (std::exp(gamma) - 1.0); }, w);
}

Marginal poly_marginal(Polynomial p, double w) {
  // scale so p(1) = w; p(0) must already be 0
  Polynomial scaled = p * (w / p(1.0));
  return Marginal(MarginalForm::Polynomial, {0.0, 1.0}, {std::move(scaled)});
}

// Quadratic u = a x^2 + (1-a) x, monotone on [0,1] for a in [-1,1].
Marginal quad_marginal(double a, double w) { return poly_marginal(Polynomial({0.0, 1.0 - a, a}), w); }

// Smoothstep cubic 3x^2 - 2x^3 (derivative 6x(1-x) >= 0).
Marginal smoothstep_marginal(double w) { return poly_marginal(Polynomial({0.0, 0.0, 3.0, -2.0}), w); }

// Mildly flat-start cubic a x + (1-a) x^3.
Marginal cubic_marginal(double a, double w) {
  return poly_marginal(Polynomial({0.0, a, 0.0, 1.0 - a}), w);
}

// Degree-15 step shapes built from an explicitly nonnegative derivative.
Marginal poly15_single_step(double w) {
  // derivative (x(1-x))^7: one smooth step centered at 1/2
  Polynomial base({0.0, 1.0, -1.0});  // x - x^2
  Polynomial deriv = Polynomial::constant(1.0);
  for (int i = 0; i < 7; ++i) deriv = deriv * base;
  return poly_marginal(deriv.antiderivative(0.0), w);
}

Marginal poly15_double_step(double w) {
  // derivative ((x-1/4)(x-3/4))^6 (x-1/2)^2: steps at 1/4 and 3/4 with a
  // pause in the middle
  Polynomial base = Polynomial({-0.25, 1.0}) * Polynomial({-0.75, 1.0});
  Polynomial deriv = Polynomial::constant(1.0);
  for (int i = 0; i < 6; ++i) deriv = deriv * base;
  deriv = deriv * Polynomial({-0.5, 1.0}) * Polynomial({-0.5, 1.0});
  return poly_marginal(deriv.antiderivative(0.0), w);
}

std::vector<CriterionScale> unit_scales(int n) {
  std::vector<CriterionScale> c;
  for (int j = 1; j <= n; ++j) c.push_back({"c" + std::to_string(j), 0.0, 1.0});
  return c;
}

}  // namespace

AdditiveModel model_zoo(int id) {
  switch (id) {
    case 1:
      return AdditiveModel(unit_scales(3), {sigmoid_marginal(10.0, 0.5, 0.5),
                                            pwl_marginal({0.0, 1.0 / 3, 2.0 / 3, 1.0}, {0.0, 0.6, 0.8, 1.0}, 0.3),
                                            exponential_marginal(3.0, 0.2)});
    case 2:
      return AdditiveModel(unit_scales(3), {quad_marginal(-0.8, 0.4), exponential_marginal(-4.0, 0.35),
                                            sigmoid_marginal(14.0, 0.35, 0.25)});
    case 3:
      return AdditiveModel(unit_scales(3), {poly15_double_step(0.45),
                                            pwl_marginal({0.0, 0.5, 0.8, 1.0}, {0.0, 0.15, 0.3, 1.0}, 0.3),
                                            smoothstep_marginal(0.25)});
    case 4:
      return AdditiveModel(unit_scales(3), {sigmoid_marginal(8.0, 0.6, 0.35), quad_marginal(0.9, 0.35),
                                            poly15_single_step(0.3)});
    case 5:
      return AdditiveModel(unit_scales(5), {sigmoid_marginal(12.0, 0.45, 0.3), exponential_marginal(5.0, 0.25),
                                            pwl_marginal({0.0, 0.25, 0.75, 1.0}, {0.0, 0.4, 0.6, 1.0}, 0.2),
                                            smoothstep_marginal(0.15), quad_marginal(-0.6, 0.1)});
    case 6:
      return AdditiveModel(unit_scales(5), {exponential_marginal(-3.0, 0.28), poly15_double_step(0.22),
                                            sigmoid_marginal(9.0, 0.55, 0.2),
                                            pwl_marginal({0.0, 0.2, 0.6, 1.0}, {0.0, 0.5, 0.7, 1.0}, 0.18),
                                            cubic_marginal(0.15, 0.12)});
    case 7:
      return AdditiveModel(unit_scales(5), {pwl_marginal({0.0, 0.4, 0.7, 1.0}, {0.0, 0.2, 0.85, 1.0}, 0.35),
                                            sigmoid_marginal(16.0, 0.3, 0.2), quad_marginal(0.7, 0.18),
                                            exponential_marginal(2.5, 0.15), poly15_single_step(0.12)});
    case 8:
      return AdditiveModel(unit_scales(5), {smoothstep_marginal(0.25), exponential_marginal(-5.0, 0.25),
                                            sigmoid_marginal(7.0, 0.5, 0.2), quad_marginal(-0.9, 0.15),
                                            pwl_marginal({0.0, 0.3, 0.5, 1.0}, {0.0, 0.35, 0.45, 1.0}, 0.15)});
    default:
      throw DomainError("model_zoo: id must be in 1..8");
  }
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  return run_experiment(model_zoo(cfg.modelId), cfg);
}

ExperimentResult run_experiment(const AdditiveModel& truth, const ExperimentConfig& cfg) {
  if (cfg.learningSize < 2) throw DomainError("experiment needs at least two reference alternatives");
  if (cfg.testSize < 2) throw DomainError("experiment needs at least two test alternatives");
  const int n = static_cast<int>(truth.criterion_count());
  Rng rng(cfg.seed);
  auto draw = [&](const std::string& prefix, int count) {
    std::vector<Alternative> alts;
    alts.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      Alternative a;
      a.id = prefix + std::to_string(i);
      for (int j = 0; j < n; ++j) a.performances.push_back(rng.uniform01());
      alts.push_back(std::move(a));
    }
    return alts;
  };
  LearningSet ls;
  ls.criteria = truth.criteria();
  ls.alternatives = draw("a", cfg.learningSize);
  const PairStatements stmts = consecutive_pairs(truth.rank(ls.alternatives));
  ls.strict = stmts.strict;
  ls.indiff = stmts.indiff;
  const std::vector<Alternative> test = draw("t", cfg.testSize);

  ExperimentResult res;
  res.modelId = cfg.modelId;
  res.seed = cfg.seed;
  res.degree = cfg.spec.degree;
  res.pieces = cfg.spec.pieces;
  res.continuity = cfg.spec.form == MarginalForm::Spline ? cfg.spec.continuity : 0;
  res.learningSize = cfg.learningSize;

  const auto t0 = std::chrono::steady_clock::now();
  const FitResult fr = fit(ls, cfg.spec);
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  res.status = fr.report.status;
  res.sizes = fr.sizes;
  res.totalSlack = fr.totalSlack;
  res.ok = fr.model.has_value();
  if (res.ok) {
    const Ranking truthRank = truth.rank(test);
    const Ranking fitRank = fr.model->rank(test);
    res.kendall = kendall_tau(truthRank, fitRank);
    res.spearman = spearman(truthRank, fitRank);
  }
  return res;
}

std::vector<ExperimentResult> sweep(const SweepGrid& grid) {
  std::vector<ExperimentResult> rows;
  for (int id : grid.modelIds)
    for (std::uint64_t seed : grid.seeds)
      for (int mstar : grid.learningSizes)
        for (const FitSpec& spec : grid.specs) {
          ExperimentConfig cfg;
          cfg.modelId = id;
          cfg.seed = seed;
          cfg.learningSize = mstar;
          cfg.testSize = grid.testSize;
          cfg.spec = spec;
          rows.push_back(run_experiment(cfg));
        }
  return rows;
}

std::vector<AggregateRow> aggregate(const std::vector<ExperimentResult>& rows) {
  // keyed by (modelId, D, k, Dc, m*); modelId 0 pools every model
  std::map<std::tuple<int, int, int, int, int>, std::vector<const ExperimentResult*>> groups;
  for (const auto& r : rows) {
    if (!r.ok) continue;
    groups[{r.modelId, r.degree, r.pieces, r.continuity, r.learningSize}].push_back(&r);
    groups[{0, r.degree, r.pieces, r.continuity, r.learningSize}].push_back(&r);
  }
  std::vector<AggregateRow> out;
  for (const auto& [key, members] : groups) {
    AggregateRow a;
    std::tie(a.modelId, a.degree, a.pieces, a.continuity, a.learningSize) = key;
    a.cells = static_cast<int>(members.size());
    double sk = 0.0, ss = 0.0;
    for (const auto* r : members) {
      sk += r->kendall;
      ss += r->spearman;
    }
    a.meanKendall = sk / a.cells;
    a.meanSpearman = ss / a.cells;
    double vk = 0.0, vs = 0.0;
    for (const auto* r : members) {
      vk += (r->kendall - a.meanKendall) * (r->kendall - a.meanKendall);
      vs += (r->spearman - a.meanSpearman) * (r->spearman - a.meanSpearman);
    }
    if (a.cells > 1) {
      vk /= a.cells - 1;
      vs /= a.cells - 1;
    }
    a.sdKendall = std::sqrt(vk);
    a.sdSpearman = std::sqrt(vs);
    out.push_back(a);
  }
  return out;
}

}  // namespace valfit
