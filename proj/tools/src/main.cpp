#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "valfit/errors.hpp"
#include "valfit/io.hpp"
#include "valfit/learn.hpp"
#include "valfit/synth.hpp"

// Exit codes: 0 success, 2 usage error (bad flags or an inconsistent fit
// spec), 3 data error (unreadable or malformed input files), 4 solver did
// not reach optimality.

namespace {

using nlohmann::json;
using namespace valfit;

struct SpecFlags {
  std::string form = "linear";
  int degree = -1;       // -1: form-dependent default
  int pieces = 1;
  int continuity = -1;   // -1: D-1 for splines, 0 otherwise
  std::string scope = "interval";
  int categories = 0;
  double eps = 1e-4;
  double tol = 1e-8;
  int maxIter = 200;
  std::string scaling = "auto";
};

void add_spec_flags(CLI::App* cmd, SpecFlags& sf) {
  cmd->add_option("--form", sf.form, "Marginal family: linear, poly or spline")
      ->check(CLI::IsMember({"linear", "poly", "spline"}));
  cmd->add_option("--degree", sf.degree, "Polynomial degree D of each piece");
  cmd->add_option("--pieces", sf.pieces, "Pieces k per marginal");
  cmd->add_option("--continuity", sf.continuity,
                  "Derivative orders matched at interior breakpoints (splines; default D-1)");
  cmd->add_option("--scope", sf.scope, "Monotonicity certificate scope: interval or global")
      ->check(CLI::IsMember({"interval", "global"}));
  cmd->add_option("--categories", sf.categories, "Category count p (>= 2 switches to sorting)");
  cmd->add_option("--eps", sf.eps, "Strict-preference margin epsilon");
  cmd->add_option("--tol", sf.tol, "Solver termination tolerance");
  cmd->add_option("--max-iter", sf.maxIter, "Solver iteration limit");
  cmd->add_option("--scaling", sf.scaling, "Domain pre-scaling: auto, on or off")
      ->check(CLI::IsMember({"auto", "on", "off"}));
}

FitSpec build_spec(const SpecFlags& sf) {
  FitSpec s;
  if (sf.form == "linear")
    s.form = MarginalForm::PiecewiseLinear;
  else if (sf.form == "poly")
    s.form = MarginalForm::Polynomial;
  else
    s.form = MarginalForm::Spline;
  s.degree = sf.degree >= 0 ? sf.degree : (s.form == MarginalForm::PiecewiseLinear ? 1 : 3);
  s.pieces = sf.pieces;
  s.continuity = sf.continuity >= 0 ? sf.continuity
                                    : (s.form == MarginalForm::Spline ? s.degree - 1 : 0);
  s.scope = sf.scope == "global" ? SosScope::Global : SosScope::Interval;
  s.categories = sf.categories;
  s.epsStrict = sf.eps;
  s.solver.tol = sf.tol;
  s.solver.maxIter = sf.maxIter;
  s.solver.epsStrict = sf.eps;
  s.domainScaling = sf.scaling == "on"    ? FitSpec::Scaling::On
                    : sf.scaling == "off" ? FitSpec::Scaling::Off
                                          : FitSpec::Scaling::Auto;
  s.validate();
  return s;
}

LearningSet load_learning_set(const std::string& dataPath, const std::string& prefsPath) {
  LearningSet ls = learning_set_from_json(read_file(prefsPath));
  if (!dataPath.empty()) {
    if (!ls.alternatives.empty())
      throw IoError("alternatives given both inline (" + prefsPath + ") and via --data");
    const std::string csv = read_file(dataPath);
    if (ls.criteria.empty()) ls.criteria = csv_header_criteria(csv);
    ls.alternatives = alternatives_from_csv(csv, ls.criteria);
  }
  ls.validate();
  return ls;
}

AdditiveModel load_model(const std::string& path) { return model_from_json(read_file(path)); }

std::vector<Alternative> load_alternatives(const std::string& path, const AdditiveModel& model) {
  return alternatives_from_csv(read_file(path), model.criteria());
}

int cmd_fit(const std::string& dataPath, const std::string& prefsPath, const SpecFlags& sf,
            const std::string& outPath, const std::string& format) {
  const FitSpec spec = build_spec(sf);
  const LearningSet ls = load_learning_set(dataPath, prefsPath);
  const FitResult fr = fit(ls, spec);
  if (format == "json") {
    std::fputs(fit_result_to_json(fr).c_str(), stdout);
  } else {
    std::printf("status,slack,iterations,constraints,variables\n%s,%s,%d,%lld,%lld\n",
                conic::to_string(fr.report.status), format_double(fr.totalSlack).c_str(),
                fr.report.iterations, fr.sizes.constraints, fr.sizes.variables);
  }
  if (!fr.model) {
    std::fprintf(stderr, "solver did not reach optimality: %s\n", conic::to_string(fr.report.status));
    return 4;
  }
  if (!outPath.empty()) write_file(outPath, model_to_json(*fr.model));
  return 0;
}

int cmd_rank(const std::string& modelPath, const std::string& dataPath, const std::string& format) {
  const AdditiveModel model = load_model(modelPath);
  const std::vector<Alternative> alts = load_alternatives(dataPath, model);
  const auto ranks = model.rank(alts).dense_ranks();
  json rows = json::array();
  if (format == "csv") std::printf("id,score,rank\n");
  for (const auto& a : alts) {
    const double u = model.evaluate(a);
    if (format == "csv")
      std::printf("%s,%s,%d\n", a.id.c_str(), format_double(u).c_str(), ranks.at(a.id));
    else
      rows.push_back({{"id", a.id}, {"score", u}, {"rank", ranks.at(a.id)}});
  }
  if (format == "json") std::printf("%s\n", rows.dump(2).c_str());
  return 0;
}

int cmd_sort(const std::string& modelPath, const std::string& dataPath, const std::string& format) {
  const AdditiveModel model = load_model(modelPath);
  if (!model.has_thresholds()) throw ModeError("model has no category thresholds; use rank instead");
  const std::vector<Alternative> alts = load_alternatives(dataPath, model);
  json rows = json::array();
  if (format == "csv") std::printf("id,score,category\n");
  for (const auto& a : alts) {
    const double u = model.evaluate(a);
    const int cat = model.assign(a);
    if (format == "csv")
      std::printf("%s,%s,%d\n", a.id.c_str(), format_double(u).c_str(), cat);
    else
      rows.push_back({{"id", a.id}, {"score", u}, {"category", cat}});
  }
  if (format == "json") std::printf("%s\n", rows.dump(2).c_str());
  return 0;
}

int cmd_curves(const std::string& modelPath, int samples, const std::string& format) {
  const AdditiveModel model = load_model(modelPath);
  json rows = json::array();
  if (format == "csv") std::printf("criterion,x,value\n");
  for (std::size_t j = 0; j < model.criterion_count(); ++j) {
    const auto& c = model.criteria()[j];
    for (int i = 0; i < samples; ++i) {
      const double x = c.lower + (c.upper - c.lower) * i / (samples - 1);
      const double u = model.marginal_value(j, x);
      if (format == "csv")
        std::printf("%s,%s,%s\n", c.id.c_str(), format_double(x).c_str(), format_double(u).c_str());
      else
        rows.push_back({{"criterion", c.id}, {"x", x}, {"value", u}});
    }
  }
  if (format == "json") std::printf("%s\n", rows.dump(2).c_str());
  return 0;
}

int cmd_size(long long m, long long n, long long k, long long d, long long dc, const std::string& format) {
  const ProblemSizes sz = problem_size(m, n, k, d, dc);
  if (format == "csv")
    std::printf("%lld,%lld\n", sz.constraints, sz.variables);
  else
    std::printf("%s\n", json{{"constraints", sz.constraints}, {"variables", sz.variables}}.dump(2).c_str());
  return 0;
}

int cmd_experiment(const std::vector<int>& modelIds, const std::vector<std::uint64_t>& seeds,
                   const std::vector<int>& mstars, int testSize, const SpecFlags& sf,
                   bool noSeconds, const std::string& format) {
  SweepGrid grid;
  grid.modelIds = modelIds;
  grid.seeds = seeds;
  grid.learningSizes = mstars;
  grid.testSize = testSize;
  grid.specs = {build_spec(sf)};
  if (grid.specs[0].categories != 0)
    throw SpecError("experiments use the ranking protocol; --categories is not applicable");
  const std::vector<ExperimentResult> rows = sweep(grid);
  bool allOk = true;
  if (format == "csv") {
    std::fputs(experiments_to_csv(rows, !noSeconds).c_str(), stdout);
    for (const auto& r : rows) allOk = allOk && r.ok;
  } else {
    json arr = json::array();
    for (const auto& r : rows) {
      json row{{"modelId", r.modelId}, {"seed", r.seed},           {"D", r.degree},
               {"k", r.pieces},        {"Dc", r.continuity},       {"mstar", r.learningSize},
               {"spearman", r.spearman}, {"kendall", r.kendall},   {"slack", r.totalSlack},
               {"constraints", r.sizes.constraints},               {"variables", r.sizes.variables},
               {"status", conic::to_string(r.status)}};
      if (!noSeconds) row["seconds"] = r.seconds;
      arr.push_back(row);
      allOk = allOk && r.ok;
    }
    std::printf("%s\n", arr.dump(2).c_str());
  }
  if (!allOk) {
    std::fprintf(stderr, "one or more cells did not reach optimality\n");
    return 4;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Additive value-function learning from preference statements"};
  app.require_subcommand(1);

  std::string dataPath, prefsPath, modelPath, outPath;
  std::string format = "csv";
  SpecFlags sf;
  int samples = 101;
  long long szM = 0, szN = 0, szK = 1, szD = 1, szDc = 0;
  std::vector<int> modelIds{1};
  std::vector<std::uint64_t> seeds{1};
  std::vector<int> mstars{100};
  int testSize = 1000;
  bool noSeconds = false;

  CLI::App* cFit = app.add_subcommand("fit", "Learn a model from alternatives and statements");
  cFit->add_option("--data", dataPath, "Alternatives CSV (id,<criterion>...)");
  cFit->add_option("--prefs", prefsPath, "Statements JSON (criteria, prefer/indiff or assign)")
      ->required();
  add_spec_flags(cFit, sf);
  cFit->add_option("--out", outPath, "Write the fitted model JSON here");
  std::string fitFormat = "json";
  cFit->add_option("--format", fitFormat, "Diagnostics format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  CLI::App* cRank = app.add_subcommand("rank", "Score and rank alternatives under a model");
  cRank->add_option("--model", modelPath, "Model JSON")->required();
  cRank->add_option("--data", dataPath, "Alternatives CSV")->required();
  cRank->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  CLI::App* cSort = app.add_subcommand("sort", "Assign alternatives to categories under a model");
  cSort->add_option("--model", modelPath, "Model JSON (must carry thresholds)")->required();
  cSort->add_option("--data", dataPath, "Alternatives CSV")->required();
  cSort->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  CLI::App* cCurves = app.add_subcommand("curves", "Sample marginal value curves for plotting");
  cCurves->add_option("--model", modelPath, "Model JSON")->required();
  cCurves->add_option("--samples", samples, "Samples per criterion, endpoints included (>= 2)");
  cCurves->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  CLI::App* cSize = app.add_subcommand("size", "Report published constraint/variable counts");
  cSize->add_option("--m", szM, "Pairwise statement count")->required();
  cSize->add_option("--n", szN, "Criterion count")->required();
  cSize->add_option("--pieces", szK, "Pieces per marginal");
  cSize->add_option("--degree", szD, "Degree per piece");
  cSize->add_option("--continuity", szDc, "Matched derivative orders");
  cSize->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  CLI::App* cExp = app.add_subcommand("experiment", "Run seeded synthetic experiment cells");
  cExp->add_option("--model-id", modelIds, "Ground-truth model ids (1-8)");
  cExp->add_option("--seed", seeds, "Seeds");
  cExp->add_option("--mstar", mstars, "Learning set sizes");
  cExp->add_option("--test-size", testSize, "Test set size");
  add_spec_flags(cExp, sf);
  cExp->add_flag("--no-seconds", noSeconds, "Omit the wall-time column");
  cExp->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (cFit->parsed()) return cmd_fit(dataPath, prefsPath, sf, outPath, fitFormat);
    if (cRank->parsed()) return cmd_rank(modelPath, dataPath, format);
    if (cSort->parsed()) return cmd_sort(modelPath, dataPath, format);
    if (cCurves->parsed()) {
      if (samples < 2) {
        std::fprintf(stderr, "--samples must be at least 2\n");
        return 2;
      }
      return cmd_curves(modelPath, samples, format);
    }
    if (cSize->parsed()) return cmd_size(szM, szN, szK, szD, szDc, format);
    if (cExp->parsed())
      return cmd_experiment(modelIds, seeds, mstars, testSize, sf, noSeconds, format);
  } catch (const SpecError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const ModeError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const MetricError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const ExtractionError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return 1;
  }
  return 2;
}
