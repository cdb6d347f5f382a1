#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "valfit/conic.hpp"
#include "valfit/learning_set.hpp"
#include "valfit/model.hpp"
#include "valfit/sos.hpp"

namespace valfit {

/// Where the monotonicity certificate lives: Global certifies the derivative
/// nonnegative on the whole real line (odd degree only), Interval only on the
/// criterion scale / spline piece.
enum class SosScope { Global, Interval };

/// What to fit: marginal family, capacity, statement handling.
struct FitSpec {
  MarginalForm form = MarginalForm::PiecewiseLinear;
  int degree = 1;      // D: polynomial degree of each piece
  int pieces = 1;      // k: pieces per marginal
  int continuity = 0;  // Dc: derivative orders matched at interior breakpoints
  SosScope scope = SosScope::Interval;
  int categories = 0;  // p >= 2 switches to sorting mode
  double epsStrict = 1e-4;
  conic::Settings solver{1e-7, 200, 1e-4, true};

  /// Fitting in pre-scaled coordinates ([lower,upper] -> [0,1]) controls the
  /// conditioning of the monomial basis; Auto turns it on from degree 5 up.
  enum class Scaling { Auto, On, Off };
  Scaling domainScaling = Scaling::Auto;

  /// Optional per-criterion breakpoints (raw coordinates, size pieces+1,
  /// spanning the scale).  Default: equally spaced.
  std::vector<std::vector<double>> customBreakpoints;

  static FitSpec piecewise_linear(int k);
  static FitSpec poly(int degree, SosScope scope = SosScope::Interval);
  static FitSpec spline(int degree, int pieces, int continuity);
  FitSpec sorting(int categories) const;

  /// Throws SpecError on inconsistent parameters (even degree with a global
  /// certificate, continuity >= degree, multiple pieces on a plain
  /// polynomial, ...).
  void validate() const;

  /// Dimension of each certificate matrix.
  int block_dim() const;
  bool scaling_enabled() const;
};

struct ProblemSizes {
  long long constraints = 0;
  long long variables = 0;
};

/// Closed-form size accounting for a fit with m pairwise statements, n
/// criteria, k pieces of degree D with continuity Dc:
///   constraints = m + n + 2nk + nkD + (1+Dc) n (k-1)
///   variables   = nk(D+1) + 2nk ceil(D/2)^2 + 2m
/// This is the published accounting convention; the assembled program can
/// differ slightly (it needs no per-piece value variables, and odd-degree
/// certificates link one row fewer per piece).
ProblemSizes problem_size(long long m, long long n, long long k, long long d, long long dc);

/// The assembled conic program plus handles into it, so callers (and tests)
/// can inspect rows and recover structured values from a solution.
struct Formulation {
  conic::Problem problem;
  // coeff[j][l][i]: coefficient of x^i of piece l of criterion j
  std::vector<std::vector<std::vector<conic::VarRef>>> coeff;
  std::vector<std::vector<conic::BlockRef>> qblock;  // per (j, piece)
  std::vector<std::vector<conic::BlockRef>> rblock;  // empty blocks for global scope
  std::vector<conic::VarRef> sigmaPlus;              // aligned with alternatives
  std::vector<conic::VarRef> sigmaMinus;
  std::vector<conic::VarRef> thresholdVars;          // sorting only, p-1 entries
  std::vector<std::vector<double>> breakpoints;      // formulation coordinates, per criterion
  bool domainScaled = false;
  ProblemSizes reported;
};

/// Builds the slack-minimization program for the learning set under spec:
/// preference rows (strict rows get the epsStrict margin), normalization,
/// zero anchoring, continuity rows, and per-piece certificate linking rows.
Formulation formulate(const LearningSet& ls, const FitSpec& spec);

/// Monotonicity certificate attached to one extracted piece, in formulation
/// coordinates.  For global scope r is unused (0x0) and q certifies the
/// derivative as a plain sum of squares.
struct PieceCertificate {
  Eigen::MatrixXd q;
  Eigen::MatrixXd r;
  double lower = 0.0;
  double upper = 1.0;
  bool global = false;
};

struct FitResult {
  std::optional<AdditiveModel> model;
  double totalSlack = 0.0;
  /// Slack consumed per statement under the extracted model; keys are
  /// "a>b" (strict), "a~b" (indifference), "a:h" (assignment).
  std::map<std::string, double> perStatementSlack;
  std::vector<std::vector<PieceCertificate>> certificates;  // [criterion][piece]
  conic::SolveReport report;
  ProblemSizes sizes;
  bool domainScaled = false;
};

/// Turns an optimal solve of a formulation into a model.  The derivative of
/// each piece is rebuilt from the (PSD-projected) certificate blocks and
/// integrated, so monotonicity holds by construction rather than within
/// solver tolerance; constants are anchored left to right (piece 0 starts at
/// exactly 0).  Throws ExtractionError when the solution cannot be made into
/// a normalized model.
AdditiveModel extract_model(const conic::SolveReport& report, const Formulation& f,
                            const LearningSet& ls, const FitSpec& spec);

/// formulate + solve + extract.  Solver failure is reported in
/// result.report.status with no model attached; nothing is thrown for it.
FitResult fit(const LearningSet& ls, const FitSpec& spec);

}  // namespace valfit
