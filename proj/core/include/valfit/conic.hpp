#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

namespace valfit::conic {

enum class VarKind { Free, Nonneg };

struct VarRef {
  VarKind kind = VarKind::Free;
  int index = -1;
};

struct BlockRef {
  int index = -1;
  int dim = 0;
};

/// One entry (row, col) of a PSD block.  (g, h) and (h, g) address the same
/// underlying unknown of the symmetric matrix; coefficients laid on both are
/// summed.
struct EntryRef {
  int block = -1;
  int row = 0;
  int col = 0;
};

struct Term {
  VarRef var;
  double coef = 0.0;
};

struct EntryTerm {
  EntryRef entry;
  double coef = 0.0;
};

/// Sparse linear functional over scalar variables and PSD block entries.
class LinExpr {
 public:
  LinExpr& add(VarRef v, double coef);
  LinExpr& add(EntryRef e, double coef);
  const std::vector<Term>& terms() const { return terms_; }
  const std::vector<EntryTerm>& entry_terms() const { return entryTerms_; }

 private:
  std::vector<Term> terms_;
  std::vector<EntryTerm> entryTerms_;
};

struct Row {
  LinExpr expr;
  double rhs = 0.0;
  std::string label;
};

/// Equality-form conic program
///
///   minimize    c' x
///   subject to  A x = b,   x in R^nf x R^nl_+ x (PSD blocks)
///
/// built incrementally.  The builder owns the symbolic form; scalarize()
/// produces the dense data the interior-point solver consumes, with each PSD
/// block stacked as its scaled upper triangle (off-diagonal entries carry a
/// factor sqrt(2) so that inner products are preserved).
class Problem {
 public:
  VarRef add_free_var();
  VarRef add_nonneg_var();
  BlockRef add_psd_block(int dim);

  /// Adds the equality expr == rhs; returns the row index.  The optional
  /// label is for diagnostics and row lookup in tests.
  int add_eq(LinExpr expr, double rhs, std::string label = {});

  void set_objective(LinExpr expr);

  int num_free() const { return numFree_; }
  int num_nonneg() const { return numNonneg_; }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const std::vector<int>& psd_dims() const { return psdDims_; }
  const Row& row(int i) const { return rows_.at(static_cast<std::size_t>(i)); }
  const LinExpr& objective() const { return objective_; }

  /// Total coefficient of a scalar variable / block entry in a row (terms
  /// summed; entry (g,h) queried exactly as stated, not symmetrized).
  double coefficient(int row, VarRef v) const;
  double coefficient(int row, EntryRef e) const;

  /// First row whose label matches, -1 when absent.
  int find_row(const std::string& label) const;

  /// Plain-text sparse dump: a header with the variable partition, then one
  /// line per nonzero.  PSD coefficients are reported per upper-triangle
  /// entry (g <= h) as the total weight on X(g,h) = X(h,g).
  void dump_triplets(std::ostream& os) const;

  // --- scalarization (shared by the solver and by white-box tests) ---

  /// Length of the scalarized variable vector.
  int scalar_size() const;
  int scalar_index(VarRef v) const;
  /// Scalar index of svec entry (g, h) of a block (order-insensitive).
  int scalar_index(int block, int g, int h) const;

  struct Scalarized {
    Eigen::MatrixXd a;
    Eigen::VectorXd b;
    Eigen::VectorXd c;
    int numFree = 0;
    int numNonneg = 0;
    std::vector<int> psdDims;
  };
  Scalarized scalarize() const;

 private:
  int numFree_ = 0;
  int numNonneg_ = 0;
  std::vector<int> psdDims_;
  std::vector<Row> rows_;
  LinExpr objective_;
};

struct Settings {
  double tol = 1e-7;       // relative primal/dual/gap termination threshold
  int maxIter = 200;
  double epsStrict = 1e-4; // strict-inequality margin used by problem builders
  bool equilibrate = true; // Ruiz row/column scaling before solving
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, MaxIter, NumericalFailure };

const char* to_string(SolveStatus s);

struct IterationStat {
  double primalObj = 0.0;
  double dualObj = 0.0;
  double presAbs = 0.0;  // |b - A x|_2
  double dresAbs = 0.0;  // |c - A'y - s|_2
  double pres = 0.0;     // relative
  double dres = 0.0;     // relative
  double gap = 0.0;      // relative
  double mu = 0.0;
  double xNorm = 0.0;
  double yNorm = 0.0;
  double stepPrimal = 0.0;
  double stepDual = 0.0;
};

struct SolveReport {
  SolveStatus status = SolveStatus::NumericalFailure;
  double objective = 0.0;
  double dualObjective = 0.0;
  int iterations = 0;
  double primalResidual = 0.0;
  double dualResidual = 0.0;
  double gap = 0.0;

  std::vector<double> freeValues;
  std::vector<double> nonnegValues;
  std::vector<Eigen::MatrixXd> psdValues;

  std::vector<double> dualY;          // one multiplier per original row
  std::vector<double> nonnegDuals;
  std::vector<Eigen::MatrixXd> psdDuals;

  std::vector<IterationStat> trace;
  std::vector<int> droppedRows;       // redundant equalities removed in presolve

  double value(VarRef v) const;
  const Eigen::MatrixXd& block(BlockRef b) const;
};

/// Dense primal-dual interior-point solve (Nesterov-Todd scaling, predictor-
/// corrector).  Never throws for convergence problems: maxIter and numerical
/// breakdown are reported in the status.  Deterministic: identical inputs
/// give bit-identical reports.
SolveReport solve(const Problem& p, const Settings& settings = {});

}  // namespace valfit::conic
