#pragma once

#include <Eigen/Dense>
#include <vector>

// Reference implementations kept deliberately independent of the library:
// expansions proceed monomial by monomial instead of via diagonal sums, the
// LP oracle is a plain two-phase tableau simplex, and the metric references
// work on class-index vectors with their own pair loops.
namespace oracles {

// Coefficients (lowest degree first) of z' Q z with z = (1, x, ..., x^(d-1)).
std::vector<double> expand_gram(const Eigen::MatrixXd& q);

// Coefficients of (x - lo) z'Qz + (hi - x) z'Rz, accumulated one matrix
// entry at a time.
std::vector<double> expand_interval_certificate(const Eigen::MatrixXd& q,
                                                const Eigen::MatrixXd& r,
                                                double lo, double hi);

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  Eigen::VectorXd x;
};

// min c'x  s.t.  A x = b, x >= 0, solved by two-phase tableau simplex with
// Bland's rule (always terminates, no randomization).
LpResult simplex(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                 const Eigen::VectorXd& c);

// Every weak order over m elements as a class-index vector: level[i] is the
// 0-based class of element i counted from the best, and the used levels form
// a gapless prefix 0..max.
std::vector<std::vector<int>> all_weak_orders(int m);

// Tie-corrected tau and average-rank Spearman straight from the definitions,
// ending in the same closed formula the library uses (single sqrt over the
// product) so agreement is exact, not approximate.
double kendall_reference(const std::vector<int>& u, const std::vector<int>& v);
double spearman_reference(const std::vector<int>& u, const std::vector<int>& v);

}  // namespace oracles
