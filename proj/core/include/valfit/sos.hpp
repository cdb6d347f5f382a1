#pragma once

#include <Eigen/Dense>
#include <vector>

#include "valfit/polynomial.hpp"

namespace valfit {

/// Nonnegativity certificate for a polynomial on an interval [lower, upper]:
///
///   p(x) = (x - lower) * z(x)' Q z(x) + (upper - x) * z(x)' R z(x)
///
/// with z(x) = (1, x, ..., x^(dim-1)) and Q, R symmetric positive
/// semidefinite.  Any polynomial of odd degree 2*dim - 1 that is nonnegative
/// on the interval admits such a representation, and conversely any choice of
/// PSD Q, R yields a polynomial nonnegative on the interval.
struct IntervalCertificate {
  Eigen::MatrixXd q;
  Eigen::MatrixXd r;
  double lower = 0.0;
  double upper = 1.0;
};

/// Coefficients of z(x)' Q z(x) for symmetric Q: a globally nonnegative
/// polynomial of degree 2*(dim-1) when Q is PSD.  Entry (g, h) contributes
/// Q(g,h) to the coefficient of x^(g+h).
Polynomial sos_poly_from_gram(const Eigen::MatrixXd& q);

/// Expanded coefficients of the interval certificate above (degree
/// 2*dim - 1).  The expansion is computed from the diagonal sums
/// A_i = sum_{g+h=i} Q(g,h), B_i = sum_{g+h=i} R(g,h) as
/// p_i = A_{i-1} - B_{i-1} + upper*B_i - lower*A_i.
Polynomial sos_poly_from_interval(const IntervalCertificate& cert);

/// Semidefinite Cholesky with pivot completion: returns true and fills L
/// (lower triangular, M = L L') when M is PSD within tolerance.  Pivots in
/// (-negTol, pivotTol] are treated as zero and their column is skipped;
/// a pivot below -negTol means M is not PSD and the function returns false.
bool try_cholesky(const Eigen::MatrixXd& m, Eigen::MatrixXd& l,
                  double pivotTol = 1e-12, double negTol = 1e-10);

/// Throwing wrapper around try_cholesky: NotPsdError on failure.
Eigen::MatrixXd cholesky(const Eigen::MatrixXd& m, double pivotTol = 1e-12,
                         double negTol = 1e-10);

/// Symmetry check, infinity norm of M - M' against tol * max(1, |M|_inf).
bool is_symmetric(const Eigen::MatrixXd& m, double tol = 1e-12);

/// Result of the interval nonnegativity check: the most negative value found
/// and where it was found.  certified == false means value < -tol there.
struct NonnegCheck {
  bool certified = true;
  double x = 0.0;
  double value = 0.0;
};

/// Checks p >= -tol on [lower, upper] by evaluating on a 2001-point uniform
/// grid plus every real stationary point (root of p') inside the interval.
/// Stationary points come from companion-matrix eigenvalues; leading
/// coefficients below 1e-12 are trimmed before forming the companion matrix.
NonnegCheck check_nonneg_on_interval(const Polynomial& p, double lower,
                                     double upper, double tol = 1e-9);

/// Real roots of p inside [lower, upper] via the companion matrix (used by
/// the nonnegativity check; exposed for testing).
std::vector<double> real_roots_in_interval(const Polynomial& p, double lower,
                                           double upper);

}  // namespace valfit
