#include "valfit/sos.hpp"

#include <algorithm>
#include <cmath>

#include "valfit/errors.hpp"

namespace valfit {

namespace {

// Diagonal sums d[i] = sum_{g+h=i} M(g,h), i = 0 .. 2*(dim-1).
std::vector<double> antidiagonal_sums(const Eigen::MatrixXd& m) {
  const int dim = static_cast<int>(m.rows());
  std::vector<double> d(std::max(2 * dim - 1, 1), 0.0);
  for (int g = 0; g < dim; ++g)
    for (int h = 0; h < dim; ++h) d[static_cast<std::size_t>(g + h)] += m(g, h);
  return d;
}

}  // namespace

Polynomial sos_poly_from_gram(const Eigen::MatrixXd& q) {
  if (q.rows() != q.cols() || q.rows() == 0) throw BuildError("gram matrix must be square and non-empty");
  return Polynomial(antidiagonal_sums(q));
}

Polynomial sos_poly_from_interval(const IntervalCertificate& cert) {
  if (cert.q.rows() != cert.q.cols() || cert.r.rows() != cert.r.cols() || cert.q.rows() != cert.r.rows() ||
      cert.q.rows() == 0)
    throw BuildError("certificate matrices must be square of equal size");
  const int dim = static_cast<int>(cert.q.rows());
  const std::vector<double> a = antidiagonal_sums(cert.q);
  const std::vector<double> b = antidiagonal_sums(cert.r);
  auto at = [](const std::vector<double>& v, int i) {
    return (i >= 0 && i < static_cast<int>(v.size())) ? v[static_cast<std::size_t>(i)] : 0.0;
  };
  std::vector<double> p(static_cast<std::size_t>(2 * dim), 0.0);
  for (int i = 0; i < 2 * dim; ++i)
    p[static_cast<std::size_t>(i)] =
        at(a, i - 1) - at(b, i - 1) + cert.upper * at(b, i) - cert.lower * at(a, i);
  return Polynomial(std::move(p));
}

bool is_symmetric(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.lpNorm<Eigen::Infinity>());
  return (m - m.transpose()).lpNorm<Eigen::Infinity>() <= tol * scale;
}

bool try_cholesky(const Eigen::MatrixXd& m, Eigen::MatrixXd& l, double pivotTol, double negTol) {
  if (m.rows() != m.cols()) throw BuildError("cholesky requires a square matrix");
  const int n = static_cast<int>(m.rows());
  // Tolerances scale with the largest diagonal entry so the check is
  // invariant under m -> s*m.
  const double scale = std::max(1.0, m.diagonal().cwiseAbs().maxCoeff());
  l = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double d = m(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d < -negTol * scale) return false;
    if (d <= pivotTol * scale) {
      // Semidefinite pivot: zero column, nothing to eliminate below.
      continue;
    }
    const double root = std::sqrt(d);
    l(j, j) = root;
    for (int i = j + 1; i < n; ++i) {
      double v = m(i, j);
      for (int k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / root;
    }
  }
  return true;
}

Eigen::MatrixXd cholesky(const Eigen::MatrixXd& m, double pivotTol, double negTol) {
  Eigen::MatrixXd l;
  if (!try_cholesky(m, l, pivotTol, negTol)) throw NotPsdError("matrix has a negative pivot beyond tolerance");
  return l;
}

std::vector<double> real_roots_in_interval(const Polynomial& p, double lower, double upper) {
  // Trim negligible leading coefficients before normalizing; a companion
  // matrix built on a near-zero leading coefficient is useless.
  constexpr double kLeadTol = 1e-12;
  const Polynomial q = p.trimmed(kLeadTol);
  const int deg = static_cast<int>(q.coeffs().size()) - 1;
  std::vector<double> roots;
  if (deg < 1) return roots;
  if (deg == 1) {
    const double r = -q.coeff(0) / q.coeff(1);
    if (r >= lower && r <= upper) roots.push_back(r);
    return roots;
  }
  const double lead = q.coeff(static_cast<std::size_t>(deg));
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -q.coeff(static_cast<std::size_t>(i)) / lead;
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, /*computeEigenvectors=*/false);
  const double span = std::max({1.0, std::abs(lower), std::abs(upper)});
  for (int i = 0; i < deg; ++i) {
    const std::complex<double> ev = es.eigenvalues()(i);
    if (std::abs(ev.imag()) > 1e-8 * span) continue;
    double r = ev.real();
    // Accept roots hugging the endpoints so boundary minima are not missed.
    if (r < lower - 1e-9 * span || r > upper + 1e-9 * span) continue;
    roots.push_back(std::clamp(r, lower, upper));
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

NonnegCheck check_nonneg_on_interval(const Polynomial& p, double lower, double upper, double tol) {
  if (!(lower < upper)) throw DomainError("check_nonneg_on_interval: empty interval");
  NonnegCheck best;
  best.x = lower;
  best.value = p(lower);
  auto consider = [&](double x) {
    const double v = p(x);
    if (v < best.value) {
      best.value = v;
      best.x = x;
    }
  };
  constexpr int kGridPoints = 2001;
  for (int i = 0; i < kGridPoints; ++i)
    consider(lower + (upper - lower) * static_cast<double>(i) / (kGridPoints - 1));
  for (double r : real_roots_in_interval(p.derivative(), lower, upper)) consider(r);
  best.certified = best.value >= -tol;
  return best;
}

}  // namespace valfit
