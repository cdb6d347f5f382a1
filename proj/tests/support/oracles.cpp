#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace oracles {

namespace {

void add_monomial(std::vector<double>& p, int power, double coef) {
  if (static_cast<int>(p.size()) <= power) p.resize(static_cast<std::size_t>(power) + 1, 0.0);
  p[static_cast<std::size_t>(power)] += coef;
}

}  // namespace

std::vector<double> expand_gram(const Eigen::MatrixXd& q) {
  const int d = static_cast<int>(q.rows());
  std::vector<double> p(1, 0.0);
  for (int g = 0; g < d; ++g)
    for (int h = 0; h < d; ++h) add_monomial(p, g + h, q(g, h));
  return p;
}

std::vector<double> expand_interval_certificate(const Eigen::MatrixXd& q,
                                                const Eigen::MatrixXd& r,
                                                double lo, double hi) {
  const int d = static_cast<int>(q.rows());
  std::vector<double> p(1, 0.0);
  for (int g = 0; g < d; ++g)
    for (int h = 0; h < d; ++h) {
      // (x - lo) * q_gh x^(g+h)
      add_monomial(p, g + h + 1, q(g, h));
      add_monomial(p, g + h, -lo * q(g, h));
      // (hi - x) * r_gh x^(g+h)
      add_monomial(p, g + h, hi * r(g, h));
      add_monomial(p, g + h + 1, -r(g, h));
    }
  return p;
}

namespace {

constexpr double kPivotEps = 1e-9;

// One simplex phase on an explicit tableau.  basis[i] is the variable of row
// i; cost is the full cost vector over tableau columns.  Returns false on
// unboundedness.
bool phase(Eigen::MatrixXd& t, Eigen::VectorXd& rhs, std::vector<int>& basis,
           const Eigen::VectorXd& cost) {
  const int m = static_cast<int>(t.rows());
  const int n = static_cast<int>(t.cols());
  while (true) {
    // reduced costs from scratch: r_j = c_j - c_B' T_j (T columns of basics
    // are unit vectors, so this is exact bookkeeping, just slower)
    Eigen::VectorXd cb(m);
    for (int i = 0; i < m; ++i) cb(i) = cost(basis[static_cast<std::size_t>(i)]);
    int enter = -1;
    for (int j = 0; j < n; ++j) {
      const double red = cost(j) - cb.dot(t.col(j));
      if (red < -kPivotEps) {
        enter = j;  // Bland: smallest eligible index
        break;
      }
    }
    if (enter < 0) return true;
    int leave = -1;
    double best = 0.0;
    for (int i = 0; i < m; ++i) {
      if (t(i, enter) <= kPivotEps) continue;
      const double ratio = rhs(i) / t(i, enter);
      if (leave < 0 || ratio < best - 1e-12 ||
          (ratio < best + 1e-12 && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)]))
        leave = i, best = ratio;
    }
    if (leave < 0) return false;
    const double piv = t(leave, enter);
    t.row(leave) /= piv;
    rhs(leave) /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      const double f = t(i, enter);
      if (f == 0.0) continue;
      t.row(i) -= f * t.row(leave);
      rhs(i) -= f * rhs(leave);
    }
    basis[static_cast<std::size_t>(leave)] = enter;
  }
}

}  // namespace

LpResult simplex(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                 const Eigen::VectorXd& c) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  Eigen::MatrixXd t(m, n + m);
  Eigen::VectorXd rhs = b;
  t.leftCols(n) = a;
  t.rightCols(m) = Eigen::MatrixXd::Identity(m, m);
  for (int i = 0; i < m; ++i)
    if (rhs(i) < 0.0) {
      t.row(i) = -t.row(i);
      rhs(i) = -rhs(i);
    }
  std::vector<int> basis(static_cast<std::size_t>(m));
  std::iota(basis.begin(), basis.end(), n);

  LpResult res;
  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n + m);
  phase1.tail(m).setOnes();
  phase(t, rhs, basis, phase1);  // never unbounded: cost bounded below by 0
  double artificial = 0.0;
  for (int i = 0; i < m; ++i)
    if (basis[static_cast<std::size_t>(i)] >= n) artificial += rhs(i);
  if (artificial > 1e-7) {
    res.status = LpStatus::Infeasible;
    return res;
  }
  // Drive leftover zero-level artificials out on any original column; rows
  // that offer none are redundant and can keep their artificial at zero.
  for (int i = 0; i < m; ++i) {
    if (basis[static_cast<std::size_t>(i)] < n) continue;
    for (int j = 0; j < n; ++j)
      if (std::abs(t(i, j)) > kPivotEps) {
        const double piv = t(i, j);
        t.row(i) /= piv;
        rhs(i) /= piv;
        for (int i2 = 0; i2 < m; ++i2) {
          if (i2 == i) continue;
          const double f = t(i2, j);
          if (f == 0.0) continue;
          t.row(i2) -= f * t.row(i);
          rhs(i2) -= f * rhs(i);
        }
        basis[static_cast<std::size_t>(i)] = j;
        break;
      }
  }

  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(n + m);
  phase2.head(n) = c;
  // Artificial columns must never re-enter.
  for (int j = n; j < n + m; ++j) phase2(j) = 1e30;
  if (!phase(t, rhs, basis, phase2)) {
    res.status = LpStatus::Unbounded;
    return res;
  }
  res.status = LpStatus::Optimal;
  res.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i)
    if (basis[static_cast<std::size_t>(i)] < n) res.x(basis[static_cast<std::size_t>(i)]) = rhs(i);
  res.objective = c.dot(res.x);
  return res;
}

std::vector<std::vector<int>> all_weak_orders(int m) {
  // Weak orders = ordered set partitions, read as "class of element i".
  // Enumerate all m^m label vectors and keep those whose used labels form a
  // gapless prefix 0..max; m <= 6 keeps this at 6^6 = 46656 candidates.
  std::vector<std::vector<int>> out;
  std::vector<int> v(static_cast<std::size_t>(m), 0);
  while (true) {
    int mx = -1;
    bool ok = true;
    for (int i = 0; i < m; ++i) mx = std::max(mx, v[static_cast<std::size_t>(i)]);
    std::vector<bool> used(static_cast<std::size_t>(mx) + 1, false);
    for (int i = 0; i < m; ++i) used[static_cast<std::size_t>(v[static_cast<std::size_t>(i)])] = true;
    for (bool u : used) ok = ok && u;
    if (ok) out.push_back(v);
    int pos = m - 1;
    while (pos >= 0 && v[static_cast<std::size_t>(pos)] == m - 1) {
      v[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++v[static_cast<std::size_t>(pos)];
  }
  return out;
}

double kendall_reference(const std::vector<int>& u, const std::vector<int>& v) {
  const int m = static_cast<int>(u.size());
  long long conc = 0, disc = 0, tieU = 0, tieV = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const int du = u[static_cast<std::size_t>(i)] - u[static_cast<std::size_t>(j)];
      const int dv = v[static_cast<std::size_t>(i)] - v[static_cast<std::size_t>(j)];
      if (du == 0 && dv == 0) continue;
      if (du == 0)
        ++tieU;
      else if (dv == 0)
        ++tieV;
      else if ((du > 0) == (dv > 0))
        ++conc;
      else
        ++disc;
    }
  const double n1 = static_cast<double>(conc + disc + tieU);
  const double n2 = static_cast<double>(conc + disc + tieV);
  if (n1 == 0.0 || n2 == 0.0) return 0.0;
  return static_cast<double>(conc - disc) / std::sqrt(n1 * n2);
}

double spearman_reference(const std::vector<int>& u, const std::vector<int>& v) {
  const int m = static_cast<int>(u.size());
  // average-position rank of element i: elements in better classes come
  // first, ties share the mean of the positions they occupy
  auto ranks = [m](const std::vector<int>& w) {
    std::vector<double> r(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      int before = 0, tied = 0;
      for (int j = 0; j < m; ++j) {
        before += w[static_cast<std::size_t>(j)] < w[static_cast<std::size_t>(i)];
        tied += w[static_cast<std::size_t>(j)] == w[static_cast<std::size_t>(i)];
      }
      r[static_cast<std::size_t>(i)] = static_cast<double>(before) + (static_cast<double>(tied) + 1.0) / 2.0;
    }
    return r;
  };
  const std::vector<double> ra = ranks(u), rb = ranks(v);
  const double mean = (static_cast<double>(m) + 1.0) / 2.0;
  double num = 0.0, da = 0.0, db = 0.0;
  for (int i = 0; i < m; ++i) {
    const double xa = ra[static_cast<std::size_t>(i)] - mean;
    const double xb = rb[static_cast<std::size_t>(i)] - mean;
    num += xa * xb;
    da += xa * xa;
    db += xb * xb;
  }
  if (da == 0.0 || db == 0.0) return 0.0;
  return num / std::sqrt(da * db);
}

}  // namespace oracles
