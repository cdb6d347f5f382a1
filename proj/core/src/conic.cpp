#include "valfit/conic.hpp"

#include <cmath>
#include <map>
#include <ostream>

#include "valfit/errors.hpp"

namespace valfit::conic {

LinExpr& LinExpr::add(VarRef v, double coef) {
  if (v.index < 0) throw BuildError("expression references an unset variable");
  if (coef != 0.0) terms_.push_back({v, coef});
  return *this;
}

LinExpr& LinExpr::add(EntryRef e, double coef) {
  if (e.block < 0) throw BuildError("expression references an unset block");
  if (coef != 0.0) entryTerms_.push_back({e, coef});
  return *this;
}

VarRef Problem::add_free_var() { return {VarKind::Free, numFree_++}; }

VarRef Problem::add_nonneg_var() { return {VarKind::Nonneg, numNonneg_++}; }

BlockRef Problem::add_psd_block(int dim) {
  if (dim < 1) throw BuildError("psd block dimension must be positive");
  psdDims_.push_back(dim);
  return {static_cast<int>(psdDims_.size()) - 1, dim};
}

namespace {

void check_expr(const LinExpr& e, int numFree, int numNonneg, const std::vector<int>& dims) {
  for (const auto& t : e.terms()) {
    const int limit = t.var.kind == VarKind::Free ? numFree : numNonneg;
    if (t.var.index < 0 || t.var.index >= limit) throw BuildError("variable index out of range");
  }
  for (const auto& t : e.entry_terms()) {
    if (t.entry.block < 0 || t.entry.block >= static_cast<int>(dims.size()))
      throw BuildError("psd block index out of range");
    const int d = dims[static_cast<std::size_t>(t.entry.block)];
    if (t.entry.row < 0 || t.entry.row >= d || t.entry.col < 0 || t.entry.col >= d)
      throw BuildError("psd entry out of range");
  }
}

}  // namespace

int Problem::add_eq(LinExpr expr, double rhs, std::string label) {
  check_expr(expr, numFree_, numNonneg_, psdDims_);
  rows_.push_back({std::move(expr), rhs, std::move(label)});
  return static_cast<int>(rows_.size()) - 1;
}

void Problem::set_objective(LinExpr expr) {
  check_expr(expr, numFree_, numNonneg_, psdDims_);
  objective_ = std::move(expr);
}

double Problem::coefficient(int row, VarRef v) const {
  double c = 0.0;
  for (const auto& t : this->row(row).expr.terms())
    if (t.var.kind == v.kind && t.var.index == v.index) c += t.coef;
  return c;
}

double Problem::coefficient(int row, EntryRef e) const {
  double c = 0.0;
  for (const auto& t : this->row(row).expr.entry_terms())
    if (t.entry.block == e.block && t.entry.row == e.row && t.entry.col == e.col) c += t.coef;
  return c;
}

int Problem::find_row(const std::string& label) const {
  for (std::size_t i = 0; i < rows_.size(); ++i)
    if (rows_[i].label == label) return static_cast<int>(i);
  return -1;
}

int Problem::scalar_size() const {
  int n = numFree_ + numNonneg_;
  for (int d : psdDims_) n += d * (d + 1) / 2;
  return n;
}

int Problem::scalar_index(VarRef v) const {
  if (v.kind == VarKind::Free) return v.index;
  return numFree_ + v.index;
}

int Problem::scalar_index(int block, int g, int h) const {
  int off = numFree_ + numNonneg_;
  for (int b = 0; b < block; ++b) off += psdDims_[static_cast<std::size_t>(b)] * (psdDims_[static_cast<std::size_t>(b)] + 1) / 2;
  if (g > h) std::swap(g, h);
  // column-major upper triangle: (g, h) -> h(h+1)/2 + g
  return off + h * (h + 1) / 2 + g;
}

Problem::Scalarized Problem::scalarize() const {
  Scalarized s;
  s.numFree = numFree_;
  s.numNonneg = numNonneg_;
  s.psdDims = psdDims_;
  const int n = scalar_size();
  const int m = num_rows();
  s.a.setZero(m, n);
  s.b.setZero(m);
  s.c.setZero(n);
  const double invSqrt2 = 1.0 / std::sqrt(2.0);
  auto scatter = [&](const LinExpr& e, auto&& put) {
    for (const auto& t : e.terms()) put(scalar_index(t.var), t.coef);
    for (const auto& t : e.entry_terms()) {
      const double w = t.entry.row == t.entry.col ? 1.0 : invSqrt2;
      put(scalar_index(t.entry.block, t.entry.row, t.entry.col), t.coef * w);
    }
  };
  for (int i = 0; i < m; ++i) {
    scatter(rows_[static_cast<std::size_t>(i)].expr, [&](int j, double v) { s.a(i, j) += v; });
    s.b(i) = rows_[static_cast<std::size_t>(i)].rhs;
  }
  scatter(objective_, [&](int j, double v) { s.c(j) += v; });
  return s;
}

void Problem::dump_triplets(std::ostream& os) const {
  os << "# conic equality-form problem\n";
  os << "free " << numFree_ << "\n";
  os << "nonneg " << numNonneg_ << "\n";
  os << "psd";
  for (int d : psdDims_) os << " " << d;
  os << "\n";
  // Aggregate symbolic terms per scalar unknown; PSD coefficients are
  // reported as the total weight on the symmetric entry X(g,h) = X(h,g).
  auto collect = [&](const LinExpr& e) {
    std::map<int, double> out;
    for (const auto& t : e.terms()) out[scalar_index(t.var)] += t.coef;
    for (const auto& t : e.entry_terms()) out[scalar_index(t.entry.block, t.entry.row, t.entry.col)] += t.coef;
    return out;
  };
  os << "objective\n";
  for (const auto& [j, v] : collect(objective_)) os << j << " " << v << "\n";
  os << "constraints " << rows_.size() << "\n";
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (const auto& [j, v] : collect(rows_[i].expr)) os << i << " " << j << " " << v << "\n";
  os << "rhs\n";
  for (std::size_t i = 0; i < rows_.size(); ++i)
    if (rows_[i].rhs != 0.0) os << i << " " << rows_[i].rhs << "\n";
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::MaxIter: return "maxIter";
    case SolveStatus::NumericalFailure: return "numericalFailure";
  }
  return "unknown";
}

double SolveReport::value(VarRef v) const {
  if (v.kind == VarKind::Free) return freeValues.at(static_cast<std::size_t>(v.index));
  return nonnegValues.at(static_cast<std::size_t>(v.index));
}

const Eigen::MatrixXd& SolveReport::block(BlockRef b) const {
  return psdValues.at(static_cast<std::size_t>(b.index));
}

}  // namespace valfit::conic
