#include "valfit/polynomial.hpp"

#include <cmath>
#include <cstdlib>

namespace valfit {

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.assign(1, 0.0);
}

double Polynomial::operator()(double x) const {
  double v = 0.0;
  for (std::size_t i = coeffs_.size(); i-- > 0;) v = v * x + coeffs_[i];
  return v;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial();
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<double>(i);
  return Polynomial(std::move(d));
}

Polynomial Polynomial::antiderivative(double c0) const {
  std::vector<double> a(coeffs_.size() + 1);
  a[0] = c0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) a[i + 1] = coeffs_[i] / static_cast<double>(i + 1);
  return Polynomial(std::move(a));
}

int Polynomial::degree(double tol) const {
  for (std::size_t i = coeffs_.size(); i-- > 0;)
    if (std::abs(coeffs_[i]) > tol) return static_cast<int>(i);
  return 0;
}

Polynomial Polynomial::trimmed(double tol) const {
  std::size_t n = coeffs_.size();
  while (n > 1 && std::abs(coeffs_[n - 1]) <= tol) --n;
  return Polynomial(std::vector<double>(coeffs_.begin(), coeffs_.begin() + static_cast<long>(n)));
}

Polynomial Polynomial::truncated(int d) const {
  if (d < 0) return Polynomial();
  std::size_t n = std::min(coeffs_.size(), static_cast<std::size_t>(d) + 1);
  return Polynomial(std::vector<double>(coeffs_.begin(), coeffs_.begin() + static_cast<long>(n)));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<double> r(std::max(coeffs_.size(), o.coeffs_.size()), 0.0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) r[i] += coeffs_[i];
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) r[i] += o.coeffs_[i];
  return Polynomial(std::move(r));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * -1.0; }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  std::vector<double> r(coeffs_.size() + o.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) r[i + j] += coeffs_[i] * o.coeffs_[j];
  return Polynomial(std::move(r));
}

Polynomial Polynomial::operator*(double s) const {
  std::vector<double> r(coeffs_);
  for (double& c : r) c *= s;
  return Polynomial(std::move(r));
}

Polynomial Polynomial::compose_affine(double a, double b) const {
  // Evaluate p at (a + b*x) by Horner over the polynomial ring.
  Polynomial lin({a, b});
  Polynomial acc;
  for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * lin + Polynomial::constant(coeffs_[i]);
  return acc;
}

}  // namespace valfit
