#pragma once

#include <cstddef>
#include <vector>

namespace valfit {

/// Dense univariate polynomial p(x) = c[0] + c[1] x + ... + c[n] x^n.
///
/// Coefficients are stored lowest degree first.  The class is a small value
/// type; arithmetic helpers are provided for building derivative products
/// and antiderivatives, evaluation uses Horner's scheme.
class Polynomial {
 public:
  Polynomial() : coeffs_(1, 0.0) {}
  explicit Polynomial(std::vector<double> coeffs);

  static Polynomial constant(double c) { return Polynomial({c}); }

  double operator()(double x) const;

  /// Formal derivative (degree drops by one; derivative of a constant is 0).
  Polynomial derivative() const;

  /// Antiderivative with integration constant c0.
  Polynomial antiderivative(double c0 = 0.0) const;

  /// Highest index i with |c[i]| > tol; 0 for (near-)constant polynomials.
  int degree(double tol = 1e-12) const;

  const std::vector<double>& coeffs() const { return coeffs_; }

  /// Coefficient of x^i, 0.0 when i exceeds the stored degree.
  double coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : 0.0; }

  /// Drop trailing coefficients with |c| <= tol (always keeps c[0]).
  Polynomial trimmed(double tol = 0.0) const;

  /// Truncate to degree <= d (drops higher coefficients unconditionally).
  Polynomial truncated(int d) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double s) const;

  /// p(a + b*x): affine change of variable, expanded via binomials.
  Polynomial compose_affine(double a, double b) const;

  bool operator==(const Polynomial& o) const { return coeffs_ == o.coeffs_; }

 private:
  std::vector<double> coeffs_;
};

}  // namespace valfit
