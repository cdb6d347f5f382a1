#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "valfit/errors.hpp"
#include "valfit/polynomial.hpp"
#include "valfit/rng.hpp"
#include "valfit/sos.hpp"

using namespace valfit;

namespace {

Eigen::MatrixXd random_psd(Rng& rng, int dim) {
  Eigen::MatrixXd h(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) h(i, j) = 2.0 * rng.uniform01() - 1.0;
  return h * h.transpose();
}

}  // namespace

TEST_SUITE("polysos") {

TEST_CASE("evaluation is Horner on canonical coefficients") {
  CHECK(Polynomial({1, 2, 3})(2.0) == 17.0);
  CHECK(Polynomial({0})(123.456) == 0.0);
  CHECK(Polynomial({0, 0, 0, 1})(10.0) == 1000.0);
  CHECK(Polynomial::constant(4.25)(1e9) == 4.25);  // degree 0 is exact
}

TEST_CASE("derivative shifts and scales coefficients") {
  const Polynomial p({0.5, -1.25, 2.0, 3.0});
  const Polynomial d = p.derivative();
  CHECK(d.coeffs() == std::vector<double>{-1.25, 4.0, 9.0});
  CHECK(Polynomial::constant(7.0).derivative().coeffs() == std::vector<double>{0.0});
  CHECK(Polynomial({0, 0, 1}).derivative().coeffs() == std::vector<double>{0.0, 2.0});
}

TEST_CASE("derivative matches central differences at random points") {
  Rng rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> cs(11);
    for (auto& c : cs) c = 2.0 * rng.uniform01() - 1.0;
    const Polynomial p(cs);
    const Polynomial d = p.derivative();
    for (int i = 0; i < 10; ++i) {
      const double x = 2.0 * rng.uniform01() - 1.0;
      const double h = 1e-5;
      const double fd = (p(x + h) - p(x - h)) / (2.0 * h);
      const double exact = d(x);
      CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
    }
  }
}

TEST_CASE("gram expansion on printed cases") {
  Eigen::MatrixXd one(1, 1);
  one << 1.0;
  CHECK(sos_poly_from_gram(one).coeffs() == std::vector<double>{1.0});

  Eigen::MatrixXd q(2, 2);
  q << 0.75, -0.25, -0.25, 2.0;  // [[a,b],[b,c]] -> (a, 2b, c)
  CHECK(sos_poly_from_gram(q).coeffs() == std::vector<double>{0.75, -0.5, 2.0});

  CHECK(sos_poly_from_gram(Eigen::MatrixXd::Identity(2, 2)).coeffs() ==
        std::vector<double>{1.0, 0.0, 1.0});
}

TEST_CASE("gram expansion equals entry-by-entry oracle") {
  Rng rng(7);
  for (int dim = 1; dim <= 4; ++dim)
    for (int trial = 0; trial < 5; ++trial) {
      const Eigen::MatrixXd q = random_psd(rng, dim);
      const Polynomial p = sos_poly_from_gram(q);
      const std::vector<double> ref = oracles::expand_gram(q);
      REQUIRE(p.coeffs().size() == ref.size());
      for (std::size_t i = 0; i < ref.size(); ++i)
        CHECK(p.coeff(i) == doctest::Approx(ref[i]).epsilon(1e-12));
    }
}

TEST_CASE("gram polynomials of PSD matrices are globally nonnegative and even") {
  Rng rng(11);
  for (int trial = 0; trial < 8; ++trial) {
    const int dim = 1 + static_cast<int>(rng.uniform01() * 3.0);
    const Polynomial p = sos_poly_from_gram(random_psd(rng, dim));
    CHECK(p.degree() % 2 == 0);
    const double lo = -10.0 * rng.uniform01();
    const double hi = 10.0 * rng.uniform01() + 0.1;
    CHECK(check_nonneg_on_interval(p, lo, hi).certified);
  }
}

TEST_CASE("interval expansion on printed cases") {
  Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 1);
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(1, 1);
  // (x)(1) + (1-x)(1) = 1
  const Polynomial flat = sos_poly_from_interval({one, one, 0.0, 1.0});
  CHECK(flat.coeff(0) == 1.0);
  CHECK(flat.coeff(1) == 0.0);
  // (x)(1) + (1-x)(0) = x
  const Polynomial ramp = sos_poly_from_interval({one, zero, 0.0, 1.0});
  CHECK(ramp.coeff(0) == 0.0);
  CHECK(ramp.coeff(1) == 1.0);
}

TEST_CASE("interval expansion equals symbolic oracle") {
  Rng rng(13);
  for (int dim = 1; dim <= 4; ++dim)
    for (int trial = 0; trial < 5; ++trial) {
      const Eigen::MatrixXd q = random_psd(rng, dim);
      const Eigen::MatrixXd r = random_psd(rng, dim);
      const double lo = 10.0 * rng.uniform01() - 5.0;
      const double hi = lo + 0.5 + 10.0 * rng.uniform01();
      const Polynomial p = sos_poly_from_interval({q, r, lo, hi});
      const std::vector<double> ref = oracles::expand_interval_certificate(q, r, lo, hi);
      REQUIRE(p.coeffs().size() == ref.size());
      for (std::size_t i = 0; i < ref.size(); ++i)
        CHECK(p.coeff(i) == doctest::Approx(ref[i]).epsilon(1e-12));
      CHECK(check_nonneg_on_interval(p, lo, hi).certified);
    }
}

TEST_CASE("cholesky on printed cases") {
  const Eigen::MatrixXd i3 = Eigen::MatrixXd::Identity(3, 3);
  CHECK((cholesky(i3) - i3).norm() == 0.0);

  Eigen::MatrixXd m(2, 2);
  m << 4, 2, 2, 3;
  const Eigen::MatrixXd l = cholesky(m);
  CHECK((l * l.transpose() - m).norm() <= 1e-10);
  CHECK(l(0, 0) == doctest::Approx(2.0));
  CHECK(l(1, 0) == doctest::Approx(1.0));
  CHECK(l(1, 1) == doctest::Approx(std::sqrt(2.0)));
  CHECK(l(0, 1) == 0.0);

  Eigen::MatrixXd bad(2, 2);
  bad << 1, 2, 2, 1;  // eigenvalues 3 and -1
  CHECK_THROWS_AS(cholesky(bad), NotPsdError);
}

TEST_CASE("cholesky completes semidefinite pivots") {
  Eigen::MatrixXd rank1(2, 2);
  rank1 << 1, 1, 1, 1;
  const Eigen::MatrixXd l = cholesky(rank1);
  CHECK((l * l.transpose() - rank1).norm() <= 1e-10);
}

TEST_CASE("cholesky reconstructs random factorizations") {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const int dim = 2 + static_cast<int>(rng.uniform01() * 4.0);
    Eigen::MatrixXd l0 = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < i; ++j) l0(i, j) = 2.0 * rng.uniform01() - 1.0;
      l0(i, i) = 0.1 + rng.uniform01();
    }
    const Eigen::MatrixXd m = l0 * l0.transpose();
    const Eigen::MatrixXd l = cholesky(m);
    CHECK((l * l.transpose() - m).norm() <= 1e-10 * std::max(1.0, m.norm()));
  }
}

TEST_CASE("nonnegativity check finds interior minima") {
  CHECK(check_nonneg_on_interval(Polynomial({0, 1}), 0.0, 1.0).certified);
  CHECK(check_nonneg_on_interval(Polynomial({0.25, -1.0, 1.0}), 0.0, 1.0).certified);  // (x-1/2)^2

  // x^2 - x/2 dips to -1/16 at x = 1/4
  const NonnegCheck bad = check_nonneg_on_interval(Polynomial({0, -0.5, 1.0}), 0.0, 1.0);
  CHECK_FALSE(bad.certified);
  CHECK(bad.x == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(bad.value == doctest::Approx(-0.0625).epsilon(1e-9));
}

TEST_CASE("stationary points come from companion roots") {
  // p' = 3x^2 - 1 has roots +-1/sqrt(3)
  const auto roots = real_roots_in_interval(Polynomial({-1.0, 0.0, 3.0}), -1.0, 1.0);
  REQUIRE(roots.size() == 2);
  CHECK(std::abs(roots.front() + 1.0 / std::sqrt(3.0)) <= 1e-9);
  CHECK(std::abs(roots.back() - 1.0 / std::sqrt(3.0)) <= 1e-9);
}

TEST_CASE("symmetry check tolerates round-off only") {
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 2.0, 2.0 + 1e-15, 3.0;
  CHECK(is_symmetric(m));
  m(1, 0) = 2.1;
  CHECK_FALSE(is_symmetric(m));
}

}  // TEST_SUITE
