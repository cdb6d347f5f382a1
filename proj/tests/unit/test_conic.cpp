#include <cmath>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "valfit/conic.hpp"
#include "valfit/rng.hpp"
#include "valfit/sos.hpp"

using namespace valfit;

namespace {

// min c'x, Ax = b, x >= 0 as a conic problem with nonneg scalars only.
conic::Problem lp_problem(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                          const Eigen::VectorXd& c) {
  conic::Problem p;
  std::vector<conic::VarRef> xs;
  for (int j = 0; j < a.cols(); ++j) xs.push_back(p.add_nonneg_var());
  for (int i = 0; i < a.rows(); ++i) {
    conic::LinExpr e;
    for (int j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0.0) e.add(xs[static_cast<std::size_t>(j)], a(i, j));
    p.add_eq(std::move(e), b(i));
  }
  conic::LinExpr obj;
  for (int j = 0; j < a.cols(); ++j) obj.add(xs[static_cast<std::size_t>(j)], c(j));
  p.set_objective(std::move(obj));
  return p;
}

// Feasible by construction (b = A x0 with x0 >= 0) and bounded below
// (costs >= 0 on nonnegative variables).
void random_lp(Rng& rng, Eigen::MatrixXd& a, Eigen::VectorXd& b, Eigen::VectorXd& c) {
  const int m = 2 + static_cast<int>(rng.uniform01() * 4.0);
  const int n = m + 1 + static_cast<int>(rng.uniform01() * 5.0);
  a.resize(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = 2.0 * rng.uniform01() - 1.0;
  Eigen::VectorXd x0(n);
  for (int j = 0; j < n; ++j) x0(j) = 2.0 * rng.uniform01();
  b = a * x0;
  c.resize(n);
  for (int j = 0; j < n; ++j) c(j) = rng.uniform01();
}

}  // namespace

TEST_SUITE("conic") {

TEST_CASE("free singleton equality") {
  conic::Problem p;
  const auto x = p.add_free_var();
  conic::LinExpr e;
  e.add(x, 1.0);
  p.add_eq(std::move(e), 3.0);
  conic::LinExpr o;
  o.add(x, 1.0);
  p.set_objective(std::move(o));
  const auto rep = conic::solve(p);
  REQUIRE(rep.status == conic::SolveStatus::Optimal);
  CHECK(rep.value(x) == doctest::Approx(3.0).epsilon(1e-7));
}

TEST_CASE("free variables can sit at negative values") {
  conic::Problem p;
  const auto x = p.add_free_var();
  conic::LinExpr e;
  e.add(x, 1.0);
  p.add_eq(std::move(e), -1.0);
  p.set_objective(conic::LinExpr{});
  CHECK(conic::solve(p).status == conic::SolveStatus::Optimal);
}

TEST_CASE("nonnegative variable pinned below zero is infeasible") {
  conic::Problem p;
  const auto x = p.add_nonneg_var();
  conic::LinExpr e;
  e.add(x, 1.0);
  p.add_eq(std::move(e), -1.0);
  p.set_objective(conic::LinExpr{});
  CHECK(conic::solve(p).status == conic::SolveStatus::Infeasible);
}

TEST_CASE("shifted epigraph reaches objective 2") {
  // min t : t >= 0, t = x - 1, x = 3
  conic::Problem p;
  const auto t = p.add_nonneg_var();
  const auto x = p.add_free_var();
  conic::LinExpr e1;
  e1.add(t, 1.0);
  e1.add(x, -1.0);
  p.add_eq(std::move(e1), -1.0);
  conic::LinExpr e2;
  e2.add(x, 1.0);
  p.add_eq(std::move(e2), 3.0);
  conic::LinExpr o;
  o.add(t, 1.0);
  p.set_objective(std::move(o));
  const auto rep = conic::solve(p);
  REQUIRE(rep.status == conic::SolveStatus::Optimal);
  CHECK(rep.objective == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("duplicate rows are dropped by presolve") {
  conic::Problem p;
  const auto x = p.add_free_var();
  for (int rep = 0; rep < 2; ++rep) {
    conic::LinExpr e;
    e.add(x, 1.0);
    p.add_eq(std::move(e), 3.0);
  }
  conic::LinExpr o;
  o.add(x, 1.0);
  p.set_objective(std::move(o));
  const auto rep = conic::solve(p);
  REQUIRE(rep.status == conic::SolveStatus::Optimal);
  CHECK(rep.droppedRows.size() == 1);
  CHECK(rep.value(x) == doctest::Approx(3.0).epsilon(1e-7));
}

TEST_CASE("2x2 completion: off-diagonal one forces trace 2") {
  conic::Problem p;
  const auto blk = p.add_psd_block(2);
  conic::LinExpr fix00;
  fix00.add(conic::EntryRef{blk.index, 0, 0}, 1.0);
  p.add_eq(std::move(fix00), 1.0);
  conic::LinExpr fix01;
  fix01.add(conic::EntryRef{blk.index, 0, 1}, 1.0);
  p.add_eq(std::move(fix01), 1.0);
  conic::LinExpr tr;
  tr.add(conic::EntryRef{blk.index, 0, 0}, 1.0);
  tr.add(conic::EntryRef{blk.index, 1, 1}, 1.0);
  p.set_objective(std::move(tr));
  const auto rep = conic::solve(p);
  REQUIRE(rep.status == conic::SolveStatus::Optimal);
  CHECK(rep.objective == doctest::Approx(2.0).epsilon(1e-6));
  const Eigen::MatrixXd x = rep.block(blk);
  CHECK(x(1, 1) == doctest::Approx(1.0).epsilon(1e-5));
  // returned block is PSD to tolerance
  Eigen::MatrixXd l;
  CHECK(try_cholesky(x, l, 1e-12, 1e-8));
}

TEST_CASE("2x2 correlation entry is feasible iff |c| <= 1") {
  auto feasibility = [](double cval) {
    conic::Problem p;
    const auto blk = p.add_psd_block(2);
    conic::LinExpr d0, d1, off;
    d0.add(conic::EntryRef{blk.index, 0, 0}, 1.0);
    d1.add(conic::EntryRef{blk.index, 1, 1}, 1.0);
    off.add(conic::EntryRef{blk.index, 0, 1}, 1.0);
    off.add(conic::EntryRef{blk.index, 1, 0}, 1.0);
    p.add_eq(std::move(d0), 1.0);
    p.add_eq(std::move(d1), 1.0);
    p.add_eq(std::move(off), 2.0 * cval);
    p.set_objective(conic::LinExpr{});
    return conic::solve(p).status;
  };
  CHECK(feasibility(0.8) == conic::SolveStatus::Optimal);
  CHECK(feasibility(-0.95) == conic::SolveStatus::Optimal);
  CHECK(feasibility(1.2) == conic::SolveStatus::Infeasible);
  CHECK(feasibility(-1.2) == conic::SolveStatus::Infeasible);
}

TEST_CASE("LP objectives match the simplex oracle") {
  Rng rng(2024);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::MatrixXd a;
    Eigen::VectorXd b, c;
    random_lp(rng, a, b, c);
    const auto ref = oracles::simplex(a, b, c);
    REQUIRE(ref.status == oracles::LpStatus::Optimal);
    const auto rep = conic::solve(lp_problem(a, b, c));
    REQUIRE(rep.status == conic::SolveStatus::Optimal);
    CHECK(rep.objective == doctest::Approx(ref.objective).epsilon(1e-6));
  }
}

TEST_CASE("unbounded LP is flagged") {
  // min -x : x - y = 0 with x, y >= 0 slides to infinity
  conic::Problem p;
  const auto x = p.add_nonneg_var();
  const auto y = p.add_nonneg_var();
  conic::LinExpr e;
  e.add(x, 1.0);
  e.add(y, -1.0);
  p.add_eq(std::move(e), 0.0);
  conic::LinExpr o;
  o.add(x, -1.0);
  p.set_objective(std::move(o));
  CHECK(conic::solve(p).status == conic::SolveStatus::Unbounded);
}

TEST_CASE("iteration trace respects weak duality up to residual slop") {
  Rng rng(5);
  Eigen::MatrixXd a;
  Eigen::VectorXd b, c;
  random_lp(rng, a, b, c);
  const auto rep = conic::solve(lp_problem(a, b, c));
  REQUIRE(rep.status == conic::SolveStatus::Optimal);
  CHECK_FALSE(rep.trace.empty());
  for (const auto& it : rep.trace) {
    // on the central path the duality gap stays nonnegative once the iterate
    // is (nearly) feasible; infeasible iterates get slack proportional to
    // their residuals
    const double slop = 1e-6 + 10.0 * (it.presAbs + it.dresAbs) * (1.0 + it.xNorm + it.yNorm);
    CHECK(it.dualObj <= it.primalObj + slop);
  }
}

TEST_CASE("solves are deterministic") {
  Rng rng(99);
  Eigen::MatrixXd a;
  Eigen::VectorXd b, c;
  random_lp(rng, a, b, c);
  const auto r1 = conic::solve(lp_problem(a, b, c));
  const auto r2 = conic::solve(lp_problem(a, b, c));
  CHECK(r1.iterations == r2.iterations);
  CHECK(r1.objective == r2.objective);  // bitwise
  CHECK(r1.gap == r2.gap);
}

TEST_CASE("optimal reports meet the advertised tolerances") {
  conic::Settings st;
  st.tol = 1e-8;
  Rng rng(3);
  Eigen::MatrixXd a;
  Eigen::VectorXd b, c;
  random_lp(rng, a, b, c);
  const auto rep = conic::solve(lp_problem(a, b, c), st);
  REQUIRE(rep.status == conic::SolveStatus::Optimal);
  CHECK(rep.primalResidual <= st.tol);
  CHECK(rep.dualResidual <= st.tol);
  CHECK(rep.gap <= st.tol);
}

TEST_CASE("triplet dump lists the variable partition") {
  conic::Problem p;
  const auto x = p.add_free_var();
  const auto blk = p.add_psd_block(2);
  conic::LinExpr e;
  e.add(x, 1.0);
  e.add(conic::EntryRef{blk.index, 0, 1}, 2.0);
  p.add_eq(std::move(e), 1.0);
  p.set_objective(conic::LinExpr{});
  std::ostringstream os;
  p.dump_triplets(os);
  const std::string dump = os.str();
  CHECK(dump.find("free") != std::string::npos);
  CHECK(dump.find("psd") != std::string::npos);
}

}  // TEST_SUITE
