#include <cmath>

#include "doctest.h"
#include "valfit/errors.hpp"
#include "valfit/learning_set.hpp"
#include "valfit/model.hpp"
#include "valfit/ranking.hpp"

using namespace valfit;

namespace {

// Two equal-weight linear marginals on [0,100]: u_j(x) = x/200.
AdditiveModel equal_weight_model(std::vector<double> thresholds = {}) {
  std::vector<CriterionScale> crit{{"g1", 0.0, 100.0}, {"g2", 0.0, 100.0}};
  std::vector<Marginal> ms;
  ms.emplace_back(MarginalForm::PiecewiseLinear, std::vector<double>{0.0, 100.0},
                  std::vector<Polynomial>{Polynomial({0.0, 1.0 / 200.0})});
  ms.emplace_back(MarginalForm::PiecewiseLinear, std::vector<double>{0.0, 100.0},
                  std::vector<Polynomial>{Polynomial({0.0, 1.0 / 200.0})});
  return AdditiveModel(std::move(crit), std::move(ms), std::move(thresholds));
}

const std::vector<Alternative> kTable1{{"a", {100, 0}}, {"b", {0, 100}}, {"c", {25, 75}}, {"d", {75, 25}}};

// Single identity criterion on [0,1]: U(a) = a_1.
AdditiveModel score_line(std::vector<double> thresholds = {}) {
  std::vector<Marginal> ms;
  ms.emplace_back(MarginalForm::PiecewiseLinear, std::vector<double>{0.0, 1.0},
                  std::vector<Polynomial>{Polynomial({0.0, 1.0})});
  return AdditiveModel({{"u", 0.0, 1.0}}, std::move(ms), std::move(thresholds));
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("marginal evaluation picks the piece containing x") {
  const Marginal lin(MarginalForm::PiecewiseLinear, {0.0, 100.0}, {Polynomial({0.0, 1.0 / 200.0})});
  CHECK(lin(25.0) == doctest::Approx(0.125));
  CHECK(lin(0.0) == 0.0);
  CHECK_THROWS_AS(lin(100.5), DomainError);
  CHECK_THROWS_AS(lin(-0.5), DomainError);

  const Marginal cubic(MarginalForm::Polynomial, {0.0, 1.0}, {Polynomial({0.0, 1.0, 0.0, 0.0})});
  CHECK(cubic(0.7) == doctest::Approx(0.7));
}

TEST_CASE("interior breakpoints belong to the left piece") {
  // both pieces evaluate to the same value at 0.5, piece_index pins the side
  const Marginal m(MarginalForm::Spline, {0.0, 0.5, 1.0},
                   {Polynomial({0.0, 0.4}), Polynomial({-0.1, 0.6})});
  CHECK(m.piece_index(0.5) == 0);
  CHECK(m.piece_index(0.5 + 1e-12) == 1);
  CHECK(m(0.5) == doctest::Approx(0.2));
}

TEST_CASE("marginal construction validates breakpoints") {
  CHECK_THROWS_AS(Marginal(MarginalForm::Spline, {0.0, 0.5, 0.5, 1.0},
                           {Polynomial({0.0, 1.0}), Polynomial({0.0, 1.0}), Polynomial({0.0, 1.0})}),
                  DomainError);
  CHECK_THROWS_AS(Marginal(MarginalForm::Spline, {0.0, 1.0},
                           {Polynomial({0.0, 0.5}), Polynomial({0.0, 0.5})}),
                  DomainError);
}

TEST_CASE("model evaluation sums the marginals") {
  const AdditiveModel m = equal_weight_model();
  CHECK(m.evaluate({"c", {25, 75}}) == doctest::Approx(0.5));
  CHECK(m.evaluate({"lo", {0, 0}}) == doctest::Approx(0.0));
  CHECK(m.evaluate({"hi", {100, 100}}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(m.evaluate({"out", {101, 0}}), DomainError);
}

TEST_CASE("dominance never decreases the score") {
  const AdditiveModel m = equal_weight_model();
  const double lo = m.evaluate({"p", {40, 60}});
  const double hi = m.evaluate({"q", {45, 60}});
  CHECK(hi >= lo - 1e-8);
}

TEST_CASE("rank groups score ties into classes") {
  const AdditiveModel m = equal_weight_model();
  const Ranking flat = m.rank(kTable1);
  REQUIRE(flat.classes.size() == 1);  // all Table-1 scores are 0.5
  CHECK(flat.classes.front().size() == 4);

  const Ranking solo = m.rank({{"only", {10, 20}}});
  CHECK(solo.classes.size() == 1);

  const AdditiveModel line = score_line();
  const Ranking r = line.rank({{"1", {0.9}}, {"2", {0.5}}, {"3", {0.5 + 1e-12}}, {"4", {0.1}}}, 1e-9);
  REQUIRE(r.classes.size() == 3);
  CHECK(r.classes[0] == std::vector<std::string>{"1"});
  CHECK(r.classes[1].size() == 2);
  CHECK(r.classes[2] == std::vector<std::string>{"4"});
}

TEST_CASE("rank only reads score comparisons") {
  // affinely rescaling every score leaves the weak order unchanged
  const AdditiveModel line = score_line();
  std::vector<Alternative> alts{{"1", {0.91}}, {"2", {0.13}}, {"3", {0.47}}, {"4", {0.47}}};
  std::vector<Alternative> scaled;
  for (const auto& a : alts) scaled.push_back({a.id, {0.3 * a.performances[0] + 0.2}});
  const Ranking r1 = line.rank(alts);
  const Ranking r2 = line.rank(scaled, 0.3 * 1e-9);
  CHECK(r1.classes == r2.classes);
}

TEST_CASE("dense and average ranks") {
  const Ranking r{{{"a", "b"}, {"c"}}};
  const auto dense = r.dense_ranks();
  CHECK(dense.at("a") == 1);
  CHECK(dense.at("b") == 1);
  CHECK(dense.at("c") == 2);
  const auto avg = r.average_ranks();
  CHECK(avg.at("a") == doctest::Approx(1.5));
  CHECK(avg.at("b") == doctest::Approx(1.5));
  CHECK(avg.at("c") == doctest::Approx(3.0));
}

TEST_CASE("assignment is lower-closed at thresholds") {
  const AdditiveModel one = score_line({0.5});
  CHECK(one.assign({"x", {0.3}}) == 1);
  CHECK(one.assign({"x", {0.5}}) == 2);

  const AdditiveModel two = score_line({0.3, 0.7});
  CHECK(two.assign({"x", {0.95}}) == 3);
  CHECK(two.assign({"x", {0.3}}) == 2);

  CHECK_THROWS_AS(score_line().assign({"x", {0.5}}), ModeError);
}

TEST_CASE("model constructor checks normalization and thresholds") {
  std::vector<Marginal> ms;
  ms.emplace_back(MarginalForm::PiecewiseLinear, std::vector<double>{0.0, 1.0},
                  std::vector<Polynomial>{Polynomial({0.0, 0.5})});  // top value 0.5, not 1
  CHECK_THROWS_AS(AdditiveModel({{"u", 0.0, 1.0}}, std::move(ms)), DomainError);
  CHECK_THROWS_AS(score_line({0.7, 0.3}), DomainError);  // thresholds must increase
}

TEST_CASE("learning set validation") {
  LearningSet ls;
  ls.criteria = {{"g1", 0.0, 100.0}, {"g2", 0.0, 100.0}};
  ls.alternatives = kTable1;
  ls.strict = {{"a", "c"}, {"c", "d"}};
  ls.indiff = {{"a", "b"}};
  CHECK_NOTHROW(ls.validate());
  CHECK(ls.statement_count() == 3);
  CHECK_FALSE(ls.sorting_mode());

  SUBCASE("unknown id") {
    ls.strict.push_back({"a", "zz"});
    CHECK_THROWS_AS(ls.validate(), DomainError);
  }
  SUBCASE("pair stated in both relations") {
    ls.indiff.push_back({"c", "a"});
    CHECK_THROWS_AS(ls.validate(), DomainError);
  }
  SUBCASE("self pair") {
    ls.strict.push_back({"b", "b"});
    CHECK_THROWS_AS(ls.validate(), DomainError);
  }
  SUBCASE("performance outside its scale") {
    ls.alternatives[0].performances[1] = 120.0;
    CHECK_THROWS_AS(ls.validate(), DomainError);
  }
  SUBCASE("pairs and assignments cannot mix") {
    ls.assignments["a"] = 1;
    CHECK_THROWS_AS(ls.validate(), ModeError);
  }
}

}  // TEST_SUITE
