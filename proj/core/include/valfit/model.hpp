#pragma once

#include <string>
#include <vector>

#include "valfit/polynomial.hpp"
#include "valfit/ranking.hpp"

namespace valfit {

/// Measurement scale of one criterion: values live in [lower, upper] and
/// larger is better.  Decreasing criteria are expected to be negated (or
/// otherwise re-coded) before ingestion.
struct CriterionScale {
  std::string id;
  double lower = 0.0;
  double upper = 1.0;
};

struct Alternative {
  std::string id;
  std::vector<double> performances;
};

enum class MarginalForm { PiecewiseLinear, Polynomial, Spline };

/// Piecewise polynomial value function on [breakpoints.front(),
/// breakpoints.back()].  Piece l (0-based) applies on
/// [breakpoints[l], breakpoints[l+1]]; at an interior breakpoint the left
/// piece wins, which is immaterial for continuous marginals but pins the
/// convention down.
class Marginal {
 public:
  Marginal(MarginalForm form, std::vector<double> breakpoints, std::vector<Polynomial> pieces);

  double operator()(double x) const;

  MarginalForm form() const { return form_; }
  double lower() const { return breakpoints_.front(); }
  double upper() const { return breakpoints_.back(); }
  int piece_count() const { return static_cast<int>(pieces_.size()); }

  /// 0-based index of the piece evaluated at x (left piece at breakpoints).
  int piece_index(double x) const;

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<Polynomial>& pieces() const { return pieces_; }

 private:
  MarginalForm form_;
  std::vector<double> breakpoints_;
  std::vector<Polynomial> pieces_;
};

/// Additive value model U(a) = sum_j u_j(a_j) with marginals normalized so
/// that every u_j is 0 at its lower endpoint and the upper-endpoint values
/// sum to 1.  Optional thresholds turn the model into a sorting model with
/// categories 1..thresholds.size()+1 (category boundaries are lower-closed).
class AdditiveModel {
 public:
  AdditiveModel(std::vector<CriterionScale> criteria, std::vector<Marginal> marginals,
                std::vector<double> thresholds = {});

  double evaluate(const Alternative& a) const;
  double marginal_value(std::size_t j, double x) const;

  /// Ranks alternatives by decreasing score; scores within tieTol of each
  /// other chain into one indifference class.
  Ranking rank(const std::vector<Alternative>& alternatives, double tieTol = 1e-9) const;

  /// Category of a: smallest h with U(a) < threshold[h-1], counting from 1;
  /// U(a) >= last threshold lands in the top category.  ModeError when the
  /// model has no thresholds.
  int assign(const Alternative& a) const;

  std::size_t criterion_count() const { return criteria_.size(); }
  const std::vector<CriterionScale>& criteria() const { return criteria_; }
  const std::vector<Marginal>& marginals() const { return marginals_; }
  const std::vector<double>& thresholds() const { return thresholds_; }
  bool has_thresholds() const { return !thresholds_.empty(); }
  int category_count() const { return static_cast<int>(thresholds_.size()) + 1; }

 private:
  std::vector<CriterionScale> criteria_;
  std::vector<Marginal> marginals_;
  std::vector<double> thresholds_;
};

}  // namespace valfit
