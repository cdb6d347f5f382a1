#include "valfit/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "valfit/errors.hpp"

namespace valfit {

std::map<std::string, int> Ranking::dense_ranks() const {
  std::map<std::string, int> r;
  for (std::size_t c = 0; c < classes.size(); ++c)
    for (const auto& id : classes[c]) r[id] = static_cast<int>(c) + 1;
  return r;
}

std::map<std::string, double> Ranking::average_ranks() const {
  std::map<std::string, double> r;
  std::size_t pos = 1;
  for (const auto& cls : classes) {
    const double avg = static_cast<double>(pos) + (static_cast<double>(cls.size()) - 1.0) / 2.0;
    for (const auto& id : cls) r[id] = avg;
    pos += cls.size();
  }
  return r;
}

Ranking rank_from_scores(const std::vector<std::string>& ids, const std::vector<double>& scores,
                         double tieTol) {
  if (ids.size() != scores.size()) throw MetricError("rank_from_scores: ids/scores size mismatch");
  std::vector<std::size_t> order(ids.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  Ranking r;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k == 0 || scores[order[k - 1]] - scores[order[k]] > tieTol) r.classes.emplace_back();
    r.classes.back().push_back(ids[order[k]]);
  }
  return r;
}

Marginal::Marginal(MarginalForm form, std::vector<double> breakpoints, std::vector<Polynomial> pieces)
    : form_(form), breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)) {
  if (breakpoints_.size() < 2) throw DomainError("marginal needs at least two breakpoints");
  for (std::size_t i = 1; i < breakpoints_.size(); ++i)
    if (!(breakpoints_[i - 1] < breakpoints_[i]))
      throw DomainError("marginal breakpoints must be strictly increasing");
  if (pieces_.size() + 1 != breakpoints_.size())
    throw DomainError("marginal needs one piece per breakpoint interval");
  // Anchoring and continuity are part of the value-function contract; a
  // marginal violating them would silently corrupt every score downstream.
  constexpr double kTol = 1e-6;
  if (std::abs(pieces_.front()(breakpoints_.front())) > kTol)
    throw DomainError("marginal must vanish at its lower endpoint");
  for (std::size_t l = 1; l < pieces_.size(); ++l) {
    const double x = breakpoints_[l];
    if (std::abs(pieces_[l - 1](x) - pieces_[l](x)) > kTol)
      throw DomainError("marginal pieces disagree at an interior breakpoint");
  }
}

int Marginal::piece_index(double x) const {
  if (x < breakpoints_.front() || x > breakpoints_.back())
    throw DomainError("marginal evaluated outside its scale");
  if (x <= breakpoints_.front()) return 0;
  // First interval whose right end reaches x: left piece at breakpoints.
  const auto it = std::lower_bound(breakpoints_.begin() + 1, breakpoints_.end(), x);
  return static_cast<int>(it - breakpoints_.begin()) - 1;
}

double Marginal::operator()(double x) const { return pieces_[static_cast<std::size_t>(piece_index(x))](x); }

AdditiveModel::AdditiveModel(std::vector<CriterionScale> criteria, std::vector<Marginal> marginals,
                             std::vector<double> thresholds)
    : criteria_(std::move(criteria)), marginals_(std::move(marginals)), thresholds_(std::move(thresholds)) {
  if (criteria_.empty()) throw DomainError("model needs at least one criterion");
  if (criteria_.size() != marginals_.size())
    throw DomainError("model needs exactly one marginal per criterion");
  double top = 0.0;
  for (std::size_t j = 0; j < criteria_.size(); ++j) {
    const auto& c = criteria_[j];
    if (!(c.lower < c.upper)) throw DomainError("criterion scale must have lower < upper: " + c.id);
    const double span = std::max(1.0, std::max(std::abs(c.lower), std::abs(c.upper)));
    if (std::abs(marginals_[j].lower() - c.lower) > 1e-9 * span ||
        std::abs(marginals_[j].upper() - c.upper) > 1e-9 * span)
      throw DomainError("marginal domain does not match criterion scale: " + c.id);
    top += marginals_[j](c.upper);
  }
  if (std::abs(top - 1.0) > 1e-6)
    throw DomainError("marginal upper endpoint values must sum to 1");
  for (std::size_t h = 1; h < thresholds_.size(); ++h)
    if (!(thresholds_[h - 1] < thresholds_[h]))
      throw DomainError("category thresholds must be strictly increasing");
}

double AdditiveModel::evaluate(const Alternative& a) const {
  if (a.performances.size() != criteria_.size())
    throw DomainError("alternative has wrong number of performances: " + a.id);
  double u = 0.0;
  for (std::size_t j = 0; j < criteria_.size(); ++j) u += marginals_[j](a.performances[j]);
  return u;
}

double AdditiveModel::marginal_value(std::size_t j, double x) const {
  if (j >= marginals_.size()) throw DomainError("criterion index out of range");
  return marginals_[j](x);
}

Ranking AdditiveModel::rank(const std::vector<Alternative>& alternatives, double tieTol) const {
  std::vector<std::string> ids;
  std::vector<double> scores;
  ids.reserve(alternatives.size());
  scores.reserve(alternatives.size());
  for (const auto& a : alternatives) {
    ids.push_back(a.id);
    scores.push_back(evaluate(a));
  }
  return rank_from_scores(ids, scores, tieTol);
}

int AdditiveModel::assign(const Alternative& a) const {
  if (thresholds_.empty()) throw ModeError("model has no category thresholds");
  const double u = evaluate(a);
  int h = 1;
  for (double t : thresholds_)
    if (u >= t) ++h;
  return h;
}

}  // namespace valfit
