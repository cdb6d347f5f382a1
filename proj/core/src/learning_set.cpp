#include "valfit/learning_set.hpp"

#include <algorithm>
#include <set>

#include "valfit/errors.hpp"

namespace valfit {

const Alternative& LearningSet::by_id(const std::string& id) const {
  return alternatives[index_of(id)];
}

std::size_t LearningSet::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < alternatives.size(); ++i)
    if (alternatives[i].id == id) return i;
  throw DomainError("unknown alternative id: " + id);
}

void LearningSet::validate() const {
  if (criteria.empty()) throw DomainError("learning set has no criteria");
  std::set<std::string> ids;
  for (const auto& a : alternatives) {
    if (!ids.insert(a.id).second) throw DomainError("duplicate alternative id: " + a.id);
    if (a.performances.size() != criteria.size())
      throw DomainError("alternative has wrong number of performances: " + a.id);
    for (std::size_t j = 0; j < criteria.size(); ++j) {
      const auto& c = criteria[j];
      if (!(c.lower < c.upper)) throw DomainError("criterion scale must have lower < upper: " + c.id);
      if (a.performances[j] < c.lower || a.performances[j] > c.upper)
        throw DomainError("performance of " + a.id + " outside scale of " + c.id);
    }
  }
  if ((!strict.empty() || !indiff.empty()) && !assignments.empty())
    throw ModeError("learning set mixes pairwise statements with category assignments");
  std::set<std::pair<std::string, std::string>> seen;
  auto check_pair = [&](const std::pair<std::string, std::string>& pr) {
    if (pr.first == pr.second) throw DomainError("statement compares " + pr.first + " with itself");
    if (!ids.count(pr.first)) throw DomainError("unknown alternative id: " + pr.first);
    if (!ids.count(pr.second)) throw DomainError("unknown alternative id: " + pr.second);
    auto key = std::minmax(pr.first, pr.second);
    if (!seen.insert({key.first, key.second}).second)
      throw DomainError("pair stated more than once: " + pr.first + ", " + pr.second);
  };
  for (const auto& pr : strict) check_pair(pr);
  for (const auto& pr : indiff) check_pair(pr);
  for (const auto& [id, cat] : assignments) {
    if (!ids.count(id)) throw DomainError("unknown alternative id: " + id);
    if (cat < 1) throw DomainError("category indices start at 1: " + id);
  }
}

}  // namespace valfit
