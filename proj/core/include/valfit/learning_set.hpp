#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "valfit/model.hpp"

namespace valfit {

/// Reference data for one fit: alternatives with their performances plus
/// either pairwise statements (ranking mode) or category assignments
/// (sorting mode).  Mixing both in one set is an error; an empty statement
/// list is a valid (unconstrained) ranking instance.
struct LearningSet {
  std::vector<CriterionScale> criteria;
  std::vector<Alternative> alternatives;
  /// (a, b) means a is strictly preferred to b.
  std::vector<std::pair<std::string, std::string>> strict;
  /// (a, b) means a and b are indifferent.
  std::vector<std::pair<std::string, std::string>> indiff;
  /// id -> category in 1..p (sorting mode).
  std::map<std::string, int> assignments;

  bool sorting_mode() const { return !assignments.empty(); }
  std::size_t statement_count() const {
    return sorting_mode() ? assignments.size() : strict.size() + indiff.size();
  }

  const Alternative& by_id(const std::string& id) const;
  std::size_t index_of(const std::string& id) const;

  /// Full consistency check: ids unique and resolvable, performances inside
  /// their scales, no pair stated twice (in either order or either relation),
  /// no self-pairs, not both pair statements and assignments present.
  /// Throws DomainError / ModeError.
  void validate() const;
};

}  // namespace valfit
