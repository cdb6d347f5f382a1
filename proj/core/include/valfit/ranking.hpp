#pragma once

#include <map>
#include <string>
#include <vector>

namespace valfit {

/// Weak order over alternatives: an ordered sequence of indifference classes,
/// best class first.  Order inside a class is the stable ingestion order and
/// carries no preference meaning.
struct Ranking {
  std::vector<std::vector<std::string>> classes;

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& c : classes) n += c.size();
    return n;
  }

  /// Dense rank (1-based class index) per alternative id.
  std::map<std::string, int> dense_ranks() const;

  /// Average position rank per id: members of a class tied at positions
  /// p..p+t-1 all receive (2p+t-1)/2, positions counted from 1.
  std::map<std::string, double> average_ranks() const;
};

/// Groups scored alternatives into a Ranking, best score first.  Two adjacent
/// alternatives in score order land in the same class when their scores
/// differ by at most tieTol (ties are chained).  Sorting breaks score ties by
/// input position, so the result is deterministic.
Ranking rank_from_scores(const std::vector<std::string>& ids,
                         const std::vector<double>& scores,
                         double tieTol = 1e-9);

}  // namespace valfit
