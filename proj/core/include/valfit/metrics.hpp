#pragma once

#include <string>
#include <utility>
#include <vector>

#include "valfit/ranking.hpp"

namespace valfit {

/// Kendall tau-b between two weak orders over the same alternatives:
/// (C - D) / sqrt((C + D + T1)(C + D + T2)) with C/D the concordant and
/// discordant pair counts and T1/T2 the pairs tied in exactly one ranking.
/// Pairs tied in both rankings count nowhere.  Returns 0 when either ranking
/// ties everything (the denominator would vanish).  MetricError when the two
/// rankings do not cover the same ids.
double kendall_tau(const Ranking& r1, const Ranking& r2);

/// Spearman rank correlation between two weak orders: Pearson correlation of
/// the average-position ranks (tied alternatives share the mean of the
/// positions they occupy).  Returns 0 when either ranking ties everything.
double spearman(const Ranking& r1, const Ranking& r2);

struct PairStatements {
  std::vector<std::pair<std::string, std::string>> strict;
  std::vector<std::pair<std::string, std::string>> indiff;
};

/// Chain of adjacent statements spanning a ranking: consecutive members of a
/// class are indifferent, the last member of a class is strictly preferred
/// to the first member of the next.  m alternatives give m-1 statements.
PairStatements consecutive_pairs(const Ranking& r);

}  // namespace valfit
