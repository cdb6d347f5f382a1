#include "valfit/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "valfit/errors.hpp"

namespace valfit {

namespace {

// Aligned rank vectors over the common id set; throws when the sets differ.
void aligned_ranks(const Ranking& r1, const Ranking& r2, std::vector<double>& a,
                   std::vector<double>& b, bool average) {
  const auto m1 = average ? r1.average_ranks() : std::map<std::string, double>();
  const auto m2 = average ? r2.average_ranks() : std::map<std::string, double>();
  const auto d1 = r1.dense_ranks();
  const auto d2 = r2.dense_ranks();
  if (d1.size() != r1.size() || d2.size() != r2.size())
    throw MetricError("ranking repeats an alternative");
  if (d1.size() != d2.size()) throw MetricError("rankings cover different alternatives");
  a.clear();
  b.clear();
  for (const auto& [id, rank] : d1) {
    const auto it = d2.find(id);
    if (it == d2.end()) throw MetricError("rankings cover different alternatives: " + id);
    if (average) {
      a.push_back(m1.at(id));
      b.push_back(m2.at(id));
    } else {
      a.push_back(rank);
      b.push_back(it->second);
    }
  }
}

}  // namespace

double kendall_tau(const Ranking& r1, const Ranking& r2) {
  std::vector<double> a, b;
  aligned_ranks(r1, r2, a, b, /*average=*/false);
  const std::size_t n = a.size();
  long long conc = 0, disc = 0, tieFirst = 0, tieSecond = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = a[i] - a[j];
      const double dy = b[i] - b[j];
      if (dx == 0.0 && dy == 0.0) continue;
      if (dx == 0.0)
        ++tieFirst;
      else if (dy == 0.0)
        ++tieSecond;
      else if ((dx > 0.0) == (dy > 0.0))
        ++conc;
      else
        ++disc;
    }
  const double n1 = static_cast<double>(conc + disc + tieFirst);
  const double n2 = static_cast<double>(conc + disc + tieSecond);
  if (n1 == 0.0 || n2 == 0.0) return 0.0;
  return static_cast<double>(conc - disc) / std::sqrt(n1 * n2);
}

double spearman(const Ranking& r1, const Ranking& r2) {
  std::vector<double> a, b;
  aligned_ranks(r1, r2, a, b, /*average=*/true);
  const std::size_t n = a.size();
  if (n == 0) return 0.0;
  // Average ranks always sum to n(n+1)/2, so both means are (n+1)/2 exactly
  // and every centered value is a half-integer: the sums below are exact in
  // double precision for any realistic n.
  const double mean = (static_cast<double>(n) + 1.0) / 2.0;
  double num = 0.0, da = 0.0, db = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xa = a[i] - mean;
    const double xb = b[i] - mean;
    num += xa * xb;
    da += xa * xa;
    db += xb * xb;
  }
  if (da == 0.0 || db == 0.0) return 0.0;
  return num / std::sqrt(da * db);
}

PairStatements consecutive_pairs(const Ranking& r) {
  PairStatements out;
  for (std::size_t c = 0; c < r.classes.size(); ++c) {
    const auto& cls = r.classes[c];
    for (std::size_t i = 1; i < cls.size(); ++i) out.indiff.emplace_back(cls[i - 1], cls[i]);
    if (c + 1 < r.classes.size() && !cls.empty() && !r.classes[c + 1].empty())
      out.strict.emplace_back(cls.back(), r.classes[c + 1].front());
  }
  return out;
}

}  // namespace valfit
