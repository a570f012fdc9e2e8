#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "ctan/common.hpp"

namespace ctan::harness {

/// Rank-statistic AUC: P(score_pos > score_neg) + 0.5 P(tie). Computed by
/// sorting the negatives and accumulating an integer numerator, so the
/// result equals exact pair counting on every input.
inline double auc(const std::vector<double>& scores_pos,
                  const std::vector<double>& scores_neg) {
  if (scores_pos.empty() || scores_neg.empty())
    throw ContractError("auc: both score lists must be non-empty");
  std::vector<double> neg = scores_neg;
  std::sort(neg.begin(), neg.end());
  std::uint64_t twice_wins = 0;  // 2 per win, 1 per tie
  for (double p : scores_pos) {
    const auto lo = std::lower_bound(neg.begin(), neg.end(), p);
    const auto hi = std::upper_bound(lo, neg.end(), p);
    twice_wins += 2 * static_cast<std::uint64_t>(lo - neg.begin());
    twice_wins += static_cast<std::uint64_t>(hi - lo);
  }
  return static_cast<double>(twice_wins) /
         (2.0 * static_cast<double>(scores_pos.size()) *
          static_cast<double>(scores_neg.size()));
}

/// Fraction of sign agreements between logits and +-1 labels, thresholded
/// at zero (a zero logit counts as the negative class).
inline double accuracy(const std::vector<double>& logits,
                       const std::vector<int>& labels) {
  if (logits.size() != labels.size())
    throw ContractError("accuracy: length mismatch");
  if (logits.empty()) throw ContractError("accuracy: empty input");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    const int pred = logits[i] > 0.0 ? 1 : -1;
    if (pred == labels[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(logits.size());
}

inline double mean(const std::vector<double>& xs) {
  if (xs.empty()) throw ContractError("mean: empty input");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

inline double sample_std(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

}  // namespace ctan::harness
