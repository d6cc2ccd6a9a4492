// Reference implementations used only by the test suites. Each one takes a
// deliberately different route from the library code it checks: plain
// recursion instead of tabulation, exhaustive search instead of DP, dense
// decompositions instead of randomized sketches.

#pragma once

#include <Eigen/Dense>

#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "lsalign/vectorizer.hpp"

namespace oracles {

/// Top-down memoized LCS length.
template <typename T>
std::size_t lcss_recursive(const std::vector<T>& a, const std::vector<T>& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  std::function<std::size_t(std::size_t, std::size_t)> rec =
      [&](std::size_t i, std::size_t j) -> std::size_t {
    if (i == a.size() || j == b.size()) return 0;
    const auto key = std::make_pair(i, j);
    if (const auto it = memo.find(key); it != memo.end()) return it->second;
    std::size_t best;
    if (a[i] == b[j]) {
      best = 1 + rec(i + 1, j + 1);
    } else {
      best = std::max(rec(i + 1, j), rec(i, j + 1));
    }
    memo.emplace(key, best);
    return best;
  };
  return rec(0, 0);
}

/// Maximum total score over all monotone alignments of positions of `a`
/// against positions of `b`, by exhaustive recursion (no tabulation).
/// Feasible for sequences up to length ~10.
inline double best_monotone_alignment(
    std::size_t na, std::size_t nb,
    const std::function<double(std::size_t, std::size_t)>& pair_score) {
  std::function<double(std::size_t, std::size_t)> rec = [&](std::size_t i,
                                                            std::size_t j) -> double {
    if (i == na || j == nb) return 0.0;
    double best = 0.0;
    // Choose the next matched pair (i', j') anywhere down-right of (i, j).
    for (std::size_t ii = i; ii < na; ++ii) {
      for (std::size_t jj = j; jj < nb; ++jj) {
        best = std::max(best, pair_score(ii, jj) + rec(ii + 1, jj + 1));
      }
    }
    return best;
  };
  return rec(0, 0);
}

/// Greedy 1:1 matching by repeated full-matrix scans: pick the best
/// remaining cell (ties broken by source URL then target URL), erase its row
/// and column, repeat. Matches the competitive-linking contract without
/// sharing the sort-based implementation.
struct GreedyPick {
  std::size_t src;
  std::size_t tgt;
};

inline std::vector<GreedyPick> greedy_matching(
    const std::vector<std::vector<double>>& score,
    const std::vector<std::string>& src_urls, const std::vector<std::string>& tgt_urls) {
  const std::size_t ns = score.size();
  const std::size_t nt = ns == 0 ? 0 : score[0].size();
  std::vector<bool> src_used(ns, false), tgt_used(nt, false);
  std::vector<GreedyPick> picks;
  while (true) {
    bool found = false;
    std::size_t bi = 0, bj = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ns; ++i) {
      if (src_used[i]) continue;
      for (std::size_t j = 0; j < nt; ++j) {
        if (tgt_used[j]) continue;
        const bool better =
            score[i][j] > best ||
            (score[i][j] == best &&
             (src_urls[i] < src_urls[bi] ||
              (src_urls[i] == src_urls[bi] && tgt_urls[j] < tgt_urls[bj])));
        if (!found || better) {
          found = true;
          best = score[i][j];
          bi = i;
          bj = j;
        }
      }
    }
    if (!found) break;
    src_used[bi] = true;
    tgt_used[bj] = true;
    picks.push_back({bi, bj});
  }
  return picks;
}

/// Dense matrix view of a sparse term-document matrix.
inline Eigen::MatrixXd to_dense(const lsalign::TermDocMatrix& m) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m.rows),
                                              static_cast<Eigen::Index>(m.cols.size()));
  for (std::size_t c = 0; c < m.cols.size(); ++c) {
    for (const auto& [row, w] : m.cols[c].entries) {
      out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c)) = w;
    }
  }
  return out;
}

/// Exact thin SVD via Eigen's dense decomposition.
struct DenseSvd {
  Eigen::MatrixXd u;
  Eigen::VectorXd s;
  Eigen::MatrixXd v;
};

inline DenseSvd dense_svd(const Eigen::MatrixXd& m) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

}  // namespace oracles
