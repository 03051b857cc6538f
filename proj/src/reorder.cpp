#include "seqlab/reorder.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace seqlab {

namespace {

struct Interval {
  int center;
  int start;
  int end;
};

}  // namespace

Permutation tree_order(int total_len) {
  if (total_len < 1) {
    throw std::invalid_argument("tree_order: total_len must be >= 1");
  }
  const int n = total_len;
  Permutation order;
  order.reserve(n);
  std::vector<char> emitted(n, 0);
  auto emit = [&](int idx) {
    // For unbalanced n the queue still holds expandable intervals after the
    // missing-index flush; their centers are already emitted and are skipped.
    if (!emitted[idx]) {
      emitted[idx] = 1;
      order.push_back(idx);
    }
  };

  emit(n / 2);
  std::deque<Interval> queue{{n / 2, 0, n}};
  while (!queue.empty()) {
    const Interval iv = queue.front();
    queue.pop_front();
    const int left_gap = (iv.center - iv.start) / 2;
    const int right_gap = (iv.end - iv.center) / 2;
    if (left_gap >= 1 && right_gap >= 1) {
      const int left_center = iv.start + left_gap;
      const int right_center = iv.center + right_gap;
      queue.push_back({left_center, iv.start, iv.center});
      queue.push_back({right_center, iv.center, iv.end});
      emit(right_center);
      emit(left_center);
    } else {
      // Flush everything not yet emitted, largest first. Empty after the
      // first flush, so later leaf intervals are no-ops.
      for (int idx = n - 1; idx >= 0; --idx) emit(idx);
    }
  }
  return order;
}

Permutation reorder_indices(int total_len) {
  Permutation order = tree_order(total_len);
  std::reverse(order.begin(), order.end());
  return order;
}

Permutation ngram_tree_order(int total_len, int n) {
  if (total_len < 1) {
    throw std::invalid_argument("ngram_tree_order: total_len must be >= 1");
  }
  if (n < 1 || n > total_len) {
    throw std::invalid_argument(
        "ngram_tree_order: ngram size must satisfy 1 <= n <= total_len");
  }
  const Permutation base = tree_order(total_len / n);
  Permutation flat;
  flat.reserve(total_len);
  for (int k : base) {
    for (int j = 0; j < n; ++j) flat.push_back(n * k + j);
  }
  for (int idx = n * (total_len / n); idx < total_len; ++idx) {
    flat.push_back(idx);
  }
  return flat;
}

Permutation ngram_reorder_indices(int total_len, int n) {
  Permutation flat = ngram_tree_order(total_len, n);
  std::reverse(flat.begin(), flat.end());
  return flat;
}

std::vector<int> apply_permutation(const std::vector<int>& tokens,
                                   const Permutation& perm) {
  if (tokens.size() != perm.size()) {
    throw std::invalid_argument("apply_permutation: length mismatch");
  }
  std::vector<int> out(tokens.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    out[i] = tokens[perm[i]];
  }
  return out;
}

bool is_permutation(const Permutation& perm) {
  std::vector<char> seen(perm.size(), 0);
  for (int v : perm) {
    if (v < 0 || static_cast<std::size_t>(v) >= perm.size() || seen[v]) {
      return false;
    }
    seen[v] = 1;
  }
  return true;
}

}  // namespace seqlab
