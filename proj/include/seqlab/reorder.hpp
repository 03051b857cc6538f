#pragma once

#include <vector>

namespace seqlab {

// A reordering of token positions 0..N-1. perm[t] is the original index of
// the token fed to the model at time t.
using Permutation = std::vector<int>;

// Breadth-first center-expansion order over {0..total_len-1}, BEFORE the
// final reversal. Seeds with total_len/2, then expands a FIFO queue of
// (center, start, end) interval triples; whenever both half-gaps
// (center-start)/2 and (end-center)/2 are at least 1, the right then left
// child centers are emitted and both children enqueued. The first triple
// failing that test flushes every not-yet-emitted index in descending
// order; later triples emit nothing new. Throws std::invalid_argument for
// total_len < 1.
Permutation tree_order(int total_len);

// reverse(tree_order(total_len)): widely spread indices are fed last and
// get the shortest gradient chains.
Permutation reorder_indices(int total_len);

// n-gram-preserving variant: tree_order(total_len / n) is expanded by
// replacing each base index k with the ascending run n*k .. n*k+n-1,
// leftover indices n*(total_len/n) .. total_len-1 are appended ascending,
// and the whole flat list is reversed. Groups of n original neighbours stay
// adjacent in the output. n = 1 reduces to reorder_indices exactly.
Permutation ngram_reorder_indices(int total_len, int n);

// The flat expanded list before the final reversal (the --pre-reversal view
// of ngram_reorder_indices).
Permutation ngram_tree_order(int total_len, int n);

// out[i] = tokens[perm[i]]. Throws std::invalid_argument on length mismatch.
std::vector<int> apply_permutation(const std::vector<int>& tokens,
                                   const Permutation& perm);

// Verifies perm is a bijection on {0..perm.size()-1}.
bool is_permutation(const Permutation& perm);

}  // namespace seqlab
