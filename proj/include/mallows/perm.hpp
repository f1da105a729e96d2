#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mallows/qpoly.hpp"

namespace mallows {

/* A permutation of {1..n}, stored as its sequence of values. Positions
 * are 0-based in code; values are the usual 1-based ones. */
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> entries);  // validates bijection of {1..n}
  static Permutation identity(int n);
  // Accepts "1432" (single digits) or "1,10,2,..." for longer patterns.
  static Permutation parse(std::string_view text);

  int size() const { return static_cast<int>(entries_.size()); }
  int operator[](int pos) const { return entries_[pos]; }
  const std::vector<int>& entries() const { return entries_; }
  std::string to_string() const;  // "1432" if n <= 9, else comma form

  bool operator==(const Permutation& o) const { return entries_ == o.entries_; }
  bool operator<(const Permutation& o) const { return entries_ < o.entries_; }

 private:
  std::vector<int> entries_;
};

// Order-isomorphic permutation of a word of distinct integers.
Permutation standardize(const std::vector<int>& word);

// Number of pairs i < j with p[i] > p[j]; O(n log n).
long long inversions(const Permutation& p);

Permutation reverse(const Permutation& p);
Permutation complement(const Permutation& p);

bool is_monotone_increasing(const Permutation& p);
bool is_monotone_decreasing(const Permutation& p);

/* Marking of the windows of p where sigma occurs: bit j (0-based) is set
 * iff st(p_j ... p_{j+m-1}) = sigma. */
struct OccurrenceMarking {
  std::vector<uint8_t> bits;          // length n - m + 1
  int count() const;
  std::vector<int> positions() const;  // 1-based, matching the usual convention
};

OccurrenceMarking occurrences(const Permutation& p, const Permutation& sigma);
int count_occurrences(const Permutation& p, const Permutation& sigma);

/* All tau in S_{2m-s} whose first and last m-windows both standardize to
 * sigma, in lexicographic order. The first window's relative order is
 * fixed up front, so the search is C(2m-s, m) * (m-s)! candidates rather
 * than (2m-s)!. */
std::vector<Permutation> overlap_set(const Permutation& sigma, int s);

// True iff no permutation shorter than 2m-1 holds two occurrences of
// sigma, i.e. every overlap set of size s >= 2 is empty.
bool is_nonoverlapping(const Permutation& sigma);

struct BruteForceCaps {
  int full_sweep = 10;   // n cap for whole-S_n sweeps
  int clusters = 11;     // n cap for cluster enumeration
};

/* Exact counts c(i, k, n) of k-clusters of length n with i inversions:
 * permutations with marked occurrences of sigma at positions
 * 1 = i_1 < ... < i_k = n-m+1, consecutive marks at most m-1 apart. */
using ClusterTable = std::map<std::pair<long long, int>, long long>;  // (i, k) -> count
ClusterTable enumerate_clusters(const Permutation& sigma, int n,
                                const BruteForceCaps& caps = {});

// Sum of q^{inv(pi)} over sigma-avoiding pi in S_n, as an exact polynomial.
QPoly avoidance_polynomial(const Permutation& sigma, int n,
                           const BruteForceCaps& caps = {});

// Entry k is the sum of q^{inv(pi)} over pi in S_n with exactly k
// occurrences of sigma; entries sum to [n]_q!.
std::map<int, QPoly> occurrence_distribution(const Permutation& sigma, int n,
                                             const BruteForceCaps& caps = {});

// P_n(sigma, q): probability that a Mallows(q) permutation avoids sigma,
// by exhaustive enumeration. Subject to the full-sweep cap.
double avoidance_probability(const Permutation& sigma, int n, double q,
                             const BruteForceCaps& caps = {});

// Visits every permutation of {1..n} in lexicographic order.
void for_each_permutation(int n, const std::function<void(const Permutation&)>& fn);

}  // namespace mallows
