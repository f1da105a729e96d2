#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mallows/perm.hpp"

namespace mallows {

uint64_t splitmix64(uint64_t x);

// Seed for substream r of a master seed; substreams are independent and
// the (seed, r) -> generator map is fixed for reproducibility.
uint64_t stream_seed(uint64_t master, int r);

/* Exact Mallows(q) sampler. Draws the code c_i = #{j > i : pi_j < pi_i}
 * independently with P(c_i = k) proportional to q^k on {0..n-i}, then
 * decodes; sum_i c_i equals inv(pi) by construction. */
class MallowsSampler {
 public:
  MallowsSampler(int n, double q, uint64_t seed);

  Permutation draw();
  void draw_entries(std::vector<int>& out);  // same, reusing the caller's buffer
  void draw_code(std::vector<int>& code);    // just the code

  static void decode_code(const std::vector<int>& code, std::vector<int>& out);

 private:
  int trunc_geometric(int choices);  // k in [0, choices-1], weight q^k
  double uniform01();

  int n_;
  double q_;
  bool reflect_;   // q > 1 is drawn at 1/q and mirrored
  double qeff_, log_qeff_;
  std::vector<double> qeff_pow_;  // qeff^t for t = 0..n
  std::mt19937_64 rng_;
  std::vector<int> code_, fenwick_;
};

}  // namespace mallows
