#include "mallows/sampler.hpp"

#include <cmath>
#include <stdexcept>

namespace mallows {

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

uint64_t stream_seed(uint64_t master, int r) {
  return splitmix64(master + 0x9E3779B97F4A7C15ULL * static_cast<uint64_t>(r + 1));
}

MallowsSampler::MallowsSampler(int n, double q, uint64_t seed)
    : n_(n), q_(q), rng_(splitmix64(seed)) {
  if (n < 1) throw std::invalid_argument("MallowsSampler: n must be >= 1");
  if (q <= 0.0) throw std::invalid_argument("MallowsSampler: q must be > 0");
  reflect_ = q > 1.0;
  qeff_ = reflect_ ? 1.0 / q : q;
  log_qeff_ = std::log(qeff_);
  qeff_pow_.resize(n + 1);
  qeff_pow_[0] = 1.0;
  for (int t = 1; t <= n; ++t) qeff_pow_[t] = qeff_pow_[t - 1] * qeff_;
  code_.resize(n);
  fenwick_.resize(n + 1);
}

double MallowsSampler::uniform01() {
  return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

int MallowsSampler::trunc_geometric(int choices) {
  if (choices == 1) return 0;
  const double u = uniform01();
  int k;
  if (std::fabs(qeff_ - 1.0) < 1e-8) {
    k = static_cast<int>(u * choices);
  } else {
    // smallest k with (1 - q^{k+1})/(1 - q^L) >= u
    const double v = 1.0 - u * (1.0 - qeff_pow_[choices]);
    k = static_cast<int>(std::ceil(std::log(v) / log_qeff_)) - 1;
  }
  if (k < 0) k = 0;
  if (k >= choices) k = choices - 1;
  return reflect_ ? (choices - 1 - k) : k;
}

void MallowsSampler::draw_code(std::vector<int>& code) {
  code.resize(n_);
  for (int i = 0; i < n_; ++i) code[i] = trunc_geometric(n_ - i);
}

void MallowsSampler::decode_code(const std::vector<int>& code, std::vector<int>& out) {
  const int n = static_cast<int>(code.size());
  out.resize(n);
  // Fenwick tree over remaining values; select the (c_i + 1)-th smallest.
  static thread_local std::vector<int> fen;
  fen.assign(n + 1, 0);
  for (int v = 1; v <= n; ++v) {
    for (int t = v; t <= n; t += t & -t) fen[t] += 1;
  }
  int logn = 1;
  while ((1 << logn) <= n) ++logn;
  for (int i = 0; i < n; ++i) {
    int rank = code[i] + 1;  // rank among remaining values
    int pos = 0;
    for (int step = 1 << logn; step > 0; step >>= 1) {
      const int next = pos + step;
      if (next <= n && fen[next] < rank) {
        pos = next;
        rank -= fen[next];
      }
    }
    const int value = pos + 1;
    out[i] = value;
    for (int t = value; t <= n; t += t & -t) fen[t] -= 1;
  }
}

void MallowsSampler::draw_entries(std::vector<int>& out) {
  draw_code(code_);
  decode_code(code_, out);
}

Permutation MallowsSampler::draw() {
  std::vector<int> out;
  draw_entries(out);
  return Permutation{std::move(out)};
}

}  // namespace mallows
