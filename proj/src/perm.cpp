#include "mallows/perm.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "mallows/errors.hpp"
#include "mallows/qcalc.hpp"

namespace mallows {

Permutation::Permutation(std::vector<int> entries) : entries_(std::move(entries)) {
  const int n = static_cast<int>(entries_.size());
  std::vector<char> seen(n + 1, 0);
  for (int v : entries_) {
    if (v < 1 || v > n || seen[v]) throw std::invalid_argument("Permutation: not a bijection of {1..n}");
    seen[v] = 1;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> e(n);
  std::iota(e.begin(), e.end(), 1);
  return Permutation{std::move(e)};
}

Permutation Permutation::parse(std::string_view text) {
  std::vector<int> e;
  if (text.find(',') != std::string_view::npos) {
    std::string s{text};
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) e.push_back(std::stoi(tok));
  } else {
    for (char c : text) {
      if (c < '1' || c > '9') throw std::invalid_argument("Permutation::parse: bad character");
      e.push_back(c - '0');
    }
  }
  return Permutation{std::move(e)};
}

std::string Permutation::to_string() const {
  std::ostringstream os;
  if (size() <= 9) {
    for (int v : entries_) os << v;
  } else {
    for (int i = 0; i < size(); ++i) os << (i ? "," : "") << entries_[i];
  }
  return os.str();
}

Permutation standardize(const std::vector<int>& word) {
  std::vector<int> sorted = word;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("standardize: entries must be distinct");
  std::vector<int> out(word.size());
  for (size_t i = 0; i < word.size(); ++i) {
    out[i] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), word[i]) - sorted.begin()) + 1;
  }
  return Permutation{std::move(out)};
}

namespace {

long long merge_count(std::vector<int>& a, std::vector<int>& buf, int lo, int hi) {
  if (hi - lo <= 1) return 0;
  int mid = (lo + hi) / 2;
  long long cnt = merge_count(a, buf, lo, mid) + merge_count(a, buf, mid, hi);
  int i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (a[i] <= a[j]) buf[k++] = a[i++];
    else {
      cnt += mid - i;
      buf[k++] = a[j++];
    }
  }
  while (i < mid) buf[k++] = a[i++];
  while (j < hi) buf[k++] = a[j++];
  std::copy(buf.begin() + lo, buf.begin() + hi, a.begin() + lo);
  return cnt;
}

}  // namespace

long long inversions(const Permutation& p) {
  std::vector<int> a = p.entries();
  std::vector<int> buf(a.size());
  return merge_count(a, buf, 0, static_cast<int>(a.size()));
}

Permutation reverse(const Permutation& p) {
  std::vector<int> e(p.entries().rbegin(), p.entries().rend());
  return Permutation{std::move(e)};
}

Permutation complement(const Permutation& p) {
  const int n = p.size();
  std::vector<int> e(n);
  for (int i = 0; i < n; ++i) e[i] = n + 1 - p[i];
  return Permutation{std::move(e)};
}

bool is_monotone_increasing(const Permutation& p) {
  for (int i = 0; i + 1 < p.size(); ++i)
    if (p[i] > p[i + 1]) return false;
  return true;
}

bool is_monotone_decreasing(const Permutation& p) {
  for (int i = 0; i + 1 < p.size(); ++i)
    if (p[i] < p[i + 1]) return false;
  return true;
}

int OccurrenceMarking::count() const {
  int c = 0;
  for (uint8_t b : bits) c += b;
  return c;
}

std::vector<int> OccurrenceMarking::positions() const {
  std::vector<int> out;
  for (size_t j = 0; j < bits.size(); ++j)
    if (bits[j]) out.push_back(static_cast<int>(j) + 1);
  return out;
}

namespace {

/* Window test without building a Permutation: st(p[j..j+m)) == sigma iff
 * for every pair a < b the order relation matches sigma's. Comparing each
 * adjacent-in-rank pair of sigma would suffice, but m is tiny; the direct
 * rank comparison below is branch-light and fast enough. */
inline bool window_matches(const std::vector<int>& p, int j, const std::vector<int>& sigma_inverse_order) {
  // sigma_inverse_order[r] = position (0-based) of rank r+1 in sigma.
  const int m = static_cast<int>(sigma_inverse_order.size());
  for (int r = 0; r + 1 < m; ++r) {
    if (p[j + sigma_inverse_order[r]] > p[j + sigma_inverse_order[r + 1]]) return false;
  }
  return true;
}

std::vector<int> rank_positions(const Permutation& sigma) {
  std::vector<int> pos(sigma.size());
  for (int i = 0; i < sigma.size(); ++i) pos[sigma[i] - 1] = i;
  return pos;
}

}  // namespace

OccurrenceMarking occurrences(const Permutation& p, const Permutation& sigma) {
  const int n = p.size(), m = sigma.size();
  if (m > n) throw std::invalid_argument("occurrences: pattern longer than permutation");
  OccurrenceMarking mk;
  mk.bits.assign(n - m + 1, 0);
  const auto pos = rank_positions(sigma);
  for (int j = 0; j + m <= n; ++j) mk.bits[j] = window_matches(p.entries(), j, pos) ? 1 : 0;
  return mk;
}

int count_occurrences(const Permutation& p, const Permutation& sigma) {
  const int n = p.size(), m = sigma.size();
  if (m > n) return 0;
  const auto pos = rank_positions(sigma);
  int c = 0;
  for (int j = 0; j + m <= n; ++j) c += window_matches(p.entries(), j, pos) ? 1 : 0;
  return c;
}

std::vector<Permutation> overlap_set(const Permutation& sigma, int s) {
  const int m = sigma.size();
  if (s < 1 || s > m - 1) throw std::invalid_argument("overlap_set: requires 1 <= s <= m-1");
  const int n = 2 * m - s;
  {
    // candidate count C(2m-s, m) (m-s)!
    double work = 1.0;
    for (int i = 1; i <= m; ++i) work *= static_cast<double>(n - m + i) / i;
    for (int i = 2; i <= m - s; ++i) work *= i;
    if (work > 5e7) throw CapacityError("overlap_set: pattern too long to enumerate");
  }
  const auto pos = rank_positions(sigma);

  std::vector<Permutation> out;
  // Choose which m of the n values occupy the first window; their order
  // there is forced by sigma. The remaining m-s values fill the tail in
  // every possible order; only the second window condition is checked.
  std::vector<int> pick(m);
  // iterate over m-subsets of {1..n} via the standard combination walk
  std::iota(pick.begin(), pick.end(), 1);
  std::vector<int> perm(n);
  while (true) {
    std::vector<char> used(n + 1, 0);
    for (int v : pick) used[v] = 1;
    for (int i = 0; i < m; ++i) perm[pos[i]] = pick[i];  // rank r sits at sigma's position of r
    std::vector<int> rest;
    for (int v = 1; v <= n; ++v)
      if (!used[v]) rest.push_back(v);
    std::sort(rest.begin(), rest.end());
    do {
      for (int i = 0; i < n - m; ++i) perm[m + i] = rest[i];
      if (window_matches(perm, m - s, pos)) out.emplace_back(Permutation{perm});
    } while (std::next_permutation(rest.begin(), rest.end()));

    // next m-subset
    int i = m - 1;
    while (i >= 0 && pick[i] == n - (m - 1 - i)) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < m; ++j) pick[j] = pick[j - 1] + 1;
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_nonoverlapping(const Permutation& sigma) {
  const int m = sigma.size();
  if (m < 2) throw std::invalid_argument("is_nonoverlapping: requires m >= 2");
  for (int s = 2; s <= m - 1; ++s) {
    if (!overlap_set(sigma, s).empty()) return false;
  }
  return true;
}

void for_each_permutation(int n, const std::function<void(const Permutation&)>& fn) {
  std::vector<int> e(n);
  std::iota(e.begin(), e.end(), 1);
  do {
    fn(Permutation{e});
  } while (std::next_permutation(e.begin(), e.end()));
}

namespace {

// Skips all permutations sharing the current prefix [0, len): reverses the
// tail so next_permutation jumps past them. Returns false when exhausted.
bool skip_prefix(std::vector<int>& e, int len) {
  std::reverse(e.begin() + len, e.end());
  return std::next_permutation(e.begin(), e.end());
}

// inversions() without the Permutation wrapper, reusing scratch buffers
long long inversions_raw(const std::vector<int>& p, std::vector<int>& a, std::vector<int>& buf) {
  a = p;
  return merge_count(a, buf, 0, static_cast<int>(a.size()));
}

}  // namespace

ClusterTable enumerate_clusters(const Permutation& sigma, int n, const BruteForceCaps& caps) {
  const int m = sigma.size();
  if (n < m) return {};
  if (n > caps.clusters)
    throw CapacityError("enumerate_clusters: n exceeds cluster cap");
  const auto pos = rank_positions(sigma);
  ClusterTable table;

  std::vector<int> e(n);
  std::iota(e.begin(), e.end(), 1);
  const int first = 0, last = n - m;
  std::vector<int> sa(n), sbuf(n);
  std::vector<uint8_t> bits(last + 1);
  bool more = true;
  while (more) {
    // the first window must be a marked occurrence; skip the whole prefix
    // class otherwise
    if (!window_matches(e, first, pos)) {
      more = skip_prefix(e, m);
      continue;
    }
    for (int j = 0; j <= last; ++j) bits[j] = window_matches(e, j, pos) ? 1 : 0;
    if (bits[last]) {
      /* Count chains 1 = i_1 < ... < i_k = n-m+1 through marked windows
       * with steps <= m-1, grouped by k. ways[j][k] = number of chains
       * ending at window j using k marks. */
      std::vector<std::vector<long long>> ways(last + 1);
      const int kmax = last + 1;
      ways[first].assign(kmax + 2, 0);
      ways[first][1] = 1;
      for (int j = 1; j <= last; ++j) {
        ways[j].assign(kmax + 2, 0);
        if (!bits[j]) continue;
        for (int prev = std::max(first, j - m + 1); prev < j; ++prev) {
          if (!bits[prev]) continue;
          for (int k = 1; k <= kmax; ++k)
            if (ways[prev][k]) ways[j][k + 1] += ways[prev][k];
        }
      }
      const long long iv = inversions_raw(e, sa, sbuf);
      for (int k = 1; k <= kmax + 1; ++k) {
        if (k < static_cast<int>(ways[last].size()) && ways[last][k])
          table[{iv, k}] += ways[last][k];
      }
    }
    more = std::next_permutation(e.begin(), e.end());
  }
  return table;
}

QPoly avoidance_polynomial(const Permutation& sigma, int n, const BruteForceCaps& caps) {
  const int m = sigma.size();
  if (n > caps.full_sweep)
    throw CapacityError("avoidance_polynomial: n exceeds full-sweep cap");
  if (n < m) return q_factorial_poly(n);  // every permutation avoids
  const auto pos = rank_positions(sigma);

  // inversion counts of avoiders, accumulated as plain integers
  std::vector<long long> counts(n * (n - 1) / 2 + 1, 0);
  std::vector<int> e(n), sa(n), sbuf(n);
  std::iota(e.begin(), e.end(), 1);
  bool more = true;
  while (more) {
    // prune: if some window among the settled prefix contains sigma, skip
    int bad = -1;
    for (int j = 0; j + m <= n; ++j) {
      if (window_matches(e, j, pos)) { bad = j; break; }
    }
    if (bad >= 0) {
      more = skip_prefix(e, bad + m);
      continue;
    }
    counts[inversions_raw(e, sa, sbuf)] += 1;
    more = std::next_permutation(e.begin(), e.end());
  }
  std::vector<mpz_class> coeffs(counts.size());
  for (size_t i = 0; i < counts.size(); ++i) coeffs[i] = static_cast<long>(counts[i]);
  return QPoly{std::move(coeffs)};
}

std::map<int, QPoly> occurrence_distribution(const Permutation& sigma, int n,
                                             const BruteForceCaps& caps) {
  const int m = sigma.size();
  if (n > caps.full_sweep)
    throw CapacityError("occurrence_distribution: n exceeds full-sweep cap");
  if (n < m) return {{0, q_factorial_poly(n)}};
  const auto pos = rank_positions(sigma);

  const int kmax = n - m + 1;
  const int imax = n * (n - 1) / 2;
  std::vector<std::vector<long long>> counts(kmax + 1, std::vector<long long>(imax + 1, 0));
  std::vector<int> e(n), sa(n), sbuf(n);
  std::iota(e.begin(), e.end(), 1);
  do {
    int c = 0;
    for (int j = 0; j + m <= n; ++j) c += window_matches(e, j, pos) ? 1 : 0;
    counts[c][inversions_raw(e, sa, sbuf)] += 1;
  } while (std::next_permutation(e.begin(), e.end()));

  std::map<int, QPoly> out;
  for (int k = 0; k <= kmax; ++k) {
    std::vector<mpz_class> coeffs(imax + 1);
    bool any = false;
    for (int i = 0; i <= imax; ++i) {
      coeffs[i] = static_cast<long>(counts[k][i]);
      any = any || counts[k][i] != 0;
    }
    if (any) out.emplace(k, QPoly{std::move(coeffs)});
  }
  return out;
}

double avoidance_probability(const Permutation& sigma, int n, double q,
                             const BruteForceCaps& caps) {
  return avoidance_polynomial(sigma, n, caps).evaluate(q) / q_factorial(n, q);
}

}  // namespace mallows
