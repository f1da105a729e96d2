#include "mallows/series.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "mallows/errors.hpp"
#include "mallows/qcalc.hpp"

namespace mallows {

namespace {

// 1/[n]_q! for n = 0..N, built by term ratios; underflows to exact zero
// for q > 1 and large n, which the series code tolerates.
std::vector<double> inv_qfactorials(int N, double q) {
  std::vector<double> inv(N + 1);
  inv[0] = 1.0;
  for (int n = 1; n <= N; ++n) inv[n] = inv[n - 1] / q_int(n, q);
  return inv;
}

/* Cluster tables depend only on (sigma, n); grid sweeps re-assemble the
 * series at many q values, so the enumerations are memoized. */
const ClusterTable& cached_clusters(const Permutation& sigma, int n,
                                    const BruteForceCaps& caps) {
  static std::mutex mutex;
  static std::map<std::pair<std::string, int>, ClusterTable> cache;
  const auto key = std::make_pair(sigma.to_string(), n);
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (const auto it = cache.find(key); it != cache.end()) return it->second;
  }
  ClusterTable table = enumerate_clusters(sigma, n, caps);
  std::lock_guard<std::mutex> lock(mutex);
  return cache.emplace(key, std::move(table)).first->second;
}

}  // namespace

PowerSeries omega_bruteforce(const Permutation& sigma, double q, int N,
                             const BruteForceCaps& caps) {
  if (q <= 0.0) throw std::invalid_argument("omega_bruteforce: q must be > 0");
  const int m = sigma.size();
  PowerSeries w;
  w.q = q;
  w.coeffs.assign(N + 1, 0.0);
  w.coeffs[0] = 1.0;
  if (N >= 1) w.coeffs[1] = -1.0;
  const auto invfact = inv_qfactorials(N, q);
  for (int n = m; n <= N; ++n) {
    const ClusterTable& table = cached_clusters(sigma, n, caps);
    double acc = 0.0;
    for (const auto& [key, count] : table) {
      const auto& [i, k] = key;
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      acc += static_cast<double>(count) * std::pow(q, static_cast<double>(i)) * sign;
    }
    w.coeffs[n] -= acc * invfact[n];
  }
  return w;
}

PowerSeries omega_monotone(int m, double q, int N) {
  if (m < 2) throw std::invalid_argument("omega_monotone: requires m >= 2");
  if (q <= 0.0) throw std::invalid_argument("omega_monotone: q must be > 0");
  PowerSeries w;
  w.q = q;
  w.coeffs.assign(N + 1, 0.0);
  const auto invfact = inv_qfactorials(N, q);
  for (int j = 0; j * m <= N; ++j) {
    w.coeffs[j * m] += invfact[j * m];
    if (j * m + 1 <= N) w.coeffs[j * m + 1] -= invfact[j * m + 1];
  }
  return w;
}

PowerSeries omega_nonoverlap(const Permutation& sigma, double q, int N, double t) {
  const int m = sigma.size();
  if (q <= 0.0) throw std::invalid_argument("omega_nonoverlap: q must be > 0");
  if (sigma[0] != 1 || !is_nonoverlapping(sigma))
    throw UnsupportedPattern("omega_nonoverlap: pattern must be non-overlapping with first entry 1");
  const int b = sigma[m - 1];
  const double iv = static_cast<double>(inversions(sigma));
  const double qinv = std::pow(q, iv);
  const double fact_mb = q_factorial(m - b, q);

  PowerSeries w;
  w.q = q;
  w.coeffs.assign(N + 1, 0.0);
  w.coeffs[0] = 1.0;
  if (N >= 1) w.coeffs[1] = -1.0;

  // term_k = a_k t^k / [k(m-1)+1]_q!, advanced by its term ratio so that
  // no individual q-factorial or q-binomial is ever formed
  double term = qinv * t / q_factorial(m, q);  // k = 1
  for (int k = 1; k * (m - 1) + 1 <= N; ++k) {
    w.coeffs[k * (m - 1) + 1] -= term;
    double ratio = t * qinv / fact_mb;
    ratio *= q_int(static_cast<long>(k) * (m - 1) + 1, q);
    for (int i = 0; i < b; ++i) ratio /= q_int(static_cast<long>(k) * (m - 1) + m - i, q);
    term *= ratio;
    if (term == 0.0) break;
  }
  return w;
}

PowerSeries series_reciprocal(const PowerSeries& omega) {
  if (omega.coeffs.empty() || omega.coeffs[0] == 0.0)
    throw std::invalid_argument("series_reciprocal: constant term must be nonzero");
  const int N = omega.order();
  PowerSeries f;
  f.q = omega.q;
  f.coeffs.assign(N + 1, 0.0);
  f.coeffs[0] = 1.0 / omega.coeffs[0];
  for (int n = 1; n <= N; ++n) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += f.coeffs[k] * omega.coeffs[n - k];
    f.coeffs[n] = -s / omega.coeffs[0];
  }
  return f;
}

std::vector<double> occurrence_distribution_nonoverlap(const Permutation& sigma, double q,
                                                       int n, int kmax) {
  const int m = sigma.size();
  if (sigma[0] != 1 || !is_nonoverlapping(sigma))
    throw UnsupportedPattern(
        "occurrence_distribution_nonoverlap: pattern must be non-overlapping with first entry 1");
  if (n < 0 || kmax < 0) throw std::invalid_argument("occurrence_distribution_nonoverlap: bad n or kmax");

  /* Work in R[u]/(u^{kmax+1}). w[d] is the u-polynomial coefficient of
   * z^d in 1 - z - C_sigma(q, u-1, z); cluster term k contributes
   * -a_k (u-1)^k at degree k(m-1)+1. */
  using UPoly = std::vector<double>;
  const int U = kmax + 1;
  auto umul = [U](const UPoly& a, const UPoly& b) {
    UPoly c(U, 0.0);
    for (int i = 0; i < U; ++i) {
      if (a[i] == 0.0) continue;
      for (int j = 0; i + j < U; ++j) c[i + j] += a[i] * b[j];
    }
    return c;
  };

  std::vector<UPoly> w(n + 1, UPoly(U, 0.0));
  w[0][0] = 1.0;
  if (n >= 1) w[1][0] = -1.0;

  const int b = sigma[m - 1];
  const double qinv = std::pow(q, static_cast<double>(inversions(sigma)));
  const double fact_mb = q_factorial(m - b, q);
  double amag = qinv / q_factorial(m, q);  // |a_k| / [k(m-1)+1]_q!
  UPoly upow(U, 0.0);                      // (u-1)^k, truncated
  upow[0] = -1.0;
  if (U > 1) upow[1] = 1.0;
  UPoly ubase = upow;
  for (int k = 1; k * (m - 1) + 1 <= n; ++k) {
    if (k > 1) upow = umul(upow, ubase);
    for (int d = 0; d < U; ++d) w[k * (m - 1) + 1][d] -= amag * upow[d];
    double ratio = qinv / fact_mb;
    ratio *= q_int(static_cast<long>(k) * (m - 1) + 1, q);
    for (int i = 0; i < b; ++i) ratio /= q_int(static_cast<long>(k) * (m - 1) + m - i, q);
    amag *= ratio;
    if (amag == 0.0) break;
  }

  // reciprocal with u-polynomial coefficients
  std::vector<UPoly> f(n + 1, UPoly(U, 0.0));
  f[0][0] = 1.0;
  for (int d = 1; d <= n; ++d) {
    UPoly s(U, 0.0);
    for (int k = 0; k < d; ++k) {
      const UPoly prod = umul(f[k], w[d - k]);
      for (int i = 0; i < U; ++i) s[i] += prod[i];
    }
    for (int i = 0; i < U; ++i) f[d][i] = -s[i];
  }
  return f[n];
}

}  // namespace mallows
