#include "mallows/qcalc.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace mallows {

namespace {
// Below this distance from q = 1 the closed form (1-q^n)/(1-q) loses
// digits to cancellation, so we fall back to the explicit sum.
constexpr double kQOneGuard = 1e-8;
}  // namespace

double q_int(long n, double q) {
  if (n < 0) throw std::invalid_argument("q_int: n must be >= 0");
  if (q <= 0.0) throw std::invalid_argument("q_int: q must be > 0");
  if (n == 0) return 0.0;
  if (std::fabs(q - 1.0) < kQOneGuard) {
    double acc = 0.0;
    for (long k = 0; k < n; ++k) acc = acc * q + 1.0;
    return acc;
  }
  return (1.0 - std::pow(q, static_cast<double>(n))) / (1.0 - q);
}

double q_factorial(long n, double q) {
  if (n < 0) throw std::invalid_argument("q_factorial: n must be >= 0");
  double acc = 1.0;
  for (long k = 1; k <= n; ++k) {
    acc *= q_int(k, q);
    if (std::isinf(acc)) break;
  }
  return acc;
}

double q_binomial(long m, long n, double q) {
  if (m < 0 || n < 0) throw std::invalid_argument("q_binomial: arguments must be >= 0");
  if (q <= 0.0) throw std::invalid_argument("q_binomial: q must be > 0");
  long b = std::min(m, n);
  long a = m + n;
  // row k of the table holds (j choose k)_q for the current j
  std::vector<double> row(b + 1, 0.0);
  row[0] = 1.0;
  for (long j = 1; j <= a; ++j) {
    for (long k = std::min(j, b); k >= 1; --k) {
      // (j choose k)_q = (j-1 choose k-1)_q + q^k (j-1 choose k)_q
      row[k] = row[k - 1] + std::pow(q, static_cast<double>(k)) * row[k];
    }
  }
  return row[b];
}

double tail_constant_cq(double q, double tol) {
  if (q <= 0.0 || q >= 1.0)
    throw std::domain_error("tail_constant_cq: requires 0 < q < 1");
  double prod = 1.0;
  double qi = q;
  while (qi >= tol) {
    prod *= (1.0 - qi);
    qi *= q;
  }
  return 1.0 / prod;
}

double tail_constant_d(double q, int m, int b, double tol) {
  if (q <= 0.0 || q >= 1.0)
    throw std::domain_error("tail_constant_d: requires 0 < q < 1");
  if (m < 3 || b < 2 || b > m)
    throw std::invalid_argument("tail_constant_d: requires m >= 3 and 2 <= b <= m");
  double prod = 1.0;
  for (long j = 1;; ++j) {
    // all exponents this round are >= j(m-1)+1
    if (std::pow(q, static_cast<double>(j) * (m - 1) + 1) < tol) break;
    for (int i = 1; i <= m - b; ++i)
      prod *= (1.0 - std::pow(q, static_cast<double>(j) * (m - 1) + i));
  }
  return 1.0 / prod;
}

QPoly q_int_poly(int n) {
  if (n < 0) throw std::invalid_argument("q_int_poly: n must be >= 0");
  std::vector<mpz_class> c(n, 1);
  return QPoly{std::move(c)};
}

QPoly q_factorial_poly(int n) {
  QPoly acc = QPoly::one();
  for (int k = 2; k <= n; ++k) acc *= q_int_poly(k);
  return n >= 1 ? acc : QPoly::one();
}

QPoly gaussian_binomial_poly(int m, int n) {
  if (m < 0 || n < 0) throw std::invalid_argument("gaussian_binomial_poly: arguments must be >= 0");
  int b = std::min(m, n);
  int a = m + n;
  std::vector<QPoly> row(b + 1);
  row[0] = QPoly::one();
  for (int j = 1; j <= a; ++j) {
    for (int k = std::min(j, b); k >= 1; --k) {
      row[k] = row[k - 1] + QPoly::monomial(k) * row[k];
    }
  }
  return row[b];
}

}  // namespace mallows
