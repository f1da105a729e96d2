#include "mallows/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "mallows/qcalc.hpp"

namespace mallows {

double window_probability(int m, long long inv, double q) {
  if (m < 2) throw std::invalid_argument("window_probability: requires m >= 2");
  if (inv < 0 || inv > static_cast<long long>(m) * (m - 1) / 2)
    throw std::invalid_argument("window_probability: inversion count out of range");
  /* q^inv / [m]_q! assembled factor by factor, spending the largest
   * exponents on the largest q-integers; with [k]_q = q^{k-1} [k]_{1/q}
   * each factor stays in (0, k], so nothing overflows at any q. */
  double acc = 1.0;
  long long left = inv;
  for (int k = m; k >= 2; --k) {
    const long long take = std::min<long long>(left, k - 1);
    if (q > 1.0) {
      acc *= std::pow(q, static_cast<double>(take - (k - 1))) / q_int(k, 1.0 / q);
    } else {
      acc *= std::pow(q, static_cast<double>(take)) / q_int(k, q);
    }
    left -= take;
  }
  return acc;
}

double window_probability(const Permutation& sigma, double q) {
  return window_probability(sigma.size(), inversions(sigma), q);
}

double OverlapPolynomials::T(int s, double q) const {
  if (s < 1 || s > m - 1) throw std::invalid_argument("OverlapPolynomials::T: bad s");
  return numerator[s - 1].evaluate(q) / q_factorial(2 * m - s, q);
}

double OverlapPolynomials::T_sum(double q) const {
  double tot = 0.0;
  for (int s = 1; s <= m - 1; ++s) tot += T(s, q);
  return tot;
}

OverlapPolynomials overlap_polynomials(const Permutation& sigma) {
  OverlapPolynomials out;
  out.m = sigma.size();
  for (int s = 1; s <= out.m - 1; ++s) {
    QPoly num;
    for (const Permutation& tau : overlap_set(sigma, s))
      num += QPoly::monomial(static_cast<unsigned>(inversions(tau)));
    out.numerator.push_back(std::move(num));
  }
  return out;
}

double overlap_probability_T(const Permutation& sigma, int s, double q) {
  const int m = sigma.size();
  if (s < 1 || s > m - 1) throw std::invalid_argument("overlap_probability_T: bad s");
  double tot = 0.0;
  for (const Permutation& tau : overlap_set(sigma, s))
    tot += std::pow(q, static_cast<double>(inversions(tau)));
  return tot / q_factorial(2 * m - s, q);
}

double upper_bound_generic(int m, long long inv, double q) {
  if (m < 3) throw std::invalid_argument("upper_bound_generic: requires m >= 3");
  return std::pow(1.0 - window_probability(m, inv, q), 1.0 / m);
}

double upper_bound_generic(const Permutation& sigma, double q) {
  return upper_bound_generic(sigma.size(), inversions(sigma), q);
}

double upper_bound_suen(const OverlapPolynomials& ov, long long inv, double q) {
  const int m = ov.m;
  if (m < 3) throw std::invalid_argument("upper_bound_suen: requires m >= 3");
  const double mu = window_probability(m, inv, q);
  const double exponent = -mu + std::exp(4.0 * (m - 1) * mu) * ov.T_sum(q);
  return std::exp(exponent);
}

double upper_bound_suen(const Permutation& sigma, double q) {
  return upper_bound_suen(overlap_polynomials(sigma), inversions(sigma), q);
}

std::optional<double> lower_bound_analytic(int m, long long inv, double q) {
  if (m < 3) throw std::invalid_argument("lower_bound_analytic: requires m >= 3");
  const double mu = window_probability(m, inv, q);
  const double disc = 1.0 - (4.0 * m - 2.0) * mu + mu * mu;
  if (disc < 0.0) return std::nullopt;
  const double f = 0.5 * (1.0 - mu - std::sqrt(disc));
  const double z = mu * std::exp(f);
  if (!(z > 0.0 && z < 1.0)) return std::nullopt;
  return 1.0 - z;
}

std::optional<double> lower_bound_analytic(const Permutation& sigma, double q) {
  return lower_bound_analytic(sigma.size(), inversions(sigma), q);
}

std::optional<double> lower_bound_numeric(int m, long long inv, double q) {
  if (m < 3) throw std::invalid_argument("lower_bound_numeric: requires m >= 3");
  const double mu = window_probability(m, inv, q);
  const auto g = [m](double z) { return z * std::pow(1.0 - z, m - 1); };
  const double zstar = 1.0 / m;
  if (mu > g(zstar)) return std::nullopt;
  // g is increasing on (0, 1/m]; take its smallest preimage of mu
  double lo = 0.0, hi = zstar;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) >= mu) hi = mid;
    else lo = mid;
  }
  return 1.0 - 0.5 * (lo + hi);
}

std::optional<double> lower_bound_numeric(const Permutation& sigma, double q) {
  return lower_bound_numeric(sigma.size(), inversions(sigma), q);
}

double suen_delta(const Permutation& sigma, double q, int n) {
  const int m = sigma.size();
  const OverlapPolynomials ov = overlap_polynomials(sigma);
  double tot = 0.0;
  for (int s = 1; s <= m - 1; ++s) tot += (n - 2 * m + 1 + s) * ov.T(s, q);
  return tot;
}

BoundSet compute_bounds(const OverlapPolynomials& ov, long long inv, double q) {
  BoundSet b;
  b.q = q;
  b.mu = window_probability(ov.m, inv, q);
  for (int s = 1; s <= ov.m - 1; ++s) b.T.push_back(ov.T(s, q));
  b.upper_generic = upper_bound_generic(ov.m, inv, q);
  b.upper_suen = upper_bound_suen(ov, inv, q);
  b.suen_above_one = *b.upper_suen > 1.0;
  b.lower_analytic = lower_bound_analytic(ov.m, inv, q);
  b.lower_numeric = lower_bound_numeric(ov.m, inv, q);
  return b;
}

BoundSet compute_bounds(const Permutation& sigma, double q) {
  return compute_bounds(overlap_polynomials(sigma), inversions(sigma), q);
}

BoundSet compute_bounds_universal(int m, long long inv, double q) {
  BoundSet b;
  b.q = q;
  b.mu = window_probability(m, inv, q);
  b.upper_generic = upper_bound_generic(m, inv, q);
  b.lower_analytic = lower_bound_analytic(m, inv, q);
  b.lower_numeric = lower_bound_numeric(m, inv, q);
  return b;
}

}  // namespace mallows
