#pragma once

#include "mallows/qpoly.hpp"

namespace mallows {

// [n]_q = 1 + q + ... + q^{n-1}; 0 for n = 0.
double q_int(long n, double q);

// [n]_q! = [1]_q [2]_q ... [n]_q; 1 for n = 0. May overflow to +inf for
// q > 1 and large n; callers that form ratios should build them term by
// term instead of dividing two factorials.
double q_factorial(long n, double q);

// Gaussian binomial coefficient (m+n choose m)_q, computed by the
// q-Pascal recurrence.
double q_binomial(long m, long n, double q);

// c_q = 1 / prod_{i>=1} (1 - q^i), for 0 < q < 1. The product is
// truncated once q^i < tol.
double tail_constant_cq(double q, double tol = 1e-18);

// d_{q,m,b} = 1 / prod_{j>=1} prod_{i=1..m-b} (1 - q^{j(m-1)+i}),
// for 0 < q < 1 and 2 <= b <= m. Equals 1 when b = m.
double tail_constant_d(double q, int m, int b, double tol = 1e-18);

// Exact polynomial versions, used by enumeration oracles.
QPoly q_int_poly(int n);               // 1 + q + ... + q^{n-1}
QPoly q_factorial_poly(int n);         // prod of q_int_poly
QPoly gaussian_binomial_poly(int m, int n);  // (m+n choose m)_q

}  // namespace mallows
