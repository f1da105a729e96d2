#pragma once

#include <vector>

#include "mallows/perm.hpp"

namespace mallows {

/* Truncated power series in z at a fixed numeric q. coeffs[n] is the
 * coefficient of z^n; the truncation order is coeffs.size() - 1. */
struct PowerSeries {
  double q = 1.0;
  std::vector<double> coeffs;
  int order() const { return static_cast<int>(coeffs.size()) - 1; }
};

/* omega_sigma(q, z) = 1 - z - C_sigma(q, -1, z), with the cluster numbers
 * taken from exhaustive enumeration. Truncation order N is capped by the
 * cluster cap. */
PowerSeries omega_bruteforce(const Permutation& sigma, double q, int N,
                             const BruteForceCaps& caps = {});

/* Closed form for the increasing pattern 12...m: +1/[jm]_q! at z^{jm} and
 * -1/[jm+1]_q! at z^{jm+1}, zero elsewhere. */
PowerSeries omega_monotone(int m, double q, int N);

/* Closed form for a non-overlapping pattern with sigma_1 = 1. At t = -1
 * this is omega_sigma; other t values expose the bivariate occurrence
 * series. */
PowerSeries omega_nonoverlap(const Permutation& sigma, double q, int N, double t = -1.0);

/* f with f * omega = 1 as truncated series; f.coeffs[n] = P_n(sigma, q)
 * when omega came from one of the routes above. */
PowerSeries series_reciprocal(const PowerSeries& omega);

/* P(N_n = k) for k = 0..kmax, where N_n counts occurrences of sigma in a
 * Mallows(q) permutation of length n. Expands the bivariate cluster series
 * with polynomial-in-u coefficients and takes its reciprocal. Requires a
 * non-overlapping sigma with sigma_1 = 1. */
std::vector<double> occurrence_distribution_nonoverlap(const Permutation& sigma, double q,
                                                       int n, int kmax);

}  // namespace mallows
