#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mallows/bounds.hpp"
#include "mallows/perm.hpp"

namespace mallows {

/* Moments of N_n(sigma, q), the occurrence count of sigma in a Mallows(q)
 * permutation of length n, together with the normal-approximation error
 * constant 75 (10(m-1)+1)^2 (n-m+1) theta_n. */
struct OccurrenceStats {
  int m = 0;
  long long n = 0;
  double mu = 0.0;        // single-window probability
  double a_n = 0.0;       // mean (n-m+1) mu
  double b_n_sq = 0.0;    // variance
  double theta_n = 0.0;   // E|xi|^3 of one standardized summand
  double berry_esseen = 0.0;
  double positivity = 0.0;  // 2 sum_s T(s) - (2m-1) mu^2 + mu, the n->inf variance slope
};

OccurrenceStats stein_params(const Permutation& sigma, double q, long long n);
OccurrenceStats stein_params(const OverlapPolynomials& ov, long long inv, double q,
                             long long n);

// Exact brute-force variance of N_n next to the closed formula.
struct VariancePair {
  double exact = 0.0;
  double formula = 0.0;
};
VariancePair exact_variance_check(const Permutation& sigma, double q, int n,
                                  const BruteForceCaps& caps = {});

double normal_cdf(double z);

struct CltBin {
  long long k = 0;          // occurrence count
  long long count = 0;      // samples with N_n = k
  double empirical_cdf = 0.0;
  double normal_cdf = 0.0;  // Phi((k - a_n)/b_n)
};

struct CltReport {
  OccurrenceStats stats;
  long long samples = 0;
  uint64_t seed = 0;
  int streams = 1;
  double empirical_mean = 0.0;
  double empirical_variance = 0.0;
  double ks_distance = 0.0;  // empirical CDF of (N_n - a_n)/b_n against Phi
  std::vector<CltBin> histogram;
};

CltReport clt_experiment(const Permutation& sigma, double q, int n, long long samples,
                         uint64_t seed, int streams = 1);

struct StdDevCrossing {
  std::string pattern_a, pattern_b;
  double x = 0.0, q = 0.0, value = 0.0;  // value = common b_n at the crossing
};

struct StdDevComparison {
  std::vector<double> xs, qs;
  std::vector<std::string> patterns;
  std::vector<std::vector<double>> b;  // b[p][i] for pattern p at grid point i
  std::vector<StdDevCrossing> crossings;
};

/* b_n(sigma, q) for each pattern on an x-grid, plus every pairwise
 * crossing located by bisection in x. Patterns must share one length. */
StdDevComparison stddev_comparison(const std::vector<Permutation>& patterns, long long n,
                                   double x_lo = -0.99, double x_hi = 0.99,
                                   int points = 201);

struct ChiSquareResult {
  double statistic = 0.0;
  long long dof = 0;
  double p_value = 0.0;
};

// Goodness of fit of the sampler against the exact distribution on S_n,
// one cell per permutation.
ChiSquareResult chi_square_mallows(int n, double q, long long draws, uint64_t seed,
                                   int streams = 1);

}  // namespace mallows
