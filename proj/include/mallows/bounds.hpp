#pragma once

#include <optional>
#include <vector>

#include "mallows/perm.hpp"
#include "mallows/qpoly.hpp"

namespace mallows {

// mu(sigma, q) = q^{inv(sigma)} / [m]_q!, the single-window occurrence
// probability.
double window_probability(int m, long long inv, double q);
double window_probability(const Permutation& sigma, double q);

/* Numerator polynomials of T(s, sigma, q) = sum_{tau in Ov_s} q^{inv(tau)}
 * over [2m-s]_q!, for s = 1..m-1. Enumerated once per pattern; evaluating
 * at many q values is then cheap. */
struct OverlapPolynomials {
  int m = 0;
  std::vector<QPoly> numerator;  // index s-1
  double T(int s, double q) const;
  double T_sum(double q) const;  // sum over s = 1..m-1
};

OverlapPolynomials overlap_polynomials(const Permutation& sigma);

// T(s, sigma, q) computed directly from the overlap set.
double overlap_probability_T(const Permutation& sigma, int s, double q);

// rho(sigma, q) <= (1 - mu)^{1/m}; depends on sigma only through m and
// inv(sigma).
double upper_bound_generic(int m, long long inv, double q);
double upper_bound_generic(const Permutation& sigma, double q);

// Suen-inequality bound exp(-mu + e^{4(m-1)mu} sum_s T(s)); can exceed 1.
double upper_bound_suen(const Permutation& sigma, double q);
double upper_bound_suen(const OverlapPolynomials& ov, long long inv, double q);

// Local-lemma bound with the closed-form feasible point; absent when the
// discriminant goes negative or mu e^f leaves (0,1).
std::optional<double> lower_bound_analytic(int m, long long inv, double q);
std::optional<double> lower_bound_analytic(const Permutation& sigma, double q);

// Local-lemma bound 1 - z with z the smallest root of z(1-z)^{m-1} = mu;
// absent when mu exceeds the feasibility maximum (1/m)(1-1/m)^{m-1}.
std::optional<double> lower_bound_numeric(int m, long long inv, double q);
std::optional<double> lower_bound_numeric(const Permutation& sigma, double q);

// Pair-overlap expectation Delta = sum_s (n-2m+1+s) T(s, sigma, q).
double suen_delta(const Permutation& sigma, double q, int n);

struct BoundSet {
  double q = 0.0;
  double mu = 0.0;
  std::vector<double> T;  // index s-1; empty in universal (m, inv) mode
  double upper_generic = 0.0;
  std::optional<double> upper_suen;  // absent in universal mode
  bool suen_above_one = false;
  std::optional<double> lower_analytic;
  std::optional<double> lower_numeric;
};

BoundSet compute_bounds(const Permutation& sigma, double q);
BoundSet compute_bounds(const OverlapPolynomials& ov, long long inv, double q);
BoundSet compute_bounds_universal(int m, long long inv, double q);

}  // namespace mallows
