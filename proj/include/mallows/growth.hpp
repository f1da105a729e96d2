#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "mallows/perm.hpp"
#include "mallows/series.hpp"

namespace mallows {

enum class GrowthMethod {
  truncated,                  // root of the plainly truncated series
  tail_corrected_monotone,    // q < 1 closed form with the c_q tail
  tail_corrected_nonoverlap,  // q < 1 closed form with c_q and d_{q,m,b}
  no_zero_found,              // no sign change in the trusted bracket
};

const char* to_string(GrowthMethod m);

// How the pattern was mapped onto a supported series before solving.
// Reversal and complement flip q to 1/q; reverse-complement keeps q.
enum class PatternTransform { none, reverse, complement, reverse_complement };

const char* to_string(PatternTransform t);

struct GrowthOptions {
  int monotone_terms = 40;     // K: number of (a_{jm} - a_{jm+1}) blocks
  int nonoverlap_terms = 15;   // K: number of cluster terms
  int bruteforce_order = 11;   // z-degree for the enumeration route
  double scan_step = 1e-3;
  double bisect_tol = 1e-13;
  bool tail_correction = true;
  BruteForceCaps caps{};
};

struct GrowthRateResult {
  double rho = 0.0;
  std::optional<double> z0;
  GrowthMethod method = GrowthMethod::no_zero_found;
  PatternTransform transform = PatternTransform::none;
  int truncation = 0;
  double residual = 0.0;
  std::pair<double, double> bracket{0.0, 0.0};
  double solved_q = 0.0;  // q actually handed to the series (1/q under reversal)
};

/* Scans [z_lo, z_hi] in steps for a sign change, then bisects to width
 * tol. Absence of a sign change is a value, not an error. */
std::optional<double> smallest_positive_zero(const std::function<double(double)>& f,
                                             double z_lo, double z_hi,
                                             double step = 1e-3, double tol = 1e-13);

/* Series evaluators used by the root finder. Each keeps per-q constants so
 * repeated evaluation along a scan is cheap. All compute terms by ratio
 * recurrences; no q-factorial quotients appear. */

// Plain truncation of the monotone-pattern series, any q > 0.
class MonotoneOmega {
 public:
  MonotoneOmega(int m, double q, int terms);
  double operator()(double z) const;
  // value plus the magnitude of the largest term met, for noise estimates
  double value(double z, double* max_term) const;

 private:
  int m_, terms_;
  double q_;
};

/* Monotone series for q < 1 with the geometric tail attached. Inside
 * y = z(1-q) <= 0.9 it sums the series directly and adds the resummed
 * tail; past that, where the direct pieces cancel catastrophically, it
 * switches to the algebraically equal defect form
 * c_q / (1+y+...+y^{m-1}) - sum_j (delta_{jm} y^{jm} - delta_{jm+1} y^{jm+1}),
 * delta_n = c_q - 1/prod_{i<=n}(1-q^i), which stays accurate on both
 * sides of the radius y = 1. */
class MonotoneTailOmega {
 public:
  MonotoneTailOmega(int m, double q, int terms);
  double operator()(double z) const { return value(z, nullptr); }
  double value(double z, double* max_term) const;
  double trusted_z_hi() const;  // continuation valid while qy < 1

 private:
  int m_, terms_;
  double q_, cq_, trusted_z_hi_;
  std::vector<double> qint_;   // [n]_q for n <= m*terms + 1
  std::vector<double> delta_;  // c_q - 1/prod_{i<=n}(1-q^i)
};

// Plain truncation of the non-overlapping-pattern series, any q > 0.
class NonOverlapOmega {
 public:
  NonOverlapOmega(const Permutation& sigma, double q, int terms);
  double operator()(double z) const;
  double value(double z, double* max_term) const;

 private:
  int m_, b_, terms_;
  double q_, qinv_, fact_mb_, h1_den_;
};

// Non-overlapping series for q < 1 with the geometric tail attached.
class NonOverlapTailOmega {
 public:
  NonOverlapTailOmega(const Permutation& sigma, double q, int terms);
  double operator()(double z) const { return value(z, nullptr); }
  double value(double z, double* max_term) const;
  double trusted_z_hi() const;  // keeps the tail ratio r below 0.95

 private:
  int m_, b_, terms_;
  double q_, qinv_, fact_mb_, h1_den_, pref_per_z_, r_per_zpow_;
};

// rho(sigma, q) = 1 / z0 with z0 the smallest positive zero of the
// applicable omega form; dispatches on pattern class, using reversal and
// complement symmetries to reach a closed form when possible.
GrowthRateResult growth_rate(const Permutation& sigma, double q,
                             const GrowthOptions& opts = {});

// P_n(sigma, q)^{1/n} through the applicable series route.
double finite_n_rate(const Permutation& sigma, double q, int n,
                     const GrowthOptions& opts = {});

// P_n(sigma, q) itself (used by the CLI overlays and finite_n_rate).
double finite_n_probability(const Permutation& sigma, double q, int n,
                            const GrowthOptions& opts = {});

double x_from_q(double q);  // (q-1)/(q+1)
double q_from_x(double x);  // (1+x)/(1-x)

}  // namespace mallows
