#include "mallows/growth.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mallows/errors.hpp"
#include "mallows/qcalc.hpp"

namespace mallows {

namespace {
constexpr double kTailSwitch = 0.97;  // below this q the tail-corrected forms are used
constexpr double kEps = 2.3e-16;
}  // namespace

const char* to_string(GrowthMethod m) {
  switch (m) {
    case GrowthMethod::truncated: return "truncated";
    case GrowthMethod::tail_corrected_monotone: return "tail-corrected-monotone";
    case GrowthMethod::tail_corrected_nonoverlap: return "tail-corrected-nonoverlap";
    case GrowthMethod::no_zero_found: return "no-zero-found";
  }
  return "?";
}

const char* to_string(PatternTransform t) {
  switch (t) {
    case PatternTransform::none: return "none";
    case PatternTransform::reverse: return "reverse";
    case PatternTransform::complement: return "complement";
    case PatternTransform::reverse_complement: return "reverse-complement";
  }
  return "?";
}

std::optional<double> smallest_positive_zero(const std::function<double(double)>& f,
                                             double z_lo, double z_hi, double step,
                                             double tol) {
  double z = z_lo;
  double fz = f(z);
  while (z < z_hi) {
    const double z2 = std::min(z + step, z_hi);
    const double f2 = f(z2);
    if (std::isnan(f2)) break;
    if (fz == 0.0) return z;
    if (fz * f2 < 0.0) {
      double a = z, b = z2, fa = fz;
      while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (fa * fm < 0.0) {
          b = mid;
        } else {
          a = mid;
          fa = fm;
        }
      }
      return 0.5 * (a + b);
    }
    z = z2;
    fz = f2;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// monotone evaluators

MonotoneOmega::MonotoneOmega(int m, double q, int terms) : m_(m), terms_(terms), q_(q) {
  if (m < 2) throw std::invalid_argument("MonotoneOmega: requires m >= 2");
  if (q <= 0.0) throw std::invalid_argument("MonotoneOmega: q must be > 0");
}

double MonotoneOmega::value(double z, double* max_term) const {
  double tot = 0.0;
  double a = 1.0;  // a_n = z^n / [n]_q!, advanced by a *= z / [n]_q
  double peak = 1.0;
  long n = 0;
  for (int j = 0; j < terms_; ++j) {
    tot += a;
    peak = std::max(peak, std::fabs(a));
    a *= z / q_int(n + 1, q_);
    ++n;
    tot -= a;
    peak = std::max(peak, std::fabs(a));
    for (int t = 0; t < m_ - 1; ++t) {
      a *= z / q_int(n + 1, q_);
      ++n;
    }
    if (a == 0.0) break;
  }
  if (max_term) {
    /* absolute uncertainty: rounding floor plus the geometric majorant of
     * the omitted tail; a holds the first omitted term, and the step
     * ratios z/[n]_q only shrink from here */
    const double rr = z / q_int(n + 1, q_);
    const double tail = rr < 0.97 ? std::fabs(a) / (1.0 - rr)
                                  : std::numeric_limits<double>::infinity();
    *max_term = std::max(kEps * peak, tail);
  }
  return tot;
}

double MonotoneOmega::operator()(double z) const { return value(z, nullptr); }

MonotoneTailOmega::MonotoneTailOmega(int m, double q, int terms)
    : m_(m), terms_(terms), q_(q) {
  if (m < 2) throw std::invalid_argument("MonotoneTailOmega: requires m >= 2");
  if (q <= 0.0 || q >= 1.0)
    throw std::domain_error("MonotoneTailOmega: requires 0 < q < 1");

  /* delta_n = c_q - 1/prod_{i<=n}(1-q^i) is computed from suffix sums of
   * log1p(-q^i) so that it keeps full relative accuracy even when it is
   * far below c_q * epsilon; a naive subtraction would drown the tail
   * terms in rounding noise. */
  const int n_max = m * terms + 1;
  const double lq = std::log(q);
  const int decay = static_cast<int>(std::ceil(-700.0 / lq));  // q^i underflows past this
  const int i_hi = std::max(n_max + 1, decay);
  std::vector<double> suffix(n_max + 2, 0.0);  // suffix[n] = sum_{i>n} log1p(-q^i)
  double run = 0.0;
  for (int i = i_hi; i >= 1; --i) {
    const double li = static_cast<double>(i) * lq;
    run += std::log1p(li > -708.0 ? -std::exp(li) : 0.0);
    if (i - 1 <= n_max + 1) suffix[i - 1] = run;
  }
  cq_ = std::exp(-suffix[0]);
  delta_.assign(n_max + 1, 0.0);
  qint_.assign(n_max + 1, 0.0);
  double e = 1.0;  // 1/prod_{i<=n}(1-q^i)
  double qn = 1.0;
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) {
      qn *= q;
      e /= (1.0 - qn);
      qint_[n] = (1.0 - qn) / (1.0 - q);
    }
    delta_[n] = e * std::expm1(-suffix[n]);
  }

  /* Reach of the defect form. Its truncation error after the geometric
   * u-tail is ~ (c_q q/(1-q)) (q^2 y)^{Km}, and its rounding floor is
   * eps c_q; both must stay tiny, else only the direct branch (y <= 0.9)
   * is usable. The continuation itself needs qy < 1. */
  double y_max = 0.9;
  if (kEps * cq_ <= 1e-10) {
    const double L = std::log(1e-12 * (1.0 - q) / (cq_ * q));
    const double y_trust = std::exp(L / (static_cast<double>(m) * terms) - 2.0 * lq);
    y_max = std::max(y_max, std::min(0.98 / q, y_trust));
  }
  trusted_z_hi_ = y_max / (1.0 - q);
}

double MonotoneTailOmega::trusted_z_hi() const { return trusted_z_hi_; }

double MonotoneTailOmega::value(double z, double* max_term) const {
  const double y = z * (1.0 - q_);
  double geo_y = 1.0;
  for (int i = 1; i < m_; ++i) geo_y = geo_y * y + 1.0;

  if (y <= 0.9) {
    /* Direct summation: the series terms a_n = z^n/[n]_q! stay well clear
     * of the huge c_q that the defect form would cancel against near
     * q -> 1, and the resummed tail c_q y^{Km}/geo is vanishing here. */
    double tot = 0.0;
    double a = 1.0;
    double peak = 1.0;
    long n = 0;
    for (int j = 0; j < terms_; ++j) {
      tot += a;
      peak = std::max(peak, a);
      a *= z / qint_[n + 1];
      ++n;
      tot -= a;
      peak = std::max(peak, a);
      for (int t = 0; t < m_ - 1; ++t) {
        a *= z / qint_[n + 1];
        ++n;
      }
      if (a == 0.0) break;
    }
    tot += cq_ * std::pow(y, static_cast<double>(m_) * terms_) / geo_y;
    if (max_term) *max_term = kEps * peak;
    return tot;
  }

  // defect form: c_q/geo(y) - sum_j (delta_{jm} y^{jm} - delta_{jm+1} y^{jm+1})
  double tot = cq_ / geo_y;
  double peak = tot;
  double ypow = 1.0;
  const double ym = std::pow(y, static_cast<double>(m_));
  for (int j = 0; j < terms_; ++j) {
    const double pair = ypow * (delta_[j * m_] - y * delta_[j * m_ + 1]);
    tot -= pair;
    peak = std::max(peak, std::fabs(pair));
    ypow *= ym;
    if (ypow == 0.0) break;
  }

  // geometric estimate of the dropped defect terms, u = q y < 1 here
  const double u = q_ * y;
  double geo_u = 1.0;
  for (int i = 1; i < m_; ++i) geo_u = geo_u * u + 1.0;
  tot -= cq_ * q_ / (1.0 - q_) * std::pow(u, static_cast<double>(m_) * terms_) / geo_u;
  if (max_term) *max_term = kEps * peak;
  return tot;
}

// ---------------------------------------------------------------------------
// non-overlapping evaluators

namespace {

void require_nonoverlap_head1(const Permutation& sigma, const char* who) {
  if (sigma.size() < 3 || sigma[0] != 1 || !is_nonoverlapping(sigma))
    throw UnsupportedPattern(std::string(who) +
                             ": pattern must be non-overlapping with first entry 1");
}

}  // namespace

NonOverlapOmega::NonOverlapOmega(const Permutation& sigma, double q, int terms)
    : m_(sigma.size()), b_(sigma[sigma.size() - 1]), terms_(terms), q_(q) {
  require_nonoverlap_head1(sigma, "NonOverlapOmega");
  if (q <= 0.0) throw std::invalid_argument("NonOverlapOmega: q must be > 0");
  qinv_ = std::pow(q, static_cast<double>(inversions(sigma)));
  fact_mb_ = q_factorial(m_ - b_, q);
  h1_den_ = q_factorial(m_, q);
}

double NonOverlapOmega::value(double z, double* max_term) const {
  double tot = 1.0 - z;
  double h = qinv_ * std::pow(z, static_cast<double>(m_)) / h1_den_;
  double peak = 1.0;
  double sign = -1.0;  // (-1)^k
  const double zstep = std::pow(z, static_cast<double>(m_ - 1));
  for (int k = 1; k <= terms_; ++k) {
    tot -= sign * h;
    peak = std::max(peak, h);
    double ratio = qinv_ * zstep / fact_mb_;
    ratio *= q_int(static_cast<long>(k) * (m_ - 1) + 1, q_);
    for (int i = 0; i < b_; ++i) ratio /= q_int(static_cast<long>(k) * (m_ - 1) + m_ - i, q_);
    h *= ratio;
    sign = -sign;
    if (h == 0.0) break;
  }
  if (max_term) {
    // h holds the first omitted term; bound its successors by the larger
    // of the next step ratio and the k -> infinity ratio limit
    double rr = qinv_ * zstep / fact_mb_;
    rr *= q_int(static_cast<long>(terms_ + 1) * (m_ - 1) + 1, q_);
    for (int i = 0; i < b_; ++i)
      rr /= q_int(static_cast<long>(terms_ + 1) * (m_ - 1) + m_ - i, q_);
    if (q_ < 1.0) {
      const double rlim =
          qinv_ * zstep * std::pow(1.0 - q_, static_cast<double>(b_ - 1)) / fact_mb_;
      rr = std::max(rr, rlim);
    }
    const double tail = rr < 0.97 ? std::fabs(h) / (1.0 - rr)
                                  : std::numeric_limits<double>::infinity();
    *max_term = std::max(kEps * peak, tail);
  }
  return tot;
}

double NonOverlapOmega::operator()(double z) const { return value(z, nullptr); }

NonOverlapTailOmega::NonOverlapTailOmega(const Permutation& sigma, double q, int terms)
    : m_(sigma.size()), b_(sigma[sigma.size() - 1]), terms_(terms), q_(q) {
  require_nonoverlap_head1(sigma, "NonOverlapTailOmega");
  if (q <= 0.0 || q >= 1.0)
    throw std::domain_error("NonOverlapTailOmega: requires 0 < q < 1");
  qinv_ = std::pow(q, static_cast<double>(inversions(sigma)));
  fact_mb_ = q_factorial(m_ - b_, q);
  h1_den_ = q_factorial(m_, q);
  const double cq = tail_constant_cq(q);
  const double d = tail_constant_d(q, m_, b_);
  pref_per_z_ = cq * std::pow(1.0 - q, static_cast<double>(m_ + 1 - b_)) * fact_mb_ / d;
  r_per_zpow_ = qinv_ * std::pow(1.0 - q, static_cast<double>(b_ - 1)) / fact_mb_;
}

double NonOverlapTailOmega::trusted_z_hi() const {
  return std::pow(0.95 / r_per_zpow_, 1.0 / (m_ - 1));
}

double NonOverlapTailOmega::value(double z, double* max_term) const {
  double tot = 1.0 - z;
  double h = qinv_ * std::pow(z, static_cast<double>(m_)) / h1_den_;
  double sign = -1.0;
  double peak = 1.0;
  const double zstep = std::pow(z, static_cast<double>(m_ - 1));
  for (int k = 1; k <= terms_ - 1; ++k) {
    tot -= sign * h;
    peak = std::max(peak, h);
    double ratio = qinv_ * zstep / fact_mb_;
    ratio *= q_int(static_cast<long>(k) * (m_ - 1) + 1, q_);
    for (int i = 0; i < b_; ++i) ratio /= q_int(static_cast<long>(k) * (m_ - 1) + m_ - i, q_);
    h *= ratio;
    sign = -sign;
  }
  const double r = r_per_zpow_ * zstep;
  tot -= pref_per_z_ * z * std::pow(-r, static_cast<double>(terms_)) / (1.0 + r);
  if (max_term) *max_term = kEps * peak;
  return tot;
}

// ---------------------------------------------------------------------------
// root finding with noise guards

namespace {

struct RootScan {
  std::optional<double> z0;
  double residual = 0.0;
  std::pair<double, double> bracket{0.0, 0.0};
};

/* Scan with a per-point uncertainty estimate (rounding floor plus omitted
 * series tail): stops once the function value can no longer be
 * distinguished from evaluation error, so a truncated series does not
 * manufacture sign changes out of noise. */
RootScan guarded_scan(const std::function<double(double, double*)>& f, double z_lo,
                      double z_hi, double step, double tol) {
  RootScan out;
  out.bracket = {z_lo, z_hi};
  double z = z_lo;
  double fz = f(z, nullptr);
  while (z < z_hi) {
    const double z2 = std::min(z + step, z_hi);
    double err = 0.0;
    const double f2 = f(z2, &err);
    if (std::isnan(f2) || std::isinf(err) ||
        (err > 1e-9 && std::fabs(f2) < 10.0 * err)) {
      out.bracket.second = z;
      return out;  // left the trusted region without a sign change
    }
    if (fz * f2 < 0.0) {
      double a = z, b = z2, fa = fz;
      while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid, nullptr);
        if (fm == 0.0) { a = b = mid; break; }
        if (fa * fm < 0.0) {
          b = mid;
        } else {
          a = mid;
          fa = fm;
        }
      }
      const double root = 0.5 * (a + b);
      out.z0 = root;
      out.residual = std::fabs(f(root, nullptr));
      return out;
    }
    z = z2;
    fz = f2;
  }
  return out;
}

GrowthRateResult finish(RootScan scan, GrowthMethod method, int truncation, double q) {
  GrowthRateResult r;
  r.solved_q = q;
  r.truncation = truncation;
  r.bracket = scan.bracket;
  if (scan.z0) {
    r.z0 = scan.z0;
    r.rho = 1.0 / *scan.z0;
    r.residual = scan.residual;
    r.method = method;
  } else {
    r.rho = 0.0;
    r.method = GrowthMethod::no_zero_found;
  }
  return r;
}

GrowthRateResult solve_monotone(int m, double q, const GrowthOptions& opts) {
  const int K = opts.monotone_terms;
  if (q >= kTailSwitch || !opts.tail_correction) {
    MonotoneOmega omega(m, q, K);
    auto f = [&](double z, double* peak) { return omega.value(z, peak); };
    return finish(guarded_scan(f, 1.0, 50.0, opts.scan_step, opts.bisect_tol),
                  GrowthMethod::truncated, K, q);
  }
  MonotoneTailOmega omega(m, q, K);
  auto f = [&](double z, double* peak) { return omega.value(z, peak); };
  const double hi = std::min(omega.trusted_z_hi(), 500.0);
  return finish(guarded_scan(f, 1.0, hi, opts.scan_step, opts.bisect_tol),
                GrowthMethod::tail_corrected_monotone, K, q);
}

GrowthRateResult solve_nonoverlap(const Permutation& sigma, double q,
                                  const GrowthOptions& opts) {
  const int K = opts.nonoverlap_terms;
  if (q >= kTailSwitch || !opts.tail_correction) {
    NonOverlapOmega omega(sigma, q, K);
    auto f = [&](double z, double* peak) { return omega.value(z, peak); };
    return finish(guarded_scan(f, 1.0, 8.0, opts.scan_step, opts.bisect_tol),
                  GrowthMethod::truncated, K, q);
  }
  NonOverlapTailOmega omega(sigma, q, K);
  auto f = [&](double z, double* peak) { return omega.value(z, peak); };
  const double hi = std::min(omega.trusted_z_hi(), 500.0);
  return finish(guarded_scan(f, 1.0, hi, opts.scan_step, opts.bisect_tol),
                GrowthMethod::tail_corrected_nonoverlap, K, q);
}

GrowthRateResult solve_bruteforce(const Permutation& sigma, double q,
                                  const GrowthOptions& opts) {
  const int N = std::min(opts.bruteforce_order, opts.caps.clusters);
  const PowerSeries w = omega_bruteforce(sigma, q, N, opts.caps);
  // last kept coefficient, for a divergence guard during the scan
  int last = 0;
  for (int n = 0; n <= w.order(); ++n)
    if (w.coeffs[n] != 0.0) last = n;
  const double wlast = std::fabs(w.coeffs[last]);
  auto f = [&](double z, double* peak) {
    double acc = 0.0;
    for (int n = w.order(); n >= 0; --n) acc = acc * z + w.coeffs[n];
    if (peak) {
      // once the dropped tail is no longer small the series says nothing
      const bool diverged = wlast * std::pow(z, static_cast<double>(last)) > 0.05;
      *peak = diverged ? std::numeric_limits<double>::infinity() : 0.0;
    }
    return acc;
  };
  return finish(guarded_scan(f, 1.0, 8.0, opts.scan_step, opts.bisect_tol),
                GrowthMethod::truncated, N, q);
}

}  // namespace

GrowthRateResult growth_rate(const Permutation& sigma, double q, const GrowthOptions& opts) {
  if (q <= 0.0) throw std::invalid_argument("growth_rate: q must be > 0");
  const int m = sigma.size();
  if (m < 2) throw UnsupportedPattern("growth_rate: pattern must have length >= 2");

  if (is_monotone_increasing(sigma)) return solve_monotone(m, q, opts);
  if (is_monotone_decreasing(sigma)) {
    auto r = solve_monotone(m, 1.0 / q, opts);
    r.transform = PatternTransform::reverse;
    return r;
  }

  const auto qualifies = [](const Permutation& s) {
    return s.size() >= 3 && s[0] == 1 && is_nonoverlapping(s);
  };
  if (qualifies(sigma)) return solve_nonoverlap(sigma, q, opts);
  if (const Permutation rc = complement(reverse(sigma)); qualifies(rc)) {
    auto r = solve_nonoverlap(rc, q, opts);  // same q: inv is preserved
    r.transform = PatternTransform::reverse_complement;
    return r;
  }
  if (const Permutation rev = reverse(sigma); qualifies(rev)) {
    auto r = solve_nonoverlap(rev, 1.0 / q, opts);
    r.transform = PatternTransform::reverse;
    return r;
  }
  if (const Permutation comp = complement(sigma); qualifies(comp)) {
    auto r = solve_nonoverlap(comp, 1.0 / q, opts);
    r.transform = PatternTransform::complement;
    return r;
  }
  return solve_bruteforce(sigma, q, opts);
}

double finite_n_probability(const Permutation& sigma, double q, int n,
                            const GrowthOptions& opts) {
  if (n < 0) throw std::invalid_argument("finite_n_probability: n must be >= 0");
  const int m = sigma.size();
  if (n < m) return 1.0;

  const auto via_series = [&](const PowerSeries& w) {
    return series_reciprocal(w).coeffs[n];
  };
  if (is_monotone_increasing(sigma)) return via_series(omega_monotone(m, q, n));
  if (is_monotone_decreasing(sigma)) return via_series(omega_monotone(m, 1.0 / q, n));

  const auto qualifies = [](const Permutation& s) {
    return s.size() >= 3 && s[0] == 1 && is_nonoverlapping(s);
  };
  if (qualifies(sigma)) return via_series(omega_nonoverlap(sigma, q, n));
  if (const Permutation rc = complement(reverse(sigma)); qualifies(rc))
    return via_series(omega_nonoverlap(rc, q, n));
  if (const Permutation rev = reverse(sigma); qualifies(rev))
    return via_series(omega_nonoverlap(rev, 1.0 / q, n));
  if (const Permutation comp = complement(sigma); qualifies(comp))
    return via_series(omega_nonoverlap(comp, 1.0 / q, n));

  if (n <= opts.caps.clusters) return via_series(omega_bruteforce(sigma, q, n, opts.caps));
  throw CapacityError("finite_n_probability: pattern has no closed route and n exceeds the cap");
}

double finite_n_rate(const Permutation& sigma, double q, int n, const GrowthOptions& opts) {
  if (n < 1) throw std::invalid_argument("finite_n_rate: n must be >= 1");
  const double p = finite_n_probability(sigma, q, n, opts);
  return std::pow(p, 1.0 / n);
}

double x_from_q(double q) {
  if (q <= 0.0) throw std::invalid_argument("x_from_q: q must be > 0");
  return (q - 1.0) / (q + 1.0);
}

double q_from_x(double x) {
  if (x <= -1.0 || x >= 1.0) throw std::invalid_argument("q_from_x: requires -1 < x < 1");
  return (1.0 + x) / (1.0 - x);
}

}  // namespace mallows
