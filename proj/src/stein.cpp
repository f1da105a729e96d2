#include "mallows/stein.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <map>
#include <stdexcept>

#include "mallows/qcalc.hpp"
#include "mallows/sampler.hpp"

namespace mallows {

OccurrenceStats stein_params(const OverlapPolynomials& ov, long long inv, double q,
                             long long n) {
  const int m = ov.m;
  if (m < 3) throw std::invalid_argument("stein_params: requires m >= 3");
  if (n < 2 * m - 1) throw std::invalid_argument("stein_params: requires n >= 2m-1");
  OccurrenceStats st;
  st.m = m;
  st.n = n;
  st.mu = window_probability(m, inv, q);
  st.a_n = static_cast<double>(n - m + 1) * st.mu;
  double var = static_cast<double>(n - m + 1) * st.mu * (1.0 - st.mu);
  double tsum = 0.0;
  for (int s = 1; s <= m - 1; ++s) {
    const double Ts = ov.T(s, q);
    tsum += Ts;
    var += 2.0 * static_cast<double>(n - 2 * m + 1 + s) * (Ts - st.mu * st.mu);
  }
  st.b_n_sq = var;
  const double b3 = std::pow(var, 1.5);
  const double mu = st.mu;
  st.theta_n = (mu * std::pow(1.0 - mu, 3) + (1.0 - mu) * std::pow(mu, 3)) / b3;
  const double c = 10.0 * (m - 1) + 1.0;
  st.berry_esseen = 75.0 * c * c * static_cast<double>(n - m + 1) * st.theta_n;
  st.positivity = 2.0 * tsum - (2.0 * m - 1.0) * mu * mu + mu;
  return st;
}

OccurrenceStats stein_params(const Permutation& sigma, double q, long long n) {
  return stein_params(overlap_polynomials(sigma), inversions(sigma), q, n);
}

VariancePair exact_variance_check(const Permutation& sigma, double q, int n,
                                  const BruteForceCaps& caps) {
  const int m = sigma.size();
  if (n < 2 * m - 1) throw std::invalid_argument("exact_variance_check: requires n >= 2m-1");
  const auto dist = occurrence_distribution(sigma, n, caps);
  const double z = q_factorial(n, q);
  double mean = 0.0, second = 0.0;
  for (const auto& [k, poly] : dist) {
    const double p = poly.evaluate(q) / z;
    mean += k * p;
    second += static_cast<double>(k) * k * p;
  }
  VariancePair out;
  out.exact = second - mean * mean;
  out.formula = stein_params(sigma, q, n).b_n_sq;
  return out;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

CltReport clt_experiment(const Permutation& sigma, double q, int n, long long samples,
                         uint64_t seed, int streams) {
  if (samples < 1) throw std::invalid_argument("clt_experiment: samples must be >= 1");
  if (streams < 1) throw std::invalid_argument("clt_experiment: streams must be >= 1");
  CltReport rep;
  rep.stats = stein_params(sigma, q, n);
  rep.samples = samples;
  rep.seed = seed;
  rep.streams = streams;

  std::map<long long, long long> counts;
  double sum = 0.0, sumsq = 0.0;
  std::vector<int> buf;
  for (int r = 0; r < streams; ++r) {
    long long quota = samples / streams + (r < samples % streams ? 1 : 0);
    MallowsSampler sampler(n, q, stream_seed(seed, r));
    for (long long s = 0; s < quota; ++s) {
      sampler.draw_entries(buf);
      const int c = count_occurrences(Permutation{buf}, sigma);
      counts[c] += 1;
      sum += c;
      sumsq += static_cast<double>(c) * c;
    }
  }
  rep.empirical_mean = sum / samples;
  rep.empirical_variance = sumsq / samples - rep.empirical_mean * rep.empirical_mean;

  /* Distance taken at integer arguments, sup_k |F_emp(k) - Phi(z_k)|,
   * with no continuity correction: the direct empirical version of the
   * quantity the normal-approximation bound controls. */
  const double a = rep.stats.a_n;
  const double b = std::sqrt(rep.stats.b_n_sq);
  double ks = 0.0;
  long long cum = 0;
  const long long kmin = counts.begin()->first, kmax = counts.rbegin()->first;
  auto it = counts.begin();
  for (long long k = kmin; k <= kmax; ++k) {
    if (it != counts.end() && it->first == k) {
      cum += it->second;
      rep.histogram.push_back(
          CltBin{k, it->second, static_cast<double>(cum) / samples, normal_cdf((k - a) / b)});
      ++it;
    }
    const double phi = normal_cdf((k - a) / b);
    ks = std::max(ks, std::fabs(static_cast<double>(cum) / samples - phi));
  }
  rep.ks_distance = ks;
  return rep;
}

StdDevComparison stddev_comparison(const std::vector<Permutation>& patterns, long long n,
                                   double x_lo, double x_hi, int points) {
  if (patterns.empty()) throw std::invalid_argument("stddev_comparison: no patterns");
  const int m = patterns[0].size();
  for (const auto& p : patterns)
    if (p.size() != m)
      throw std::invalid_argument("stddev_comparison: patterns must share one length");
  if (n < 2 * m - 1) throw std::invalid_argument("stddev_comparison: requires n >= 2m-1");
  if (points < 2) throw std::invalid_argument("stddev_comparison: needs >= 2 grid points");

  StdDevComparison out;
  std::vector<OverlapPolynomials> ovs;
  std::vector<long long> invs;
  for (const auto& p : patterns) {
    out.patterns.push_back(p.to_string());
    ovs.push_back(overlap_polynomials(p));
    invs.push_back(inversions(p));
  }
  const auto b_at = [&](size_t pi, double x) {
    const double q = (1.0 + x) / (1.0 - x);
    return std::sqrt(stein_params(ovs[pi], invs[pi], q, n).b_n_sq);
  };

  out.b.assign(patterns.size(), {});
  for (int i = 0; i < points; ++i) {
    const double x = x_lo + (x_hi - x_lo) * i / (points - 1);
    out.xs.push_back(x);
    out.qs.push_back((1.0 + x) / (1.0 - x));
    for (size_t pi = 0; pi < patterns.size(); ++pi) out.b[pi].push_back(b_at(pi, x));
  }

  for (size_t i = 0; i < patterns.size(); ++i) {
    for (size_t j = i + 1; j < patterns.size(); ++j) {
      for (int g = 0; g + 1 < points; ++g) {
        const double d0 = out.b[i][g] - out.b[j][g];
        const double d1 = out.b[i][g + 1] - out.b[j][g + 1];
        if (d0 == 0.0 || d0 * d1 >= 0.0) continue;
        double lo = out.xs[g], hi = out.xs[g + 1];
        double dlo = d0;
        for (int it = 0; it < 100; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double dm = b_at(i, mid) - b_at(j, mid);
          if (dlo * dm <= 0.0) hi = mid;
          else {
            lo = mid;
            dlo = dm;
          }
        }
        StdDevCrossing cr;
        cr.pattern_a = out.patterns[i];
        cr.pattern_b = out.patterns[j];
        cr.x = 0.5 * (lo + hi);
        cr.q = (1.0 + cr.x) / (1.0 - cr.x);
        cr.value = b_at(i, cr.x);
        out.crossings.push_back(cr);
      }
    }
  }
  return out;
}

namespace {

// Lexicographic rank of a permutation, for indexing the S_n cells.
long long lehmer_rank(const std::vector<int>& p) {
  const int n = static_cast<int>(p.size());
  long long rank = 0;
  long long fact = 1;
  for (int k = 2; k <= n; ++k) fact *= k;
  for (int i = 0; i < n; ++i) {
    fact /= (n - i);
    int smaller = 0;
    for (int j = i + 1; j < n; ++j)
      if (p[j] < p[i]) ++smaller;
    rank += smaller * fact;
  }
  return rank;
}

}  // namespace

ChiSquareResult chi_square_mallows(int n, double q, long long draws, uint64_t seed,
                                   int streams) {
  if (n < 1 || n > 8) throw std::invalid_argument("chi_square_mallows: supported for n <= 8");
  long long cells = 1;
  for (int k = 2; k <= n; ++k) cells *= k;

  // exact cell probabilities q^{inv} / [n]_q!
  std::vector<double> expected(cells);
  const double z = q_factorial(n, q);
  for_each_permutation(n, [&](const Permutation& p) {
    expected[lehmer_rank(p.entries())] =
        std::pow(q, static_cast<double>(inversions(p))) / z;
  });

  std::vector<long long> observed(cells, 0);
  std::vector<int> buf;
  for (int r = 0; r < streams; ++r) {
    long long quota = draws / streams + (r < draws % streams ? 1 : 0);
    MallowsSampler sampler(n, q, stream_seed(seed, r));
    for (long long s = 0; s < quota; ++s) {
      sampler.draw_entries(buf);
      observed[lehmer_rank(buf)] += 1;
    }
  }

  double stat = 0.0;
  for (long long c = 0; c < cells; ++c) {
    const double e = expected[c] * draws;
    const double d = observed[c] - e;
    stat += d * d / e;
  }
  ChiSquareResult res;
  res.statistic = stat;
  res.dof = cells - 1;
  res.p_value = boost::math::gamma_q(0.5 * res.dof, 0.5 * stat);
  return res;
}

}  // namespace mallows
