// Acceptance runner: executes every contract check at its pinned tolerance
// and prints one PASS/FAIL line per criterion. Exits nonzero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mallows/bounds.hpp"
#include "mallows/growth.hpp"
#include "mallows/perm.hpp"
#include "mallows/qcalc.hpp"
#include "mallows/sampler.hpp"
#include "mallows/series.hpp"
#include "mallows/stein.hpp"

using namespace mallows;

namespace {

Permutation P(const char* s) { return Permutation::parse(s); }

struct Check {
  long long total = 0;
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& detail) {
    ++total;
    if (!ok) failures.push_back(detail);
  }
  void note(const std::string& text) { notes.push_back(text); }
};

struct Criterion {
  std::string name;
  double budget_seconds;
  std::function<void(Check&)> body;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------------------

void oracle_equivalence(Check& ck) {
  const std::vector<const char*> patterns = {"123", "132", "1234", "1243", "1342", "1432"};
  for (const char* s : patterns) {
    const Permutation sigma = P(s);
    std::vector<QPoly> avoid(10);
    for (int n = 0; n <= 9; ++n) avoid[n] = avoidance_polynomial(sigma, n);
    for (double q : {0.5, 1.0, 2.0}) {
      const PowerSeries f = series_reciprocal(omega_bruteforce(sigma, q, 9));
      for (int n = 1; n <= 9; ++n) {
        const double brute = avoid[n].evaluate(q) / q_factorial(n, q);
        const double diff = std::fabs(f.coeffs[n] - brute);
        ck.require(diff <= 1e-10, std::string(s) + " q=" + fmt(q) + " n=" +
                                      std::to_string(n) + " |cluster-brute|=" + fmt(diff));
      }
    }
  }
}

void route_agreement(Check& ck) {
  for (double q : {0.5, 1.0, 2.0}) {
    for (int m : {3, 4}) {
      const Permutation sigma = Permutation::identity(m);
      const PowerSeries wb = omega_bruteforce(sigma, q, 9);
      const PowerSeries wm = omega_monotone(m, q, 9);
      for (int n = 0; n <= 9; ++n)
        ck.require(std::fabs(wb.coeffs[n] - wm.coeffs[n]) <= 1e-12,
                   "monotone m=" + std::to_string(m) + " q=" + fmt(q) +
                       " n=" + std::to_string(n));
    }
    for (const char* s : {"132", "1243", "1342", "1432"}) {
      const Permutation sigma = P(s);
      const PowerSeries wb = omega_bruteforce(sigma, q, 9);
      const PowerSeries wn = omega_nonoverlap(sigma, q, 9);
      for (int n = 0; n <= 9; ++n)
        ck.require(std::fabs(wb.coeffs[n] - wn.coeffs[n]) <= 1e-12,
                   std::string(s) + " q=" + fmt(q) + " n=" + std::to_string(n));
    }
  }
}

void growth_spot_value(Check& ck) {
  const double rho = growth_rate(P("132"), 0.6447045).rho;
  ck.require(std::fabs(rho - 0.7665452) <= 1e-5,
             "rho(132, 0.6447045) = " + fmt(rho) + ", expected 0.7665452 +- 1e-5");

  // golden-section minimum of rho(132, .) over q
  const auto f = [](double q) { return growth_rate(P("132"), q).rho; };
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.4, b = 1.0;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-7) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  const double qmin = 0.5 * (a + b);
  ck.require(std::fabs(qmin - 0.6447045) <= 1e-3,
             "argmin rho(132, .) = " + fmt(qmin) + ", expected 0.6447045 +- 1e-3");
}

void asymptotic_checks(Check& ck) {
  {
    const double q = 100.0;
    const double rho = growth_rate(P("132"), q).rho;
    const double target = 1.0 - 1.0 / (q * q) + 2.0 / (q * q * q);
    const double diff = std::fabs(rho - target);
    ck.require(diff <= 5.0 * std::pow(q, -4.0),
               "132 at q=100: |rho-(1-q^-2+2q^-3)| = " + fmt(diff) + " > " +
                   fmt(5.0 * std::pow(q, -4.0)));
  }
  {
    const double q = 0.01;
    const double rho = growth_rate(P("132"), q).rho;
    const double target = 1.0 - q + q * q;
    const double diff = std::fabs(rho - target);
    ck.require(diff <= 5.0 * q * q * q, "132 at q=0.01: |rho-(1-q+q^2)| = " + fmt(diff) +
                                            " > " + fmt(5.0 * q * q * q));
  }
  const double q = 2.0;
  for (int m : {4, 5, 6}) {
    const double rho = growth_rate(Permutation::identity(m), q).rho;
    const double target = 1.0 - 1.0 / q_factorial(m, q) + 1.0 / q_factorial(m + 1, q);
    const double allow = 10.0 / q_factorial(m + 2, q);
    const double diff = std::fabs(rho - target);
    ck.require(diff <= allow, "monotone m=" + std::to_string(m) + ": |rho-expansion| = " +
                                  fmt(diff) + " > " + fmt(allow) +
                                  " (next-order term ~3/[m]_q!^2 = " +
                                  fmt(3.0 / std::pow(q_factorial(m, q), 2)) + ")");
  }
}

void supermultiplicativity_and_symmetry(Check& ck) {
  for (const char* s : {"123", "132", "231"}) {
    const Permutation sigma = P(s);
    std::vector<QPoly> polys(10);
    for (int n = 0; n <= 9; ++n) polys[n] = avoidance_polynomial(sigma, n);
    for (double q : {0.5, 1.0, 2.0}) {
      std::vector<double> prob(10);
      for (int n = 0; n <= 9; ++n) prob[n] = polys[n].evaluate(q) / q_factorial(n, q);
      for (int a = 1; a <= 8; ++a)
        for (int b = 1; a + b <= 9; ++b)
          ck.require(prob[a + b] <= prob[a] * prob[b] + 1e-12,
                     std::string(s) + " q=" + fmt(q) + " P_{" + std::to_string(a + b) +
                         "} > P_" + std::to_string(a) + " P_" + std::to_string(b));
    }
  }

  std::vector<Permutation> pats;
  for_each_permutation(3, [&](const Permutation& p) { pats.push_back(p); });
  for_each_permutation(4, [&](const Permutation& p) { pats.push_back(p); });
  std::map<std::string, std::vector<QPoly>> cache;
  const auto polys_of = [&](const Permutation& sig) -> const std::vector<QPoly>& {
    auto [it, fresh] = cache.try_emplace(sig.to_string());
    if (fresh) {
      it->second.resize(9);
      for (int n = 0; n <= 8; ++n) it->second[n] = avoidance_polynomial(sig, n);
    }
    return it->second;
  };
  for (const auto& sigma : pats) {
    const auto& direct = polys_of(sigma);
    const auto& rev = polys_of(reverse(sigma));
    const auto& comp = polys_of(complement(sigma));
    for (double q : {0.5, 2.0}) {
      for (int n = 0; n <= 8; ++n) {
        const double base = direct[n].evaluate(1.0 / q) / q_factorial(n, 1.0 / q);
        const double pr = rev[n].evaluate(q) / q_factorial(n, q);
        const double pc = comp[n].evaluate(q) / q_factorial(n, q);
        ck.require(std::fabs(pr - base) <= 1e-12, sigma.to_string() + " reversal n=" +
                                                      std::to_string(n) + " q=" + fmt(q));
        ck.require(std::fabs(pc - base) <= 1e-12, sigma.to_string() + " complement n=" +
                                                      std::to_string(n) + " q=" + fmt(q));
      }
    }
  }
}

void comparison_theorem(Check& ck) {
  std::vector<QPoly> p132(10), p123(10);
  for (int n = 0; n <= 9; ++n) {
    p132[n] = avoidance_polynomial(P("132"), n);
    p123[n] = avoidance_polynomial(P("123"), n);
  }
  for (double q : {1.0, 1.5, 3.0, 10.0})
    for (int n = 0; n <= 9; ++n) {
      const double lhs = p132[n].evaluate(q) / q_factorial(n, q);
      const double rhs = p123[n].evaluate(q) / q_factorial(n, q);
      ck.require(lhs <= rhs + 1e-12,
                 "P_" + std::to_string(n) + "(132, " + fmt(q) + ") > P_n(123)");
    }
  for (int i = 0; i <= 20; ++i) {
    const double x = 0.9 * i / 20;
    const double q = q_from_x(x);
    const double r132 = growth_rate(P("132"), q).rho;
    const double r123 = growth_rate(P("123"), q).rho;
    ck.require(r132 <= r123 + 1e-6,
               "rho(132, q=" + fmt(q) + ") = " + fmt(r132) + " > rho(123) = " + fmt(r123));
  }
}

void bound_sandwich(Check& ck) {
  // coefficient-exact T-polynomial for 1432 feeding the Suen bound
  const auto ov1432 = overlap_polynomials(P("1432"));
  QPoly t1432;
  for (long e : {6, 7, 8, 8, 9, 9, 10, 10, 11, 12})
    t1432 += QPoly::monomial(static_cast<unsigned>(e));
  ck.require(ov1432.numerator[0] == t1432 && ov1432.numerator[1].is_zero() &&
                 ov1432.numerator[2].is_zero(),
             "T-polynomial of 1432 differs from the tabulated one");

  for (const char* s : {"123", "132", "1243", "1342", "1432"}) {
    const Permutation sigma = P(s);
    const auto ov = overlap_polynomials(sigma);
    const long long inv = inversions(sigma);
    for (int i = 0; i <= 20; ++i) {
      const double x = -0.9 + 1.8 * i / 20;
      const double q = q_from_x(x);
      const double rho = growth_rate(sigma, q).rho;
      const BoundSet bset = compute_bounds(ov, inv, q);
      const double upper = std::min(bset.upper_generic, *bset.upper_suen);
      ck.require(rho <= upper + 1e-6, std::string(s) + " x=" + fmt(x) + ": rho=" +
                                          fmt(rho) + " above upper=" + fmt(upper));
      if (bset.lower_numeric)
        ck.require(*bset.lower_numeric <= rho + 1e-6,
                   std::string(s) + " x=" + fmt(x) + ": lower_numeric=" +
                       fmt(*bset.lower_numeric) + " above rho=" + fmt(rho));
      if (bset.lower_analytic)
        ck.require(*bset.lower_analytic <= rho + 1e-6,
                   std::string(s) + " x=" + fmt(x) + ": lower_analytic above rho");
    }
  }
}

void overlap_tables(Check& ck) {
  using Row = std::pair<const char*, long long>;
  const auto check_table = [&](const char* pattern, int s, const std::vector<Row>& expect) {
    const auto got = overlap_set(P(pattern), s);
    bool ok = got.size() == expect.size();
    if (ok)
      for (size_t i = 0; i < expect.size(); ++i)
        ok = ok && got[i] == P(expect[i].first) && inversions(got[i]) == expect[i].second;
    ck.require(ok, std::string("Ov_") + std::to_string(s) + "(" + pattern +
                       ") differs from the tabulated set");
  };

  check_table("1432", 1,
              {{"1432765", 6},
               {"1532764", 7},
               {"1542763", 8},
               {"1632754", 8},
               {"1642753", 9},
               {"1652743", 10},
               {"1732654", 9},
               {"1742653", 10},
               {"1752643", 11},
               {"1762543", 12}});
  check_table("1432", 2, {});
  check_table("1432", 3, {});

  check_table("1342", 1,
              {{"1342675", 4},
               {"1352674", 5},
               {"1362574", 6},
               {"1372564", 7},
               {"1452673", 6},
               {"1462573", 7},
               {"1472563", 8},
               {"1562473", 8},
               {"1572463", 9},
               {"1672453", 10}});
  check_table("1342", 2, {});

  check_table("2341", 1,
              {{"3452671", 9},
               {"3462571", 10},
               {"3472561", 11},
               {"3562471", 11},
               {"3572461", 12},
               {"3672451", 13},
               {"4562371", 12},
               {"4572361", 13},
               {"4672351", 14},
               {"5672341", 15}});
  check_table("2341", 2, {});

  check_table("2413", 1,
              {{"2514736", 7},
               {"2614735", 8},
               {"2714635", 9},
               {"3514726", 8},
               {"3524716", 9},
               {"3614725", 9},
               {"3624715", 10},
               {"3714625", 10},
               {"3724615", 11}});
  check_table("2413", 2, {{"362514", 9}, {"462513", 10}});
  check_table("2413", 3, {});

  check_table("1243", 1,
              {{"1243576", 2}, {"1253476", 3}, {"1263475", 4}, {"1273465", 5}});
  check_table("1243", 2, {});
}

void variance_formula(Check& ck) {
  const std::vector<std::pair<const char*, int>> cases = {{"132", 7}, {"123", 7}, {"1432", 8}};
  for (const auto& [s, n] : cases) {
    for (double q : {0.5, 1.0, 2.0}) {
      const auto v = exact_variance_check(P(s), q, n);
      const double diff = std::fabs(v.exact - v.formula);
      ck.require(diff <= 1e-9, std::string(s) + " n=" + std::to_string(n) + " q=" + fmt(q) +
                                   ": |exact-formula| = " + fmt(diff));
    }
  }
}

void sampler_exactness(Check& ck) {
  for (double q : {0.5, 1.0, 2.0}) {
    const auto res = chi_square_mallows(4, q, 1000000, 20240809);
    ck.require(res.p_value >= 0.001, "chi-square on S_4 at q=" + fmt(q) + ": stat=" +
                                         fmt(res.statistic) + " p=" + fmt(res.p_value));
    ck.note("chi-square q=" + fmt(q) + ": stat=" + fmt(res.statistic) +
            " dof=" + std::to_string(res.dof) + " p=" + fmt(res.p_value));
  }
}

void clt_reproduction(Check& ck) {
  for (double q : {0.5, 1.0, 2.0}) {
    const auto rep = clt_experiment(P("1432"), q, 1000, 10000, 20240809);
    const double b = std::sqrt(rep.stats.b_n_sq);
    ck.require(rep.ks_distance <= 0.05,
               "KS at q=" + fmt(q) + ": " + fmt(rep.ks_distance) + " > 0.05");
    const double mean_gap = std::fabs(rep.empirical_mean - rep.stats.a_n);
    ck.require(mean_gap <= 4.0 * b / 100.0, "mean at q=" + fmt(q) + ": |mean-a_n| = " +
                                                fmt(mean_gap) + " > " + fmt(4.0 * b / 100.0));
    ck.note("q=" + fmt(q) + ": KS=" + fmt(rep.ks_distance) +
            " berry_esseen=" + fmt(rep.stats.berry_esseen) + " (reported, not tight)");
  }
}

void stddev_numbers(Check& ck) {
  const auto ov2413 = overlap_polynomials(P("2413"));
  const auto ov1432 = overlap_polynomials(P("1432"));
  const auto ov2341 = overlap_polynomials(P("2341"));
  const auto b100 = [&](const OverlapPolynomials& ov, long long inv, double x) {
    return std::sqrt(stein_params(ov, inv, q_from_x(x), 100).b_n_sq);
  };
  // crossing of b_100(2413, .) and b_100(1432, .), located in x
  double lo = -0.5, hi = 0.1;
  auto g = [&](double x) { return b100(ov2413, 3, x) - b100(ov1432, 3, x); };
  double glo = g(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (glo * gm <= 0.0) hi = mid;
    else {
      lo = mid;
      glo = gm;
    }
  }
  const double xc = 0.5 * (lo + hi);
  const double qc = q_from_x(xc);
  const double value = b100(ov1432, 3, xc);
  ck.require(std::fabs(qc - 0.5974755) <= 1e-4,
             "crossing q = " + fmt(qc) + ", expected 0.5974755 +- 1e-4");
  ck.require(std::fabs(value - 1.641219) <= 1e-4,
             "crossing value = " + fmt(value) + ", expected 1.641219 +- 1e-4");

  // limit ratio at n = 10^6
  const auto st = stein_params(ov1432, 3, 0.5987148, 1000000);
  const double ratio = std::sqrt(st.b_n_sq / 1e6);
  ck.require(std::fabs(ratio - 0.1667240) <= 1e-4,
             "b_n(1432)/sqrt(n) = " + fmt(ratio) + ", expected 0.1667240 +- 1e-4");

  // strict dominance of 2413 over 2341 across the grid
  for (int i = 0; i < 201; ++i) {
    const double x = -0.99 + 1.98 * i / 200;
    ck.require(b100(ov2413, 3, x) > b100(ov2341, 3, x),
               "b_100(2413) <= b_100(2341) at x=" + fmt(x));
  }
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {"oracle-equivalence", 120.0, oracle_equivalence},
      {"closed-form-route-agreement", 120.0, route_agreement},
      {"growth-rate-spot-value", 30.0, growth_spot_value},
      {"asymptotic-checks", 60.0, asymptotic_checks},
      {"supermultiplicativity-and-symmetry", 300.0, supermultiplicativity_and_symmetry},
      {"comparison-theorem", 60.0, comparison_theorem},
      {"bound-sandwich", 120.0, bound_sandwich},
      {"overlap-tables", 30.0, overlap_tables},
      {"variance-formula", 180.0, variance_formula},
      {"sampler-exactness", 60.0, sampler_exactness},
      {"clt-reproduction", 180.0, clt_reproduction},
      {"stddev-numbers", 60.0, stddev_numbers},
  };

  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Check ck;
    const auto start = std::chrono::steady_clock::now();
    criteria[i].body(ck);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = elapsed <= criteria[i].budget_seconds;
    const bool ok = ck.failures.empty() && in_budget;
    std::printf("[%2zu/12] %s %s (%lld checks, %.1f s)\n", i + 1, ok ? "PASS" : "FAIL",
                criteria[i].name.c_str(), ck.total, elapsed);
    for (const auto& n : ck.notes) std::printf("        note: %s\n", n.c_str());
    if (!in_budget)
      std::printf("        over budget: %.1f s > %.0f s\n", elapsed,
                  criteria[i].budget_seconds);
    for (size_t f = 0; f < ck.failures.size() && f < 8; ++f)
      std::printf("        fail: %s\n", ck.failures[f].c_str());
    if (ck.failures.size() > 8)
      std::printf("        ... and %zu more\n", ck.failures.size() - 8);
    if (!ok) ++failed;
    std::fflush(stdout);
  }
  std::printf("%d/12 criteria passed\n", 12 - failed);
  return failed == 0 ? 0 : 1;
}
