#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "mallows/errors.hpp"
#include "mallows/perm.hpp"
#include "mallows/qcalc.hpp"
#include "mallows/series.hpp"

using namespace mallows;

namespace {
Permutation P(const char* s) { return Permutation::parse(s); }

double brute_P(const Permutation& sigma, int n, double q) {
  return avoidance_probability(sigma, n, q);
}
}  // namespace

TEST_CASE("omega head coefficients") {
  for (const char* s : {"132", "123", "1432"}) {
    const Permutation sig = P(s);
    const auto w = omega_bruteforce(sig, 0.7, 6);
    CHECK(w.coeffs[0] == 1.0);
    CHECK(w.coeffs[1] == -1.0);
    for (int n = 2; n < sig.size(); ++n) CHECK(w.coeffs[n] == 0.0);
    // single length-m cluster contributes +q^{inv}/[m]_q!
    CHECK(w.coeffs[sig.size()] ==
          doctest::Approx(std::pow(0.7, inversions(sig)) / q_factorial(sig.size(), 0.7)));
  }
}

TEST_CASE("monotone closed form head at q = 1") {
  const auto w = omega_monotone(3, 1.0, 8);
  const std::vector<double> expect = {1, -1, 0, 1.0 / 6, -1.0 / 24, 0, 1.0 / 720, -1.0 / 5040, 0};
  for (int n = 0; n <= 8; ++n) CHECK(w.coeffs[n] == doctest::Approx(expect[n]).epsilon(1e-15));
  CHECK(omega_monotone(3, 2.0, 4).coeffs[3] == doctest::Approx(1.0 / 21.0));
  // support: coefficients vanish off n = 0, 1 mod m
  const auto w5 = omega_monotone(5, 0.8, 23);
  for (int n = 2; n <= 23; ++n)
    if (n % 5 > 1) CHECK(w5.coeffs[n] == 0.0);
}

TEST_CASE("route agreement: monotone vs brute force") {
  for (double q : {0.5, 1.0, 2.0}) {
    const auto wb = omega_bruteforce(P("123"), q, 8);
    const auto wm = omega_monotone(3, q, 8);
    for (int n = 0; n <= 8; ++n)
      CHECK(wb.coeffs[n] == doctest::Approx(wm.coeffs[n]).epsilon(1e-12).scale(1.0));
    const auto wb4 = omega_bruteforce(P("1234"), q, 9);
    const auto wm4 = omega_monotone(4, q, 9);
    for (int n = 0; n <= 9; ++n)
      CHECK(wb4.coeffs[n] == doctest::Approx(wm4.coeffs[n]).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("route agreement: non-overlapping vs brute force") {
  for (const char* s : {"132", "1243", "1342", "1432"}) {
    const Permutation sig = P(s);
    for (double q : {0.5, 1.0, 2.0}) {
      const auto wb = omega_bruteforce(sig, q, 9);
      const auto wn = omega_nonoverlap(sig, q, 9);
      for (int n = 0; n <= 9; ++n)
        CHECK(wb.coeffs[n] == doctest::Approx(wn.coeffs[n]).epsilon(1e-12).scale(1.0));
    }
  }
  CHECK_THROWS_AS(omega_nonoverlap(P("231"), 1.0, 5), UnsupportedPattern);
  CHECK_THROWS_AS(omega_nonoverlap(P("1234"), 1.0, 5), UnsupportedPattern);
}

TEST_CASE("series reciprocal") {
  PowerSeries geom;
  geom.q = 1.0;
  geom.coeffs = {1.0, -1.0};  // 1 - z
  geom.coeffs.resize(7, 0.0);
  const auto f = series_reciprocal(geom);
  for (double c : f.coeffs) CHECK(c == doctest::Approx(1.0));

  const auto f123 = series_reciprocal(omega_monotone(3, 1.0, 10));
  CHECK(f123.coeffs[3] == doctest::Approx(5.0 / 6).epsilon(1e-12));
  CHECK(f123.coeffs[4] == doctest::Approx(17.0 / 24).epsilon(1e-12));
  // P_n = 1 for n < m
  for (int n = 0; n < 3; ++n) CHECK(f123.coeffs[n] == doctest::Approx(1.0));

  PowerSeries bad;
  bad.coeffs = {0.0, 1.0};
  CHECK_THROWS(series_reciprocal(bad));
}

TEST_CASE("cluster route P_n equals exhaustive P_n") {
  for (const char* s : {"123", "132", "1234", "1243", "1342", "1432"}) {
    const Permutation sig = P(s);
    for (double q : {0.5, 1.0, 2.0}) {
      const auto f = series_reciprocal(omega_bruteforce(sig, q, 9));
      for (int n = 1; n <= 9; ++n)
        CHECK(f.coeffs[n] == doctest::Approx(brute_P(sig, n, q)).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("P_n decreases with n and stays in [0,1]") {
  for (const char* s : {"123", "132", "1432"}) {
    const Permutation sig = P(s);
    for (double q : {0.5, 1.0, 2.0}) {
      const PowerSeries w = is_monotone_increasing(sig) ? omega_monotone(sig.size(), q, 40)
                                                        : omega_nonoverlap(sig, q, 40);
      const auto f = series_reciprocal(w);
      double prev = 1.0;
      for (int n = 0; n <= 40; ++n) {
        CHECK(f.coeffs[n] >= -1e-15);
        CHECK(f.coeffs[n] <= 1.0 + 1e-15);
        CHECK(f.coeffs[n] <= prev + 1e-12);
        prev = f.coeffs[n];
      }
    }
  }
}

TEST_CASE("bivariate occurrence distribution for non-overlapping patterns") {
  // normalization over k
  for (int n : {10, 20, 30}) {
    const auto dist = occurrence_distribution_nonoverlap(P("132"), 1.0, n, (n - 1) / 2);
    double tot = 0.0;
    for (double p : dist) tot += p;
    CHECK(tot == doctest::Approx(1.0).epsilon(1e-10));
  }
  // against the exhaustive joint distribution at n = 7
  for (double q : {0.5, 1.0, 2.0}) {
    const auto dist = occurrence_distribution_nonoverlap(P("132"), q, 7, 3);
    const auto brute = occurrence_distribution(P("132"), 7);
    const double z = q_factorial(7, q);
    for (int k = 0; k <= 3; ++k) {
      const double expect = brute.count(k) ? brute.at(k).evaluate(q) / z : 0.0;
      CHECK(dist[k] == doctest::Approx(expect).epsilon(1e-10).scale(1.0));
    }
    // u = 0 specialization reproduces the avoidance series
    const auto f = series_reciprocal(omega_nonoverlap(P("132"), q, 7));
    CHECK(dist[0] == doctest::Approx(f.coeffs[7]).epsilon(1e-12).scale(1.0));
  }
  CHECK_THROWS_AS(occurrence_distribution_nonoverlap(P("2413"), 1.0, 8, 2),
                  UnsupportedPattern);
}
