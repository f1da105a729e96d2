#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace mallows {

/* Polynomial in q with arbitrary-precision integer coefficients.
 * Coefficient i is the coefficient of q^i. The zero polynomial has an
 * empty coefficient vector; otherwise the top coefficient is nonzero. */
class QPoly {
 public:
  QPoly() = default;
  explicit QPoly(std::vector<mpz_class> coeffs);
  QPoly(std::initializer_list<long> coeffs);
  static QPoly zero() { return QPoly{}; }
  static QPoly one();
  static QPoly monomial(unsigned power, mpz_class coeff = 1);

  bool is_zero() const { return coeffs_.empty(); }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<mpz_class>& coeffs() const { return coeffs_; }
  mpz_class coeff(unsigned power) const;

  QPoly& operator+=(const QPoly& other);
  QPoly& operator-=(const QPoly& other);
  friend QPoly operator+(QPoly a, const QPoly& b) { return a += b; }
  friend QPoly operator-(QPoly a, const QPoly& b) { return a -= b; }
  friend QPoly operator*(const QPoly& a, const QPoly& b);
  QPoly& operator*=(const QPoly& other) { return *this = *this * other; }
  bool operator==(const QPoly& other) const { return coeffs_ == other.coeffs_; }

  double evaluate(double q) const;   // Horner
  mpz_class at_one() const;          // exact sum of coefficients

  std::string to_string() const;     // e.g. "1 + 2 q + q^3"
  std::vector<std::string> coeff_strings() const;  // decimal, index = power

 private:
  void trim();
  std::vector<mpz_class> coeffs_;
};

}  // namespace mallows
