#include "mallows/qpoly.hpp"

#include <sstream>

namespace mallows {

QPoly::QPoly(std::vector<mpz_class> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

QPoly::QPoly(std::initializer_list<long> coeffs) {
  coeffs_.assign(coeffs.begin(), coeffs.end());
  trim();
}

QPoly QPoly::one() { return QPoly{{mpz_class(1)}}; }

QPoly QPoly::monomial(unsigned power, mpz_class coeff) {
  if (coeff == 0) return {};
  std::vector<mpz_class> c(power + 1);
  c[power] = std::move(coeff);
  return QPoly{std::move(c)};
}

mpz_class QPoly::coeff(unsigned power) const {
  if (power >= coeffs_.size()) return 0;
  return coeffs_[power];
}

void QPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

QPoly& QPoly::operator+=(const QPoly& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size());
  for (size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  trim();
  return *this;
}

QPoly& QPoly::operator-=(const QPoly& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size());
  for (size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  trim();
  return *this;
}

QPoly operator*(const QPoly& a, const QPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<mpz_class> c(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return QPoly{std::move(c)};
}

double QPoly::evaluate(double q) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * q + it->get_d();
  return acc;
}

mpz_class QPoly::at_one() const {
  mpz_class s = 0;
  for (const auto& c : coeffs_) s += c;
  return s;
}

std::string QPoly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    mpz_class c = coeffs_[i];
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    mpz_class a = abs(c);
    if (a != 1 || i == 0) os << a.get_str();
    if (i >= 1) {
      if (a != 1) os << " ";
      os << "q";
      if (i >= 2) os << "^" << i;
    }
  }
  return os.str();
}

std::vector<std::string> QPoly::coeff_strings() const {
  std::vector<std::string> out;
  out.reserve(coeffs_.size());
  for (const auto& c : coeffs_) out.push_back(c.get_str());
  return out;
}

}  // namespace mallows
