#include "matnet/rational.hpp"

#include <cctype>
#include <ostream>
#include <stdexcept>

namespace matnet {

Rational::Rational(long long n) : v_(static_cast<long>(n)) {
  static_assert(sizeof(long) == sizeof(long long), "needs 64-bit long");
}

Rational::Rational(long long num, long long den) {
  if (den == 0) throw std::invalid_argument("Rational: zero denominator");
  v_ = Rational(num).v_ / Rational(den).v_;
  v_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::invalid_argument("Rational: division by zero");
  v_ /= o.v_;
  return *this;
}

namespace {

bool valid_integer_token(std::string_view s) {
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  return true;
}

}  // namespace

Rational Rational::from_string(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("Rational: empty string");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    if (!valid_integer_token(num) || !valid_integer_token(den))
      throw std::invalid_argument("Rational: malformed fraction '" +
                                  std::string(text) + "'");
    // Base 10 always; GMP would read leading zeros as octal otherwise.
    mpq_class v(std::string(num) + "/" + std::string(den), 10);
    if (v.get_den() == 0)
      throw std::invalid_argument("Rational: zero denominator in '" +
                                  std::string(text) + "'");
    v.canonicalize();
    return Rational(v);
  }

  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    // Decimal literal: scale by a power of ten so the value stays exact.
    std::string_view head = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    if (head.empty() || head == "+" || head == "-") {
      // ".5" style
    } else if (!valid_integer_token(head)) {
      throw std::invalid_argument("Rational: malformed decimal '" +
                                  std::string(text) + "'");
    }
    if (frac.empty() || !valid_integer_token(frac) || frac.front() == '+' ||
        frac.front() == '-')
      throw std::invalid_argument("Rational: malformed decimal '" +
                                  std::string(text) + "'");
    bool negative = !text.empty() && text.front() == '-';
    std::string digits;
    for (char ch : text)
      if (std::isdigit(static_cast<unsigned char>(ch))) digits.push_back(ch);
    mpz_class num(digits.empty() ? "0" : digits, 10);
    mpz_class den(1);
    for (size_t i = 0; i < frac.size(); ++i) den *= 10;
    mpq_class v(num, den);
    v.canonicalize();
    if (negative) v = -v;
    return Rational(v);
  }

  if (!valid_integer_token(text))
    throw std::invalid_argument("Rational: malformed integer '" +
                                std::string(text) + "'");
  return Rational(mpq_class(mpz_class(std::string(text), 10)));
}

std::string Rational::str() const {
  if (is_integer()) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.str();
}

}  // namespace matnet
