#include "radomult/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace radomult {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

BigInt pow10(long e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, static_cast<unsigned long>(e));
  return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-' || den[0] == '+') {
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  }
  BigInt n(std::string(num[0] == '+' ? num.substr(1) : num));
  BigInt d{std::string(den)};
  if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string to_string(const BigInt& z) { return z.get_str(); }

std::string to_decimal(const Rational& value, int max_digits) {
  if (value == 0) return "0";
  const bool negative = value < 0;
  Rational a = abs(value);

  // Decimal exponent e with 10^e <= a < 10^(e+1).
  long e = static_cast<long>(std::floor(std::log10(to_double(a))));
  auto scaled = [&](long exp10) {
    Rational s = a;
    if (exp10 >= 0) s /= Rational(pow10(exp10));
    else s *= Rational(pow10(-exp10));
    return s;
  };
  while (scaled(e) >= 10) ++e;
  while (scaled(e) < 1) --e;

  // Integer with max_digits significant digits: round(a * 10^(max_digits-1-e)).
  const long shift = max_digits - 1 - e;
  Rational m = scaled(-shift);
  BigInt digits = m.get_num() / m.get_den();
  Rational frac = m - Rational(digits);
  if (frac * 2 >= 1) ++digits;
  long exp10 = -shift;  // value ~ digits * 10^exp10
  // Exactness is automatic when a is a short terminating decimal, because
  // m is then an integer; otherwise this is the rounded value.
  std::string ds = digits.get_str();
  if (static_cast<int>(ds.size()) > max_digits) {  // rounding carried into a new digit
    ds.pop_back();
    ++exp10;
  }
  while (ds.size() > 1 && ds.back() == '0') {
    ds.pop_back();
    ++exp10;
  }
  // Render ds * 10^exp10 in plain positional notation.
  std::string out;
  if (exp10 >= 0) {
    out = ds + std::string(static_cast<std::size_t>(exp10), '0');
  } else {
    const long point = static_cast<long>(ds.size()) + exp10;
    if (point > 0) {
      out = ds.substr(0, point) + "." + ds.substr(point);
    } else {
      out = "0." + std::string(static_cast<std::size_t>(-point), '0') + ds;
    }
  }
  return negative ? "-" + out : out;
}

Rational parse_decimal(std::string_view text) {
  std::string s(text);
  long exponent = 0;
  if (auto pos = s.find_first_of("eE"); pos != std::string::npos) {
    exponent = std::stol(s.substr(pos + 1));
    s = s.substr(0, pos);
  }
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s = s.substr(1);
  }
  std::string mantissa;
  long frac_digits = 0;
  bool seen_point = false;
  for (char ch : s) {
    if (ch == '.') {
      if (seen_point) throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
      seen_point = true;
    } else if (ch >= '0' && ch <= '9') {
      mantissa.push_back(ch);
      if (seen_point) ++frac_digits;
    } else {
      throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    }
  }
  if (mantissa.empty()) throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
  Rational r{BigInt(mantissa, 10)};
  const long e = exponent - frac_digits;
  if (e >= 0) r *= Rational(pow10(e));
  else r /= Rational(pow10(-e));
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

Rational approximate(double x, long long max_denominator) {
  if (!std::isfinite(x)) throw std::invalid_argument("cannot approximate a non-finite value");
  const bool negative = x < 0;
  double v = std::fabs(x);
  // Convergents h/k.
  BigInt h_prev = 1, h = static_cast<long>(std::floor(v));
  BigInt k_prev = 0, k = 1;
  double frac = v - std::floor(v);
  Rational best(h, k);
  while (frac > 1e-15) {
    const double inv = 1.0 / frac;
    const long a = static_cast<long>(std::floor(inv));
    frac = inv - static_cast<double>(a);
    BigInt h_next = a * h + h_prev;
    BigInt k_next = a * k + k_prev;
    const BigInt max_den(static_cast<long>(max_denominator));
    if (k_next > max_den) {
      // Largest admissible semiconvergent.
      const BigInt t = (max_den - k_prev) / k;
      if (t > 0) {
        Rational semi(t * h + h_prev, t * k + k_prev);
        if (std::fabs(to_double(semi) - v) < std::fabs(to_double(best) - v)) best = semi;
      }
      break;
    }
    h_prev = h;
    k_prev = k;
    h = h_next;
    k = k_next;
    best = Rational(h, k);
  }
  best.canonicalize();
  return negative ? Rational(-best) : best;
}

double to_double(const Rational& r) { return r.get_d(); }

Rational ratio(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::domain_error("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational ratio(unsigned long num, unsigned long den) { return ratio(BigInt(num), BigInt(den)); }

}  // namespace radomult
