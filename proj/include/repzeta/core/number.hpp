#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

#include "repzeta/core/error.hpp"

namespace repzeta {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

inline bool is_integer(const Rational& q) { return denominator(q) == 1; }

/// "n" for integers, "n/d" otherwise.
inline std::string to_string(const Rational& q) {
  if (is_integer(q)) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

inline std::string to_string(const BigInt& n) { return n.str(); }

inline BigInt parse_bigint(const std::string& text) {
  std::size_t i = 0;
  while (i < text.size() && text[i] == ' ') ++i;
  std::size_t j = text.size();
  while (j > i && text[j - 1] == ' ') --j;
  std::string body = text.substr(i, j - i);
  if (body.empty()) throw InputError("empty integer literal");
  std::size_t start = (body[0] == '-' || body[0] == '+') ? 1 : 0;
  if (start == body.size()) throw InputError("bad integer literal '" + text + "'");
  for (std::size_t k = start; k < body.size(); ++k)
    if (body[k] < '0' || body[k] > '9') throw InputError("bad integer literal '" + text + "'");
  return BigInt(body[0] == '+' ? body.substr(1) : body);
}

/// Accepts "n", "-n", "n/d".
inline Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(parse_bigint(text));
  BigInt num = parse_bigint(text.substr(0, slash));
  BigInt den = parse_bigint(text.substr(slash + 1));
  if (den == 0) throw InputError("zero denominator in '" + text + "'");
  return Rational(num, den);
}

/// base^e for any integer e (base != 0 when e < 0).
inline Rational rational_pow(const Rational& base, long long e) {
  if (e < 0) {
    if (base == 0) throw DomainError("zero raised to a negative power");
    return rational_pow(1 / base, -e);
  }
  Rational result = 1, b = base;
  auto n = static_cast<unsigned long long>(e);
  while (n) {
    if (n & 1) result *= b;
    n >>= 1;
    if (n) b *= b;
  }
  return result;
}

inline long double to_real(const Rational& q) {
  return numerator(q).convert_to<long double>() / denominator(q).convert_to<long double>();
}

inline long double to_real(const BigInt& n) { return n.convert_to<long double>(); }

inline long long to_int64(const BigInt& n) {
  if (n > BigInt(INT64_MAX) || n < BigInt(INT64_MIN)) throw InputError("integer out of 64-bit range");
  return n.convert_to<long long>();
}

inline BigInt floor_of(const Rational& q) {
  BigInt n = numerator(q), d = denominator(q);
  BigInt f = n / d;
  if (n < 0 && f * d != n) f -= 1;
  return f;
}

}  // namespace repzeta
