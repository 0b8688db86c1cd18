#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "repzeta/core/error.hpp"
#include "repzeta/core/modarith.hpp"

namespace repzeta::fp {

// Dense polynomials over F_l, coefficients low degree first, no trailing zeros.
using Poly = std::vector<u64>;

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int degree(const Poly& a) { return static_cast<int>(a.size()) - 1; }

inline Poly from_ints(const std::vector<i64>& coeffs, u64 l) {
  Poly a(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    a[i] = static_cast<u64>(normalize_mod(coeffs[i], static_cast<i64>(l)));
  trim(a);
  return a;
}

inline Poly sub(Poly a, const Poly& b, u64 l) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + l - b[i]) % l;
  trim(a);
  return a;
}

inline Poly mul(const Poly& a, const Poly& b, u64 l) {
  if (a.empty() || b.empty()) return {};
  std::vector<unsigned __int128> acc(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) acc[i + j] += static_cast<unsigned __int128>(a[i]) * b[j];
  }
  Poly r(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) r[i] = static_cast<u64>(acc[i] % l);
  trim(r);
  return r;
}

inline Poly make_monic(Poly a, u64 l) {
  if (a.empty()) return a;
  u64 inv = invmod(a.back(), l);
  for (auto& c : a) c = mulmod(c, inv, l);
  return a;
}

/// Quotient and remainder of a by b (b nonzero).
inline std::pair<Poly, Poly> divmod(Poly a, const Poly& b, u64 l) {
  if (b.empty()) throw DomainError("polynomial division by zero");
  if (a.size() < b.size()) return {{}, a};
  u64 lead_inv = invmod(b.back(), l);
  Poly q(a.size() - b.size() + 1, 0);
  for (std::size_t i = a.size(); i-- >= b.size();) {
    u64 c = mulmod(a[i], lead_inv, l);
    q[i - b.size() + 1] = c;
    if (!c) continue;
    std::size_t shift = i - (b.size() - 1);
    for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] = (a[shift + j] + l - mulmod(c, b[j], l)) % l;
  }
  a.resize(b.size() - 1);
  trim(a);
  trim(q);
  return {q, a};
}

inline Poly mod(const Poly& a, const Poly& b, u64 l) { return divmod(a, b, l).second; }

inline Poly gcd(Poly a, Poly b, u64 l) {
  while (!b.empty()) {
    Poly r = mod(a, b, l);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(a, l);
}

/// base^e mod f.
inline Poly powmod(Poly base, u64 e, const Poly& f, u64 l) {
  Poly result{1};
  result = mod(result, f, l);
  base = mod(base, f, l);
  while (e) {
    if (e & 1) result = mod(mul(result, base, l), f, l);
    e >>= 1;
    if (e) base = mod(mul(base, base, l), f, l);
  }
  return result;
}

/// x^(l^j) mod f, computed by repeated l-th powering.
inline Poly frobenius_power(const Poly& f, u64 l, unsigned j) {
  Poly x{0, 1};
  Poly r = mod(x, f, l);
  for (unsigned i = 0; i < j; ++i) r = powmod(r, l, f, l);
  return r;
}

inline u64 eval(const Poly& a, u64 x, u64 l) {
  u64 r = 0;
  for (std::size_t i = a.size(); i-- > 0;) r = (mulmod(r, x, l) + a[i]) % l;
  return r;
}

namespace detail {

inline void split_roots(const Poly& f, u64 l, std::mt19937_64& rng, std::vector<u64>& out) {
  int d = degree(f);
  if (d <= 0) return;
  if (d == 1) {
    Poly m = make_monic(f, l);
    out.push_back((l - m[0]) % l);
    return;
  }
  if (l == 2) {
    for (u64 x = 0; x < 2; ++x)
      if (eval(f, x, 2) == 0) out.push_back(x);
    return;
  }
  std::uniform_int_distribution<u64> dist(0, l - 1);
  for (;;) {
    Poly shift{dist(rng), 1};
    Poly h = powmod(shift, (l - 1) / 2, f, l);
    h = sub(h, Poly{1}, l);
    Poly g = gcd(f, h, l);
    int dg = degree(g);
    if (dg > 0 && dg < d) {
      split_roots(g, l, rng, out);
      split_roots(divmod(f, g, l).first, l, rng, out);
      return;
    }
  }
}

}  // namespace detail

/// Distinct roots of f in F_l, ascending.
inline std::vector<u64> roots(const Poly& f, u64 l, std::uint64_t seed = 1) {
  std::vector<u64> out;
  if (degree(f) <= 0) return out;
  Poly xl = frobenius_power(f, l, 1);
  Poly g = gcd(f, sub(xl, Poly{0, 1}, l), l);
  std::mt19937_64 rng(seed);
  detail::split_roots(g, l, rng, out);
  std::sort(out.begin(), out.end());
  return out;
}

/// Ben-Or irreducibility test over F_p. f must have positive degree.
inline bool is_irreducible(const Poly& f, u64 p) {
  int d = degree(f);
  if (d <= 0) throw DomainError("irreducibility of a constant polynomial");
  if (d == 1) return true;
  Poly monic = make_monic(f, p);
  Poly x{0, 1};
  Poly r = mod(x, monic, p);
  for (int i = 1; i <= d / 2; ++i) {
    r = powmod(r, p, monic, p);
    Poly g = gcd(monic, sub(r, x, p), p);
    if (degree(g) > 0) return false;
  }
  return true;
}

}  // namespace repzeta::fp
