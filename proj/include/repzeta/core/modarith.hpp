#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "repzeta/core/error.hpp"

namespace repzeta {

using u64 = std::uint64_t;
using i64 = std::int64_t;

inline u64 mulmod(u64 a, u64 b, u64 m) {
  if (((a | b) >> 32) == 0) return a * b % m;
  return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

inline u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

inline i64 normalize_mod(i64 a, i64 m) {
  a %= m;
  return a < 0 ? a + m : a;
}

/// Inverse of a modulo m; throws if gcd(a, m) != 1.
inline u64 invmod(u64 a, u64 m) {
  i64 t = 0, new_t = 1;
  i64 r = static_cast<i64>(m), new_r = static_cast<i64>(a % m);
  while (new_r != 0) {
    i64 q = r / new_r;
    i64 tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) throw DomainError("element not invertible modulo " + std::to_string(m));
  return static_cast<u64>(normalize_mod(t, static_cast<i64>(m)));
}

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// Primes p with p <= bound, ascending.
inline std::vector<u64> primes_up_to(u64 bound) {
  std::vector<u64> out;
  if (bound < 2) return out;
  std::vector<bool> composite(bound + 1, false);
  for (u64 i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (u64 j = i * i; j <= bound; j += i) composite[j] = true;
  }
  return out;
}

inline std::vector<u64> prime_factors(u64 n) {
  std::vector<u64> out;
  for (u64 p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline u64 ipow(u64 base, unsigned e) {
  u64 r = 1;
  while (e--) r *= base;
  return r;
}

/// Exponent a with n = p^a, or -1 if n is not a power of p.
inline int prime_power_exponent(u64 n, u64 p) {
  if (n == 0) return -1;
  int a = 0;
  while (n % p == 0) {
    n /= p;
    ++a;
  }
  return n == 1 ? a : -1;
}

/// Smallest generator of the multiplicative group of F_l.
inline u64 primitive_root(u64 l) {
  auto factors = prime_factors(l - 1);
  for (u64 g = 2; g < l; ++g) {
    bool ok = true;
    for (u64 q : factors) {
      if (powmod(g, (l - 1) / q, l) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  return 1;
}

/// Smallest prime l > lower_bound with l = 1 (mod e).
inline u64 prime_one_mod(u64 e, u64 lower_bound) {
  u64 l = (lower_bound / e + 1) * e + 1;
  while (!is_prime(l)) l += e;
  return l;
}

inline u64 lcm_u64(u64 a, u64 b) { return a / std::gcd(a, b) * b; }

inline u64 euler_phi(u64 n) {
  u64 r = n;
  for (u64 p : prime_factors(n)) r = r / p * (p - 1);
  return r;
}

}  // namespace repzeta
