#pragma once

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "repzeta/core/error.hpp"
#include "repzeta/core/number.hpp"
#include "repzeta/liering/matrix.hpp"

namespace repzeta {

/// A right-normed bracket word: "XXY" is [X,[X,Y]].
struct BchWord {
  std::string letters;
  Rational coef;
};

namespace detail {

inline Rational factorial(unsigned n) {
  BigInt f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return Rational(f);
}

// sequences of m blocks (r_i, s_i), r_i + s_i > 0, of total degree exactly `left`
inline void bch_blocks(unsigned m, unsigned left, std::vector<std::pair<unsigned, unsigned>>& cur,
                       std::map<std::string, Rational>& acc, unsigned total) {
  if (cur.size() == m) {
    if (left) return;
    std::string w;
    Rational denom = 1;
    for (auto [r, s] : cur) {
      w.append(r, 'X');
      w.append(s, 'Y');
      denom *= factorial(r) * factorial(s);
    }
    // R vanishes unless the word ends in a single Y block of length 1 or a trailing lone X
    auto [rl, sl] = cur.back();
    if (!(sl == 1 || (sl == 0 && rl == 1))) return;
    Rational c = Rational(m % 2 ? 1 : -1, static_cast<long>(m)) / (Rational(total) * denom);
    acc[w] += c;
    return;
  }
  for (unsigned r = 0; r <= left; ++r)
    for (unsigned s = 0; r + s <= left; ++s) {
      if (r + s == 0) continue;
      cur.emplace_back(r, s);
      bch_blocks(m, left - r - s, cur, acc, total);
      cur.pop_back();
    }
}

}  // namespace detail

/// Words and rational coefficients of log(e^X e^Y) through total degree `order`, collected by
/// word. Words ending in two equal letters vanish and are dropped.
inline const std::vector<BchWord>& bch_words(unsigned order) {
  static std::mutex mu;
  static std::map<unsigned, std::vector<BchWord>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  std::map<std::string, Rational> acc;
  for (unsigned d = 1; d <= order; ++d)
    for (unsigned m = 1; m <= d; ++m) {
      std::vector<std::pair<unsigned, unsigned>> cur;
      detail::bch_blocks(m, d, cur, acc, d);
    }
  // innermost [Y,X] = -[X,Y]: fold onto one spelling so equal brackets share a coefficient
  std::map<std::string, Rational> folded;
  for (auto& [w, c] : acc) {
    if (w.size() >= 2 && w[w.size() - 1] == w[w.size() - 2]) continue;
    if (w.size() >= 2 && w[w.size() - 2] == 'Y') {
      std::string f = w;
      std::swap(f[f.size() - 1], f[f.size() - 2]);
      folded[f] -= c;
    } else {
      folded[w] += c;
    }
  }
  std::vector<BchWord> words;
  for (auto& [w, c] : folded)
    if (c != 0) words.push_back({w, c});
  return cache.emplace(order, std::move(words)).first->second;
}

/// Coefficient c mod q for a rational with denominator prime to p.
inline i64 rational_mod(const Rational& c, i64 q, u64 p) {
  BigInt num = numerator(c), den = denominator(c);
  if (den % p == 0) throw DomainError("denominator divisible by p in a BCH coefficient");
  BigInt qq = q;
  i64 n = static_cast<i64>(((num % qq) + qq) % qq);
  i64 d = static_cast<i64>(den % qq);
  return static_cast<i64>(mulmod(static_cast<u64>(n), invmod(static_cast<u64>(d), static_cast<u64>(q)), q));
}

/// Generic evaluation over any value type with a bracket, addition and integer scaling.
template <class V, class Bracket, class Add, class Scale>
V evaluate_bch(const V& x, const V& y, unsigned order, i64 q, u64 p, V zero, Bracket&& br, Add&& add, Scale&& scale) {
  if (order >= p) throw DomainError("BCH truncation order must be below p");
  V out = zero;
  for (const auto& w : bch_words(order)) {
    V acc = w.letters.back() == 'X' ? x : y;
    for (std::size_t i = w.letters.size() - 1; i-- > 0;) acc = br(w.letters[i] == 'X' ? x : y, acc);
    out = add(out, scale(acc, rational_mod(w.coef, q, p)));
  }
  return out;
}

/// log(exp A exp B) by the Campbell-Hausdorff series truncated at `order` (>= nilpotency class).
inline ModMatrix bch(const ModMatrix& a, const ModMatrix& b, unsigned order) {
  require(a.same_shape(b), "matrix shapes differ");
  return evaluate_bch(
      a, b, order, a.q, a.p, ModMatrix(a.n, a.p, a.k), [](const ModMatrix& x, const ModMatrix& y) { return commutator(x, y); },
      [](const ModMatrix& x, const ModMatrix& y) { return x + y; },
      [](const ModMatrix& x, i64 c) { return x.scaled(c); });
}

}  // namespace repzeta
