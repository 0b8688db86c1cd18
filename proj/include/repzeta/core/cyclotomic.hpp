#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

#include "repzeta/core/error.hpp"
#include "repzeta/core/modarith.hpp"

namespace repzeta {

// Element of Z[zeta_e] as a multiset of roots of unity: zeta^exp with multiplicity mult.
struct CycTerm {
  std::uint32_t exp;
  std::uint32_t mult;
  friend bool operator==(const CycTerm&, const CycTerm&) = default;
};
using SparseCyc = std::vector<CycTerm>;

// Q(zeta_e) with the power basis 1, z, ..., z^(phi-1). Canonical vectors are exact
// integer coordinates; two values are equal iff their canonical vectors are.
class CyclotomicField {
public:
  explicit CyclotomicField(unsigned e) : e_(e) {
    require(e >= 1, "cyclotomic order must be positive");
    phi_ = static_cast<unsigned>(euler_phi(e));
    poly_ = cyclotomic_poly(e);
    table_.assign(e, std::vector<i64>(phi_, 0));
    std::vector<i64> cur(phi_, 0);
    cur[0] = 1;
    for (unsigned t = 0; t < e; ++t) {
      table_[t] = cur;
      // multiply by z and reduce with the monic Phi_e
      i64 top = cur[phi_ - 1];
      for (unsigned i = phi_ - 1; i > 0; --i) cur[i] = cur[i - 1];
      cur[0] = 0;
      if (top)
        for (unsigned i = 0; i < phi_; ++i) cur[i] -= top * poly_[i];
    }
  }

  unsigned order() const { return e_; }
  unsigned phi() const { return phi_; }
  const std::vector<i64>& minimal_poly() const { return poly_; }
  const std::vector<i64>& power(unsigned t) const { return table_[t % e_]; }

  /// Canonical form of a group-ring element sum_t acc[t] z^t.
  std::vector<i64> reduce(const std::vector<i64>& acc) const {
    std::vector<i64> out(phi_, 0);
    for (unsigned t = 0; t < acc.size(); ++t) {
      if (!acc[t]) continue;
      const auto& row = table_[t % e_];
      for (unsigned i = 0; i < phi_; ++i) out[i] += acc[t] * row[i];
    }
    return out;
  }

  /// Canonical form of a sparse value whose exponents live in Z/src (src | e).
  std::vector<i64> canonical(const SparseCyc& v, unsigned src) const {
    ensure(src && e_ % src == 0, "cyclotomic embedding order mismatch");
    unsigned scale = e_ / src;
    std::vector<i64> out(phi_, 0);
    for (const auto& term : v) {
      const auto& row = table_[(term.exp * scale) % e_];
      for (unsigned i = 0; i < phi_; ++i) out[i] += static_cast<i64>(term.mult) * row[i];
    }
    return out;
  }

  std::complex<double> to_complex(const std::vector<i64>& v) const {
    std::complex<double> z = std::polar(1.0, 2.0 * std::numbers::pi / e_), acc = 0, w = 1;
    for (unsigned i = 0; i < v.size(); ++i) {
      acc += static_cast<double>(v[i]) * w;
      w *= z;
    }
    return acc;
  }

  /// Integer coefficients of Phi_n, low degree first.
  static std::vector<i64> cyclotomic_poly(unsigned n) {
    std::vector<i64> num(n + 1, 0);
    num[0] = -1;
    num[n] = 1;
    for (unsigned d = 1; d < n; ++d) {
      if (n % d) continue;
      auto den = cyclotomic_poly(d);
      num = exact_div(num, den);
    }
    return num;
  }

private:
  static std::vector<i64> exact_div(std::vector<i64> a, const std::vector<i64>& b) {
    std::size_t db = b.size() - 1, da = a.size() - 1;
    std::vector<i64> q(da - db + 1, 0);
    for (std::size_t i = da + 1; i-- > db;) {
      i64 c = a[i];
      q[i - db] = c;
      if (!c) continue;
      for (std::size_t j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
    }
    return q;
  }

  unsigned e_ = 1;
  unsigned phi_ = 1;
  std::vector<i64> poly_;
  std::vector<std::vector<i64>> table_;
};

/// Shared immutable field instance per order.
inline const CyclotomicField& cyclotomic_field(unsigned e) {
  static std::mutex mu;
  static std::map<unsigned, std::unique_ptr<CyclotomicField>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[e];
  if (!slot) slot = std::make_unique<CyclotomicField>(e);
  return *slot;
}

inline bool is_rational_integer(const std::vector<i64>& canon, i64* value = nullptr) {
  for (std::size_t i = 1; i < canon.size(); ++i)
    if (canon[i]) return false;
  if (value) *value = canon.empty() ? 0 : canon[0];
  return true;
}

}  // namespace repzeta
