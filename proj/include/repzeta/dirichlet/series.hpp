#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "repzeta/core/error.hpp"
#include "repzeta/core/number.hpp"

namespace repzeta {

/// Finite Dirichlet series sum_n c_n n^{-s} with exact nonnegative rational c_n.
class DirichletPoly {
public:
  using Terms = std::map<BigInt, Rational>;

  DirichletPoly() = default;
  explicit DirichletPoly(Terms terms) {
    for (auto& [n, c] : terms) add(n, c);
  }

  static DirichletPoly one() {
    DirichletPoly z;
    z.add(1, 1);
    return z;
  }

  void add(const BigInt& n, const Rational& c) {
    require(n >= 1, "Dirichlet dimension must be positive");
    require(c >= 0, "Dirichlet multiplicity must be nonnegative");
    if (c == 0) return;
    terms_[n] += c;
  }

  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  Rational coefficient(const BigInt& n) const {
    auto it = terms_.find(n);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  /// Sum of all coefficients (the value at s = 0).
  Rational total() const {
    Rational t = 0;
    for (const auto& [n, c] : terms_) t += c;
    return t;
  }

  BigInt max_dimension() const { return terms_.empty() ? BigInt(0) : terms_.rbegin()->first; }

  /// Multiplies the series by d^{-s}.
  DirichletPoly shifted(const BigInt& d) const {
    require(d >= 1, "shift must be positive");
    DirichletPoly out;
    for (const auto& [n, c] : terms_) out.terms_[n * d] = c;
    return out;
  }

  DirichletPoly scaled(const Rational& q) const {
    require(q >= 0, "scale must be nonnegative");
    DirichletPoly out;
    if (q == 0) return out;
    for (const auto& [n, c] : terms_) out.terms_[n] = c * q;
    return out;
  }

  DirichletPoly& operator+=(const DirichletPoly& other) {
    for (const auto& [n, c] : other.terms_) terms_[n] += c;
    return *this;
  }
  friend DirichletPoly operator+(DirichletPoly a, const DirichletPoly& b) { return a += b; }

  friend DirichletPoly operator*(const DirichletPoly& a, const DirichletPoly& b) {
    DirichletPoly out;
    for (const auto& [n, c] : a.terms_)
      for (const auto& [m, d] : b.terms_) out.terms_[n * m] += c * d;
    return out;
  }

  friend bool operator==(const DirichletPoly& a, const DirichletPoly& b) { return a.terms_ == b.terms_; }

  /// Exact value at an integer s (negative s allowed).
  Rational eval_exact(long long s) const {
    Rational sum = 0;
    for (const auto& [n, c] : terms_) sum += c * rational_pow(Rational(n), -s);
    return sum;
  }

  std::string to_string() const {
    std::string out;
    for (const auto& [n, c] : terms_) {
      if (!out.empty()) out += " + ";
      out += repzeta::to_string(c) + "*" + n.str() + "^-s";
    }
    return out.empty() ? "0" : out;
  }

private:
  Terms terms_;
};

inline std::optional<long long> as_integer(const Rational& s) {
  if (!is_integer(s)) return std::nullopt;
  BigInt n = numerator(s);
  if (n > BigInt(1) << 62 || n < -(BigInt(1) << 62)) return std::nullopt;
  return n.convert_to<long long>();
}

/// Value of sum c_n n^{-s}; exact when s is a nonnegative integer.
inline long double eval_dirichlet(const DirichletPoly& z, const Rational& s) {
  if (auto k = as_integer(s); k && *k >= 0) return to_real(z.eval_exact(*k));
  long double sr = to_real(s), sum = 0;
  for (const auto& [n, c] : z.terms()) sum += to_real(c) * std::exp(-sr * std::log(to_real(n)));
  return sum;
}

/// N-th term log(r_1 + ... + r_N) / log N of the limsup sequence for the abscissa.
inline long double abscissa_from_counts(const std::vector<BigInt>& counts) {
  require(counts.size() >= 2, "need at least two counts");
  BigInt sum = 0;
  for (const auto& r : counts) {
    require(r >= 0, "counts must be nonnegative");
    sum += r;
  }
  require(sum > 0, "all counts are zero; the partial sum sequence is undefined");
  return std::log(to_real(sum)) / std::log(static_cast<long double>(counts.size()));
}

// ---------------------------------------------------------------------------
// Jaikin local factors

struct JaikinTerm {
  BigInt n = 1;
  std::vector<BigInt> f;  // f(x) = sum f[i] x^i, evaluated at x = p^{-s}
  std::vector<std::pair<long long, long long>> pairs;  // (A, B): 1 / (1 - p^{-As+B})
};

struct JaikinLocalFactor {
  std::vector<JaikinTerm> terms;
};

/// Raised when some A*s - B <= 0; carries the offending pair.
class PoleError : public DomainError {
public:
  PoleError(long long a, long long b)
      : DomainError("pole: A*s - B <= 0 for pair (" + std::to_string(a) + "," + std::to_string(b) + ")"), A(a), B(b) {}
  long long A, B;
};

inline void validate(const JaikinLocalFactor& factor) {
  for (const auto& t : factor.terms) {
    require(t.n >= 1, "Jaikin term dimension must be positive");
    for (const auto& c : t.f) require(c >= 0, "Jaikin polynomial coefficients must be nonnegative");
    for (auto [a, b] : t.pairs) require(a >= 0 && b >= 0, "Jaikin pairs must be nonnegative");
  }
}

inline void check_region(const JaikinLocalFactor& factor, const Rational& s) {
  for (const auto& t : factor.terms)
    for (auto [a, b] : t.pairs)
      if (Rational(a) * s - b <= 0) throw PoleError(a, b);
}

/// Exact value at integer s.
inline Rational jaikin_eval_exact(const JaikinLocalFactor& factor, const BigInt& p, long long s) {
  validate(factor);
  check_region(factor, Rational(s));
  Rational x = rational_pow(Rational(p), -s), sum = 0;
  for (const auto& t : factor.terms) {
    Rational fx = 0, xi = 1;
    for (const auto& c : t.f) {
      fx += Rational(c) * xi;
      xi *= x;
    }
    Rational term = rational_pow(Rational(t.n), -s) * fx;
    for (auto [a, b] : t.pairs) term /= 1 - rational_pow(Rational(p), -a * s + b);
    sum += term;
  }
  return sum;
}

inline long double jaikin_eval(const JaikinLocalFactor& factor, const BigInt& p, const Rational& s) {
  if (auto k = as_integer(s)) return to_real(jaikin_eval_exact(factor, p, *k));
  validate(factor);
  check_region(factor, s);
  long double sr = to_real(s), lp = std::log(to_real(p)), x = std::exp(-sr * lp), sum = 0;
  for (const auto& t : factor.terms) {
    long double fx = 0, xi = 1;
    for (const auto& c : t.f) {
      fx += to_real(c) * xi;
      xi *= x;
    }
    long double term = std::exp(-sr * std::log(to_real(t.n))) * fx;
    for (auto [a, b] : t.pairs) term /= 1 - std::exp((-a * sr + b) * lp);
    sum += term;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Equivalence of families

struct EquivalenceReport {
  bool equivalent = true;
  std::optional<std::size_t> witness_index;
  std::optional<Rational> witness_s;
  std::string grid_contract =
      "sandwich checked at every grid point; beyond the grid maximum it follows by monotonicity only "
      "for families with common finite dimension support";
};

/// C^{-1-s} b_n(s) <= a_n(s) <= C^{1+s} b_n(s) for every index n and grid point s.
inline EquivalenceReport check_equivalence(const std::vector<DirichletPoly>& a, const std::vector<DirichletPoly>& b,
                                           const Rational& C, const std::vector<Rational>& s_grid) {
  require(!s_grid.empty(), "empty s grid");
  require(a.size() == b.size(), "families must share the index set");
  require(C > 0, "equivalence constant must be positive");
  EquivalenceReport report;
  for (const auto& s : s_grid) {
    auto k = as_integer(s);
    for (std::size_t n = 0; n < a.size(); ++n) {
      bool ok;
      if (k) {
        Rational av = a[n].eval_exact(*k), bv = b[n].eval_exact(*k);
        Rational up = rational_pow(C, 1 + *k);
        ok = bv / up <= av && av <= up * bv;
      } else {
        long double av = eval_dirichlet(a[n], s), bv = eval_dirichlet(b[n], s);
        long double up = std::pow(to_real(C), 1 + to_real(s)), slack = 1e-12L;
        ok = bv / up <= av * (1 + slack) && av <= up * bv * (1 + slack);
      }
      if (!ok) {
        report.equivalent = false;
        report.witness_index = n;
        report.witness_s = s;
        return report;
      }
    }
  }
  return report;
}

/// Evaluator variant: a[n](s), b[n](s) as reals, 1e-12 relative slack.
inline EquivalenceReport check_equivalence(const std::vector<std::function<long double(const Rational&)>>& a,
                                           const std::vector<std::function<long double(const Rational&)>>& b,
                                           const Rational& C, const std::vector<Rational>& s_grid) {
  require(!s_grid.empty(), "empty s grid");
  require(a.size() == b.size(), "families must share the index set");
  require(C > 0, "equivalence constant must be positive");
  EquivalenceReport report;
  for (const auto& s : s_grid) {
    long double up = std::pow(to_real(C), 1 + to_real(s)), slack = 1e-12L;
    for (std::size_t n = 0; n < a.size(); ++n) {
      long double av = a[n](s), bv = b[n](s);
      bool ok = bv / up <= av * (1 + slack) && av <= up * bv * (1 + slack);
      if (!ok) {
        report.equivalent = false;
        report.witness_index = n;
        report.witness_s = s;
        return report;
      }
    }
  }
  return report;
}

}  // namespace repzeta
