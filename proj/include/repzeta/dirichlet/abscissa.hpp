#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "repzeta/core/error.hpp"
#include "repzeta/core/modarith.hpp"
#include "repzeta/core/number.hpp"
#include "repzeta/dirichlet/series.hpp"

namespace repzeta {

class InvalidFamilyError : public InputError {
public:
  using InputError::InputError;
};

/// Abscissa value with a -infinity sentinel for series that are identically 1.
struct Abscissa {
  bool neg_infinity = true;
  Rational value = 0;

  static Abscissa minus_infinity() { return {}; }
  static Abscissa of(const Rational& q) { return {false, q}; }

  friend bool operator==(const Abscissa&, const Abscissa&) = default;
  friend Abscissa max(const Abscissa& a, const Abscissa& b) {
    if (a.neg_infinity) return b;
    if (b.neg_infinity) return a;
    return a.value >= b.value ? a : b;
  }
  std::string to_string() const { return neg_infinity ? "-inf" : repzeta::to_string(value); }
};

// Local factor shape sum_i p^{d_i - e_i s} prod_j p^{-A s + B} / (1 - p^{-A s + B}).
struct MonomialTerm {
  long long d = 0, e = 0;
  std::vector<std::pair<long long, long long>> pairs;
};

struct MonomialLocalFamily {
  std::vector<MonomialTerm> terms;
};

inline void validate(const MonomialLocalFamily& family) {
  for (const auto& t : family.terms) {
    if (t.d < 0 || t.e < 0) throw InvalidFamilyError("d and e must be nonnegative");
    long long kappa = t.e;
    for (auto [a, b] : t.pairs) {
      if (a < 0 || b < 0) throw InvalidFamilyError("pairs must be nonnegative");
      if (a == 0 && b > 0) throw InvalidFamilyError("pair with A = 0 and B > 0 has no convergence region");
      kappa += a;
    }
    if (kappa <= 0) throw InvalidFamilyError("e + sum A must be positive");
  }
}

/// max over terms of max{(sum B + d + 1)/(e + sum A), max_j B/A}.
inline Abscissa monomial_family_abscissa(const MonomialLocalFamily& family) {
  validate(family);
  Abscissa out;
  for (const auto& t : family.terms) {
    long long sum_a = t.e, sum_b = t.d + 1;
    for (auto [a, b] : t.pairs) {
      sum_a += a;
      sum_b += b;
      if (a > 0) out = max(out, Abscissa::of(Rational(b, a)));
    }
    out = max(out, Abscissa::of(Rational(sum_b, sum_a)));
  }
  return out;
}

/// Abscissa of a single local factor: its poles at s = B/A.
inline Abscissa monomial_factor_abscissa(const MonomialLocalFamily& family) {
  validate(family);
  Abscissa out;
  for (const auto& t : family.terms)
    for (auto [a, b] : t.pairs)
      if (a > 0) out = max(out, Abscissa::of(Rational(b, a)));
  return out;
}

struct RootSystem {
  char type = 'A';
  unsigned n = 1;

  unsigned rank() const { return n; }
  unsigned positive_roots() const {
    switch (type) {
      case 'A': return n * (n + 1) / 2;
      case 'B':
      case 'C': return n * n;
      case 'D': return n * (n - 1);
      case 'G': return 6;
      case 'F': return 24;
      case 'E': return n == 6 ? 36 : n == 7 ? 63 : 120;
    }
    return 0;
  }

  static RootSystem parse(const std::string& name) {
    require(name.size() >= 2, "root system name like A2, G2");
    RootSystem r{name[0], static_cast<unsigned>(std::stoul(name.substr(1)))};
    bool ok = (r.type == 'A' && r.n >= 1) || (r.type == 'B' && r.n >= 2) || (r.type == 'C' && r.n >= 3) ||
              (r.type == 'D' && r.n >= 4) || (r.type == 'G' && r.n == 2) || (r.type == 'F' && r.n == 4) ||
              (r.type == 'E' && r.n >= 6 && r.n <= 8);
    require(ok, "unknown root system " + name);
    return r;
  }
};

inline Rational archimedean_abscissa(long long rank, long long positive_roots) {
  require(rank >= 1, "rank must be positive");
  require(positive_roots >= 1, "positive root count must be positive");
  return Rational(rank, positive_roots);
}

struct EulerPart {
  std::string label;
  bool finite = false;
  std::vector<u64> finite_primes;
  MonomialLocalFamily family;
  std::function<bool(u64)> member;  // used only by empirical checks
};

struct EulerProductSpec {
  std::vector<EulerPart> parts;
  std::optional<std::pair<long long, long long>> archimedean;  // (rank, |Phi+|)
};

inline Abscissa euler_abscissa(const EulerProductSpec& spec) {
  Abscissa out;
  if (spec.archimedean) out = Abscissa::of(archimedean_abscissa(spec.archimedean->first, spec.archimedean->second));
  for (const auto& part : spec.parts) {
    if (part.finite) {
      if (!part.finite_primes.empty()) out = max(out, monomial_factor_abscissa(part.family));
      else validate(part.family);
    } else {
      out = max(out, monomial_family_abscissa(part.family));
    }
  }
  return out;
}

/// Returns the first prime below bound lying in two parts, if any.
inline std::optional<u64> check_disjoint(const EulerProductSpec& spec, u64 prime_bound) {
  for (u64 p : primes_up_to(prime_bound)) {
    int hits = 0;
    for (const auto& part : spec.parts) {
      bool in = part.finite ? std::find(part.finite_primes.begin(), part.finite_primes.end(), p) != part.finite_primes.end()
                            : (part.member ? part.member(p) : true);
      hits += in;
    }
    if (hits > 1) return p;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Truncated Euler products

/// a_p(s), the local factor minus one; nullopt when the factor has a pole or is nonpositive.
using LocalTerm = std::function<std::optional<long double>(u64 p, long double s)>;

inline LocalTerm monomial_local_term(const MonomialLocalFamily& family) {
  validate(family);
  return [family](u64 p, long double s) -> std::optional<long double> {
    long double lp = std::log(static_cast<long double>(p)), sum = 0;
    for (const auto& t : family.terms) {
      long double log_term = (t.d - t.e * s) * lp, denom = 1;
      for (auto [a, b] : t.pairs) {
        if (a == 0) continue;  // (0,0): removable constant
        long double ex = -a * s + b;
        if (ex >= 0) return std::nullopt;
        log_term += ex * lp;
        denom *= -std::expm1(ex * lp);
      }
      sum += std::exp(log_term) / denom;
    }
    return sum;
  };
}

struct BisectionOptions {
  u64 prime_bound = 1'000'000;
  long double tolerance = 0.05L;
  long double lo = -1.0L;
  long double hi = 8.0L;
  unsigned min_shell = 8;
};

struct BisectionReport {
  enum class Status { ok, inconclusive, neg_infinity };
  Status status = Status::ok;
  long double estimate = 0, lo = 0, hi = 0;
  unsigned steps = 0;

  std::string status_name() const {
    switch (status) {
      case Status::ok: return "ok";
      case Status::inconclusive: return "inconclusive";
      case Status::neg_infinity: return "neg_infinity";
    }
    return "?";
  }
};

enum class ShellVerdict { converges, diverges, zero };

/// Shell test: S_j = sum over primes in [2^j, 2^{j+1}) of log(1 + a_p(s)). For a_p ~ p^{-1-delta}
/// the quantity j*S_j behaves like 2^{-j delta}, so the least-squares slope of log(j S_j)
/// against j log 2 estimates -delta; a negative slope means convergence.
inline ShellVerdict shell_verdict(const LocalTerm& term, const std::vector<u64>& primes, long double s,
                                  unsigned min_shell = 8) {
  std::vector<long double> shell(64, 0);
  bool any = false;
  for (u64 p : primes) {
    auto a = term(p, s);
    if (!a || *a <= -1) return ShellVerdict::diverges;
    if (*a != 0) any = true;
    shell[63 - __builtin_clzll(p)] += std::log1p(*a);
  }
  if (!any) return ShellVerdict::zero;
  std::vector<std::pair<long double, long double>> pts;
  unsigned top = primes.empty() ? 0 : 63 - __builtin_clzll(primes.back());
  for (unsigned j = min_shell; j < top; ++j) {
    if (shell[j] > 0) pts.emplace_back(j * std::log(2.0L), std::log(j * shell[j]));
  }
  if (pts.size() < 3) return ShellVerdict::converges;
  long double mx = 0, my = 0;
  for (auto [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= pts.size();
  my /= pts.size();
  long double num = 0, den = 0;
  for (auto [x, y] : pts) {
    num += (x - mx) * (y - my);
    den += (x - mx) * (x - mx);
  }
  return num / den < 0 ? ShellVerdict::converges : ShellVerdict::diverges;
}

/// Bisection estimate of the abscissa of prod_{p in primes} (1 + a_p(s)).
inline BisectionReport bisect_abscissa(const LocalTerm& term, const std::vector<u64>& primes,
                                       const BisectionOptions& opt = {}) {
  BisectionReport r;
  r.lo = opt.lo;
  r.hi = opt.hi;
  auto top = shell_verdict(term, primes, r.hi, opt.min_shell);
  if (top == ShellVerdict::zero) {
    r.status = BisectionReport::Status::neg_infinity;
    return r;
  }
  if (top != ShellVerdict::converges || shell_verdict(term, primes, r.lo, opt.min_shell) != ShellVerdict::diverges) {
    r.status = BisectionReport::Status::inconclusive;
    return r;
  }
  while (r.hi - r.lo > opt.tolerance / 4) {
    long double mid = (r.lo + r.hi) / 2;
    auto v = shell_verdict(term, primes, mid, opt.min_shell);
    (v == ShellVerdict::diverges ? r.lo : r.hi) = mid;
    ++r.steps;
  }
  r.estimate = (r.lo + r.hi) / 2;
  return r;
}

/// log of prod_{p in primes, p < bound} (1 + a_p(s)); nullopt on a pole.
inline std::optional<long double> truncated_log_product(const LocalTerm& term, const std::vector<u64>& primes,
                                                        long double s, u64 bound) {
  long double acc = 0;
  for (u64 p : primes) {
    if (p >= bound) break;
    auto a = term(p, s);
    if (!a || *a <= -1) return std::nullopt;
    acc += std::log1p(*a);
  }
  return acc;
}

struct DoublingReport {
  long double growth_above = 0;  // relative growth of the product at alpha + delta when the bound doubles
  long double growth_below = 0;  // same at alpha - delta (infinite on a pole)
  bool stable_above = false;
  bool grows_below = false;
};

inline DoublingReport doubling_check(const LocalTerm& term, const std::vector<u64>& primes, long double alpha,
                                     u64 bound, long double delta = 0.1L) {
  DoublingReport r;
  auto rel = [&](long double s) -> long double {
    auto a = truncated_log_product(term, primes, s, bound / 2);
    auto b = truncated_log_product(term, primes, s, bound);
    if (!a || !b) return INFINITY;
    return std::expm1(*b - *a);
  };
  r.growth_above = rel(alpha + delta);
  r.growth_below = rel(alpha - delta);
  r.stable_above = r.growth_above < 0.01L;
  r.grows_below = r.growth_below > 0.10L;
  return r;
}

struct EquivalentProductsReport {
  BisectionReport a, b;
  bool equivalent_on_grid = true;
  bool agree = false;
  std::string status;
};

/// Bisection abscissae of prod(1 + a_p) and prod(1 + b_p) over the same primes; they must agree
/// within the tolerance when the families are C-equivalent.
inline EquivalentProductsReport equiv_products_same_abscissa(const LocalTerm& a, const LocalTerm& b,
                                                             const Rational& C, const std::vector<u64>& primes,
                                                             const BisectionOptions& opt = {}) {
  require(C > 0, "equivalence constant must be positive");
  EquivalentProductsReport r;
  long double c = to_real(C);
  for (long double s : {opt.hi, opt.hi / 2 + 1, opt.hi / 4 + 2}) {
    for (std::size_t i = 0; i < primes.size() && i < 200; ++i) {
      auto av = a(primes[i], s), bv = b(primes[i], s);
      if (!av || !bv) continue;
      long double up = std::pow(c, 1 + s), slack = 1e-12L;
      if (!(*bv / up <= *av * (1 + slack) && *av <= up * *bv * (1 + slack))) r.equivalent_on_grid = false;
    }
  }
  r.a = bisect_abscissa(a, primes, opt);
  r.b = bisect_abscissa(b, primes, opt);
  using S = BisectionReport::Status;
  if (r.a.status == S::inconclusive || r.b.status == S::inconclusive) {
    r.status = "inconclusive";
    return r;
  }
  if (r.a.status == S::neg_infinity || r.b.status == S::neg_infinity) {
    r.agree = r.a.status == r.b.status;
  } else {
    r.agree = std::fabs(r.a.estimate - r.b.estimate) <= opt.tolerance;
  }
  r.status = r.agree ? "agree" : "disagree";
  return r;
}

}  // namespace repzeta
