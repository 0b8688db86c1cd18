#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "repzeta/core/error.hpp"
#include "repzeta/core/fp_poly.hpp"
#include "repzeta/core/modarith.hpp"
#include "repzeta/core/number.hpp"
#include "repzeta/core/parallel.hpp"
#include "repzeta/groupcore/clifford.hpp"
#include "repzeta/groupcore/group.hpp"

namespace repzeta {

// ---------------------------------------------------------------------------
// Multivariate integer polynomials

struct Monomial {
  i64 coef = 0;
  std::vector<unsigned> exps;
};

struct MPoly {
  unsigned nvars = 0;
  std::vector<Monomial> terms;

  u64 eval_mod(const std::vector<u64>& x, u64 p) const {
    u64 s = 0;
    for (const auto& t : terms) {
      u64 v = static_cast<u64>(normalize_mod(t.coef, static_cast<i64>(p)));
      for (unsigned i = 0; i < nvars && v; ++i)
        for (unsigned e = 0; e < t.exps[i]; ++e) v = mulmod(v, x[i], p);
      s = (s + v) % p;
    }
    return s;
  }

  /// Same polynomial in a larger variable set, variables shifted by `offset`.
  MPoly embedded(unsigned total, unsigned offset) const {
    MPoly out{total, {}};
    for (const auto& t : terms) {
      Monomial m{t.coef, std::vector<unsigned>(total, 0)};
      for (unsigned i = 0; i < nvars; ++i) m.exps[offset + i] = t.exps[i];
      out.terms.push_back(m);
    }
    return out;
  }
};

/// Parses sums of monomials such as "y^2 - x^3 + x" or "3*x*y - 1" over the given variable names.
inline MPoly parse_mpoly(const std::string& text, const std::vector<std::string>& vars) {
  MPoly out{static_cast<unsigned>(vars.size()), {}};
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto number = [&]() -> i64 {
    std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    require(i > start, "expected a number in '" + text + "'");
    return std::stoll(text.substr(start, i - start));
  };
  skip();
  bool first = true;
  while (i < text.size()) {
    i64 sign = 1;
    if (text[i] == '+' || text[i] == '-') {
      sign = text[i] == '-' ? -1 : 1;
      ++i;
      skip();
    } else {
      require(first, "expected + or - in '" + text + "'");
    }
    first = false;
    Monomial m{sign, std::vector<unsigned>(vars.size(), 0)};
    bool factor = true;
    while (factor) {
      skip();
      require(i < text.size(), "dangling operator in '" + text + "'");
      if (std::isdigit(static_cast<unsigned char>(text[i]))) {
        m.coef *= number();
      } else {
        std::size_t start = i;
        while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) ++i;
        std::string name = text.substr(start, i - start);
        auto it = std::find(vars.begin(), vars.end(), name);
        require(it != vars.end(), "unknown variable '" + name + "'");
        unsigned e = 1;
        skip();
        if (i < text.size() && text[i] == '^') {
          ++i;
          skip();
          e = static_cast<unsigned>(number());
        }
        m.exps[static_cast<std::size_t>(it - vars.begin())] += e;
      }
      skip();
      factor = i < text.size() && text[i] == '*';
      if (factor) ++i;
    }
    out.terms.push_back(m);
    skip();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Point counting

struct AffineVarietySpec {
  unsigned n = 0;
  std::vector<MPoly> polynomials;
};

inline constexpr u64 kDefaultCountBudget = 50'000'000;

/// Points of F_p^n where every polynomial vanishes, by exhaustive enumeration.
inline u64 count_points(const AffineVarietySpec& v, u64 p, u64 budget = kDefaultCountBudget) {
  require(is_prime(p), "p must be prime");
  require(v.n <= 6, "ambient dimension is limited to 6");
  for (const auto& f : v.polynomials) require(f.nvars == v.n, "polynomial has the wrong number of variables");
  long double work = std::pow(static_cast<long double>(p), v.n);
  if (work > static_cast<long double>(budget))
    throw SizeError("count over F_" + std::to_string(p) + " needs " + std::to_string(static_cast<u64>(work)) +
                    " evaluations, above the budget");
  if (v.n == 0) {
    for (const auto& f : v.polynomials)
      if (f.eval_mod({}, p)) return 0;
    return 1;
  }
  u64 inner = ipow(p, v.n - 1);
  std::vector<u64> partial(p, 0);
  parallel_for(p, [&](std::size_t first) {
    std::vector<u64> x(v.n, 0);
    x[0] = first;
    u64 c = 0;
    for (u64 r = 0; r < inner; ++r) {
      u64 t = r;
      for (unsigned i = 1; i < v.n; ++i) {
        x[i] = t % p;
        t /= p;
      }
      bool zero = true;
      for (const auto& f : v.polynomials)
        if (f.eval_mod(x, p)) {
          zero = false;
          break;
        }
      c += zero;
    }
    partial[first] = c;
  });
  u64 total = 0;
  for (auto c : partial) total += c;
  return total;
}

/// V x W on disjoint variable sets.
inline AffineVarietySpec product_variety(const AffineVarietySpec& a, const AffineVarietySpec& b) {
  AffineVarietySpec out{a.n + b.n, {}};
  for (const auto& f : a.polynomials) out.polynomials.push_back(f.embedded(out.n, 0));
  for (const auto& f : b.polynomials) out.polynomials.push_back(f.embedded(out.n, a.n));
  return out;
}

// ---------------------------------------------------------------------------
// Lang-Weil fitting

struct LangWeilRow {
  u64 p = 0;
  u64 count = 0;
  long double residual = 0;  // N_p - mu p^d
  long double ratio = 0;     // |residual| / p^(d - 1/2)
  bool holds = false;
};

struct LangWeilFit {
  int d = 0;
  Rational mu;
  long double c = 0;
  long double slope = 0;
  std::vector<LangWeilRow> rows;
  bool inequality_holds = false;
};

/// d = rounded least-squares slope of log N_p against log p, mu = median of N_p / p^d snapped to
/// the nearest integer (the number of top-dimensional components; lower-order terms like the
/// -1 in 2p - 1 otherwise leak into it), falling back to the exact median at a tie. c = the
/// largest |N_p - mu p^d| / p^(d - 1/2). The inequality is checked in the non-strict form
/// |N_p - mu p^d| <= c p^(d - 1/2), which is what a constant fitted from the same data can promise.
inline LangWeilFit langweil_fit_counts(const std::vector<std::pair<u64, u64>>& counts) {
  require(counts.size() >= 5, "Lang-Weil fitting needs at least 5 primes");
  std::vector<std::pair<long double, long double>> pts;
  for (auto [p, n] : counts)
    if (n > 0) pts.emplace_back(std::log(static_cast<long double>(p)), std::log(static_cast<long double>(n)));
  if (pts.empty()) throw DomainError("degenerate fit: every count is zero");
  LangWeilFit fit;
  if (pts.size() == 1) {
    fit.slope = 0;
  } else {
    long double mx = 0, my = 0;
    for (auto [x, y] : pts) {
      mx += x;
      my += y;
    }
    mx /= pts.size();
    my /= pts.size();
    long double sxy = 0, sxx = 0;
    for (auto [x, y] : pts) {
      sxy += (x - mx) * (y - my);
      sxx += (x - mx) * (x - mx);
    }
    fit.slope = sxx > 0 ? sxy / sxx : 0;
  }
  fit.d = static_cast<int>(std::lround(fit.slope));
  if (fit.d < 0) fit.d = 0;
  std::vector<Rational> ratios;
  for (auto [p, n] : counts) ratios.push_back(Rational(BigInt(n)) / rational_pow(Rational(BigInt(p)), fit.d));
  std::sort(ratios.begin(), ratios.end());
  std::size_t m = ratios.size();
  Rational med = m % 2 ? ratios[m / 2] : (ratios[m / 2 - 1] + ratios[m / 2]) / 2;
  Rational twice = med * 2;
  BigInt lo = numerator(twice) / denominator(twice);
  if (twice == Rational(lo) && lo % 2 != 0)
    fit.mu = med;
  else
    fit.mu = Rational((numerator(med) * 2 + denominator(med)) / (denominator(med) * 2));
  for (auto [p, n] : counts) {
    LangWeilRow row{p, n};
    long double pd = std::pow(static_cast<long double>(p), fit.d);
    row.residual = static_cast<long double>(n) - to_real(fit.mu) * pd;
    row.ratio = std::fabs(row.residual) / std::pow(static_cast<long double>(p), fit.d - 0.5L);
    fit.c = std::max(fit.c, row.ratio);
    fit.rows.push_back(row);
  }
  fit.inequality_holds = true;
  for (auto& row : fit.rows) {
    long double bound = fit.c * std::pow(static_cast<long double>(row.p), fit.d - 0.5L);
    row.holds = std::fabs(row.residual) <= bound * (1 + 1e-12L) + 1e-9L;
    fit.inequality_holds = fit.inequality_holds && row.holds;
  }
  return fit;
}

inline LangWeilFit langweil_fit(const AffineVarietySpec& v, const std::vector<u64>& primes,
                                u64 budget = kDefaultCountBudget) {
  std::vector<std::pair<u64, u64>> counts;
  for (auto p : primes) counts.emplace_back(p, count_points(v, p, budget));
  return langweil_fit_counts(counts);
}

// ---------------------------------------------------------------------------
// Artin sets

/// Boolean formula over "f irreducible mod p" atoms. Univariate coefficients are low degree first.
struct ArtinFormula {
  enum class Kind { atom, all, none, negation, conjunction, disjunction };
  Kind kind = Kind::all;
  std::vector<i64> poly;
  std::vector<ArtinFormula> args;

  static ArtinFormula atom(std::vector<i64> f) { return {Kind::atom, std::move(f), {}}; }
  static ArtinFormula every() { return {Kind::all, {}, {}}; }
  static ArtinFormula nothing() { return {Kind::none, {}, {}}; }
  static ArtinFormula negate(ArtinFormula a) { return {Kind::negation, {}, {std::move(a)}}; }
  static ArtinFormula both(ArtinFormula a, ArtinFormula b) { return {Kind::conjunction, {}, {std::move(a), std::move(b)}}; }
  static ArtinFormula either(ArtinFormula a, ArtinFormula b) { return {Kind::disjunction, {}, {std::move(a), std::move(b)}}; }
};

struct ArtinSetSpec {
  ArtinFormula formula;
  std::vector<u64> include;
  std::vector<u64> exclude;
};

struct ArtinVerdict {
  bool member = false;
  bool bad_reduction = false;
};

namespace detail {

inline void validate_formula(const ArtinFormula& f) {
  using K = ArtinFormula::Kind;
  switch (f.kind) {
    case K::atom: {
      auto g = f.poly;
      while (!g.empty() && g.back() == 0) g.pop_back();
      require(g.size() >= 2, "Artin atom polynomial must be nonconstant");
      break;
    }
    case K::negation: require(f.args.size() == 1, "negation takes one argument"); break;
    case K::conjunction:
    case K::disjunction: require(f.args.size() >= 2, "connective takes at least two arguments"); break;
    default: break;
  }
  for (const auto& a : f.args) validate_formula(a);
}

// nullopt on bad reduction
inline std::optional<bool> eval_formula(const ArtinFormula& f, u64 p) {
  using K = ArtinFormula::Kind;
  switch (f.kind) {
    case K::all: return true;
    case K::none: return false;
    case K::atom: {
      auto g = f.poly;
      while (!g.empty() && g.back() == 0) g.pop_back();
      if (normalize_mod(g.back(), static_cast<i64>(p)) == 0) return std::nullopt;
      return fp::is_irreducible(fp::from_ints(g, p), p);
    }
    case K::negation: {
      auto v = eval_formula(f.args[0], p);
      if (!v) return std::nullopt;
      return !*v;
    }
    case K::conjunction:
    case K::disjunction: {
      bool acc = f.kind == K::conjunction;
      for (const auto& a : f.args) {
        auto v = eval_formula(a, p);
        if (!v) return std::nullopt;
        acc = f.kind == K::conjunction ? (acc && *v) : (acc || *v);
      }
      return acc;
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Explicit lists win over the formula; a prime dividing an atom's leading coefficient is
/// flagged as bad reduction and counted outside the set.
inline ArtinVerdict artin_membership(const ArtinSetSpec& spec, u64 p) {
  require(is_prime(p), "p must be prime");
  detail::validate_formula(spec.formula);
  if (std::find(spec.include.begin(), spec.include.end(), p) != spec.include.end()) return {true, false};
  if (std::find(spec.exclude.begin(), spec.exclude.end(), p) != spec.exclude.end()) return {false, false};
  auto v = detail::eval_formula(spec.formula, p);
  if (!v) return {false, true};
  return {*v, false};
}

struct ArtinDensity {
  u64 bound = 0;
  u64 primes = 0;
  u64 members = 0;
  u64 bad = 0;
  long double density = 0;
};

inline ArtinDensity artin_density(const ArtinSetSpec& spec, u64 prime_bound) {
  require(prime_bound >= 1000, "prime bound must be at least 1000");
  detail::validate_formula(spec.formula);
  auto ps = primes_up_to(prime_bound);
  std::vector<ArtinVerdict> v(ps.size());
  parallel_for(ps.size(), [&](std::size_t i) { v[i] = artin_membership(spec, ps[i]); });
  ArtinDensity d{prime_bound, ps.size(), 0, 0, 0};
  for (const auto& x : v) {
    d.members += x.member;
    d.bad += x.bad_reduction;
  }
  d.density = static_cast<long double>(d.members) / static_cast<long double>(d.primes);
  return d;
}

/// Complement of a set: negated formula, include and exclude lists swapped.
inline ArtinSetSpec artin_complement(const ArtinSetSpec& spec) {
  return {ArtinFormula::negate(spec.formula), spec.exclude, spec.include};
}

// ---------------------------------------------------------------------------
// Congruence quotients

struct CongruenceQuotient {
  FiniteGroup group;
  Subgroup kernel;  // elements congruent to the identity mod p
  u64 p = 0;
  unsigned k = 0;
};

inline std::vector<Key> sl2_standard_generators() { return {{1, 1, 0, 1}, {1, 0, 1, 1}}; }

/// Subgroup of GL_n(Z/p^k) generated by the reduced generators, with ker(-> mod p) marked.
inline CongruenceQuotient congruence_quotient(const std::vector<Key>& gens, u64 p, unsigned k,
                                              std::size_t cap = kDefaultGroupCap) {
  require(is_prime(p), "p must be prime");
  require(k >= 1, "level must be positive");
  i64 m = static_cast<i64>(ipow(p, k));
  std::vector<Key> use = gens;
  if (use.empty()) use.push_back(identity_matrix(1));
  auto g = group_from_generators(use, m, cap, "congruence quotient");
  unsigned n = g.matrix_dim();
  std::vector<std::size_t> ker;
  for (std::size_t x = 0; x < g.order(); ++x) {
    const auto& key = g.key(x);
    bool one = true;
    for (unsigned i = 0; i < n && one; ++i)
      for (unsigned j = 0; j < n && one; ++j)
        one = normalize_mod(key[i * n + j] - (i == j ? 1 : 0), static_cast<i64>(p)) == 0;
    if (one) ker.push_back(x);
  }
  auto kernel = make_subgroup(g, ker);
  return {g, kernel, p, k};
}

// ---------------------------------------------------------------------------
// Degree families of finite groups of Lie type

using QPoly = std::vector<Rational>;  // coefficients low degree first

inline Rational qpoly_eval(const QPoly& f, const Rational& x) {
  Rational v = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) v = v * x + *it;
  return v;
}

/// Lagrange interpolation through (x_i, y_i); exact.
inline QPoly lagrange(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
  std::size_t n = xs.size();
  QPoly out(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    QPoly basis{1};
    Rational denom = 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      QPoly next(basis.size() + 1, 0);
      for (std::size_t t = 0; t < basis.size(); ++t) {
        next[t + 1] += basis[t];
        next[t] -= basis[t] * xs[j];
      }
      basis = std::move(next);
      denom *= xs[i] - xs[j];
    }
    for (std::size_t t = 0; t < basis.size(); ++t) out[t] += basis[t] * ys[i] / denom;
  }
  while (out.size() > 1 && out.back() == 0) out.pop_back();
  return out;
}

inline std::string qpoly_to_string(const QPoly& f, const std::string& var = "p") {
  std::string s;
  for (std::size_t i = f.size(); i-- > 0;) {
    if (f[i] == 0) continue;
    std::string c = to_string(abs(f[i]));
    bool neg = f[i] < 0;
    if (!s.empty()) s += neg ? " - " : " + ";
    else if (neg) s += "-";
    if (i == 0) s += c;
    else {
      if (c != "1") s += c + "*";
      s += var;
      if (i > 1) s += "^" + std::to_string(i);
    }
  }
  return s.empty() ? "0" : s;
}

struct DegreeFamily {
  QPoly degree;        // Q_i(p)
  QPoly multiplicity;  // P_i(p)
};

struct DegreeFitReport {
  std::vector<u64> fit_primes;
  u64 holdout = 0;
  std::map<u64, std::map<BigInt, Rational>> multisets;  // prime -> degree -> multiplicity
  std::vector<DegreeFamily> families;
  bool fitted = false;
  bool verified = false;
  std::string refutation;
};

inline std::map<BigInt, Rational> degree_multiset(const std::vector<Key>& gens, u64 p, std::size_t cap) {
  auto q = congruence_quotient(gens, p, 1, cap);
  return zeta_of_group(q.group).terms();
}

/// Fits zeta_{G(F_p)} = sum_i P_i(p) Q_i(p)^-s on primes in one residue class, families matched
/// by the order of distinct degrees, and checks the prediction on a held-out prime. Failure is a
/// refutation in the report, not an exception.
inline DegreeFitReport reductive_degree_fit(const std::vector<Key>& gens, std::pair<u64, u64> residue_class,
                                            const std::vector<u64>& fit_primes, u64 holdout,
                                            std::size_t cap = kDefaultGroupCap) {
  auto [a, N] = residue_class;
  require(N >= 1, "modulus must be positive");
  require(fit_primes.size() >= 2 && fit_primes.size() <= 4, "degree fit uses 2 to 4 primes (degree cap 3)");
  DegreeFitReport rep;
  rep.fit_primes = fit_primes;
  rep.holdout = holdout;
  std::vector<u64> all = fit_primes;
  all.push_back(holdout);
  for (auto p : all) {
    require(is_prime(p), "fit primes must be prime");
    require(p % N == a % N, "prime " + std::to_string(p) + " is outside the residue class");
  }
  std::vector<std::map<BigInt, Rational>> ms(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) ms[i] = degree_multiset(gens, all[i], cap);
  for (std::size_t i = 0; i < all.size(); ++i) rep.multisets[all[i]] = ms[i];

  std::size_t families = ms[0].size();
  for (std::size_t i = 1; i < fit_primes.size(); ++i)
    if (ms[i].size() != families) {
      rep.refutation = "fit primes have different numbers of distinct degrees";
      return rep;
    }
  std::vector<Rational> xs;
  for (auto p : fit_primes) xs.push_back(Rational(BigInt(p)));
  for (std::size_t f = 0; f < families; ++f) {
    std::vector<Rational> dy, my;
    for (std::size_t i = 0; i < fit_primes.size(); ++i) {
      auto it = std::next(ms[i].begin(), static_cast<long>(f));
      dy.push_back(Rational(it->first));
      my.push_back(it->second);
    }
    rep.families.push_back({lagrange(xs, dy), lagrange(xs, my)});
  }
  rep.fitted = true;
  Rational x = Rational(BigInt(holdout));
  std::map<BigInt, Rational> predicted;
  for (const auto& fam : rep.families) {
    Rational d = qpoly_eval(fam.degree, x), m = qpoly_eval(fam.multiplicity, x);
    if (!is_integer(d) || d < 1 || m < 0) {
      rep.refutation = "family predicts a non-integral or nonpositive degree at the held-out prime";
      return rep;
    }
    if (m != 0) predicted[numerator(d)] += m;
  }
  if (predicted != ms.back()) {
    rep.refutation = "prediction differs from the held-out prime's degree multiset";
    return rep;
  }
  rep.verified = true;
  return rep;
}

}  // namespace repzeta
