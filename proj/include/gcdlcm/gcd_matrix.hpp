#pragma once

// GCD and LCM matrices on gcd-closed sets, the coefficients c_ij and
// alpha_{e,k} of the structured inverse of the power GCD matrix (three ways),
// and the exact decision of whether (S^e) divides [S^e] in M_n(Z).

#include "gcdlcm/arith.hpp"
#include "gcdlcm/divisor_structure.hpp"
#include "gcdlcm/matrix.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gcdlcm {

// ---------------------------------------------------------------------------
// Matrix construction

inline ExactMatrix build_gcd_matrix(const GcdClosedSet& s, const ArithFn& f) {
  ExactMatrix m(s.size());
  for (Index i = 0; i < s.size(); ++i)
    for (Index j = i; j < s.size(); ++j) m(i, j) = m(j, i) = evaluate(f, s[s.gcd_index(i, j)]);
  return m;
}

inline ExactMatrix build_lcm_matrix(const GcdClosedSet& s, const ArithFn& f) {
  ExactMatrix m(s.size());
  for (Index i = 0; i < s.size(); ++i)
    for (Index j = i; j < s.size(); ++j) m(i, j) = m(j, i) = evaluate(f, lcm(s[i], s[j]));
  return m;
}

inline ExactMatrix power_gcd_matrix(const GcdClosedSet& s, unsigned long e) { return build_gcd_matrix(s, fn::Power{e}); }
inline ExactMatrix power_lcm_matrix(const GcdClosedSet& s, unsigned long e) { return build_lcm_matrix(s, fn::Power{e}); }

// ---------------------------------------------------------------------------
// Coefficients

struct CoefficientTable {
  unsigned long e = 1;
  std::size_t n = 0;
  std::vector<std::int64_t> c;  // row-major, c[i * n + j] = c_ij
  std::vector<Integer> alpha;   // alpha_{e,k}

  std::int64_t operator()(Index i, Index j) const { return c[i * n + j]; }
  friend bool operator==(const CoefficientTable&, const CoefficientTable&) = default;
};

inline void require_exponent(unsigned long e) {
  if (e == 0) throw std::invalid_argument("exponent e must be a positive integer");
}

/// c_ij = sum of mu(d) over d with d*x_i | x_j and d*x_i dividing no smaller
/// member; alpha_{e,k} = sum of (xi_e * mu)(d) over d | x_k dividing no smaller
/// member. Brute force over divisors; this is the reference path.
inline CoefficientTable coefficient_table_definitional(const GcdClosedSet& s, unsigned long e) {
  require_exponent(e);
  const std::size_t n = s.size();
  CoefficientTable t{e, n, std::vector<std::int64_t>(n * n, 0), std::vector<Integer>(n)};
  auto divides_no_smaller = [&](const Integer& v, Index upto) {
    for (Index u = 0; u < upto; ++u)
      if (divides(v, s[u])) return false;
    return true;
  };
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i <= j; ++i) {
      if (!divides(s[i], s[j])) continue;
      std::int64_t sum = 0;
      for (const auto& d : divisors(s[j] / s[i]))
        if (divides_no_smaller(d * s[i], j)) sum += mobius(d);
      t.c[i * n + j] = sum;
    }
    Integer a = 0;
    for (const auto& d : divisors(s[j]))
      if (divides_no_smaller(d, j)) a += xi_e_star_mu(d, e);
    t.alpha[j] = a;
  }
  return t;
}

namespace detail {

constexpr std::size_t max_subset_gtds = 30;

inline void require_enumerable(std::size_t m) {
  if (m > max_subset_gtds)
    throw std::length_error("inclusion-exclusion over " + std::to_string(m) + " greatest-type divisors is too large");
}

// Calls fn(gcd_index, size) for every non-empty subset of gtd.
template <class Fn>
void for_each_gtd_subset(const GcdClosedSet& s, const std::vector<Index>& gtd, Fn&& fn) {
  const std::size_t m = gtd.size();
  require_enumerable(m);
  const std::uint64_t count = std::uint64_t{1} << m;
  // gcd of subset mask = gcd(gcd of mask without lowest bit, element at lowest bit)
  std::vector<Index> g(count);
  for (std::uint64_t mask = 1; mask < count; ++mask) {
    const unsigned low = static_cast<unsigned>(__builtin_ctzll(mask));
    const std::uint64_t rest = mask & (mask - 1);
    g[mask] = rest == 0 ? gtd[low] : s.gcd_index(g[rest], gtd[low]);
    fn(g[mask], static_cast<std::size_t>(__builtin_popcountll(mask)));
  }
}

}  // namespace detail

/// alpha_{e,k} by inclusion-exclusion over the greatest-type divisors of x_k.
inline Integer alpha_via_gtd(const GcdClosedSet& s, Index k, unsigned long e) {
  require_exponent(e);
  Integer a = pow(s[k], e);
  detail::for_each_gtd_subset(s, gtd_indices(s, k), [&](Index g, std::size_t size) {
    if (size % 2) a -= pow(s[g], e);
    else a += pow(s[g], e);
  });
  return a;
}

/// c_ij by inclusion-exclusion over G_S(x_j). Each inner Moebius sum over the
/// divisors of q is [q == 1] when q is integral and empty otherwise, so a
/// subset contributes (-1)^|T| exactly when gcd(T) = x_i.
inline std::int64_t cij_via_gtd(const GcdClosedSet& s, Index i, Index j, const std::vector<Index>& gtd_j) {
  if (!s.divides(i, j)) return 0;
  std::int64_t c = (i == j) ? 1 : 0;
  detail::for_each_gtd_subset(s, gtd_j, [&](Index g, std::size_t size) {
    if (g == i) c += (size % 2) ? -1 : 1;
  });
  return c;
}

inline std::int64_t cij_via_gtd(const GcdClosedSet& s, Index i, Index j) {
  return cij_via_gtd(s, i, j, gtd_indices(s, j));
}

/// Which closed form produced a fast c_ij.
enum class CijRule {
  Diagonal,              // c_jj = 1
  NotDivisor,            // x_i does not divide x_j
  GreatestTypeDivisor,   // x_i in G_S(x_j): -1
  Outside,               // x_i in neither G_S(x_j) nor D_S(x_j): 0
  DisjointMultiples,     // x_i in D_S(x_j), D_i disjoint from D_S(x_j): l_i - 1
  MinimalOverlap,        // minimal elements of D_i n D_S(x_j) overlap in <= 1 GTD
  InclusionExclusion,    // none of the above applies
};

inline const char* to_string(CijRule r) {
  switch (r) {
    case CijRule::Diagonal: return "diagonal";
    case CijRule::NotDivisor: return "not-divisor";
    case CijRule::GreatestTypeDivisor: return "greatest-type-divisor";
    case CijRule::Outside: return "outside";
    case CijRule::DisjointMultiples: return "disjoint-multiples";
    case CijRule::MinimalOverlap: return "minimal-overlap";
    case CijRule::InclusionExclusion: return "inclusion-exclusion";
  }
  return "?";
}

struct CijValue {
  std::int64_t value;
  CijRule rule;
};

namespace detail {

inline bool contains(const std::vector<Index>& v, Index x) { return std::find(v.begin(), v.end(), x) != v.end(); }

inline std::size_t count_common(const std::vector<Index>& a, const std::vector<Index>& b) {
  std::size_t k = 0;
  for (Index x : a)
    if (contains(b, x)) ++k;
  return k;
}

inline std::vector<Index> intersect(const std::vector<Index>& a, const std::vector<Index>& b) {
  std::vector<Index> out;
  for (Index x : a)
    if (contains(b, x)) out.push_back(x);
  return out;
}

}  // namespace detail

/// Closed-form dispatch for c_ij using the structure of x_j; falls back to
/// inclusion-exclusion where no closed form applies.
inline CijValue cij_fast(const GcdClosedSet& s, const StructureReport& r, Index i, Index j) {
  using detail::contains;
  if (i == j) return {1, CijRule::Diagonal};
  if (!s.divides(i, j)) return {0, CijRule::NotDivisor};
  const auto& gtd = r.elements[j].gtd;
  const auto& dset = r.elements[j].dset;
  if (contains(gtd, i)) return {-1, CijRule::GreatestTypeDivisor};
  if (!contains(dset, i)) return {0, CijRule::Outside};

  const auto& multiples_i = r.elements[i].multiples;
  const auto li = static_cast<std::int64_t>(detail::count_common(multiples_i, gtd));
  const auto overlap = detail::intersect(multiples_i, dset);
  if (overlap.empty()) return {li - 1, CijRule::DisjointMultiples};

  const auto mins = minimal_indices(s, overlap);
  for (std::size_t a = 0; a < mins.size(); ++a)
    for (std::size_t b = a + 1; b < mins.size(); ++b) {
      const auto common = detail::intersect(r.elements[mins[a]].multiples, r.elements[mins[b]].multiples);
      if (detail::count_common(common, gtd) > 1) return {cij_via_gtd(s, i, j, gtd), CijRule::InclusionExclusion};
    }
  std::int64_t value = li + static_cast<std::int64_t>(mins.size()) - 1;
  for (Index t : mins) value -= static_cast<std::int64_t>(detail::count_common(r.elements[t].multiples, gtd));
  return {value, CijRule::MinimalOverlap};
}

/// c from the closed-form dispatch and alpha from inclusion-exclusion.
inline CoefficientTable coefficient_table_fast(const GcdClosedSet& s, const StructureReport& r, unsigned long e) {
  require_exponent(e);
  const std::size_t n = s.size();
  CoefficientTable t{e, n, std::vector<std::int64_t>(n * n, 0), std::vector<Integer>(n)};
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i <= j; ++i) t.c[i * n + j] = cij_fast(s, r, i, j).value;
    t.alpha[j] = alpha_via_gtd(s, j, e);
    if (sgn(t.alpha[j]) <= 0)
      throw InternalError("alpha_{" + std::to_string(e) + "," + std::to_string(j) + "} = " + t.alpha[j].get_str() +
                          " is not positive for " + s.to_string());
  }
  return t;
}

inline CoefficientTable coefficient_table_fast(const GcdClosedSet& s, unsigned long e) {
  return coefficient_table_fast(s, structural_flags(s), e);
}

// ---------------------------------------------------------------------------
// Inverses

/// w_ij = sum over k with x_i | x_k and x_j | x_k of c_ik c_jk / alpha_{e,k},
/// accumulated one rank-one term per k.
inline ExactMatrix structured_inverse(const CoefficientTable& t) {
  const std::size_t n = t.n;
  ExactMatrix w(n);
  std::vector<Index> support;
  for (Index k = 0; k < n; ++k) {
    support.clear();
    for (Index i = 0; i <= k; ++i)
      if (t(i, k) != 0) support.push_back(i);
    for (Index a : support)
      for (Index b : support) {
        Rational term(Integer(static_cast<long>(t(a, k) * t(b, k))), t.alpha[k]);
        term.canonicalize();
        w(a, b) += term;
      }
  }
  return w;
}

/// Inverse of (S^e) from the coefficient table; verified exactly against
/// (S^e) before it is returned.
inline ExactMatrix invert_power_gcd_bl(const GcdClosedSet& s, const StructureReport& r, unsigned long e) {
  ExactMatrix w = structured_inverse(coefficient_table_fast(s, r, e));
  if (!(w * power_gcd_matrix(s, e) == ExactMatrix::identity(s.size())))
    throw InternalError("structured inverse times (S^e) is not the identity for " + s.to_string());
  return w;
}

inline ExactMatrix invert_power_gcd_bl(const GcdClosedSet& s, unsigned long e) {
  return invert_power_gcd_bl(s, structural_flags(s), e);
}

// ---------------------------------------------------------------------------
// Divisibility

enum class Verdict { Divides, DoesNotDivide };

inline const char* to_string(Verdict v) { return v == Verdict::Divides ? "divides" : "does-not-divide"; }

struct MatrixEntry {
  Index row;
  Index col;
  Rational value;
};

struct DivisibilityReport {
  Verdict verdict = Verdict::Divides;
  unsigned long e = 1;
  ExactMatrix u;                        // [S^e] (S^e)^{-1}
  std::optional<MatrixEntry> witness;   // first non-integral entry, row-major
  std::vector<Integer> alphas;
};

/// Decides (S^e) | [S^e]. Both inverse routes are computed and must agree
/// before a verdict is issued. For n <= symmetric_check_limit the left
/// quotient (S^e)^{-1}[S^e] is also formed and its integrality must match.
inline DivisibilityReport divisibility_report(const GcdClosedSet& s, const StructureReport& r, unsigned long e,
                                              std::size_t symmetric_check_limit = 6) {
  const std::size_t n = s.size();
  const CoefficientTable table = coefficient_table_fast(s, r, e);
  const ExactMatrix gcd_m = power_gcd_matrix(s, e);
  const ExactMatrix lcm_m = power_lcm_matrix(s, e);
  const ExactMatrix w = structured_inverse(table);
  if (!(w * gcd_m == ExactMatrix::identity(n)))
    throw InternalError("structured inverse times (S^e) is not the identity for " + s.to_string());
  const auto generic = invert_generic(gcd_m);
  if (!generic) throw InternalError("(S^e) reported singular for " + s.to_string());
  if (!(*generic == w)) throw InternalError("structured and eliminated inverses disagree for " + s.to_string());

  DivisibilityReport rep;
  rep.e = e;
  rep.alphas = table.alpha;
  rep.u = lcm_m * w;
  for (Index i = 0; i < n && !rep.witness; ++i)
    for (Index j = 0; j < n; ++j)
      if (!is_integral(rep.u(i, j))) {
        rep.witness = MatrixEntry{i, j, rep.u(i, j)};
        break;
      }
  rep.verdict = rep.witness ? Verdict::DoesNotDivide : Verdict::Divides;
  if (n <= symmetric_check_limit && (w * lcm_m).is_integral() != (rep.verdict == Verdict::Divides))
    throw InternalError("left and right quotients disagree on integrality for " + s.to_string());
  return rep;
}

inline DivisibilityReport divisibility_report(const GcdClosedSet& s, unsigned long e) {
  return divisibility_report(s, structural_flags(s), e);
}

// ---------------------------------------------------------------------------
// Smith's determinant and the multiple-sum identity

struct SmithCheck {
  Rational det;
  Rational product;
  bool equal;
};

/// det(f(S)) on S = {1..n} against prod_{k<=n} (f * mu)(k).
inline SmithCheck smith_determinant_check(std::size_t n, const ArithFn& f) {
  if (n == 0) throw std::invalid_argument("smith_determinant_check: n must be positive");
  std::vector<Integer> xs;
  for (std::size_t k = 1; k <= n; ++k) xs.emplace_back(static_cast<unsigned long>(k));
  const auto s = GcdClosedSet::from_elements(xs);
  SmithCheck out;
  out.det = determinant(build_gcd_matrix(s, f));
  out.product = 1;
  for (const auto& k : xs) out.product *= dirichlet_convolve_at(f, fn::Mobius{}, k);
  out.equal = out.det == out.product;
  return out;
}

struct RowSumIdentity {
  Rational over_multiples;  // sum of U_{q,i} over x_i in D_n and x_n itself
  Rational single_alpha;    // sum_s [x_q, x_s]^e c_sn / alpha_{e,n}
  bool equal;
};

/// Both sides of the identity sum_{x_i in D_n + {x_n}} U_{qi} =
/// sum_s [x_q,x_s]^e c_sn / alpha_n. The left side uses U built from the
/// eliminated inverse, the right side only the coefficient column of x_n.
inline RowSumIdentity u_row_sum_over_multiples(const GcdClosedSet& s, const ExactMatrix& u,
                                               const CoefficientTable& t, Index q, Index n) {
  if (q >= s.size() || n >= s.size()) throw std::out_of_range("u_row_sum_over_multiples: index out of range");
  RowSumIdentity out;
  out.over_multiples = u(q, n);
  for (Index i : multiple_indices(s, n)) out.over_multiples += u(q, i);
  Rational rhs = 0;
  for (Index k = 0; k < s.size(); ++k) {
    if (t(k, n) == 0) continue;
    rhs += Rational(pow(lcm(s[q], s[k]), t.e) * Integer(static_cast<long>(t(k, n))));
  }
  rhs /= Rational(t.alpha[n]);
  out.single_alpha = rhs;
  out.equal = out.over_multiples == out.single_alpha;
  return out;
}

inline RowSumIdentity u_row_sum_over_multiples(const GcdClosedSet& s, Index q, Index n, unsigned long e = 1) {
  const auto gcd_m = power_gcd_matrix(s, e);
  const auto inv = invert_generic(gcd_m);
  if (!inv) throw InternalError("(S^e) reported singular for " + s.to_string());
  return u_row_sum_over_multiples(s, power_lcm_matrix(s, e) * *inv, coefficient_table_fast(s, e), q, n);
}

}  // namespace gcdlcm
