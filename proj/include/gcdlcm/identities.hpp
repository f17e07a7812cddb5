#pragma once

// Cross-checks between the independent routes to c_ij and alpha_{e,k}, and
// the structural identities they satisfy.

#include "gcdlcm/gcd_matrix.hpp"

#include <string>
#include <vector>

namespace gcdlcm {

struct IdentityResult {
  std::string name;
  bool holds = true;
  std::string detail;  // first failing location, empty when it holds
};

namespace detail {

inline void fail_once(IdentityResult& r, const std::string& where) {
  if (!r.holds) return;
  r.holds = false;
  r.detail = where;
}

inline std::string at(Index i, Index j) { return "(" + std::to_string(i) + "," + std::to_string(j) + ")"; }

}  // namespace detail

/// Checks, on one set and exponent:
///   c-three-routes             brute-force Moebius sum = subset sum over GTDs = closed-form dispatch
///   alpha-two-routes           brute-force divisor sum = subset sum over GTDs
///   alpha-weighted-column-sum  alpha_{e,j} = sum over x_i | x_j of x_i^e c_ij
///   column-sums                sum over x_i | x_j of c_ij is 1 at the minimum, 0 elsewhere
///   gtd-lcm-product            [G(x)] * prod_{d in D_S(x)} d^{c_dx} = prod G(x), sum of those c = |G(x)| - 1
///   inverse-two-routes         structured inverse = fraction-free inverse, and W (S^e) = I
inline std::vector<IdentityResult> check_coefficient_identities(const GcdClosedSet& s, unsigned long e) {
  const std::size_t n = s.size();
  const auto report = structural_flags(s);
  const auto def = coefficient_table_definitional(s, e);
  const auto fast = coefficient_table_fast(s, report, e);

  IdentityResult c3{"c-three-routes", true, {}}, a2{"alpha-two-routes", true, {}},
      a5{"alpha-weighted-column-sum", true, {}}, cs{"column-sums", true, {}}, lp{"gtd-lcm-product", true, {}},
      inv{"inverse-two-routes", true, {}};

  for (Index j = 0; j < n; ++j) {
    const auto& gtd = report.elements[j].gtd;
    for (Index i = 0; i < n; ++i) {
      const auto ie = cij_via_gtd(s, i, j, gtd);
      if (def(i, j) != ie || ie != fast(i, j)) detail::fail_once(c3, detail::at(i, j));
    }
    if (def.alpha[j] != fast.alpha[j]) detail::fail_once(a2, std::to_string(j));

    Integer weighted = 0;
    std::int64_t column = 0;
    for (Index i = 0; i <= j; ++i) {
      if (!s.divides(i, j)) continue;
      weighted += pow(s[i], e) * Integer(static_cast<long>(def(i, j)));
      column += def(i, j);
    }
    if (weighted != def.alpha[j]) detail::fail_once(a5, std::to_string(j));
    if (column != (j == 0 ? 1 : 0)) detail::fail_once(cs, std::to_string(j));

    if (!gtd.empty()) {
      Integer l = 1, prod = 1;
      for (Index y : gtd) {
        l = lcm(l, s[y]);
        prod *= s[y];
      }
      Rational lhs(l);
      std::int64_t exponent_sum = 0;
      for (Index d : report.elements[j].dset) {
        const std::int64_t c = def(d, j);
        exponent_sum += c;
        const Integer power = pow(s[d], static_cast<unsigned long>(c < 0 ? -c : c));
        if (c >= 0) lhs *= Rational(power);
        else lhs /= Rational(power);
      }
      if (lhs != Rational(prod) || exponent_sum != static_cast<std::int64_t>(gtd.size()) - 1)
        detail::fail_once(lp, std::to_string(j));
    }
  }

  const auto gcd_m = power_gcd_matrix(s, e);
  const auto w = structured_inverse(fast);
  const auto generic = invert_generic(gcd_m);
  if (!(w * gcd_m == ExactMatrix::identity(n))) detail::fail_once(inv, "W (S^e) != I");
  else if (!generic || !(*generic == w)) detail::fail_once(inv, "structured != fraction-free");

  return {c3, a2, a5, cs, lp, inv};
}

inline bool all_hold(const std::vector<IdentityResult>& rs) {
  for (const auto& r : rs)
    if (!r.holds) return false;
  return true;
}

}  // namespace gcdlcm
