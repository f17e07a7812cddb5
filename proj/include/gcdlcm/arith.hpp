#pragma once

// Exact number theory on arbitrary-precision integers.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace gcdlcm {

using Integer = mpz_class;
using Rational = mpq_class;

/// Two computations that must agree did not, or an exact post-condition
/// failed. Indicates a bug rather than bad input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline void require_positive(const Integer& n, const char* what) {
  if (sgn(n) <= 0)
    throw std::domain_error(std::string(what) + ": expected a positive integer, got " + n.get_str());
}

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Integer lcm(const Integer& a, const Integer& b) {
  Integer l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

inline bool divides(const Integer& d, const Integer& n) {
  return mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()) != 0;
}

inline Integer pow(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline bool is_integral(const Rational& q) { return q.get_den() == 1; }

/// "p/q" with a positive denominator; integers print without a slash.
inline std::string to_string(const Rational& q) { return q.get_str(); }
inline std::string to_string(const Integer& z) { return z.get_str(); }

/// Parses a decimal integer; throws std::invalid_argument on malformed input.
inline Integer parse_integer(const std::string& text) {
  Integer z;
  if (text.empty() || z.set_str(text, 10) != 0)
    throw std::invalid_argument("not a decimal integer: '" + text + "'");
  return z;
}

struct PrimePower {
  Integer prime;
  unsigned long exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime factorization, primes strictly increasing.
using Factorization = std::vector<PrimePower>;

namespace detail {

inline const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> table = [] {
    constexpr std::uint32_t limit = 1u << 16;
    std::vector<bool> composite(limit + 1, false);
    std::vector<std::uint32_t> primes;
    for (std::uint32_t i = 2; i <= limit; ++i) {
      if (composite[i]) continue;
      primes.push_back(i);
      for (std::uint64_t j = std::uint64_t{i} * i; j <= limit; j += i) composite[j] = true;
    }
    return primes;
  }();
  return table;
}

inline void strip_factor(Integer& n, const Integer& p, Factorization& out) {
  unsigned long e = 0;
  while (divides(p, n)) {
    mpz_divexact(n.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
    ++e;
  }
  if (e != 0) out.push_back({p, e});
}

inline bool is_probable_prime(const Integer& n) {
  return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

// Brent's variant of Pollard rho. n must be odd, composite and free of
// factors below the small-prime table.
inline Integer pollard_brent(const Integer& n) {
  for (unsigned long c = 1;; ++c) {
    Integer y = 2, x, q = 1, g = 1, ys;
    unsigned long r = 1;
    constexpr unsigned long batch = 64;
    auto step = [&](Integer& v) {
      v = v * v + c;
      mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) step(y);
      for (unsigned long k = 0; k < r && g == 1; k += batch) {
        ys = y;
        for (unsigned long i = 0; i < std::min(batch, r - k); ++i) {
          step(y);
          Integer diff = x - y;
          q = q * abs(diff);
          mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        }
        g = gcd(q, n);
      }
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        step(ys);
        Integer diff = x - ys;
        g = gcd(abs(diff), n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline void split_large(const Integer& n, std::map<Integer, unsigned long>& out) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    ++out[n];
    return;
  }
  Integer d = pollard_brent(n);
  split_large(d, out);
  split_large(n / d, out);
}

}  // namespace detail

/// Trial division over a cached table of primes below 2^16, then Pollard rho
/// for whatever cofactor remains.
inline Factorization factorize(const Integer& n) {
  require_positive(n, "factorize");
  Factorization out;
  Integer rest = n;
  for (std::uint32_t p : detail::small_primes()) {
    if (rest == 1) return out;
    Integer pp = p;
    if (pp * pp > rest) {
      out.push_back({rest, 1});
      return out;
    }
    detail::strip_factor(rest, pp, out);
  }
  if (rest == 1) return out;
  std::map<Integer, unsigned long> large;
  detail::split_large(rest, large);
  for (auto& [p, e] : large) out.push_back({p, e});
  return out;
}

inline Integer reconstruct(const Factorization& f) {
  Integer n = 1;
  for (const auto& [p, e] : f) n *= pow(p, e);
  return n;
}

/// All positive divisors of n, ascending.
inline std::vector<Integer> divisors(const Integer& n) {
  std::vector<Integer> ds{1};
  for (const auto& [p, e] : factorize(n)) {
    const std::size_t base = ds.size();
    Integer pk = 1;
    for (unsigned long k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) ds.push_back(ds[i] * pk);
    }
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}

inline int mobius(const Integer& n) {
  int sign = 1;
  for (const auto& pp : factorize(n)) {
    if (pp.exponent > 1) return 0;
    sign = -sign;
  }
  return sign;
}

/// Jordan's totient J_e(n) = sum over d | n of d^e mu(n/d), evaluated through
/// the product n^e * prod_{p | n} (1 - p^-e).
inline Integer xi_e_star_mu(const Integer& n, unsigned long e) {
  require_positive(n, "xi_e_star_mu");
  if (e == 0) throw std::domain_error("xi_e_star_mu: exponent must be positive");
  Integer result = 1;
  for (const auto& [p, k] : factorize(n)) {
    const Integer pe = pow(p, e);
    result *= pow(pe, k - 1) * (pe - 1);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Arithmetical functions

namespace fn {
struct Identity {};
struct Power {
  unsigned long e;
};
struct Mobius {};
/// Finite lookup table; evaluation outside its domain throws.
struct Table {
  std::map<Integer, Integer> values;
};
}  // namespace fn

using ArithFn = std::variant<fn::Identity, fn::Power, fn::Mobius, fn::Table>;

inline Integer evaluate(const ArithFn& f, const Integer& n) {
  return std::visit(
      [&](const auto& g) -> Integer {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, fn::Identity>) {
          return n;
        } else if constexpr (std::is_same_v<G, fn::Power>) {
          return pow(n, g.e);
        } else if constexpr (std::is_same_v<G, fn::Mobius>) {
          return mobius(n);
        } else {
          auto it = g.values.find(n);
          if (it == g.values.end())
            throw std::out_of_range("arithmetical function table has no value at " + n.get_str());
          return it->second;
        }
      },
      f);
}

inline std::string describe(const ArithFn& f) {
  return std::visit(
      [](const auto& g) -> std::string {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, fn::Identity>) return "identity";
        else if constexpr (std::is_same_v<G, fn::Power>) return "power(" + std::to_string(g.e) + ")";
        else if constexpr (std::is_same_v<G, fn::Mobius>) return "mobius";
        else return "table";
      },
      f);
}

/// (f * g)(n) = sum over d | n of f(d) g(n/d).
inline Rational dirichlet_convolve_at(const ArithFn& f, const ArithFn& g, const Integer& n) {
  require_positive(n, "dirichlet_convolve_at");
  Integer sum = 0;
  for (const auto& d : divisors(n)) {
    Integer q = n / d;
    sum += evaluate(f, d) * evaluate(g, q);
  }
  return Rational(sum);
}

}  // namespace gcdlcm
