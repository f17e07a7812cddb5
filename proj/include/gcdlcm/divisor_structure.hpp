#pragma once

// Gcd-closed sets and the order-theoretic data attached to them: greatest-type
// divisors, D_S(x), strict-multiple sets, structural predicates and the two
// lcm conditions (C on elements with two greatest-type divisors, M on elements
// with at least two).

#include "gcdlcm/arith.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gcdlcm {

using Index = std::size_t;

/// Strictly increasing list of distinct positive integers closed under gcd.
/// Immutable; pairwise divisibility and gcd positions are tabulated at
/// construction so structural queries run on indices.
class GcdClosedSet {
 public:
  /// Sorts and validates. Throws std::invalid_argument on duplicates, an
  /// empty list, or a missing pairwise gcd.
  static GcdClosedSet from_elements(std::vector<Integer> xs) {
    std::sort(xs.begin(), xs.end());
    validate_sorted(xs);
    GcdClosedSet s(std::move(xs));
    s.tabulate(/*require_closed=*/true);
    return s;
  }

  const std::vector<Integer>& elements() const noexcept { return xs_; }
  std::size_t size() const noexcept { return xs_.size(); }
  const Integer& operator[](Index i) const { return xs_[i]; }
  const Integer& min() const { return xs_.front(); }
  const Integer& max() const { return xs_.back(); }

  std::optional<Index> index_of(const Integer& x) const {
    auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
    if (it == xs_.end() || *it != x) return std::nullopt;
    return static_cast<Index>(it - xs_.begin());
  }
  bool contains(const Integer& x) const { return index_of(x).has_value(); }

  /// Index of x, or std::invalid_argument naming the operation.
  Index require_index(const Integer& x, const char* op) const {
    auto i = index_of(x);
    if (!i) throw std::invalid_argument(std::string(op) + ": " + x.get_str() + " is not a member of the set");
    return *i;
  }

  /// x_i | x_j
  bool divides(Index i, Index j) const { return divides_[i * size() + j] != 0; }
  /// Position of gcd(x_i, x_j).
  Index gcd_index(Index i, Index j) const { return gcd_index_[i * size() + j]; }

  friend bool operator==(const GcdClosedSet& a, const GcdClosedSet& b) { return a.xs_ == b.xs_; }

  std::string to_string() const {
    std::string out = "{";
    for (Index i = 0; i < size(); ++i) {
      if (i) out += ",";
      out += xs_[i].get_str();
    }
    return out + "}";
  }

 private:
  explicit GcdClosedSet(std::vector<Integer> xs) : xs_(std::move(xs)) {}

  static void validate_sorted(const std::vector<Integer>& xs) {
    if (xs.empty()) throw std::invalid_argument("a gcd-closed set needs at least one element");
    for (const auto& x : xs)
      if (sgn(x) <= 0) throw std::invalid_argument("set elements must be positive, got " + x.get_str());
    for (std::size_t i = 1; i < xs.size(); ++i)
      if (xs[i] == xs[i - 1]) throw std::invalid_argument("duplicate element " + xs[i].get_str());
  }

  void tabulate(bool require_closed) {
    const std::size_t n = size();
    divides_.assign(n * n, 0);
    gcd_index_.assign(n * n, 0);
    for (Index i = 0; i < n; ++i) {
      for (Index j = i; j < n; ++j) {
        divides_[i * n + j] = gcdlcm::divides(xs_[i], xs_[j]) ? 1 : 0;
        divides_[j * n + i] = (i == j) ? 1 : 0;  // x_j > x_i cannot divide x_i
        auto g = index_of(gcdlcm::gcd(xs_[i], xs_[j]));
        if (!g) {
          if (require_closed)
            throw std::invalid_argument("set is not gcd-closed: gcd(" + xs_[i].get_str() + ", " +
                                        xs_[j].get_str() + ") is missing");
          continue;
        }
        gcd_index_[i * n + j] = gcd_index_[j * n + i] = *g;
      }
    }
  }

  std::vector<Integer> xs_;
  std::vector<std::uint8_t> divides_;
  std::vector<Index> gcd_index_;
};

/// Smallest gcd-closed superset of raw (pairwise-gcd insertion to fixpoint).
inline GcdClosedSet gcd_closure(const std::vector<Integer>& raw) {
  if (raw.empty()) throw std::invalid_argument("gcd_closure: empty input");
  std::set<Integer> members;
  for (const auto& x : raw) {
    require_positive(x, "gcd_closure");
    members.insert(x);
  }
  // Every new element must be paired with every member, old and new.
  std::vector<Integer> all(members.begin(), members.end());
  std::size_t processed = 0;
  while (processed < all.size()) {
    const Integer x = all[processed];
    for (std::size_t j = 0; j < processed; ++j) {
      Integer g = gcd(x, all[j]);
      if (members.insert(g).second) all.push_back(g);
    }
    ++processed;
  }
  return GcdClosedSet::from_elements(std::vector<Integer>(members.begin(), members.end()));
}

// ---------------------------------------------------------------------------
// Index-level structure queries

inline std::vector<Index> strict_divisor_indices(const GcdClosedSet& s, Index i) {
  std::vector<Index> out;
  for (Index j = 0; j < i; ++j)
    if (s.divides(j, i)) out.push_back(j);
  return out;
}

/// Members of xs (indices into s) not strictly divisible by another member.
inline std::vector<Index> minimal_indices(const GcdClosedSet& s, const std::vector<Index>& xs) {
  std::vector<Index> out;
  for (Index a : xs) {
    bool minimal = true;
    for (Index b : xs)
      if (b != a && s.divides(b, a)) {
        minimal = false;
        break;
      }
    if (minimal) out.push_back(a);
  }
  return out;
}

inline std::vector<Index> maximal_indices(const GcdClosedSet& s, const std::vector<Index>& xs) {
  std::vector<Index> out;
  for (Index a : xs) {
    bool maximal = true;
    for (Index b : xs)
      if (b != a && s.divides(a, b)) {
        maximal = false;
        break;
      }
    if (maximal) out.push_back(a);
  }
  return out;
}

/// G_S(x_i): maximal strict divisors of x_i inside the set, ascending.
inline std::vector<Index> gtd_indices(const GcdClosedSet& s, Index i) {
  return maximal_indices(s, strict_divisor_indices(s, i));
}

/// D_S(x_i): gcds of every sub-collection of at least two greatest-type
/// divisors. Computed as the gcd-closure of the pairwise gcds, since a gcd of
/// r >= 2 members is a gcd of pairwise gcds.
inline std::vector<Index> dset_indices(const GcdClosedSet& s, const std::vector<Index>& gtd) {
  std::set<Index> d;
  for (std::size_t a = 0; a < gtd.size(); ++a)
    for (std::size_t b = a + 1; b < gtd.size(); ++b) d.insert(s.gcd_index(gtd[a], gtd[b]));
  std::vector<Index> frontier(d.begin(), d.end());
  while (!frontier.empty()) {
    std::vector<Index> next;
    for (Index u : frontier)
      for (Index v : std::vector<Index>(d.begin(), d.end()))
        if (d.insert(s.gcd_index(u, v)).second) next.push_back(s.gcd_index(u, v));
    frontier = std::move(next);
  }
  return {d.begin(), d.end()};
}

inline std::vector<Index> dset_indices(const GcdClosedSet& s, Index i) {
  return dset_indices(s, gtd_indices(s, i));
}

/// D_r: strict multiples of x_r inside the set.
inline std::vector<Index> multiple_indices(const GcdClosedSet& s, Index r) {
  std::vector<Index> out;
  for (Index j = r + 1; j < s.size(); ++j)
    if (s.divides(r, j)) out.push_back(j);
  return out;
}

inline bool is_divisor_chain(const GcdClosedSet& s, const std::vector<Index>& xs) {
  for (std::size_t a = 0; a < xs.size(); ++a)
    for (std::size_t b = a + 1; b < xs.size(); ++b)
      if (!s.divides(xs[a], xs[b]) && !s.divides(xs[b], xs[a])) return false;
  return true;
}

inline std::vector<Integer> values_of(const GcdClosedSet& s, const std::vector<Index>& idx) {
  std::vector<Integer> out;
  out.reserve(idx.size());
  for (Index i : idx) out.push_back(s[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Value-level operations

inline std::vector<Integer> greatest_type_divisors(const GcdClosedSet& s, const Integer& x) {
  return values_of(s, gtd_indices(s, s.require_index(x, "greatest_type_divisors")));
}

inline std::vector<Integer> d_set(const GcdClosedSet& s, const Integer& x) {
  return values_of(s, dset_indices(s, s.require_index(x, "d_set")));
}

inline std::vector<Integer> multiples_set(const GcdClosedSet& s, const Integer& r) {
  return values_of(s, multiple_indices(s, s.require_index(r, "multiples_set")));
}

/// Members not strictly divisible by another member; input order kept.
inline std::vector<Integer> min_elements(const std::vector<Integer>& xs) {
  std::vector<Integer> out;
  for (const auto& a : xs) {
    bool minimal = true;
    for (const auto& b : xs)
      if (b != a && divides(b, a)) {
        minimal = false;
        break;
      }
    if (minimal) out.push_back(a);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Conditions and the structure report

/// Verdict of an element-wise condition. `checked` lists the elements the
/// condition constrains; `violations` the subset that fails it.
struct ConditionResult {
  bool holds = true;
  std::vector<Index> checked;
  std::vector<Index> violations;
};

struct ElementStructure {
  std::vector<Index> gtd;
  std::vector<Index> dset;
  std::vector<Index> multiples;
};

struct StructureReport {
  std::vector<ElementStructure> elements;
  bool is_divisor_chain = false;
  bool is_factor_closed = false;
  bool is_multiple_closed = false;
  std::size_t max_gtd_count = 0;
  ConditionResult condition_c;
  ConditionResult condition_m;
};

namespace detail {

inline ConditionResult condition_c_from(const GcdClosedSet& s, const std::vector<std::vector<Index>>& gtd) {
  ConditionResult r;
  auto in = [](const std::vector<Index>& v, Index x) { return std::find(v.begin(), v.end(), x) != v.end(); };
  for (Index x = 0; x < s.size(); ++x) {
    if (gtd[x].size() != 2) continue;
    r.checked.push_back(x);
    const Index y1 = gtd[x][0], y2 = gtd[x][1];
    const Index g = s.gcd_index(y1, y2);
    const bool ok = lcm(s[y1], s[y2]) == s[x] && in(gtd[y1], g) && in(gtd[y2], g);
    if (!ok) r.violations.push_back(x);
  }
  r.holds = r.violations.empty();
  return r;
}

inline ConditionResult condition_m_from(const GcdClosedSet& s, const std::vector<std::vector<Index>>& gtd) {
  ConditionResult r;
  for (Index x = 0; x < s.size(); ++x) {
    const auto& g = gtd[x];
    if (g.size() < 2) continue;
    r.checked.push_back(x);
    bool ok = true;
    for (std::size_t a = 0; a < g.size() && ok; ++a)
      for (std::size_t b = a + 1; b < g.size() && ok; ++b) ok = lcm(s[g[a]], s[g[b]]) == s[x];
    if (!ok) r.violations.push_back(x);
  }
  r.holds = r.violations.empty();
  return r;
}

inline std::vector<std::vector<Index>> all_gtds(const GcdClosedSet& s) {
  std::vector<std::vector<Index>> g(s.size());
  for (Index i = 0; i < s.size(); ++i) g[i] = gtd_indices(s, i);
  return g;
}

}  // namespace detail

inline ConditionResult condition_c(const GcdClosedSet& s) { return detail::condition_c_from(s, detail::all_gtds(s)); }
inline ConditionResult condition_m(const GcdClosedSet& s) { return detail::condition_m_from(s, detail::all_gtds(s)); }

/// Every divisor of every member is a member. Equivalent to: 1 is present and
/// x/p is present for every member x and prime p | x.
inline bool is_factor_closed(const GcdClosedSet& s) {
  if (s.min() != 1) return false;
  for (const auto& x : s.elements())
    for (const auto& pp : factorize(x))
      if (!s.contains(x / pp.prime)) return false;
  return true;
}

/// y is a member whenever x | y | lcm(S) for a member x. On a gcd-closed set
/// the minimum divides everything, so this says S is exactly the divisors of
/// lcm(S) that are multiples of min(S).
inline bool is_multiple_closed(const GcdClosedSet& s) {
  Integer l = 1;
  for (const auto& x : s.elements()) l = lcm(l, x);
  Integer quotient = l / s.min();
  Integer count = 1;
  for (const auto& pp : factorize(quotient)) count *= pp.exponent + 1;
  return count == s.size();
}

inline StructureReport structural_flags(const GcdClosedSet& s) {
  StructureReport r;
  const auto gtd = detail::all_gtds(s);
  r.elements.resize(s.size());
  for (Index i = 0; i < s.size(); ++i) {
    r.elements[i].gtd = gtd[i];
    r.elements[i].dset = dset_indices(s, gtd[i]);
    r.elements[i].multiples = multiple_indices(s, i);
    r.max_gtd_count = std::max(r.max_gtd_count, gtd[i].size());
  }
  std::vector<Index> all(s.size());
  for (Index i = 0; i < s.size(); ++i) all[i] = i;
  r.is_divisor_chain = is_divisor_chain(s, all);
  r.is_factor_closed = is_factor_closed(s);
  r.is_multiple_closed = is_multiple_closed(s);
  r.condition_c = detail::condition_c_from(s, gtd);
  r.condition_m = detail::condition_m_from(s, gtd);
  return r;
}

/// Hasse diagram of divisibility restricted to the set, edges pointing from
/// each greatest-type divisor up to the element it covers.
inline void write_hasse_dot(std::ostream& os, const GcdClosedSet& s) {
  os << "digraph hasse {\n  rankdir=BT;\n  node [shape=plaintext];\n";
  for (Index i = 0; i < s.size(); ++i) os << "  n" << i << " [label=\"" << s[i].get_str() << "\"];\n";
  for (Index j = 0; j < s.size(); ++j)
    for (Index i : gtd_indices(s, j)) os << "  n" << i << " -> n" << j << ";\n";
  os << "}\n";
}

inline std::string hasse_dot(const GcdClosedSet& s) {
  std::ostringstream os;
  write_hasse_dot(os, s);
  return os.str();
}

}  // namespace gcdlcm
