#pragma once

// The built-in self-check: coefficient identities, the row-sum identity,
// fixed instances with known verdicts, and the small-set classification
// audit over a frame. Each check reports how many cases it covered.

#include "gcdlcm/identities.hpp"
#include "gcdlcm/search.hpp"
#include "gcdlcm/theorems.hpp"

#include <functional>
#include <string>
#include <vector>

namespace gcdlcm {

struct SuiteCheck {
  std::string name;
  bool passed = true;
  std::uint64_t cases = 0;
  std::string detail;  // first failure
};

namespace detail {

inline void suite_fail(SuiteCheck& c, const std::string& what) {
  if (!c.passed) return;
  c.passed = false;
  c.detail = what;
}

inline std::vector<GcdClosedSet> frame_corpus(const Integer& frame, std::size_t max_size) {
  std::vector<GcdClosedSet> out;
  for (std::size_t n = 1; n <= max_size; ++n)
    for (auto& s : enumerate_gcd_closed(frame, n)) out.push_back(std::move(s));
  return out;
}

inline bool strictly_between_zero_and_one(const Rational& q) { return q > 0 && q < 1; }

}  // namespace detail

inline SuiteCheck suite_smith_determinant() {
  SuiteCheck c{"smith-determinant", true, 0, {}};
  for (const ArithFn& f : {ArithFn{fn::Identity{}}, ArithFn{fn::Power{2}}}) {
    for (std::size_t n = 1; n <= 8; ++n, ++c.cases) {
      const auto r = smith_determinant_check(n, f);
      if (!r.equal) detail::suite_fail(c, describe(f) + " n=" + std::to_string(n) + ": " + r.det.get_str());
    }
  }
  return c;
}

inline SuiteCheck suite_coefficient_identities(const std::vector<GcdClosedSet>& corpus) {
  SuiteCheck c{"coefficient-identities", true, 0, {}};
  for (const auto& s : corpus)
    for (unsigned long e : {1UL, 2UL}) {
      ++c.cases;
      for (const auto& r : check_coefficient_identities(s, e))
        if (!r.holds) detail::suite_fail(c, s.to_string() + " e=" + std::to_string(e) + " " + r.name + " " + r.detail);
    }
  return c;
}

inline SuiteCheck suite_row_sum_identity(const std::vector<GcdClosedSet>& corpus) {
  SuiteCheck c{"row-sum-over-multiples", true, 0, {}};
  for (const auto& s : corpus) {
    const auto r = structural_flags(s);
    const auto rep = divisibility_report(s, r, 1);
    const auto t = coefficient_table_fast(s, r, 1);
    for (Index q = 0; q < s.size(); ++q)
      for (Index n = 0; n < s.size(); ++n, ++c.cases)
        if (!u_row_sum_over_multiples(s, rep.u, t, q, n).equal)
          detail::suite_fail(c, s.to_string() + " q=" + std::to_string(q) + " n=" + std::to_string(n));
  }
  return c;
}

/// Hand-picked sets whose verdict and structure are known in advance.
inline SuiteCheck suite_instances() {
  SuiteCheck c{"known-instances", true, 0, {}};
  auto verdict_is = [&](const GcdClosedSet& s, Verdict want, unsigned long e = 1) {
    ++c.cases;
    const auto rep = divisibility_report(s, e);
    if (rep.verdict != want) detail::suite_fail(c, s.to_string() + " verdict " + to_string(rep.verdict));
    return rep;
  };
  auto from = [](std::initializer_list<long> xs) {
    std::vector<Integer> v;
    for (long x : xs) v.emplace_back(x);
    return GcdClosedSet::from_elements(v);
  };

  verdict_is(from({1, 2, 3, 6}), Verdict::Divides);
  const auto rep = verdict_is(from({1, 2, 3, 12}), Verdict::DoesNotDivide);
  if (!rep.witness || !detail::strictly_between_zero_and_one(rep.witness->value))
    detail::suite_fail(c, "{1, 2, 3, 12} witness not in (0,1)");

  const auto sq30 = from({1, 2, 3, 5, 6, 10, 15, 30});
  for (unsigned long e : {1UL, 2UL}) {
    const auto r = verdict_is(sq30, Verdict::Divides, e);
    if (!(r.u == theorem36_closed_form(sq30, e))) detail::suite_fail(c, "closed form differs at e=" + std::to_string(e));
  }

  // every theorem whose hypothesis holds must be confirmed on its instance
  for (const auto& s : {from({2, 4, 12, 20, 28, 420}), from({1, 2, 3, 5, 6, 10, 15, 210}), from({1, 2, 3, 5, 30}),
                        from({1, 2, 3, 5, 7, 210}), sq30}) {
    const auto r = structural_flags(s);
    std::vector<TheoremMatch> ms = all_theorem_35_matches(s, r);
    if (s.size() == 8)
      if (auto m = match_theorem_36(s, r)) ms.push_back(*m);
    if (ms.empty()) detail::suite_fail(c, s.to_string() + " matched no theorem");
    for (const auto& m : ms)
      for (unsigned long e : {1UL, 2UL}) {
        ++c.cases;
        if (!verify_theorem_on_instance(s, r, m, e).confirmed)
          detail::suite_fail(c, s.to_string() + " " + to_string(m.id) + " e=" + std::to_string(e));
      }
  }

  const std::vector<Integer> odd{3, 5, 7, 11};
  for (std::size_t i = 3; i <= 4; ++i)
    for (unsigned long k : {2UL, 10UL})
      verdict_is(build_section4_family(2, {odd.begin(), odd.begin() + static_cast<long>(i)}, k), Verdict::DoesNotDivide);
  return c;
}

/// Classification against the exact verdict, theorem confirmations and
/// conjecture flags over every gcd-closed subset of the frame up to size 8.
inline SuiteCheck suite_classification_audit(const Integer& frame) {
  SuiteCheck c{"classification-audit-" + frame.get_str(), true, 0, {}};
  for (std::size_t n = 1; n <= 8; ++n) {
    GcdClosedEnumerator it(frame, n);
    while (auto s = it.next()) {
      ++c.cases;
      const auto r = structural_flags(*s);
      const auto rep = divisibility_report(*s, r, 1);
      if (classify_small(*s, r).predicted != rep.verdict) detail::suite_fail(c, s->to_string() + " classification");
      for (const auto& f : finding_flags(*s, r, rep.verdict))
        if (is_counterexample_flag(f)) detail::suite_fail(c, s->to_string() + " " + f);
      for (const auto& m : all_theorem_35_matches(*s, r))
        if (!verify_theorem_on_instance(*s, r, m).confirmed)
          detail::suite_fail(c, s->to_string() + " " + to_string(m.id));
      if (n == 8)
        if (auto m = match_theorem_36(*s, r); m && !verify_theorem_on_instance(*s, r, *m).confirmed)
          detail::suite_fail(c, s->to_string() + " T3.6");
    }
  }
  return c;
}

/// Runs every check in order; `progress` sees each result as it finishes.
inline std::vector<SuiteCheck> run_verification_suite(const std::function<void(const SuiteCheck&)>& progress = {}) {
  std::vector<SuiteCheck> out;
  auto add = [&](SuiteCheck c) {
    if (progress) progress(c);
    out.push_back(std::move(c));
  };
  const auto corpus = detail::frame_corpus(60, 6);
  add(suite_smith_determinant());
  add(suite_coefficient_identities(corpus));
  add(suite_row_sum_identity(corpus));
  add(suite_instances());
  add(suite_classification_audit(60));
  return out;
}

}  // namespace gcdlcm
