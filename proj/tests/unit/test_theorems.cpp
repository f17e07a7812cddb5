#include "gcdlcm/theorems.hpp"
#include "gcdlcm/identities.hpp"

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "support.hpp"

using namespace gcdlcm;
using testing_support::idx;
using testing_support::ints;
using testing_support::set_of;

namespace {

const auto kSquarefree30 = set_of({1, 2, 3, 5, 6, 10, 15, 30});

std::vector<GcdClosedSet> corpus(long frame, std::size_t max_size) {
  std::vector<GcdClosedSet> out;
  for (const auto& v : oracle::closed_subsets(frame, max_size)) out.push_back(GcdClosedSet::from_elements(ints(v)));
  return out;
}

}  // namespace

TEST(ThreeGtdAnchorMatch, MatchExamples) {
  const auto s = set_of({2, 4, 12, 20, 28, 420});
  const auto m = match_theorem_35(s);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->anchor_element, 420);
  EXPECT_EQ(values_of(s, m->gtd), ints({12, 20, 28}));
  EXPECT_EQ(values_of(s, m->dset), ints({4}));
  EXPECT_TRUE(m->dset_is_chain);
  EXPECT_EQ(m->id, TheoremId::T3_5);  // gcd of the GTDs is 4, not the minimum 2

  EXPECT_FALSE(match_theorem_35(kSquarefree30));
  EXPECT_FALSE(match_theorem_35(set_of({1, 2, 4})));
}

TEST(ThreeGtdAnchorMatch, NarrowerIds) {
  // four pairwise coprime GTDs: D_S = {1}
  auto m = match_theorem_35(set_of({1, 2, 3, 5, 7, 210}));
  ASSERT_TRUE(m);
  EXPECT_EQ(m->id, TheoremId::T3_1);
  // GTDs 6, 10, 7: D_S = {1, 2}, a chain
  m = match_theorem_35(set_of({1, 2, 6, 7, 10, 210}));
  ASSERT_TRUE(m);
  EXPECT_EQ(m->id, TheoremId::T3_2);
  // GTDs 6, 10, 21: D_S = {1, 2, 3}, not a chain
  const auto s3 = set_of({1, 2, 3, 6, 10, 21, 210});
  m = match_theorem_35(s3);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->id, TheoremId::T3_3);
  EXPECT_FALSE(m->dset_is_chain);
  EXPECT_EQ(values_of(s3, m->dset), ints({1, 2, 3}));
  // same shape with five members is below the size threshold
  m = match_theorem_35(set_of({1, 2, 3, 5, 30}));
  ASSERT_TRUE(m);
  EXPECT_EQ(m->id, TheoremId::T3_5);
}

TEST(ThreeGtdAnchorMatch, SmallestAnchorFirst) {
  // two unrelated anchors, each with pairwise coprime-over-base GTDs
  const auto s = gcd_closure(ints({2 * 3 * 5, 2 * 7, 3 * 7, 5 * 7, 11 * 13, 11 * 17, 11 * 19, 11 * 13 * 17 * 19}));
  const auto r = structural_flags(s);
  const auto all = all_theorem_35_matches(s, r);
  ASSERT_FALSE(all.empty());
  EXPECT_EQ(match_theorem_35(s, r)->anchor, all.front().anchor);
  for (std::size_t k = 1; k < all.size(); ++k) EXPECT_LT(all[k - 1].anchor, all[k].anchor);
  for (const auto& m : all) {
    EXPECT_GE(m.gtd.size(), 3u);
    EXPECT_EQ(m.gtd, gtd_indices(s, m.anchor));
    EXPECT_EQ(m.dset, dset_indices(s, m.anchor));
  }
}

TEST(EightElementMatch, MatchExamples) {
  const auto m = match_theorem_36(kSquarefree30);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->anchor_element, 30);
  EXPECT_EQ(m->id, TheoremId::T3_6);

  const auto s = set_of({1, 2, 3, 5, 6, 10, 15, 210});
  ASSERT_TRUE(match_theorem_36(s));
  EXPECT_FALSE(condition_m(s).holds);  // [6,10] = 30 != 210

  EXPECT_FALSE(match_theorem_36(gcd_closure(ints({1, 2, 3, 4, 5, 6, 7, 8}))));
  EXPECT_THROW(match_theorem_36(set_of({1, 2, 3, 6})), std::invalid_argument);
}

TEST(EightElementMatch, ClosedFormMatchesUnderConditionM) {
  for (unsigned long e : {1UL, 2UL, 3UL}) {
    const auto rep = divisibility_report(kSquarefree30, e);
    EXPECT_EQ(rep.u, theorem36_closed_form(kSquarefree30, e)) << "e=" << e;
  }
  const auto u = theorem36_closed_form(kSquarefree30, 1);
  EXPECT_EQ(u(idx(kSquarefree30, 6), idx(kSquarefree30, 5)), 6);
  EXPECT_EQ(u(idx(kSquarefree30, 6), idx(kSquarefree30, 10)), 0);
}

TEST(VerifyInstance, TheoremExamples) {
  const auto s = set_of({2, 4, 12, 20, 28, 420});
  auto check = verify_theorem_on_instance(s, *match_theorem_35(s));
  EXPECT_TRUE(check.confirmed);
  EXPECT_EQ(check.computed, Verdict::DoesNotDivide);
  ASSERT_TRUE(check.witness);
  EXPECT_GT(check.witness->value, 0);
  EXPECT_LT(check.witness->value, 1);

  check = verify_theorem_on_instance(kSquarefree30, *match_theorem_36(kSquarefree30));
  EXPECT_TRUE(check.confirmed);
  EXPECT_EQ(check.computed, Verdict::Divides);
  EXPECT_EQ(check.closed_form_matches, true);

  const auto fam = build_section4_family(2, ints({3, 5, 7, 11}), 3);
  check = verify_theorem_on_instance(fam, *match_theorem_35(fam));
  EXPECT_TRUE(check.confirmed);

  const auto bad36 = set_of({1, 2, 3, 5, 6, 10, 15, 210});
  check = verify_theorem_on_instance(bad36, *match_theorem_36(bad36));
  EXPECT_EQ(check.predicted, Verdict::DoesNotDivide);
  EXPECT_TRUE(check.confirmed);

  for (auto raw : {ints({1, 2, 3, 5, 7, 210}), ints({1, 2, 6, 7, 10, 210}), ints({1, 2, 3, 6, 10, 21, 210})}) {
    const auto t = GcdClosedSet::from_elements(raw);
    EXPECT_TRUE(verify_theorem_on_instance(t, *match_theorem_35(t)).confirmed) << t.to_string();
  }
}

TEST(VerifyInstance, AllMatchesInCorpusConfirmed) {
  int matched = 0;
  for (const auto& s : corpus(60, 8)) {
    const auto r = structural_flags(s);
    for (const auto& m : all_theorem_35_matches(s, r)) {
      ++matched;
      EXPECT_TRUE(verify_theorem_on_instance(s, r, m).confirmed) << s.to_string();
    }
    if (s.size() != 8) continue;
    if (auto m = match_theorem_36(s, r)) {
      ++matched;
      EXPECT_TRUE(verify_theorem_on_instance(s, r, *m).confirmed) << s.to_string();
    }
  }
  EXPECT_GT(matched, 10);
}

TEST(ClassifySmall, Examples) {
  auto v = classify_small(set_of({1, 2, 3, 6}));
  EXPECT_EQ(v.which, CorollaryCase::MaxGtdTwoWithC);
  EXPECT_EQ(v.predicted, Verdict::Divides);
  v = classify_small(kSquarefree30);
  EXPECT_EQ(v.which, CorollaryCase::MaxGtdThreeWithM);
  EXPECT_EQ(v.predicted, Verdict::Divides);
  v = classify_small(set_of({1, 2, 3, 12}));
  EXPECT_EQ(v.which, CorollaryCase::None);
  EXPECT_EQ(v.predicted, Verdict::DoesNotDivide);
  EXPECT_EQ(classify_small(set_of({9})).which, CorollaryCase::MaxGtdOne);
  EXPECT_STREQ(to_string(CorollaryCase::MaxGtdOne), "(i) max-GTD-1");
  EXPECT_THROW(classify_small(set_of({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 15, 20, 30, 60})), std::invalid_argument);
}

TEST(ClassifySmall, AgreesWithExactVerdictOnFrame60) {
  for (const auto& s : corpus(60, 8)) {
    const auto r = structural_flags(s);
    EXPECT_EQ(classify_small(s, r).predicted, divisibility_report(s, r, 1).verdict) << s.to_string();
  }
}

TEST(Family, Examples) {
  EXPECT_EQ(build_section4_family(2, ints({3, 5, 7}), 2).elements(), ints({2, 4, 12, 20, 28, 420}));
  EXPECT_EQ(build_section4_family(2, ints({3}), 1).elements(), ints({2, 6}));
  const auto big = build_section4_family(3, ints({2, 5, 7, 11}), 10);
  EXPECT_EQ(big.size(), 15u);
  EXPECT_EQ(structural_flags(big).max_gtd_count, 4u);
  EXPECT_FALSE(condition_m(big).holds);
  EXPECT_EQ(d_set(big, big.max()).size(), 1u);
}

TEST(Family, SizesAndVerdicts) {
  for (unsigned long k = 1; k <= 3; ++k)
    for (std::size_t i = 2; i <= 4; ++i) {
      const auto all = ints({3, 5, 7, 11});
      const std::vector<Integer> qs(all.begin(), all.begin() + static_cast<long>(i));
      const auto s = build_section4_family(2, qs, k);
      EXPECT_EQ(s.size(), k + i + 1);
      EXPECT_EQ(structural_flags(s).max_gtd_count, i);
      if (i >= 3) {
        EXPECT_EQ(divisibility_report(s, 1).verdict, Verdict::DoesNotDivide) << s.to_string();
      }
    }
}

TEST(Family, RejectsBadInput) {
  EXPECT_THROW(build_section4_family(4, ints({3}), 1), std::invalid_argument);
  EXPECT_THROW(build_section4_family(2, ints({3, 9}), 1), std::invalid_argument);
  EXPECT_THROW(build_section4_family(2, ints({3, 3}), 1), std::invalid_argument);
  EXPECT_THROW(build_section4_family(2, ints({2, 3}), 1), std::invalid_argument);
  EXPECT_THROW(build_section4_family(2, {}, 1), std::invalid_argument);
  EXPECT_THROW(build_section4_family(2, ints({3}), 0), std::invalid_argument);
}

TEST(Findings, Flags) {
  EXPECT_EQ(conjecture1_bound(4), 12u);
  const auto four = set_of({1, 2, 3, 5, 7, 210});
  const auto r4 = structural_flags(four);
  EXPECT_TRUE(finding_flags(four, r4, Verdict::DoesNotDivide).empty());
  const auto forced = finding_flags(four, r4, Verdict::Divides);
  EXPECT_EQ(forced, (std::vector<std::string>{"conjecture1-counterexample", "conjecture2-counterexample",
                                              "corollary37-violation"}));
  const auto s = set_of({1, 2, 3, 12});
  EXPECT_TRUE(finding_flags(s, structural_flags(s), Verdict::DoesNotDivide).empty());
  EXPECT_FALSE(is_counterexample_flag("conjecture1-boundary"));
  EXPECT_TRUE(is_counterexample_flag("conjecture2-counterexample"));
}

TEST(Findings, NoneOnFrame60) {
  for (const auto& s : corpus(60, 8)) {
    const auto r = structural_flags(s);
    for (const auto& f : finding_flags(s, r, divisibility_report(s, r, 1).verdict))
      EXPECT_FALSE(is_counterexample_flag(f)) << f << " on " << s.to_string();
  }
}

TEST(Identities, HoldOnFrame60) {
  for (const auto& s : corpus(60, 6))
    for (unsigned long e : {1UL, 2UL})
      for (const auto& r : check_coefficient_identities(s, e)) EXPECT_TRUE(r.holds) << r.name << " " << r.detail << " " << s.to_string();
  const auto names = check_coefficient_identities(kSquarefree30, 1);
  ASSERT_EQ(names.size(), 6u);
  EXPECT_TRUE(all_hold(names));
}
