// Walks through the library API on a few small sets: structure, verdict,
// witness, theorem checks, coefficient identities and a short search.

#include "gcdlcm/identities.hpp"
#include "gcdlcm/search.hpp"
#include "gcdlcm/theorems.hpp"

#include <iostream>

using namespace gcdlcm;

static void describe(const GcdClosedSet& s) {
  const auto r = structural_flags(s);
  const auto rep = divisibility_report(s, r, 1);
  std::cout << s.to_string() << "  max GTD count " << r.max_gtd_count << ", condition C "
            << (r.condition_c.holds ? "holds" : "fails") << ", condition M " << (r.condition_m.holds ? "holds" : "fails")
            << "\n  verdict: " << to_string(rep.verdict);
  if (rep.witness)
    std::cout << ", U[" << s[rep.witness->row] << "][" << s[rep.witness->col] << "] = " << rep.witness->value;
  std::cout << '\n';
  if (s.size() <= 8) std::cout << "  small-set case: " << to_string(classify_small(s, r).which) << '\n';
  for (const auto& m : all_theorem_35_matches(s, r)) {
    const auto c = verify_theorem_on_instance(s, r, m);
    std::cout << "  " << to_string(m.id) << " at " << m.anchor_element << ": " << (c.confirmed ? "confirmed" : "NOT confirmed");
    if (c.witness) std::cout << " (row sum " << c.witness->value << ')';
    std::cout << '\n';
  }
}

int main() {
  for (auto xs : {std::vector<long>{1, 2, 3, 6}, {1, 2, 3, 12}, {1, 2, 3, 5, 30}, {1, 2, 3, 5, 6, 10, 15, 30}}) {
    std::vector<Integer> v(xs.begin(), xs.end());
    describe(GcdClosedSet::from_elements(v));
  }
  describe(gcd_closure({Integer(6), Integer(10), Integer(15)}));
  describe(build_section4_family(2, {Integer(3), Integer(5), Integer(7)}, 2));

  const auto s = GcdClosedSet::from_elements({Integer(1), Integer(2), Integer(4), Integer(12)});
  std::cout << "identities on " << s.to_string() << ":";
  for (const auto& r : check_coefficient_identities(s, 2)) std::cout << ' ' << r.name << (r.holds ? "=ok" : "=FAIL");
  std::cout << '\n';

  SearchTask task;
  task.frame = 60;
  task.min_size = 4;
  task.max_size = 5;
  std::uint64_t total = 0, not_dividing = 0;
  hunt(task, 0, 2, [&](const SearchRecord& r) {
    ++total;
    if (r.verdict == Verdict::DoesNotDivide) ++not_dividing;
  });
  std::cout << "frame 60, sizes 4..5: " << total << " gcd-closed sets, " << not_dividing << " not dividing\n";
}
