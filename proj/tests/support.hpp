#pragma once

#include "gcdlcm/divisor_structure.hpp"

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace testing_support {

inline std::vector<gcdlcm::Integer> ints(std::initializer_list<long> xs) {
  std::vector<gcdlcm::Integer> out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

inline std::vector<gcdlcm::Integer> ints(const std::vector<std::int64_t>& xs) {
  std::vector<gcdlcm::Integer> out;
  for (auto x : xs) out.emplace_back(static_cast<long>(x));
  return out;
}

inline gcdlcm::GcdClosedSet set_of(std::initializer_list<long> xs) {
  return gcdlcm::GcdClosedSet::from_elements(ints(xs));
}

inline std::vector<std::int64_t> as_i64(const gcdlcm::GcdClosedSet& s) {
  std::vector<std::int64_t> out;
  for (const auto& x : s.elements()) out.push_back(x.get_si());
  return out;
}

inline gcdlcm::Index idx(const gcdlcm::GcdClosedSet& s, long x) { return s.require_index(gcdlcm::Integer(x), "test"); }

}  // namespace testing_support
