#include "gcdlcm/verification_suite.hpp"

#include <gtest/gtest.h>

using namespace gcdlcm;

TEST(VerificationSuite, AllChecksPass) {
  std::vector<std::string> seen;
  const auto results = run_verification_suite([&](const SuiteCheck& c) { seen.push_back(c.name); });
  ASSERT_EQ(results.size(), 5u);
  EXPECT_EQ(seen.size(), results.size());
  for (const auto& c : results) {
    EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
    EXPECT_GT(c.cases, 0u) << c.name;
  }
  EXPECT_EQ(results.back().name, "classification-audit-60");
  EXPECT_EQ(results.back().cases, 828u);
  EXPECT_EQ(results.front().cases, 16u);
}

TEST(VerificationSuite, InstancesCoverEveryTheoremKind) {
  const auto c = suite_instances();
  EXPECT_TRUE(c.passed) << c.detail;
  EXPECT_GE(c.cases, 18u);
}
