#include <gtest/gtest.h>

#include "ufb/verify.hpp"

using namespace ufb;

TEST(PropertySuite, DefaultSeedPasses) {
  const auto results = verify::run_property_suite({.seed = 1, .quick = true, .inject_fault = false});
  ASSERT_EQ(results.size(), 5u);
  for (const auto& r : results) {
    EXPECT_TRUE(r.passed()) << r.name << " worst=" << r.worst;
    EXPECT_GT(r.cases, 0u);
  }
}

TEST(PropertySuite, OtherSeedsPass) {
  for (std::uint64_t seed : {2u, 3u, 4u})
    for (const auto& r : verify::run_property_suite({.seed = seed, .quick = true, .inject_fault = false}))
      EXPECT_TRUE(r.passed()) << r.name << " seed=" << seed << " worst=" << r.worst;
}

TEST(PropertySuite, InjectedFaultIsCaught) {
  const auto results = verify::run_property_suite({.seed = 1, .quick = true, .inject_fault = true});
  EXPECT_FALSE(results[0].passed());
  EXPECT_EQ(results[0].name, "theorem1_agreement");
}

TEST(PropertySuite, QuickUsesFewerCases) {
  const auto quick = verify::run_property_suite({.seed = 1, .quick = true, .inject_fault = false});
  const auto full = verify::run_property_suite({.seed = 1, .quick = false, .inject_fault = false});
  for (std::size_t k = 0; k < quick.size(); ++k) {
    EXPECT_EQ(quick[k].name, full[k].name);
    EXPECT_LT(quick[k].cases, full[k].cases);
  }
}
