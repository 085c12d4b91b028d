#include "sierpinski/selftest.hpp"

#include <gtest/gtest.h>

#include <iostream>

namespace sierpinski {
namespace {

// Criterion 8 fails on its own terms: the nearest-ray-vertex projection does
// not reproduce f_U beyond level 2. The suite must keep reporting exactly that.
bool known_refuted(int id) { return id == 8; }

TEST(Acceptance, AllCriteria)
{
    const auto results = run_acceptance({}, [](const CriterionResult& r) { std::cout << format_result(r) << std::endl; });
    ASSERT_EQ(results.size(), 11u);
    for (const auto& r : results) {
        if (known_refuted(r.id)) {
            EXPECT_FALSE(r.passed);
            EXPECT_TRUE(r.refuted) << r.detail;
            EXPECT_NE(r.detail.find("first lur (h=3): f_U=1, d(o,y_U)=0"), std::string::npos) << r.detail;
            continue;
        }
        EXPECT_TRUE(r.passed) << "criterion " << r.id << ": " << r.detail;
        EXPECT_FALSE(r.refuted);
    }
}

} // namespace
} // namespace sierpinski
