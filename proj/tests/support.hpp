#pragma once

#include <cmath>

#include <gtest/gtest.h>

#include "igeo/monte_carlo.hpp"

namespace igeo::test {

// |estimate - target| <= k * stderr
inline ::testing::AssertionResult within_se(const McEstimate& e, double target, double k = 3.0) {
    const double gap = std::abs(e.mean - target);
    if (gap <= k * e.std_error) {
        return ::testing::AssertionSuccess();
    }
    return ::testing::AssertionFailure() << "mean " << e.mean << " is " << gap / e.std_error << " stderr from "
                                         << target << " (stderr " << e.std_error << ")";
}

// a.mean - b.mean > k * combined stderr
inline ::testing::AssertionResult exceeds(const McEstimate& a, const McEstimate& b, double k = 3.0) {
    const double se = combined_stderr(a, b);
    if (a.mean - b.mean > k * se) {
        return ::testing::AssertionSuccess();
    }
    return ::testing::AssertionFailure() << a.mean << " does not exceed " << b.mean << " by " << k
                                         << " combined stderr (" << se << ")";
}

inline ::testing::AssertionResult agree(const McEstimate& a, const McEstimate& b, double k = 3.0) {
    const double se = combined_stderr(a, b);
    if (std::abs(a.mean - b.mean) <= k * se) {
        return ::testing::AssertionSuccess();
    }
    return ::testing::AssertionFailure() << a.mean << " vs " << b.mean << " differ by "
                                         << std::abs(a.mean - b.mean) / se << " combined stderr";
}

}  // namespace igeo::test
