// truncation.hpp — Cutoff-convergence check applied to scalar observables

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dtc {

inline constexpr double kTruncationTolerance = 1e-6;

struct TruncationCheck {
    double value{0.0};    // at the requested cutoff
    double refined{0.0};  // at cutoff + delta
    int cutoff{0};
    int refined_cutoff{0};
    double rel_diff{0.0};
    bool warning{false};
};

// Evaluates f(cutoff) and f(cutoff + delta) (delta defaults to cutoff/4) and flags
// a warning when they differ by more than rel_tol relative to max(|refined|, floor).
template <class F>
TruncationCheck check_truncation(F&& f, int cutoff, double rel_tol = kTruncationTolerance, int delta = -1,
                                 double floor = std::numeric_limits<double>::min()) {
    if (delta < 0) delta = std::max(1, cutoff / 4);
    TruncationCheck c;
    c.cutoff = cutoff;
    c.refined_cutoff = cutoff + delta;
    c.value = f(cutoff);
    c.refined = f(c.refined_cutoff);
    const double scale = std::max(std::abs(c.refined), floor);
    c.rel_diff = std::abs(c.value - c.refined) / scale;
    c.warning = !(c.rel_diff <= rel_tol);
    return c;
}

}  // namespace dtc
