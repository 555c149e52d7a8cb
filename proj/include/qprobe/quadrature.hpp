#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace qprobe {

// Adaptive Simpson quadrature on [a, b]. Tolerance is relative to the
// running estimate of the whole integral, with an absolute floor.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol = 1e-12,
                          int max_depth = 60);

}  // namespace qprobe
