#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace subjet {

/// Composite Simpson rule on [a, b] with an even number of panels.
double simpson(const std::function<double(double)>& f, double a, double b, std::size_t panels);

/// Tensor-product composite Simpson rule on [u0, u1] x [v0, v1].
double simpson_2d(const std::function<double(double, double)>& f, double u0, double u1, double v0, double v1,
                  std::size_t panels_u, std::size_t panels_v);

/// Running integral of uniformly spaced samples f_0..f_n (spacing h, possibly
/// negative). Even nodes use composite Simpson; odd nodes add one interval of
/// the three-point rule h/12 (5 f_k + 8 f_k+1 - f_k+2) (or its mirror at the
/// end) to the preceding even node. Result[0] = 0.
std::vector<double> cumulative_simpson(std::span<const double> values, double h);

}  // namespace subjet
