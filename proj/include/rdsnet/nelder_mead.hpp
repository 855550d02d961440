#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace rdsnet {

struct NelderMeadOptions {
  double initial_step = 0.05;  // simplex edge along each coordinate
  double x_tolerance = 1e-6;   // simplex diameter (max-norm from the best vertex)
  double f_tolerance = 1e-8;   // spread of function values across the simplex
  std::size_t max_iterations = 0;  // 0 means 500 * dimension
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
  double diameter = 0.0;
  double spread = 0.0;
};

/// Minimizes `objective` from `start`. Non-finite objective values are
/// treated as +inf (the simplex steps away from them).
NelderMeadResult nelder_mead_minimize(const std::function<double(std::span<const double>)>& objective,
                                      std::vector<double> start, const NelderMeadOptions& options = {});

}  // namespace rdsnet
