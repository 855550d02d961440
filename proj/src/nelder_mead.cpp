#include "rdsnet/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rdsnet {

NelderMeadResult nelder_mead_minimize(const std::function<double(std::span<const double>)>& objective,
                                      std::vector<double> start, const NelderMeadOptions& options) {
  const std::size_t p = start.size();
  if (p == 0) throw std::invalid_argument("nelder_mead_minimize: empty start point");
  const std::size_t max_iter = options.max_iterations > 0 ? options.max_iterations : 500 * p;

  NelderMeadResult result;
  auto eval = [&](const std::vector<double>& x) {
    ++result.evaluations;
    const double v = objective(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<std::vector<double>> simplex(p + 1, start);
  for (std::size_t k = 0; k < p; ++k) simplex[k + 1][k] += options.initial_step;
  std::vector<double> values(p + 1);
  for (std::size_t k = 0; k <= p; ++k) values[k] = eval(simplex[k]);

  std::vector<std::size_t> order(p + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<std::vector<double>> s(p + 1);
    std::vector<double> v(p + 1);
    for (std::size_t k = 0; k <= p; ++k) {
      s[k] = std::move(simplex[order[k]]);
      v[k] = values[order[k]];
    }
    simplex = std::move(s);
    values = std::move(v);
  };
  auto point = [&](const std::vector<double>& centroid, double coef) {
    std::vector<double> x(p);
    for (std::size_t i = 0; i < p; ++i) x[i] = centroid[i] + coef * (simplex[p][i] - centroid[i]);
    return x;
  };
  auto measure = [&] {
    double diam = 0.0;
    for (std::size_t k = 1; k <= p; ++k)
      for (std::size_t i = 0; i < p; ++i) diam = std::max(diam, std::fabs(simplex[k][i] - simplex[0][i]));
    result.diameter = diam;
    result.spread = values[p] - values[0];
    return diam < options.x_tolerance && result.spread < options.f_tolerance;
  };

  sort_simplex();
  while (result.iterations < max_iter) {
    if (measure()) {
      result.converged = true;
      break;
    }
    ++result.iterations;
    std::vector<double> centroid(p, 0.0);
    for (std::size_t k = 0; k < p; ++k)
      for (std::size_t i = 0; i < p; ++i) centroid[i] += simplex[k][i] / static_cast<double>(p);

    const auto xr = point(centroid, -options.reflection);
    const double fr = eval(xr);
    if (fr < values[0]) {
      const auto xe = point(centroid, -options.reflection * options.expansion);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[p] = xe;
        values[p] = fe;
      } else {
        simplex[p] = xr;
        values[p] = fr;
      }
    } else if (fr < values[p - 1]) {
      simplex[p] = xr;
      values[p] = fr;
    } else {
      const bool outside = fr < values[p];
      const auto xc = outside ? point(centroid, -options.reflection * options.contraction)
                              : point(centroid, options.contraction);
      const double fc = eval(xc);
      if (fc < (outside ? fr : values[p])) {
        simplex[p] = xc;
        values[p] = fc;
      } else {
        for (std::size_t k = 1; k <= p; ++k) {
          for (std::size_t i = 0; i < p; ++i)
            simplex[k][i] = simplex[0][i] + options.shrink * (simplex[k][i] - simplex[0][i]);
          values[k] = eval(simplex[k]);
        }
      }
    }
    sort_simplex();
  }
  if (!result.converged) result.converged = measure();
  result.x = simplex[0];
  result.value = values[0];
  return result;
}

}  // namespace rdsnet
