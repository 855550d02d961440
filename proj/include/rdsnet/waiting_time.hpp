#pragma once

// Inter-recruitment time distributions. The likelihood only consumes the
// log-scale curves; raw-scale curves exist for tests and diagnostics.
//
// Parameterizations:
//   exponential(rate)           F(t) = 1 - exp(-rate t)
//   gamma(shape, scale)         mean = shape * scale; Gamma(a, a) in the
//                               experiments means shape a, scale 1/a (mean 1)
//   power_law(shape, x_min)     Pareto density (shape-1) x_min^(shape-1) t^-shape
//                               on [x_min, inf); hazard is zero below x_min

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rdsnet/random.hpp"

namespace rdsnet {

enum class Family { exponential, gamma, power_law };

std::string_view family_name(Family family);
/// Throws std::invalid_argument for an unknown name.
Family parse_family(std::string_view name);
std::size_t parameter_count(Family family);
std::vector<std::string> parameter_names(Family family);

class WaitingTimeModel {
 public:
  static WaitingTimeModel exponential(double rate);
  static WaitingTimeModel gamma(double shape, double scale);
  static WaitingTimeModel power_law(double shape, double x_min);
  /// Parameters in the order given by parameter_names(family).
  static WaitingTimeModel create(Family family, std::span<const double> params);

  Family family() const { return family_; }
  const std::vector<double>& params() const { return params_; }
  double mean() const;

  double cdf(double t) const;
  double pdf(double t) const;
  double log_pdf(double t) const;
  /// log(1 - F(t)) without forming 1 - F(t).
  double log_survival(double t) const;
  /// f(t) / (1 - F(t)).
  double hazard(double t) const;
  double log_hazard(double t) const;

  /// (1 - F(t)) / (1 - F(s)); throws std::domain_error when 1 - F(s) is 0 or t < s.
  double cond_survival(double s, double t) const;
  double log_cond_survival(double s, double t) const;
  /// Hazard of the conditional law; the conditioning cancels, leaving f(t)/(1-F(t)).
  double cond_hazard(double s, double t) const;
  double log_cond_hazard(double s, double t) const;

  double sample(Rng& rng) const;

  bool operator==(const WaitingTimeModel&) const = default;

 private:
  WaitingTimeModel(Family family, std::vector<double> params);
  void check_condition(double s, double t) const;

  Family family_ = Family::exponential;
  std::vector<double> params_;
  double log_norm_ = 0.0;  // family-specific constant of log_pdf
};

/// log Q(a, x), the log of the regularized upper incomplete gamma function,
/// accurate where Q itself underflows.
double log_gamma_q(double a, double x);

}  // namespace rdsnet
