#pragma once

// Maximum-likelihood estimation of the waiting-time parameters given a fixed
// adjacency matrix (flat prior on the parameters).

#include <optional>
#include <string>
#include <vector>

#include "rdsnet/nelder_mead.hpp"
#include "rdsnet/study.hpp"
#include "rdsnet/waiting_time.hpp"

namespace rdsnet {

/// Bijection between the constrained parameter space and R^p.
///   exponential: log rate
///   gamma:       log shape, log scale
///   power_law:   log(shape - 1), logit(x_min / bound)
/// where bound is the smallest recruiter-to-recruitee gap; x_min above it
/// would leave some recruitment with zero hazard.
class ParamSpace {
 public:
  ParamSpace(Family family, const ObservedStudy& study);
  ParamSpace(Family family, double x_min_bound);

  Family family() const { return family_; }
  std::size_t dimension() const { return parameter_count(family_); }
  double x_min_bound() const { return x_min_bound_; }

  bool contains(const std::vector<double>& theta) const;
  std::vector<double> to_unconstrained(const std::vector<double>& theta) const;
  std::vector<double> from_unconstrained(const std::vector<double>& z) const;

 private:
  Family family_;
  double x_min_bound_;
};

/// Smallest t_recruitee - t_recruiter over the recruitment edges.
double min_recruitment_gap(const ObservedStudy& study);

struct EstimateOptions {
  NelderMeadOptions optimizer;
  /// Optimize the raw parameters, clipped to a small positive floor, instead
  /// of the log-transformed ones (used to check transform invariance).
  bool raw_coordinates = false;
};

struct ThetaEstimate {
  WaitingTimeModel model = WaitingTimeModel::exponential(1.0);
  double log_likelihood = 0.0;
  NelderMeadResult report;
  bool converged = false;
  std::string warning;
};

/// The parameter objective, rebuilding the likelihood workspace per call.
double theta_objective(const AdjacencyMatrix& a, const ObservedStudy& study, const WaitingTimeModel& model);

/// Throws std::invalid_argument when theta0 lies outside the parameter space
/// and std::runtime_error when the objective is not finite at theta0.
ThetaEstimate estimate_theta(const AdjacencyMatrix& a, const ObservedStudy& study, Family family,
                             const std::vector<double>& theta0, const EstimateOptions& options = {});

}  // namespace rdsnet
