#include "rdsnet/param_est.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rdsnet/likelihood.hpp"

namespace rdsnet {

namespace {

constexpr double kRawFloor = 1e-8;

double logistic(double z) { return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z)); }

}  // namespace

double min_recruitment_gap(const ObservedStudy& study) {
  double gap = std::numeric_limits<double>::infinity();
  const auto& t = study.times();
  for (const auto& e : study.recruitment_graph().edges()) gap = std::min(gap, t[e.recruitee] - t[e.recruiter]);
  return gap;
}

ParamSpace::ParamSpace(Family family, const ObservedStudy& study)
    : ParamSpace(family, min_recruitment_gap(study)) {}

ParamSpace::ParamSpace(Family family, double x_min_bound) : family_(family), x_min_bound_(x_min_bound) {}

bool ParamSpace::contains(const std::vector<double>& theta) const {
  if (theta.size() != dimension()) return false;
  for (double v : theta)
    if (!(v > 0.0) || !std::isfinite(v)) return false;
  if (family_ == Family::power_law) return theta[0] > 1.0 && theta[1] < x_min_bound_;
  return true;
}

std::vector<double> ParamSpace::to_unconstrained(const std::vector<double>& theta) const {
  if (!contains(theta)) throw std::invalid_argument("parameter vector outside the parameter space");
  switch (family_) {
    case Family::exponential: return {std::log(theta[0])};
    case Family::gamma: return {std::log(theta[0]), std::log(theta[1])};
    case Family::power_law: {
      const double r = theta[1] / x_min_bound_;
      return {std::log(theta[0] - 1.0), std::log(r) - std::log1p(-r)};
    }
  }
  return {};
}

std::vector<double> ParamSpace::from_unconstrained(const std::vector<double>& z) const {
  switch (family_) {
    case Family::exponential: return {std::exp(z[0])};
    case Family::gamma: return {std::exp(z[0]), std::exp(z[1])};
    case Family::power_law: return {1.0 + std::exp(z[0]), x_min_bound_ * logistic(z[1])};
  }
  return {};
}

double theta_objective(const AdjacencyMatrix& a, const ObservedStudy& study, const WaitingTimeModel& model) {
  const LikelihoodWorkspace ws(study, model, WorkspaceScope::coupon_support);
  return log_likelihood_matrix(a, ws);
}

ThetaEstimate estimate_theta(const AdjacencyMatrix& a, const ObservedStudy& study, Family family,
                             const std::vector<double>& theta0, const EstimateOptions& options) {
  const ParamSpace space(family, study);
  if (!space.contains(theta0))
    throw std::invalid_argument("estimate_theta: initial parameters lie outside the parameter space");

  auto model_at = [&](const std::vector<double>& theta) -> std::optional<WaitingTimeModel> {
    if (!space.contains(theta)) return std::nullopt;
    try {
      return WaitingTimeModel::create(family, theta);
    } catch (const std::exception&) {
      return std::nullopt;
    }
  };
  auto value_at = [&](const std::vector<double>& theta) {
    const auto model = model_at(theta);
    if (!model) return -std::numeric_limits<double>::infinity();
    try {
      return theta_objective(a, study, *model);
    } catch (const std::domain_error&) {
      return -std::numeric_limits<double>::infinity();
    }
  };

  const double start_value = value_at(theta0);
  if (!std::isfinite(start_value))
    throw std::runtime_error("estimate_theta: log-likelihood is not finite at the initial parameters; "
                             "try a different starting point");

  std::function<double(std::span<const double>)> objective;
  std::vector<double> start;
  if (options.raw_coordinates) {
    start = theta0;
    objective = [&](std::span<const double> x) {
      std::vector<double> theta(x.begin(), x.end());
      for (auto& v : theta) v = std::max(v, kRawFloor);
      return -value_at(theta);
    };
  } else {
    start = space.to_unconstrained(theta0);
    objective = [&](std::span<const double> z) {
      return -value_at(space.from_unconstrained(std::vector<double>(z.begin(), z.end())));
    };
  }

  ThetaEstimate out;
  out.report = nelder_mead_minimize(objective, start, options.optimizer);
  std::vector<double> theta = options.raw_coordinates ? out.report.x : space.from_unconstrained(out.report.x);
  if (options.raw_coordinates)
    for (auto& v : theta) v = std::max(v, kRawFloor);
  out.model = WaitingTimeModel::create(family, theta);
  out.log_likelihood = -out.report.value;
  out.converged = out.report.converged;
  if (!out.converged) out.warning = "Nelder-Mead stopped at the iteration limit before converging";
  return out;
}

}  // namespace rdsnet
