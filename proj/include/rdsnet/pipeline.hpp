#pragma once

// Alternating reconstruction: A-step (annealing over compatible matrices at
// fixed parameters) and theta-step (parameter MLE at fixed matrix), plus the
// edge-recovery metrics.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rdsnet/annealer.hpp"
#include "rdsnet/param_est.hpp"
#include "rdsnet/study.hpp"
#include "rdsnet/waiting_time.hpp"

namespace rdsnet {

struct RenderConfig {
  WaitingTimeModel theta0 = WaitingTimeModel::exponential(1.0);  // also fixes the family
  std::size_t iota_max = 3;
  AnnealConfig anneal;
  EdgePrior prior;
  bool warm_start = true;  // each A-step starts from the previous estimate
  std::size_t chains = 1;
  std::size_t threads = 1;
  std::uint64_t rng_seed = 0;
  EstimateOptions estimate;
  std::optional<AdjacencyMatrix> initial;  // defaults to the recruitment projection
};

struct RenderIteration {
  std::size_t iota = 0;
  std::vector<double> theta_in;
  double a_step_logpost = 0.0;  // best log posterior found by the A-step at theta_in
  std::size_t a_step_edges = 0;
  std::vector<double> theta_out;
  double theta_step_logpost = 0.0;  // log posterior at (A-step estimate, theta_out)
  bool theta_step_ok = true;
  std::string warning;
};

struct RenderResult {
  AdjacencyMatrix a_hat;            // estimate of the last A-step
  AdjacencyMatrix a_final_state;    // final chain state of the last A-step
  WaitingTimeModel theta_hat = WaitingTimeModel::exponential(1.0);
  double logpost = 0.0;             // log posterior at (a_hat, theta_hat)
  std::vector<RenderIteration> trace;
  AnnealResult last_anneal;
  bool flagged = false;             // some theta-step failed and kept the previous value
};

/// Throws std::invalid_argument if iota_max is 0 or theta0 is outside the
/// parameter space.
RenderResult render(const ObservedStudy& study, const RenderConfig& config);

enum class RateConvention {
  pairs,  // both counts over C(n, 2)
  roc,    // true positives over positives, false positives over negatives
};

struct RateReport {
  double tpr = 0.0;
  double fpr = 0.0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t positives = 0;  // true edges
  std::size_t negatives = 0;  // true non-edges
  std::size_t pairs = 0;      // C(n, 2)
};

RateReport tpr_fpr(const AdjacencyMatrix& estimate, const AdjacencyMatrix& truth, RateConvention convention);

struct MetricsReport {
  RateReport roc;
  RateReport pairs;
  std::size_t estimated_edges = 0;
  std::size_t true_edges = 0;
  std::vector<double> theta_bias;  // estimate minus truth, per parameter
};

MetricsReport evaluate(const AdjacencyMatrix& estimate, const AdjacencyMatrix& truth,
                       const WaitingTimeModel& theta_hat, const WaitingTimeModel& theta_true);

}  // namespace rdsnet
