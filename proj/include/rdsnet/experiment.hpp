#pragma once

// Synthetic experiment harness: simulate RDS over a fixed population graph,
// reconstruct, and tabulate recovery and parameter-bias rows.

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "rdsnet/pipeline.hpp"
#include "rdsnet/population.hpp"
#include "rdsnet/rds_sim.hpp"

namespace rdsnet {

struct ExperimentSettings {
  PopulationSpec population;
  std::uint64_t population_seed = 1;
  std::size_t sample_size = 50;
  int coupons = 3;
  std::size_t seeds = 3;
  double seed_spacing = 0.5;
  RenderConfig render;  // theta0 family is replaced per experiment where noted
  std::uint64_t master_seed = 1;
  std::size_t threads = 1;
  bool reconstruct = true;       // run the joint reconstruction
  bool estimate_given_truth = true;  // also estimate theta from the true matrix
};

/// One simulated dataset with the artifacts every experiment needs.
struct Dataset {
  std::size_t id = 0;
  SimResult sim;
  std::uint64_t render_seed = 0;
};

/// Dataset `id` is a pure function of (settings, model, id).
Dataset make_dataset(const PopulationGraph& population, const ExperimentSettings& settings,
                     const WaitingTimeModel& truth, std::size_t id);

struct SweepRow {
  std::size_t dataset = 0;
  double alpha = 0.0;
  std::size_t replicate = 0;
  std::size_t n = 0;
  bool truncated = false;
  RateReport roc;
  RateReport pairs;
  double alpha_hat = 0.0;        // shape from the joint reconstruction
  double scale_hat = 0.0;
  double alpha_hat_true_a = 0.0;  // shape estimated given the true matrix
  std::string error;
  double runtime_seconds = 0.0;  // reported separately; not part of the CSV
};

/// Gamma(alpha, scale 1/alpha) datasets for each alpha, reconstructed with the
/// gamma family.
std::vector<SweepRow> experiment_gamma_sweep(const std::vector<double>& alphas, std::size_t replicates,
                                             const ExperimentSettings& settings);

struct MisspecRow {
  std::size_t dataset = 0;
  std::size_t replicate = 0;
  std::string model;  // "gamma" or "exponential"
  RateReport roc;
  RateReport pairs;
  std::vector<double> theta_hat;
  std::string error;
  double runtime_seconds = 0.0;
};

/// Each Gamma(alpha, 1/alpha) dataset reconstructed twice, under the gamma
/// and the exponential family; rows come in pairs sharing a dataset id.
std::vector<MisspecRow> experiment_misspecification(std::size_t replicates, double alpha,
                                                    const ExperimentSettings& settings);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_misspec_csv(std::ostream& out, const std::vector<MisspecRow>& rows);
/// Wall-clock timings, kept out of the deterministic result files.
void write_sweep_timings(std::ostream& out, const std::vector<SweepRow>& rows);
void write_misspec_timings(std::ostream& out, const std::vector<MisspecRow>& rows);

}  // namespace rdsnet
