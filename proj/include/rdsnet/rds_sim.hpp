#pragma once

// Event-driven simulation of respondent-driven sampling over a known
// population graph.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "rdsnet/population.hpp"
#include "rdsnet/study.hpp"
#include "rdsnet/waiting_time.hpp"

namespace rdsnet {

struct SeedEntry {
  std::size_t vertex = 0;  // population vertex index
  double time = 0.0;
};

struct SimConfig {
  std::vector<SeedEntry> seeds;  // entry times nondecreasing
  int coupons_per_subject = 3;
  std::size_t target_sample_size = 50;
  WaitingTimeModel model = WaitingTimeModel::exponential(1.0);
  std::uint64_t rng_seed = 0;
  std::optional<double> max_time;
};

struct SimEvent {
  double time = 0.0;
  std::optional<std::size_t> recruiter;  // study index; empty for a seed
  std::size_t recruitee = 0;             // study index
};

struct SimResult {
  ObservedStudy observed;
  AdjacencyMatrix true_subgraph;         // induced subgraph of the sample
  std::vector<SimEvent> event_log;
  std::vector<std::size_t> population_vertex;  // study index -> population vertex
  bool truncated = false;                // queue exhausted before the target size
  std::size_t discarded_events = 0;      // clocks that fired too late to matter
  std::size_t skipped_seeds = 0;         // seed vertices already recruited by a peer
  std::size_t tie_adjustments = 0;       // times nudged to keep events strictly ordered
};

/// Runs the recruitment diffusion. Throws std::invalid_argument on an invalid
/// configuration. A run that exhausts its queue early returns the partial
/// sample with `truncated` set.
SimResult simulate(const PopulationGraph& graph, const SimConfig& config);

/// Same as simulate() but drawing from a caller-owned stream.
SimResult simulate(const PopulationGraph& graph, const SimConfig& config, Rng& rng);

/// `count` distinct seed vertices chosen uniformly, entering at
/// 0, spacing, 2*spacing, ...
std::vector<SeedEntry> random_seeds(const PopulationGraph& graph, std::size_t count, double spacing,
                                    Rng& rng);

/// Smallest increment used to separate events that coincide in floating point.
inline constexpr double kTieEpsilon = 1e-9;

}  // namespace rdsnet
