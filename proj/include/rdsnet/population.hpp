#pragma once

// Simple undirected population graphs for the simulator.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rdsnet/random.hpp"

namespace rdsnet {

class PopulationGraph {
 public:
  PopulationGraph() = default;
  /// Vertices 0..n-1 with external IDs 0..n-1.
  explicit PopulationGraph(std::size_t n);
  /// Vertices carry arbitrary external IDs (e.g. from an edge-list file).
  explicit PopulationGraph(std::vector<std::int64_t> ids);

  std::size_t size() const { return neighbors_.size(); }
  std::size_t edge_count() const { return edges_; }
  const std::vector<std::uint32_t>& neighbors(std::size_t v) const { return neighbors_[v]; }
  std::size_t degree(std::size_t v) const { return neighbors_[v].size(); }
  std::int64_t id(std::size_t v) const { return ids_[v]; }
  const std::vector<std::int64_t>& ids() const { return ids_; }

  /// Adds {u, v}; returns false for self-loops and duplicates (simple graph).
  bool add_edge(std::size_t u, std::size_t v);
  bool has_edge(std::size_t u, std::size_t v) const;

  /// Sorts every adjacency list so iteration order is canonical.
  void finalize();

 private:
  std::vector<std::vector<std::uint32_t>> neighbors_;
  std::vector<std::int64_t> ids_;
  std::size_t edges_ = 0;
};

enum class PopulationKind { erdos_renyi, small_world, config_model };

PopulationKind parse_population_kind(const std::string& name);
std::string population_kind_name(PopulationKind kind);

struct PopulationSpec {
  PopulationKind kind = PopulationKind::config_model;
  std::size_t n = 1000;
  double p = 0.01;               // erdos_renyi edge probability
  std::size_t k = 8;             // small_world ring degree (even)
  double rewire = 0.1;           // small_world rewiring probability
  std::vector<int> degrees;      // config_model explicit sequence; empty = heavy-tailed draw
  double degree_exponent = 2.7;  // heavy-tailed draw: P(d) ~ d^-exponent
  int min_degree = 4;
  int max_degree = 100;
};

PopulationGraph erdos_renyi(std::size_t n, double p, Rng& rng);
PopulationGraph small_world(std::size_t n, std::size_t k, double rewire, Rng& rng);
/// Erased configuration model: stubs are matched uniformly and self-loops or
/// multi-edges are dropped. Throws std::invalid_argument on an odd degree sum.
PopulationGraph configuration_model(const std::vector<int>& degrees, Rng& rng);
/// Discrete power-law degree sequence with an even sum.
std::vector<int> heavy_tailed_degrees(std::size_t n, double exponent, int min_degree, int max_degree,
                                      Rng& rng);

/// Deterministic given `seed`.
PopulationGraph generate_population(const PopulationSpec& spec, std::uint64_t seed);

}  // namespace rdsnet
