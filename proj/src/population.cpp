#include "rdsnet/population.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rdsnet {

PopulationGraph::PopulationGraph(std::size_t n) : neighbors_(n), ids_(n) {
  std::iota(ids_.begin(), ids_.end(), std::int64_t{0});
}

PopulationGraph::PopulationGraph(std::vector<std::int64_t> ids)
    : neighbors_(ids.size()), ids_(std::move(ids)) {}

bool PopulationGraph::add_edge(std::size_t u, std::size_t v) {
  if (u == v || u >= size() || v >= size()) return false;
  if (has_edge(u, v)) return false;
  neighbors_[u].push_back(static_cast<std::uint32_t>(v));
  neighbors_[v].push_back(static_cast<std::uint32_t>(u));
  ++edges_;
  return true;
}

bool PopulationGraph::has_edge(std::size_t u, std::size_t v) const {
  const auto& a = neighbors_[u].size() <= neighbors_[v].size() ? neighbors_[u] : neighbors_[v];
  const auto target = static_cast<std::uint32_t>(neighbors_[u].size() <= neighbors_[v].size() ? v : u);
  return std::find(a.begin(), a.end(), target) != a.end();
}

void PopulationGraph::finalize() {
  for (auto& nb : neighbors_) std::sort(nb.begin(), nb.end());
}

PopulationKind parse_population_kind(const std::string& name) {
  if (name == "erdos_renyi" || name == "er") return PopulationKind::erdos_renyi;
  if (name == "small_world" || name == "ws") return PopulationKind::small_world;
  if (name == "config_model" || name == "configuration") return PopulationKind::config_model;
  throw std::invalid_argument("unknown population kind '" + name + "'");
}

std::string population_kind_name(PopulationKind kind) {
  switch (kind) {
    case PopulationKind::erdos_renyi: return "erdos_renyi";
    case PopulationKind::small_world: return "small_world";
    case PopulationKind::config_model: return "config_model";
  }
  return "unknown";
}

PopulationGraph erdos_renyi(std::size_t n, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("erdos_renyi: p must lie in [0, 1]");
  PopulationGraph g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (p == 1.0 || (p > 0.0 && uniform_open(rng) < p)) g.add_edge(i, j);
  g.finalize();
  return g;
}

PopulationGraph small_world(std::size_t n, std::size_t k, double rewire, Rng& rng) {
  if (k % 2 != 0 || k >= n) throw std::invalid_argument("small_world: k must be even and below n");
  if (!(rewire >= 0.0 && rewire <= 1.0))
    throw std::invalid_argument("small_world: rewiring probability must lie in [0, 1]");
  PopulationGraph g(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t step = 1; step <= k / 2; ++step) {
      std::size_t j = (i + step) % n;
      if (rewire > 0.0 && uniform_open(rng) < rewire) {
        // Rewire to a uniform non-neighbor; keep the lattice edge if none is found.
        for (int attempt = 0; attempt < 32; ++attempt) {
          const std::size_t c = uniform_index(rng, n);
          if (c != i && !g.has_edge(i, c)) {
            j = c;
            break;
          }
        }
      }
      g.add_edge(i, j);
    }
  }
  g.finalize();
  return g;
}

PopulationGraph configuration_model(const std::vector<int>& degrees, Rng& rng) {
  long long total = 0;
  for (int d : degrees) {
    if (d < 0) throw std::invalid_argument("configuration_model: negative degree");
    total += d;
  }
  if (total % 2 != 0) throw std::invalid_argument("configuration_model: degree sum must be even");
  std::vector<std::uint32_t> stubs;
  stubs.reserve(static_cast<std::size_t>(total));
  for (std::size_t v = 0; v < degrees.size(); ++v)
    stubs.insert(stubs.end(), static_cast<std::size_t>(degrees[v]), static_cast<std::uint32_t>(v));
  // Fisher-Yates with the library's own index draw, so the graph does not
  // depend on the standard library's shuffle implementation.
  for (std::size_t i = stubs.size(); i > 1; --i) std::swap(stubs[i - 1], stubs[uniform_index(rng, i)]);
  PopulationGraph g(degrees.size());
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) g.add_edge(stubs[i], stubs[i + 1]);
  g.finalize();
  return g;
}

std::vector<int> heavy_tailed_degrees(std::size_t n, double exponent, int min_degree, int max_degree,
                                      Rng& rng) {
  if (!(exponent > 1.0) || min_degree < 1 || max_degree < min_degree)
    throw std::invalid_argument("heavy_tailed_degrees: invalid parameters");
  std::vector<int> d(n);
  long long total = 0;
  for (auto& x : d) {
    // Continuous Pareto draw floored onto the integers, truncated by resampling.
    double v;
    do {
      v = min_degree * std::pow(uniform_open(rng), -1.0 / (exponent - 1.0));
    } while (v >= max_degree + 1.0);
    x = static_cast<int>(std::floor(v));
    total += x;
  }
  if (total % 2 != 0 && n > 0) {
    const std::size_t v = uniform_index(rng, n);
    d[v] += d[v] < max_degree ? 1 : -1;
  }
  return d;
}

PopulationGraph generate_population(const PopulationSpec& spec, std::uint64_t seed) {
  Rng rng = make_stream(seed, 0);
  switch (spec.kind) {
    case PopulationKind::erdos_renyi: return erdos_renyi(spec.n, spec.p, rng);
    case PopulationKind::small_world: return small_world(spec.n, spec.k, spec.rewire, rng);
    case PopulationKind::config_model: {
      std::vector<int> degrees = spec.degrees;
      if (degrees.empty())
        degrees = heavy_tailed_degrees(spec.n, spec.degree_exponent, spec.min_degree, spec.max_degree, rng);
      return configuration_model(degrees, rng);
    }
  }
  throw std::invalid_argument("generate_population: unknown kind");
}

}  // namespace rdsnet
