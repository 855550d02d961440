#include "rdsnet/rds_sim.hpp"

#include <queue>
#include <stdexcept>
#include <tuple>

namespace rdsnet {

namespace {

// A scheduled recruitment attempt. recruiter_key is 0 for a seed entry and
// study index + 1 otherwise, so ties order as (time, recruiter, recruitee).
struct Pending {
  double time;
  std::size_t recruiter_key;
  std::uint32_t vertex;

  bool operator>(const Pending& o) const {
    return std::tie(time, recruiter_key, vertex) > std::tie(o.time, o.recruiter_key, o.vertex);
  }
};

void validate(const PopulationGraph& graph, const SimConfig& config) {
  if (config.seeds.empty()) throw std::invalid_argument("simulate: at least one seed is required");
  if (config.coupons_per_subject < 1)
    throw std::invalid_argument("simulate: coupons_per_subject must be positive");
  if (config.target_sample_size < 1 || config.target_sample_size > graph.size())
    throw std::invalid_argument("simulate: target sample size must lie in [1, |V|]");
  std::vector<bool> used(graph.size(), false);
  for (std::size_t k = 0; k < config.seeds.size(); ++k) {
    const auto& s = config.seeds[k];
    if (s.vertex >= graph.size()) throw std::invalid_argument("simulate: seed vertex out of range");
    if (used[s.vertex]) throw std::invalid_argument("simulate: duplicate seed vertex");
    used[s.vertex] = true;
    if (k > 0 && s.time < config.seeds[k - 1].time)
      throw std::invalid_argument("simulate: seed entry times must be nondecreasing");
  }
}

}  // namespace

SimResult simulate(const PopulationGraph& graph, const SimConfig& config) {
  Rng rng = make_stream(config.rng_seed, 0);
  return simulate(graph, config, rng);
}

SimResult simulate(const PopulationGraph& graph, const SimConfig& config, Rng& rng) {
  validate(graph, config);
  const std::size_t target = config.target_sample_size;

  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> queue;
  for (const auto& s : config.seeds) queue.push({s.time, 0, static_cast<std::uint32_t>(s.vertex)});

  SimResult result;
  std::vector<long long> label_of(graph.size(), -1);
  std::vector<int> coupons;
  std::vector<double> times;
  std::vector<DirectedEdge> edges;
  std::vector<std::size_t> seeds;
  DenseMatrix<std::uint8_t> coupon_matrix(target, target, 0);

  while (times.size() < target) {
    if (queue.empty()) {
      result.truncated = true;
      break;
    }
    const Pending ev = queue.top();
    if (config.max_time && ev.time > *config.max_time) break;
    queue.pop();

    const bool is_seed = ev.recruiter_key == 0;
    if (label_of[ev.vertex] >= 0) {
      if (is_seed)
        ++result.skipped_seeds;
      else
        ++result.discarded_events;
      continue;
    }
    if (!is_seed && coupons[ev.recruiter_key - 1] == 0) {
      ++result.discarded_events;
      continue;
    }

    double t = ev.time;
    if (!times.empty() && t <= times.back()) {
      t = times.back() + kTieEpsilon;
      ++result.tie_adjustments;
    }
    const std::size_t j = times.size();
    for (std::size_t i = 0; i < j; ++i) coupon_matrix(i, j) = coupons[i] > 0 ? 1 : 0;

    SimEvent logged{t, std::nullopt, j};
    if (is_seed) {
      seeds.push_back(j);
    } else {
      const std::size_t r = ev.recruiter_key - 1;
      --coupons[r];
      edges.push_back({r, j});
      logged.recruiter = r;
    }
    result.event_log.push_back(logged);
    label_of[ev.vertex] = static_cast<long long>(j);
    result.population_vertex.push_back(ev.vertex);
    coupons.push_back(config.coupons_per_subject);
    times.push_back(t);

    // Each edge clock starts at entry and is drawn exactly once.
    for (std::uint32_t w : graph.neighbors(ev.vertex)) {
      if (label_of[w] >= 0) continue;
      queue.push({t + config.model.sample(rng), j + 1, w});
    }
  }

  const std::size_t n = times.size();
  DenseMatrix<std::uint8_t> c(n, n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) c(i, j) = coupon_matrix(i, j);

  std::vector<int> degrees(n);
  std::vector<std::int64_t> ids(n);
  AdjacencyMatrix truth(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t v = result.population_vertex[i];
    degrees[i] = static_cast<int>(graph.degree(v));
    ids[i] = graph.id(v);
    for (std::uint32_t w : graph.neighbors(v))
      if (label_of[w] >= 0) truth.set_edge(i, static_cast<std::size_t>(label_of[w]), true);
  }

  auto rg = RecruitmentGraph::create(n, std::move(edges), seeds);
  result.observed = ObservedStudy::create(std::move(rg), std::move(degrees), std::move(times),
                                          std::move(c), std::move(ids));
  result.true_subgraph = std::move(truth);
  return result;
}

std::vector<SeedEntry> random_seeds(const PopulationGraph& graph, std::size_t count, double spacing,
                                    Rng& rng) {
  if (count > graph.size()) throw std::invalid_argument("random_seeds: more seeds than vertices");
  std::vector<SeedEntry> out;
  std::vector<bool> used(graph.size(), false);
  while (out.size() < count) {
    const std::size_t v = uniform_index(rng, graph.size());
    if (used[v]) continue;
    used[v] = true;
    out.push_back({v, spacing * static_cast<double>(out.size())});
  }
  return out;
}

}  // namespace rdsnet
