#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rdsnet/likelihood.hpp"
#include "rdsnet/rds_sim.hpp"
#include "support/fixtures.hpp"

using namespace rdsnet;

namespace {

PopulationGraph star(std::size_t leaves) {
  PopulationGraph g(leaves + 1);
  for (std::size_t v = 1; v <= leaves; ++v) g.add_edge(0, v);
  g.finalize();
  return g;
}

SimConfig config_for(std::vector<SeedEntry> seeds, int coupons, std::size_t target, WaitingTimeModel model) {
  SimConfig c;
  c.seeds = std::move(seeds);
  c.coupons_per_subject = coupons;
  c.target_sample_size = target;
  c.model = model;
  return c;
}

double two_sample_ks(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

SimResult big_run(std::uint64_t seed, const WaitingTimeModel& model) {
  PopulationSpec spec;
  const PopulationGraph g = generate_population(spec, 1234);
  Rng rng = make_stream(seed, 0);
  SimConfig c = config_for(random_seeds(g, 3, 0.5, rng), 3, 50, model);
  return simulate(g, c, rng);
}

}  // namespace

TEST_CASE("single edge race: the neighbour is always recruited after an Exp(1) wait") {
  PopulationGraph g(2);
  g.add_edge(0, 1);
  g.finalize();
  Rng rng = make_stream(31, 0);
  const int runs = 10000;
  double sum = 0.0;
  for (int r = 0; r < runs; ++r) {
    const auto res = simulate(g, config_for({{0, 0.0}}, 1, 2, WaitingTimeModel::exponential(1.0)), rng);
    REQUIRE(res.observed.size() == 2);
    CHECK(res.observed.recruitment_graph().recruiter_of(1) == std::optional<std::size_t>{0});
    sum += res.observed.times()[1] - res.observed.times()[0];
  }
  CHECK(std::abs(sum / runs - 1.0) < 3.0 / std::sqrt(runs));
}

TEST_CASE("star with two coupons: exactly two recruitments, at the two smallest of five clocks") {
  const PopulationGraph g = star(5);
  Rng rng = make_stream(32, 0);
  Rng oracle_rng = make_stream(32, 1);
  const auto model = WaitingTimeModel::exponential(1.0);
  const int runs = 10000;
  std::vector<double> first, second, oracle_first, oracle_second;
  for (int r = 0; r < runs; ++r) {
    const auto res = simulate(g, config_for({{0, 0.0}}, 2, 6, model), rng);
    REQUIRE(res.observed.size() == 3);
    CHECK(res.truncated);
    CHECK(res.observed.recruitment_graph().edges().size() == 2);
    first.push_back(res.observed.times()[1]);
    second.push_back(res.observed.times()[2]);
    std::vector<double> clocks(5);
    for (auto& c : clocks) c = model.sample(oracle_rng);
    std::sort(clocks.begin(), clocks.end());
    oracle_first.push_back(clocks[0]);
    oracle_second.push_back(clocks[1]);
  }
  const double crit = 1.6276 * std::sqrt(2.0 / runs);
  CHECK(two_sample_ks(first, oracle_first) < crit);
  CHECK(two_sample_ks(second, oracle_second) < crit);
}

TEST_CASE("competing exponentials: inter-event times are Exp(rate x active edges)") {
  // Seed at the centre of a 3-leaf star: first wait Exp(3 rate); the leaf has
  // no other neighbours, so the second wait is Exp(2 rate) by memorylessness.
  const PopulationGraph g = star(3);
  const double rate = 1.5;
  Rng rng = make_stream(33, 0);
  const std::size_t runs = 10000;
  std::vector<double> w1, w2;
  for (std::size_t r = 0; r < runs; ++r) {
    const auto res = simulate(g, config_for({{0, 0.0}}, 3, 4, WaitingTimeModel::exponential(rate)), rng);
    w1.push_back(res.observed.times()[1] - res.observed.times()[0]);
    w2.push_back(res.observed.times()[2] - res.observed.times()[1]);
  }
  auto exp_cdf = [](double lambda) { return [lambda](double t) { return -std::expm1(-lambda * t); }; };
  CHECK(fixtures::ks_statistic(w1, exp_cdf(3 * rate)) < fixtures::ks_critical_1pct(runs));
  CHECK(fixtures::ks_statistic(w2, exp_cdf(2 * rate)) < fixtures::ks_critical_1pct(runs));
}

TEST_CASE("50-subject run over a 1000-vertex graph is self-consistent") {
  PopulationSpec spec;
  const PopulationGraph g = generate_population(spec, 1234);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    for (const auto& model : {WaitingTimeModel::gamma(0.5, 2.0), WaitingTimeModel::exponential(1.0),
                              WaitingTimeModel::power_law(2.0, 0.5)}) {
      Rng rng = make_stream(seed, 0);
      const auto res = simulate(g, config_for(random_seeds(g, 3, 0.5, rng), 3, 50, model), rng);
      const auto& s = res.observed;
      CHECK(s.size() == 50);
      CHECK(check_compatible(res.true_subgraph, s).is_compatible);
      CHECK(s.recruitment_adjacency().is_subgraph_of(res.true_subgraph));
      for (std::size_t i = 0; i < s.size(); ++i) {
        const auto v = res.population_vertex[i];
        CHECK(s.degrees()[i] == static_cast<int>(g.degree(v)));
        CHECK(s.original_ids()[i] == g.id(v));
        for (std::size_t j = i + 1; j < s.size(); ++j)
          CHECK(res.true_subgraph.has_edge(i, j) == g.has_edge(v, res.population_vertex[j]));
      }
      for (const auto& e : s.recruitment_graph().edges()) CHECK(s.times()[e.recruiter] < s.times()[e.recruitee]);
      const double ll = log_likelihood_direct(res.true_subgraph, s, model);
      CHECK(std::isfinite(ll));
    }
  }
}

TEST_CASE("coupon accounting and column monotonicity") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto res = big_run(seed, WaitingTimeModel::gamma(0.5, 2.0));
    const auto& s = res.observed;
    const std::size_t n = s.size();
    std::vector<int> recruited(n, 0);
    for (const auto& e : s.recruitment_graph().edges()) ++recruited[e.recruiter];
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(recruited[i] <= 3);
      bool exhausted = false;
      int spent = 0;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (exhausted) CHECK(s.coupons()(i, j) == 0);
        if (s.coupons()(i, j) == 0) exhausted = true;
        // C(i, j) = 1 iff i has spent fewer than 3 coupons before event j.
        CHECK((s.coupons()(i, j) == 1) == (spent < 3));
        if (s.recruitment_graph().recruiter_of(j) == std::optional<std::size_t>{i}) ++spent;
      }
    }
  }
}

TEST_CASE("event log mirrors the observed study") {
  const auto res = big_run(7, WaitingTimeModel::exponential(1.0));
  REQUIRE(res.event_log.size() == res.observed.size());
  for (std::size_t k = 0; k < res.event_log.size(); ++k) {
    const auto& e = res.event_log[k];
    CHECK(e.recruitee == k);
    CHECK(e.time == res.observed.times()[k]);
    CHECK(e.recruiter == res.observed.recruitment_graph().recruiter_of(k));
  }
}

TEST_CASE("simulation is deterministic for a fixed seed") {
  const auto a = big_run(9, WaitingTimeModel::gamma(0.5, 2.0));
  const auto b = big_run(9, WaitingTimeModel::gamma(0.5, 2.0));
  CHECK(a.observed.times() == b.observed.times());
  CHECK(a.true_subgraph == b.true_subgraph);
  CHECK(a.population_vertex == b.population_vertex);
  const auto c = big_run(10, WaitingTimeModel::gamma(0.5, 2.0));
  CHECK(a.observed.times() != c.observed.times());
}

TEST_CASE("stopping rules") {
  SUBCASE("queue exhaustion truncates") {
    PopulationGraph g(4);
    g.add_edge(0, 1);
    g.finalize();
    const auto res = simulate(g, config_for({{0, 0.0}}, 3, 4, WaitingTimeModel::exponential(1.0)));
    CHECK(res.truncated);
    CHECK(res.observed.size() == 2);
  }
  SUBCASE("max_time stops recruiting") {
    auto c = config_for({{0, 0.0}}, 3, 6, WaitingTimeModel::exponential(0.001));
    c.max_time = 1.0;
    c.rng_seed = 3;
    const auto res = simulate(star(5), c);
    for (double t : res.observed.times()) CHECK(t <= 1.0);
  }
  SUBCASE("a seed recruited by a peer first is skipped") {
    PopulationGraph g(3);
    g.add_edge(0, 1);
    g.finalize();
    const auto res = simulate(g, config_for({{0, 0.0}, {1, 100.0}, {2, 200.0}}, 3, 3, WaitingTimeModel::exponential(10.0)));
    CHECK(res.skipped_seeds == 1);
    CHECK(res.observed.size() == 3);
    CHECK(res.observed.recruitment_graph().seeds() == std::vector<std::size_t>{0, 2});
  }
}

TEST_CASE("configuration errors") {
  const PopulationGraph g = star(3);
  const auto m = WaitingTimeModel::exponential(1.0);
  CHECK_THROWS_AS(simulate(g, config_for({}, 3, 2, m)), std::invalid_argument);
  CHECK_THROWS_AS(simulate(g, config_for({{0, 0.0}}, 0, 2, m)), std::invalid_argument);
  CHECK_THROWS_AS(simulate(g, config_for({{0, 0.0}}, 3, 5, m)), std::invalid_argument);
  CHECK_THROWS_AS(simulate(g, config_for({{0, 1.0}, {1, 0.0}}, 3, 3, m)), std::invalid_argument);
  CHECK_THROWS_AS(simulate(g, config_for({{0, 0.0}, {0, 1.0}}, 3, 3, m)), std::invalid_argument);
}

TEST_CASE("population generators") {
  Rng rng = make_stream(34, 0);
  CHECK(erdos_renyi(100, 0.0, rng).edge_count() == 0);
  const auto full = erdos_renyi(100, 1.0, rng);
  CHECK(full.edge_count() == 4950);
  for (std::size_t v = 0; v < 100; ++v) CHECK(full.degree(v) == 99);
  CHECK_THROWS_AS(erdos_renyi(10, 1.5, rng), std::invalid_argument);
  CHECK_THROWS_AS(configuration_model({3, 2, 2}, rng), std::invalid_argument);

  const auto ring = small_world(20, 4, 0.0, rng);
  for (std::size_t v = 0; v < 20; ++v) CHECK(ring.degree(v) == 4);

  const auto cm = configuration_model({2, 2, 2, 2, 1, 1}, rng);
  for (std::size_t v = 0; v < cm.size(); ++v) {
    CHECK_FALSE(cm.has_edge(v, v));
    CHECK(cm.degree(v) <= 2);
  }

  PopulationSpec spec;
  const auto a = generate_population(spec, 77);
  const auto b = generate_population(spec, 77);
  CHECK(a.size() == 1000);
  for (std::size_t v = 0; v < a.size(); ++v) CHECK(a.neighbors(v) == b.neighbors(v));
  const double mean_degree = 2.0 * static_cast<double>(a.edge_count()) / static_cast<double>(a.size());
  CHECK(mean_degree > 7.0);
  CHECK(mean_degree < 9.0);
}
