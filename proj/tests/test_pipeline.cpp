#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "rdsnet/experiment.hpp"
#include "rdsnet/pipeline.hpp"
#include "rdsnet/rds_sim.hpp"
#include "support/fixtures.hpp"

using namespace rdsnet;
using doctest::Approx;

namespace {

const PopulationGraph& population() {
  static const PopulationGraph g = generate_population(PopulationSpec{}, 7);
  return g;
}

SimResult simulated(const WaitingTimeModel& model, std::size_t n, std::uint64_t seed) {
  Rng rng = make_stream(seed, 0);
  SimConfig c;
  c.seeds = random_seeds(population(), 3, 0.5, rng);
  c.target_sample_size = n;
  c.model = model;
  return simulate(population(), c, rng);
}

RenderConfig quick_config(const WaitingTimeModel& theta0, std::size_t iota_max) {
  RenderConfig c;
  c.theta0 = theta0;
  c.iota_max = iota_max;
  c.anneal.iterations = 20000;
  c.rng_seed = 5;
  return c;
}

AdjacencyMatrix random_matrix(std::size_t n, double p, Rng& rng) {
  AdjacencyMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (uniform_open(rng) < p) a.set_edge(i, j, true);
  return a;
}

}  // namespace

TEST_CASE("render with one outer iteration") {
  const auto sim = simulated(WaitingTimeModel::exponential(1.0), 30, 11);
  const auto r = render(sim.observed, quick_config(WaitingTimeModel::exponential(2.0), 1));
  REQUIRE(r.trace.size() == 1);
  CHECK(r.trace[0].theta_in == std::vector<double>{2.0});
  CHECK(r.trace[0].theta_out == r.theta_hat.params());
  CHECK(r.trace[0].a_step_edges == r.a_hat.edge_count());
  CHECK(check_compatible(r.a_hat, sim.observed).is_compatible);
  CHECK(sim.observed.recruitment_adjacency().is_subgraph_of(r.a_hat));
}

TEST_CASE("render on a two-subject chain returns the recruitment projection") {
  const auto s = fixtures::chain({1, 1});
  for (std::size_t iota : {1, 3}) {
    const auto r = render(s, quick_config(WaitingTimeModel::gamma(1.0, 1.0), iota));
    CHECK(r.a_hat == s.recruitment_adjacency());
    CHECK(r.trace.size() == iota);
  }
}

TEST_CASE("render rejects bad configurations") {
  const auto s = fixtures::chain({1, 2, 1});
  CHECK_THROWS_AS(render(s, quick_config(WaitingTimeModel::exponential(1.0), 0)), std::invalid_argument);
  // x_min beyond the smallest recruitment gap
  CHECK_THROWS_AS(render(s, quick_config(WaitingTimeModel::power_law(2.0, 5.0), 1)), std::invalid_argument);
}

TEST_CASE("warm-started iterations never lose posterior") {
  for (std::uint64_t seed : {3, 4, 5}) {
    const auto sim = simulated(WaitingTimeModel::gamma(0.8, 1.25), 40, seed);
    auto config = quick_config(WaitingTimeModel::gamma(1.0, 1.0), 4);
    config.rng_seed = seed;
    const auto r = render(sim.observed, config);
    REQUIRE(r.trace.size() == 4);
    for (std::size_t k = 0; k < r.trace.size(); ++k) {
      const auto& it = r.trace[k];
      CAPTURE(k);
      CHECK(it.theta_step_ok);
      // theta-step starts at theta_in, so it cannot do worse than the A-step value
      CHECK(it.theta_step_logpost >= it.a_step_logpost - 1e-6);
      if (k > 0) {
        CHECK(it.theta_in == r.trace[k - 1].theta_out);
        CHECK(it.a_step_logpost >= r.trace[k - 1].theta_step_logpost - 1e-6);
      }
    }
    // the reported value is the posterior at (a_hat, theta_hat)
    const LikelihoodWorkspace ws(sim.observed, r.theta_hat);
    CHECK(log_posterior(r.a_hat, sim.observed, ws, config.prior) == Approx(r.logpost).epsilon(1e-9));
  }
}

TEST_CASE("render is deterministic in its seed") {
  const auto sim = simulated(WaitingTimeModel::exponential(1.0), 40, 8);
  auto config = quick_config(WaitingTimeModel::exponential(1.0), 2);
  const auto a = render(sim.observed, config);
  const auto b = render(sim.observed, config);
  CHECK(a.a_hat == b.a_hat);
  CHECK(a.theta_hat.params() == b.theta_hat.params());
  config.chains = 3;
  config.threads = 3;
  const auto c = render(sim.observed, config);
  config.threads = 1;
  const auto d = render(sim.observed, config);
  CHECK(c.a_hat == d.a_hat);
  CHECK(c.logpost == d.logpost);
}

TEST_CASE("power-law reconstruction lands near the generating parameters") {
  const auto sim = simulated(WaitingTimeModel::power_law(2.0, 0.5), 50, 21);
  const double gap = min_recruitment_gap(sim.observed);
  REQUIRE(gap >= 0.5);
  auto config = quick_config(WaitingTimeModel::power_law(1.5, 0.5 * gap), 3);
  config.anneal.iterations = 100000;
  const auto r = render(sim.observed, config);
  const auto theta = r.theta_hat.params();
  CAPTURE(theta[0]);
  CAPTURE(theta[1]);
  CHECK(theta[0] > 1.95 / 3.0);
  CHECK(theta[0] < 1.95 * 3.0);
  CHECK(theta[1] > 0.49 / 3.0);
  CHECK(theta[1] <= gap);
  const auto m = tpr_fpr(r.a_hat, sim.true_subgraph, RateConvention::roc);
  CHECK(m.tpr > m.fpr);
}

TEST_CASE("rates for a perfect reconstruction") {
  Rng rng = make_stream(12, 0);
  const auto truth = random_matrix(9, 0.3, rng);
  const std::size_t pairs = 36;
  const auto by_pairs = tpr_fpr(truth, truth, RateConvention::pairs);
  CHECK(by_pairs.tpr == Approx(double(truth.edge_count()) / pairs));
  CHECK(by_pairs.fpr == 0.0);
  const auto roc = tpr_fpr(truth, truth, RateConvention::roc);
  CHECK(roc.tpr == 1.0);
  CHECK(roc.fpr == 0.0);
}

TEST_CASE("all-edges guess on three vertices") {
  AdjacencyMatrix truth(3), guess(3);
  truth.set_edge(0, 1, true);
  for (auto [i, j] : {std::pair{0, 1}, {0, 2}, {1, 2}}) guess.set_edge(i, j, true);
  const auto roc = tpr_fpr(guess, truth, RateConvention::roc);
  CHECK(roc.fpr == 1.0);
  CHECK(roc.tpr == 1.0);
  const auto by_pairs = tpr_fpr(guess, truth, RateConvention::pairs);
  CHECK(by_pairs.tpr == Approx(1.0 / 3.0));
  CHECK(by_pairs.fpr == Approx(2.0 / 3.0));
  CHECK_THROWS_AS(tpr_fpr(AdjacencyMatrix(4), truth, RateConvention::roc), std::invalid_argument);
}

TEST_CASE("rates agree with brute-force pair counting") {
  Rng rng = make_stream(13, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto e = random_matrix(10, uniform_open(rng), rng);
    const auto t = random_matrix(10, uniform_open(rng), rng);
    std::size_t tp = 0, fp = 0, pos = 0;
    for (std::size_t i = 0; i < 10; ++i)
      for (std::size_t j = 0; j < 10; ++j) {
        if (i >= j) continue;
        pos += t.has_edge(i, j);
        tp += e.has_edge(i, j) && t.has_edge(i, j);
        fp += e.has_edge(i, j) && !t.has_edge(i, j);
      }
    const auto roc = tpr_fpr(e, t, RateConvention::roc);
    const auto by_pairs = tpr_fpr(e, t, RateConvention::pairs);
    CHECK(roc.true_positives == tp);
    CHECK(roc.false_positives == fp);
    CHECK(roc.positives == pos);
    CHECK(roc.negatives == 45 - pos);
    CHECK(by_pairs.tpr == Approx(tp / 45.0));
    CHECK(by_pairs.fpr == Approx(fp / 45.0));
    CHECK(by_pairs.tpr + by_pairs.fpr <= 1.0 + 1e-15);
    if (pos > 0) CHECK(roc.tpr == Approx(double(tp) / pos));
    if (pos < 45) CHECK(roc.fpr == Approx(double(fp) / (45 - pos)));
    for (double r : {roc.tpr, roc.fpr, by_pairs.tpr, by_pairs.fpr}) {
      CHECK(r >= 0.0);
      CHECK(r <= 1.0);
    }
  }
}

TEST_CASE("evaluate reports bias per parameter") {
  AdjacencyMatrix a(4);
  a.set_edge(0, 1, true);
  const auto m = evaluate(a, a, WaitingTimeModel::gamma(1.2, 0.9), WaitingTimeModel::gamma(1.0, 1.0));
  CHECK(m.theta_bias[0] == Approx(0.2));
  CHECK(m.theta_bias[1] == Approx(-0.1));
  CHECK(m.estimated_edges == 1);
  CHECK(m.true_edges == 1);
  CHECK(m.roc.tpr == 1.0);
}

namespace {

ExperimentSettings small_settings() {
  ExperimentSettings s;
  s.sample_size = 40;
  s.render.anneal.iterations = 20000;
  s.render.iota_max = 2;
  s.master_seed = 99;
  s.threads = 2;
  return s;
}

}  // namespace

TEST_CASE("gamma sweep rows") {
  const auto settings = small_settings();
  const std::vector<double> alphas{0.5, 1.0};
  const auto rows = experiment_gamma_sweep(alphas, 20, settings);
  REQUIRE(rows.size() == 40);
  std::set<std::size_t> ids;
  std::size_t separated = 0;
  for (const auto& r : rows) {
    CHECK((r.alpha == 0.5 || r.alpha == 1.0));
    CHECK(r.error.empty());
    ids.insert(r.dataset);
    separated += r.roc.tpr > r.roc.fpr;
    CHECK(r.alpha_hat > 0.0);
    CHECK(r.alpha_hat_true_a > 0.0);
  }
  CHECK(ids.size() == rows.size());
  CHECK(separated >= 36);

  std::ostringstream first, second;
  write_sweep_csv(first, rows);
  write_sweep_csv(second, experiment_gamma_sweep(alphas, 20, settings));
  CHECK(first.str() == second.str());
  std::istringstream lines(first.str());
  std::string line;
  std::size_t count = 0;
  while (std::getline(lines, line)) ++count;
  CHECK(count == rows.size() + 1);
}

TEST_CASE("misspecification rows come in pairs") {
  const auto rows = experiment_misspecification(4, 0.5, small_settings());
  REQUIRE(rows.size() == 8);
  for (std::size_t k = 0; k < rows.size(); k += 2) {
    CHECK(rows[k].dataset == rows[k + 1].dataset);
    CHECK(rows[k].replicate == rows[k + 1].replicate);
    CHECK(rows[k].model != rows[k + 1].model);
    CHECK(rows[k].error.empty());
    CHECK(rows[k + 1].error.empty());
  }
  std::set<std::string> models{rows[0].model, rows[1].model};
  CHECK(models == std::set<std::string>{"gamma", "exponential"});
}

TEST_CASE("datasets are a pure function of their id") {
  const auto settings = small_settings();
  const auto g = generate_population(settings.population, settings.population_seed);
  const auto model = WaitingTimeModel::gamma(0.5, 2.0);
  const auto a = make_dataset(g, settings, model, 3);
  const auto b = make_dataset(g, settings, model, 3);
  const auto c = make_dataset(g, settings, model, 4);
  CHECK(a.sim.observed.times() == b.sim.observed.times());
  CHECK(a.render_seed == b.render_seed);
  CHECK(a.sim.observed.times() != c.sim.observed.times());
}
