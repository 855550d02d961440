#include "rdsnet/experiment.hpp"

#include <chrono>
#include <iomanip>

#include "rdsnet/parallel.hpp"

namespace rdsnet {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

RenderConfig config_for(const ExperimentSettings& settings, const WaitingTimeModel& theta0, std::uint64_t seed) {
  RenderConfig cfg = settings.render;
  cfg.theta0 = theta0;
  cfg.rng_seed = seed;
  cfg.threads = 1;  // parallelism lives at the replicate level
  return cfg;
}

std::vector<double> default_theta0(Family family) {
  switch (family) {
    case Family::exponential: return {1.0};
    case Family::gamma: return {1.0, 1.0};
    case Family::power_law: return {2.0, 0.0};
  }
  return {};
}

}  // namespace

Dataset make_dataset(const PopulationGraph& population, const ExperimentSettings& settings,
                     const WaitingTimeModel& truth, std::size_t id) {
  Rng rng = make_stream(settings.master_seed, id);
  SimConfig sim;
  sim.seeds = random_seeds(population, settings.seeds, settings.seed_spacing, rng);
  sim.coupons_per_subject = settings.coupons;
  sim.target_sample_size = settings.sample_size;
  sim.model = truth;
  Dataset d;
  d.id = id;
  d.sim = simulate(population, sim, rng);
  d.render_seed = rng();
  return d;
}

std::vector<SweepRow> experiment_gamma_sweep(const std::vector<double>& alphas, std::size_t replicates,
                                             const ExperimentSettings& settings) {
  const PopulationGraph population = generate_population(settings.population, settings.population_seed);
  std::vector<SweepRow> rows(alphas.size() * replicates);
  parallel_for(rows.size(), settings.threads, [&](std::size_t k) {
    const auto start = std::chrono::steady_clock::now();
    SweepRow& row = rows[k];
    row.dataset = k;
    row.alpha = alphas[k / replicates];
    row.replicate = k % replicates;
    try {
      const auto truth = WaitingTimeModel::gamma(row.alpha, 1.0 / row.alpha);
      const Dataset data = make_dataset(population, settings, truth, k);
      const auto& study = data.sim.observed;
      row.n = study.size();
      row.truncated = data.sim.truncated;
      const auto theta0 = WaitingTimeModel::create(Family::gamma, default_theta0(Family::gamma));
      if (settings.estimate_given_truth) {
        const auto est = estimate_theta(data.sim.true_subgraph, study, Family::gamma, theta0.params(),
                                        settings.render.estimate);
        row.alpha_hat_true_a = est.model.params()[0];
      }
      if (settings.reconstruct) {
        const RenderResult r = render(study, config_for(settings, theta0, data.render_seed));
        row.roc = tpr_fpr(r.a_hat, data.sim.true_subgraph, RateConvention::roc);
        row.pairs = tpr_fpr(r.a_hat, data.sim.true_subgraph, RateConvention::pairs);
        row.alpha_hat = r.theta_hat.params()[0];
        row.scale_hat = r.theta_hat.params()[1];
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    row.runtime_seconds = seconds_since(start);
  });
  return rows;
}

std::vector<MisspecRow> experiment_misspecification(std::size_t replicates, double alpha,
                                                    const ExperimentSettings& settings) {
  const PopulationGraph population = generate_population(settings.population, settings.population_seed);
  std::vector<MisspecRow> rows(2 * replicates);
  parallel_for(replicates, settings.threads, [&](std::size_t k) {
    const auto truth = WaitingTimeModel::gamma(alpha, 1.0 / alpha);
    MisspecRow& g = rows[2 * k];
    MisspecRow& e = rows[2 * k + 1];
    g.dataset = e.dataset = k;
    g.replicate = e.replicate = k;
    g.model = "gamma";
    e.model = "exponential";
    try {
      const Dataset data = make_dataset(population, settings, truth, k);
      for (MisspecRow* row : {&g, &e}) {
        const auto start = std::chrono::steady_clock::now();
        const Family family = row->model == "gamma" ? Family::gamma : Family::exponential;
        const auto theta0 = WaitingTimeModel::create(family, default_theta0(family));
        const RenderResult r = render(data.sim.observed, config_for(settings, theta0, data.render_seed));
        row->roc = tpr_fpr(r.a_hat, data.sim.true_subgraph, RateConvention::roc);
        row->pairs = tpr_fpr(r.a_hat, data.sim.true_subgraph, RateConvention::pairs);
        row->theta_hat = r.theta_hat.params();
        row->runtime_seconds = seconds_since(start);
      }
    } catch (const std::exception& ex) {
      g.error = e.error = ex.what();
    }
  });
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "dataset,alpha,replicate,n,truncated,tpr,fpr,tpr_pairs,fpr_pairs,true_positives,false_positives,"
         "alpha_hat,scale_hat,alpha_hat_true_a,error\n";
  out << std::setprecision(17);
  for (const auto& r : rows) {
    out << r.dataset << ',' << r.alpha << ',' << r.replicate << ',' << r.n << ',' << (r.truncated ? 1 : 0)
        << ',' << r.roc.tpr << ',' << r.roc.fpr << ',' << r.pairs.tpr << ',' << r.pairs.fpr << ','
        << r.roc.true_positives << ',' << r.roc.false_positives << ',' << r.alpha_hat << ',' << r.scale_hat
        << ',' << r.alpha_hat_true_a << ",\"" << r.error << "\"\n";
  }
}

void write_misspec_csv(std::ostream& out, const std::vector<MisspecRow>& rows) {
  out << "dataset,replicate,model,tpr,fpr,tpr_pairs,fpr_pairs,theta_1,theta_2,error\n";
  out << std::setprecision(17);
  for (const auto& r : rows) {
    out << r.dataset << ',' << r.replicate << ',' << r.model << ',' << r.roc.tpr << ',' << r.roc.fpr << ','
        << r.pairs.tpr << ',' << r.pairs.fpr << ',' << (r.theta_hat.size() > 0 ? r.theta_hat[0] : 0.0) << ','
        << (r.theta_hat.size() > 1 ? r.theta_hat[1] : 0.0) << ",\"" << r.error << "\"\n";
  }
}

void write_sweep_timings(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "dataset,runtime_seconds\n";
  for (const auto& r : rows) out << r.dataset << ',' << r.runtime_seconds << '\n';
}

void write_misspec_timings(std::ostream& out, const std::vector<MisspecRow>& rows) {
  out << "dataset,model,runtime_seconds\n";
  for (const auto& r : rows) out << r.dataset << ',' << r.model << ',' << r.runtime_seconds << '\n';
}

}  // namespace rdsnet
