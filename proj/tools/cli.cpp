#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "manifest.hpp"
#include "rdsnet/experiment.hpp"
#include "rdsnet/io.hpp"
#include "rdsnet/likelihood.hpp"
#include "rdsnet/param_est.hpp"
#include "rdsnet/pipeline.hpp"
#include "rdsnet/population.hpp"
#include "rdsnet/random.hpp"
#include "rdsnet/rds_sim.hpp"

namespace rdsnet::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ModelFlags {
  std::string dist = "exponential";
  std::optional<double> rate;
  std::optional<double> shape;
  std::optional<double> scale;
  std::optional<double> x_min;
};

struct AnnealFlags {
  std::uint64_t iters = 100000;
  std::optional<double> gamma0;
  double cool_rate = 0.999;
  std::string cooling = "geometric";
  double gamma_floor = 1e-4;
  std::size_t chains = 1;
  std::size_t threads = 1;
  std::string prior = "uniform";
  std::string init = "recruitment";
  std::string init_file;
  std::string trace_out;
  std::string proposal = "uniform";
  std::size_t probe_moves = 100;
  std::uint64_t trace_every = 100;
};

struct PopulationFlags {
  std::string kind = "config_model";
  std::size_t size = 1000;
  double p = 0.008;
  std::size_t k = 8;
  double rewire = 0.1;
  double exponent = 2.7;
  int min_degree = 4;
  int max_degree = 100;
};

struct Flags {
  std::optional<std::uint64_t> rng_seed;
  std::string out;
  std::string study;
  std::string edges;
  std::string truth;
  std::string graph;
  std::string manifest;
  ModelFlags model;
  AnnealFlags anneal;
  PopulationFlags population;
  // simulate
  std::size_t n = 50;
  std::size_t seeds = 1;
  double seed_spacing = 0.0;
  int coupons = 3;
  std::optional<double> max_time;
  // estimate
  std::string family = "exponential";
  std::vector<double> theta0;
  bool raw = false;
  // pipeline / experiment
  std::size_t iota_max = 3;
  bool cold_start = false;
  std::string kind = "gamma_sweep";
  std::vector<double> alphas{0.5, 1.0};
  double alpha = 0.5;
  std::size_t replicates = 20;
  bool no_reconstruct = false;
  bool dot = false;
};

// Options whose values are input files; stored as absolute paths in the
// manifest and digested.
const std::set<std::string> kInputOptions{"study", "edges", "truth", "graph", "init-file"};

WaitingTimeModel build_model(const ModelFlags& f) {
  Family family;
  try {
    family = parse_family(f.dist);
  } catch (const std::exception&) {
    throw UsageError("--dist: unknown family '" + f.dist + "'");
  }
  auto need = [](const std::optional<double>& v, const char* flag) {
    if (!v) throw UsageError(std::string(flag) + " is required for this --dist");
    return *v;
  };
  try {
    switch (family) {
      case Family::exponential: return WaitingTimeModel::exponential(f.rate.value_or(1.0));
      case Family::gamma: return WaitingTimeModel::gamma(need(f.shape, "--shape"), need(f.scale, "--scale"));
      case Family::power_law: return WaitingTimeModel::power_law(need(f.shape, "--shape"), need(f.x_min, "--x-min"));
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("model parameters: ") + e.what());
  }
  throw UsageError("--dist: unsupported family");
}

EdgePrior parse_prior(const std::string& text) {
  if (text == "uniform") return EdgePrior::uniform();
  const std::string prefix = "bernoulli:";
  if (text.rfind(prefix, 0) == 0) {
    try {
      std::size_t pos = 0;
      const std::string rest = text.substr(prefix.size());
      const double p = std::stod(rest, &pos);
      if (pos != rest.size()) throw std::invalid_argument("trailing");
      return EdgePrior::bernoulli(p);
    } catch (const std::exception&) {
    }
  }
  throw UsageError("--prior: expected 'uniform' or 'bernoulli:p' with 0 < p < 1, got '" + text + "'");
}

AnnealConfig build_anneal(const AnnealFlags& f) {
  AnnealConfig cfg;
  cfg.iterations = f.iters;
  try {
    cfg.schedule.kind = parse_cooling_kind(f.cooling);
  } catch (const std::exception&) {
    throw UsageError("--cooling: unknown schedule '" + f.cooling + "'");
  }
  if (!(f.cool_rate > 0.0)) throw UsageError("--cool-rate must be positive");
  if (!(f.gamma_floor > 0.0)) throw UsageError("--gamma-floor must be positive");
  cfg.schedule.rate = f.cool_rate;
  cfg.schedule.floor = f.gamma_floor;
  if (f.gamma0) {
    if (!(*f.gamma0 > 0.0)) throw UsageError("--gamma0 must be positive");
    cfg.schedule.gamma0 = *f.gamma0;
    cfg.auto_gamma0 = false;
  }
  if (f.proposal == "uniform") {
    cfg.proposal = ProposalMode::uniform_moves;
  } else if (f.proposal == "rejection") {
    cfg.proposal = ProposalMode::rejection_loop;
  } else {
    throw UsageError("--proposal: expected 'uniform' or 'rejection'");
  }
  cfg.probe_moves = f.probe_moves;
  cfg.trace_every = f.trace_every;
  if (f.chains == 0) throw UsageError("--chains must be at least 1");
  return cfg;
}

PopulationSpec build_population(const PopulationFlags& f) {
  PopulationSpec spec;
  try {
    spec.kind = parse_population_kind(f.kind);
  } catch (const std::exception&) {
    throw UsageError("--population: unknown kind '" + f.kind + "'");
  }
  spec.n = f.size;
  spec.p = f.p;
  spec.k = f.k;
  spec.rewire = f.rewire;
  spec.degree_exponent = f.exponent;
  spec.min_degree = f.min_degree;
  spec.max_degree = f.max_degree;
  return spec;
}

void add_model_flags(CLI::App* app, ModelFlags& f) {
  app->add_option("--dist", f.dist, "exponential | gamma | power_law")->capture_default_str();
  app->add_option("--rate", f.rate, "exponential rate (default 1)");
  app->add_option("--shape", f.shape, "gamma shape or power-law exponent");
  app->add_option("--scale", f.scale, "gamma scale");
  app->add_option("--x-min", f.x_min, "power-law lower cutoff");
}

void add_anneal_flags(CLI::App* app, AnnealFlags& f) {
  app->add_option("--iters", f.iters, "annealing iterations per A-step")->capture_default_str();
  app->add_option("--gamma0", f.gamma0, "starting temperature (default: probe-scaled)");
  app->add_option("--cool-rate", f.cool_rate, "cooling rate")->capture_default_str();
  app->add_option("--cooling", f.cooling, "geometric | linear | logarithmic")->capture_default_str();
  app->add_option("--gamma-floor", f.gamma_floor, "minimum temperature")->capture_default_str();
  app->add_option("--chains", f.chains, "independent chains")->capture_default_str();
  app->add_option("--threads", f.threads, "worker threads")->capture_default_str();
  app->add_option("--prior", f.prior, "uniform | bernoulli:p")->capture_default_str();
  app->add_option("--proposal", f.proposal, "uniform | rejection")->capture_default_str();
  app->add_option("--probe-moves", f.probe_moves, "proposals used to scale gamma0")->capture_default_str();
  app->add_option("--trace-every", f.trace_every, "trace sampling interval")->capture_default_str();
}

void add_population_flags(CLI::App* app, PopulationFlags& f) {
  app->add_option("--population", f.kind, "config_model | erdos_renyi | small_world")->capture_default_str();
  app->add_option("--pop-size", f.size, "population vertices")->capture_default_str();
  app->add_option("--pop-p", f.p, "erdos_renyi edge probability")->capture_default_str();
  app->add_option("--pop-k", f.k, "small_world ring degree")->capture_default_str();
  app->add_option("--pop-rewire", f.rewire, "small_world rewiring probability")->capture_default_str();
  app->add_option("--degree-exponent", f.exponent, "config_model degree tail exponent")->capture_default_str();
  app->add_option("--min-degree", f.min_degree, "config_model minimum degree")->capture_default_str();
  app->add_option("--max-degree", f.max_degree, "config_model maximum degree")->capture_default_str();
}

void add_seed_flag(CLI::App* app, Flags& f) {
  app->add_option("--rng-seed", f.rng_seed, "master seed (default: drawn from entropy)");
}

fs::path require_out(const Flags& f) {
  if (f.out.empty()) throw UsageError("--out is required");
  fs::create_directories(f.out);
  return f.out;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void write_json(const fs::path& path, const json& doc) {
  auto out = open_out(path);
  out << doc.dump(1) << '\n';
}

ObservedStudy load_study_or_usage(const Flags& f, std::ostream& err) {
  if (f.study.empty()) throw UsageError("--study is required");
  std::vector<std::string> warnings;
  ObservedStudy s = load_study(f.study, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  return s;
}

AdjacencyMatrix load_compatible(const std::string& path, const ObservedStudy& study, const char* field) {
  AdjacencyMatrix a = adjacency_from_edges(read_edge_list(fs::path(path)), study);
  const auto report = check_compatible(a, study);
  if (!report.is_compatible) {
    std::string why;
    if (!report.violated_subgraph_pairs.empty()) {
      const auto& p = report.violated_subgraph_pairs.front();
      why = "missing recruitment edge " + std::to_string(study.original_ids()[p.first]) + "-" +
            std::to_string(study.original_ids()[p.second]);
    } else {
      why = "degree exceeded at id " + std::to_string(study.original_ids()[report.violated_degree_vertices.front()]);
    }
    throw ValidationError(field, "edge set is not compatible with the study: " + why);
  }
  return a;
}

json edges_json(const AdjacencyMatrix& a, const ObservedStudy& study) {
  json edges = json::array();
  for (const auto& [u, v] : edges_to_ids(a, study)) edges.push_back({u, v});
  return edges;
}

json anneal_json(const AnnealResult& r) {
  return {{"iterations", r.iterations_run}, {"accepted", r.accepted},       {"gamma0", r.gamma0},
          {"stuck", r.stuck},               {"diagnostic", r.diagnostic},   {"chain", r.chain},
          {"final_logpost", r.final_logpost}};
}

// ---- subcommands -----------------------------------------------------------

void run_simulate(const Flags& f, std::uint64_t seed, std::ostream& out) {
  const fs::path dir = require_out(f);
  PopulationGraph population;
  if (!f.graph.empty()) {
    population = population_from_edges(read_edge_list(fs::path(f.graph)));
  } else {
    population = generate_population(build_population(f.population), make_stream(seed, 0)());
    auto pop = open_out(dir / "population.tsv");
    pop << "# u\tv\n";
    for (std::size_t u = 0; u < population.size(); ++u)
      for (auto v : population.neighbors(u))
        if (u < v) pop << population.id(u) << '\t' << population.id(v) << '\n';
  }
  if (f.seeds == 0) throw UsageError("--seeds must be at least 1");
  if (f.seeds > population.size()) throw UsageError("--seeds exceeds the population size");
  Rng rng = make_stream(seed, 1);
  SimConfig cfg;
  cfg.seeds = random_seeds(population, f.seeds, f.seed_spacing, rng);
  cfg.coupons_per_subject = f.coupons;
  cfg.target_sample_size = f.n;
  cfg.model = build_model(f.model);
  cfg.max_time = f.max_time;
  const SimResult sim = simulate(population, cfg, rng);
  save_study(dir / "observed.json", sim.observed);
  {
    auto edges = open_out(dir / "true_edges.tsv");
    write_edge_list(edges, sim.true_subgraph, sim.observed);
  }
  {
    auto events = open_out(dir / "events.csv");
    write_event_log(events, sim);
  }
  out << "n=" << sim.observed.size() << " edges=" << sim.true_subgraph.edge_count()
      << " truncated=" << (sim.truncated ? 1 : 0) << " discarded=" << sim.discarded_events << '\n';
}

void run_loglik(const Flags& f, std::ostream& out, std::ostream& err) {
  const ObservedStudy study = load_study_or_usage(f, err);
  if (f.edges.empty()) throw UsageError("--edges is required");
  const AdjacencyMatrix a = load_compatible(f.edges, study, "edges");
  const WaitingTimeModel model = build_model(f.model);
  const double direct = log_likelihood_direct(a, study, model);
  const double matrix = log_likelihood_matrix(a, build_workspace(study, model));
  out << std::setprecision(17) << direct << '\t' << matrix << '\n';
}

AdjacencyMatrix initial_matrix(const Flags& f, const ObservedStudy& study) {
  if (f.anneal.init == "recruitment") return study.recruitment_adjacency();
  if (f.anneal.init == "file") {
    if (f.anneal.init_file.empty()) throw UsageError("--init file requires --init-file");
    return load_compatible(f.anneal.init_file, study, "init-file");
  }
  throw UsageError("--init: expected 'recruitment' or 'file'");
}

void write_trace_file(const Flags& f, const fs::path& dir, const std::vector<TraceRow>& trace) {
  if (f.anneal.trace_out.empty()) return;
  auto out = open_out(dir / fs::path(f.anneal.trace_out).filename());
  write_trace(out, trace);
}

void run_reconstruct(const Flags& f, std::uint64_t seed, std::ostream& out, std::ostream& err) {
  const fs::path dir = require_out(f);
  const ObservedStudy study = load_study_or_usage(f, err);
  const WaitingTimeModel model = build_model(f.model);
  const AnnealConfig cfg = build_anneal(f.anneal);
  const EdgePrior prior = parse_prior(f.anneal.prior);
  const AdjacencyMatrix init = initial_matrix(f, study);
  const auto ws = build_workspace(study, model);
  const AnnealResult r = anneal_chains(study, ws, prior, cfg, init, seed, f.anneal.chains, f.anneal.threads);
  json doc;
  doc["theta"] = theta_to_json(model);
  doc["edges"] = edges_json(r.best, study);
  doc["logpost"] = r.best_logpost;
  doc["loglik"] = log_likelihood_matrix(r.best, ws);
  doc["diagnostics"] = anneal_json(r);
  write_json(dir / "estimate.json", doc);
  {
    auto edges = open_out(dir / "estimate_edges.tsv");
    write_edge_list(edges, r.best, study);
  }
  write_trace_file(f, dir, r.trace);
  if (r.stuck) err << "warning: " << r.diagnostic << '\n';
  out << std::setprecision(17) << "logpost=" << r.best_logpost << " edges=" << r.best.edge_count() << '\n';
}

void run_estimate(const Flags& f, std::ostream& out, std::ostream& err) {
  const ObservedStudy study = load_study_or_usage(f, err);
  if (f.edges.empty()) throw UsageError("--edges is required");
  const AdjacencyMatrix a = load_compatible(f.edges, study, "edges");
  Family family;
  try {
    family = parse_family(f.family);
  } catch (const std::exception&) {
    throw UsageError("--family: unknown family '" + f.family + "'");
  }
  std::vector<double> theta0 = f.theta0;
  if (theta0.empty()) {
    switch (family) {
      case Family::exponential: theta0 = {1.0}; break;
      case Family::gamma: theta0 = {1.0, 1.0}; break;
      case Family::power_law: theta0 = {2.0, 0.5 * min_recruitment_gap(study)}; break;
    }
  }
  if (theta0.size() != parameter_count(family))
    throw UsageError("--theta0 expects " + std::to_string(parameter_count(family)) + " values");
  EstimateOptions opts;
  opts.raw_coordinates = f.raw;
  ThetaEstimate est;
  try {
    est = estimate_theta(a, study, family, theta0, opts);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--theta0: ") + e.what());
  }
  json doc;
  doc["theta"] = theta_to_json(est.model);
  doc["log_likelihood"] = est.log_likelihood;
  doc["converged"] = est.converged;
  doc["iterations"] = est.report.iterations;
  doc["evaluations"] = est.report.evaluations;
  doc["simplex_diameter"] = est.report.diameter;
  doc["warning"] = est.warning;
  if (!f.out.empty()) write_json(require_out(f) / "estimate.json", doc);
  if (!est.converged) err << "warning: " << est.warning << '\n';
  out << doc.dump(1) << '\n';
}

RenderConfig build_render(const Flags& f, std::uint64_t seed) {
  RenderConfig cfg;
  cfg.theta0 = build_model(f.model);
  if (f.iota_max == 0) throw UsageError("--iota-max must be at least 1");
  cfg.iota_max = f.iota_max;
  cfg.anneal = build_anneal(f.anneal);
  cfg.prior = parse_prior(f.anneal.prior);
  cfg.warm_start = !f.cold_start;
  cfg.chains = f.anneal.chains;
  cfg.threads = f.anneal.threads;
  cfg.rng_seed = seed;
  return cfg;
}

void write_metrics_csv(const fs::path& path, const MetricsReport& m) {
  auto out = open_out(path);
  out << std::setprecision(17);
  out << "convention,tpr,fpr,true_positives,false_positives,positives,negatives,pairs,estimated_edges,true_edges\n";
  for (const auto& [name, r] : {std::pair{"roc", m.roc}, std::pair{"pairs", m.pairs}})
    out << name << ',' << r.tpr << ',' << r.fpr << ',' << r.true_positives << ',' << r.false_positives << ','
        << r.positives << ',' << r.negatives << ',' << r.pairs << ',' << m.estimated_edges << ',' << m.true_edges
        << '\n';
}

void write_dot_panels(const fs::path& dir, const ObservedStudy& study, const AdjacencyMatrix& estimate,
                      const std::optional<AdjacencyMatrix>& truth) {
  {
    auto out = open_out(dir / "recruitment.dot");
    write_dot_recruitment(out, study);
  }
  {
    auto out = open_out(dir / "estimate.dot");
    write_dot_estimate(out, estimate, study);
  }
  if (truth) {
    {
      auto out = open_out(dir / "true.dot");
      write_dot_subgraph(out, *truth, study, "truth");
    }
    auto out = open_out(dir / "overlay.dot");
    write_dot_overlay(out, estimate, *truth, study);
  }
}

void run_pipeline(const Flags& f, std::uint64_t seed, std::ostream& out, std::ostream& err) {
  const fs::path dir = require_out(f);
  const ObservedStudy study = load_study_or_usage(f, err);
  RenderConfig cfg = build_render(f, seed);
  if (f.anneal.init != "recruitment") cfg.initial = initial_matrix(f, study);
  std::optional<AdjacencyMatrix> truth;
  if (!f.truth.empty()) truth = adjacency_from_edges(read_edge_list(fs::path(f.truth)), study);
  RenderResult r;
  try {
    r = render(study, cfg);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  json doc;
  doc["theta"] = theta_to_json(r.theta_hat);
  doc["edges"] = edges_json(r.a_hat, study);
  doc["logpost"] = r.logpost;
  doc["flagged"] = r.flagged;
  json iters = json::array();
  for (const auto& it : r.trace)
    iters.push_back({{"iota", it.iota},
                     {"theta_in", it.theta_in},
                     {"a_step_logpost", it.a_step_logpost},
                     {"a_step_edges", it.a_step_edges},
                     {"theta_out", it.theta_out},
                     {"theta_step_logpost", it.theta_step_logpost},
                     {"theta_step_ok", it.theta_step_ok},
                     {"warning", it.warning}});
  doc["iterations"] = std::move(iters);
  doc["last_anneal"] = anneal_json(r.last_anneal);
  if (truth) {
    const MetricsReport m = evaluate(r.a_hat, *truth, r.theta_hat, r.theta_hat);
    write_metrics_csv(dir / "metrics.csv", m);
    doc["metrics"] = {{"tpr", m.roc.tpr}, {"fpr", m.roc.fpr}, {"tpr_pairs", m.pairs.tpr}, {"fpr_pairs", m.pairs.fpr}};
  }
  write_json(dir / "results.json", doc);
  {
    auto edges = open_out(dir / "a_hat.tsv");
    write_edge_list(edges, r.a_hat, study);
  }
  write_trace_file(f, dir, r.last_anneal.trace);
  write_dot_panels(dir, study, r.a_hat, truth);
  if (r.flagged) err << "warning: a parameter step failed; previous parameters were kept\n";
  out << std::setprecision(17) << "logpost=" << r.logpost << " edges=" << r.a_hat.edge_count() << '\n';
}

void run_experiment(const Flags& f, std::uint64_t seed, std::ostream& out) {
  const fs::path dir = require_out(f);
  ExperimentSettings s;
  s.population = build_population(f.population);
  s.population_seed = make_stream(seed, 0)();
  s.sample_size = f.n;
  s.coupons = f.coupons;
  s.seeds = f.seeds;
  s.seed_spacing = f.seed_spacing;
  s.render = build_render(f, seed);
  s.master_seed = seed;
  s.threads = f.anneal.threads;
  s.reconstruct = !f.no_reconstruct;
  if (f.replicates == 0) throw UsageError("--replicates must be at least 1");
  std::size_t failures = 0;
  if (f.kind == "gamma_sweep") {
    if (f.alphas.empty()) throw UsageError("--alphas needs at least one value");
    for (double a : f.alphas)
      if (!(a > 0.0)) throw UsageError("--alphas must be positive");
    const auto rows = experiment_gamma_sweep(f.alphas, f.replicates, s);
    auto csv = open_out(dir / "metrics.csv");
    write_sweep_csv(csv, rows);
    auto t = open_out(dir / "timings.csv");
    write_sweep_timings(t, rows);
    for (const auto& r : rows) failures += r.error.empty() ? 0 : 1;
    out << "rows=" << rows.size();
  } else if (f.kind == "misspecification") {
    if (!(f.alpha > 0.0)) throw UsageError("--alpha must be positive");
    const auto rows = experiment_misspecification(f.replicates, f.alpha, s);
    auto csv = open_out(dir / "metrics.csv");
    write_misspec_csv(csv, rows);
    auto t = open_out(dir / "timings.csv");
    write_misspec_timings(t, rows);
    for (const auto& r : rows) failures += r.error.empty() ? 0 : 1;
    out << "rows=" << rows.size();
  } else {
    throw UsageError("--kind: expected 'gamma_sweep' or 'misspecification'");
  }
  out << " failures=" << failures << '\n';
}

void run_export(const Flags& f, std::ostream& err) {
  const fs::path dir = require_out(f);
  const ObservedStudy study = load_study_or_usage(f, err);
  if (f.edges.empty()) throw UsageError("--edges is required");
  const AdjacencyMatrix estimate = adjacency_from_edges(read_edge_list(fs::path(f.edges)), study);
  std::optional<AdjacencyMatrix> truth;
  if (!f.truth.empty()) truth = adjacency_from_edges(read_edge_list(fs::path(f.truth)), study);
  if (!f.dot) throw UsageError("export: choose an output format (--dot)");
  write_dot_panels(dir, study, estimate, truth);
}

// ---- manifest --------------------------------------------------------------

std::vector<std::string> replay_argv(const CLI::App* sub, std::uint64_t seed) {
  std::vector<std::string> argv{sub->get_name()};
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames().front();
    if (name == "help" || name == "rng-seed" || opt->count() == 0) continue;
    if (opt->get_type_size() == 0) {
      argv.push_back("--" + name);
      continue;
    }
    for (const auto& value : opt->results()) {
      argv.push_back("--" + name);
      const bool path = kInputOptions.count(name) > 0 || name == "out";
      argv.push_back(path ? fs::absolute(value).lexically_normal().string() : value);
    }
  }
  argv.push_back("--rng-seed");
  argv.push_back(std::to_string(seed));
  return argv;
}

std::map<std::string, std::string> input_digests(const CLI::App* sub) {
  std::map<std::string, std::string> digests;
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_lnames().empty() || opt->count() == 0) continue;
    if (!kInputOptions.count(opt->get_lnames().front())) continue;
    for (const auto& value : opt->results()) {
      const fs::path p = fs::absolute(value).lexically_normal();
      if (fs::is_regular_file(p)) digests[p.string()] = sha256_file(p);
    }
  }
  return digests;
}

void check_inputs_exist(const CLI::App* sub) {
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_lnames().empty() || opt->count() == 0) continue;
    if (!kInputOptions.count(opt->get_lnames().front())) continue;
    for (const auto& value : opt->results())
      if (!fs::is_regular_file(value)) throw UsageError("--" + opt->get_lnames().front() + ": no such file " + value);
  }
}

int fail(std::ostream& err, int code, const std::string& msg) {
  err << "error: " << msg << '\n';
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Flags f;
  CLI::App app{"Respondent-driven sampling simulation and network reconstruction"};
  app.set_config("--config", "", "TOML/INI file with option values (sections per subcommand)");
  app.require_subcommand(1);

  auto* simulate_cmd = app.add_subcommand("simulate", "simulate a sampling study over a population graph");
  simulate_cmd->add_option("--graph", f.graph, "population edge list (otherwise generated)");
  add_population_flags(simulate_cmd, f.population);
  simulate_cmd->add_option("--n", f.n, "target sample size")->capture_default_str();
  simulate_cmd->add_option("--seeds", f.seeds, "number of seeds")->capture_default_str();
  simulate_cmd->add_option("--seed-spacing", f.seed_spacing, "time between seed entries")->capture_default_str();
  simulate_cmd->add_option("--coupons", f.coupons, "coupons per subject")->capture_default_str();
  simulate_cmd->add_option("--max-time", f.max_time, "stop recruiting after this time");
  add_model_flags(simulate_cmd, f.model);
  add_seed_flag(simulate_cmd, f);
  simulate_cmd->add_option("--out", f.out, "output directory");

  auto* loglik_cmd = app.add_subcommand("loglik", "print direct and matrix log-likelihoods");
  loglik_cmd->add_option("--study", f.study, "observed-study JSON");
  loglik_cmd->add_option("--edges", f.edges, "candidate edge list");
  add_model_flags(loglik_cmd, f.model);

  auto* reconstruct_cmd = app.add_subcommand("reconstruct", "anneal over compatible graphs at fixed parameters");
  reconstruct_cmd->add_option("--study", f.study, "observed-study JSON");
  add_model_flags(reconstruct_cmd, f.model);
  add_anneal_flags(reconstruct_cmd, f.anneal);
  reconstruct_cmd->add_option("--init", f.anneal.init, "recruitment | file")->capture_default_str();
  reconstruct_cmd->add_option("--init-file", f.anneal.init_file, "starting edge list for --init file");
  reconstruct_cmd->add_option("--trace-out", f.anneal.trace_out, "trace CSV name inside --out");
  add_seed_flag(reconstruct_cmd, f);
  reconstruct_cmd->add_option("--out", f.out, "output directory");

  auto* estimate_cmd = app.add_subcommand("estimate", "fit waiting-time parameters for a fixed edge set");
  estimate_cmd->add_option("--study", f.study, "observed-study JSON");
  estimate_cmd->add_option("--edges", f.edges, "fixed edge list");
  estimate_cmd->add_option("--family", f.family, "exponential | gamma | power_law")->capture_default_str();
  estimate_cmd->add_option("--theta0", f.theta0, "starting parameters");
  estimate_cmd->add_flag("--raw", f.raw, "optimize raw parameters with clipping");
  estimate_cmd->add_option("--out", f.out, "output directory (optional)");

  auto* pipeline_cmd = app.add_subcommand("pipeline", "alternate graph and parameter estimation");
  pipeline_cmd->add_option("--study", f.study, "observed-study JSON");
  pipeline_cmd->add_option("--truth", f.truth, "true edge list for metrics and overlay");
  add_model_flags(pipeline_cmd, f.model);
  add_anneal_flags(pipeline_cmd, f.anneal);
  pipeline_cmd->add_option("--init", f.anneal.init, "recruitment | file")->capture_default_str();
  pipeline_cmd->add_option("--init-file", f.anneal.init_file, "starting edge list for --init file");
  pipeline_cmd->add_option("--trace-out", f.anneal.trace_out, "trace CSV (last A-step) name inside --out");
  pipeline_cmd->add_option("--iota-max", f.iota_max, "outer iterations")->capture_default_str();
  pipeline_cmd->add_flag("--cold-start", f.cold_start, "restart every A-step from the initial matrix");
  add_seed_flag(pipeline_cmd, f);
  pipeline_cmd->add_option("--out", f.out, "output directory");

  auto* experiment_cmd = app.add_subcommand("experiment", "replicated simulation and reconstruction");
  experiment_cmd->add_option("--kind", f.kind, "gamma_sweep | misspecification")->capture_default_str();
  experiment_cmd->add_option("--alphas", f.alphas, "gamma shapes for the sweep")->capture_default_str();
  experiment_cmd->add_option("--alpha", f.alpha, "gamma shape for misspecification")->capture_default_str();
  experiment_cmd->add_option("--replicates", f.replicates, "replicates per setting")->capture_default_str();
  add_population_flags(experiment_cmd, f.population);
  experiment_cmd->add_option("--n", f.n, "target sample size")->capture_default_str();
  experiment_cmd->add_option("--seeds", f.seeds, "number of seeds")->capture_default_str();
  experiment_cmd->add_option("--seed-spacing", f.seed_spacing, "time between seed entries")->capture_default_str();
  experiment_cmd->add_option("--coupons", f.coupons, "coupons per subject")->capture_default_str();
  add_anneal_flags(experiment_cmd, f.anneal);
  experiment_cmd->add_option("--iota-max", f.iota_max, "outer iterations")->capture_default_str();
  experiment_cmd->add_flag("--cold-start", f.cold_start, "restart every A-step from the initial matrix");
  experiment_cmd->add_flag("--no-reconstruct", f.no_reconstruct, "only estimate parameters given the truth");
  add_seed_flag(experiment_cmd, f);
  experiment_cmd->add_option("--out", f.out, "output directory");

  auto* export_cmd = app.add_subcommand("export", "render a study and an edge set as DOT");
  export_cmd->add_option("--study", f.study, "observed-study JSON");
  export_cmd->add_option("--edges", f.edges, "estimated edge list");
  export_cmd->add_option("--truth", f.truth, "true edge list (adds truth and overlay panels)");
  export_cmd->add_flag("--dot", f.dot, "write DOT files");
  export_cmd->add_option("--out", f.out, "output directory");

  auto* replay_cmd = app.add_subcommand("replay", "re-run the job recorded in a manifest");
  replay_cmd->add_option("--manifest", f.manifest, "manifest.json")->required();
  replay_cmd->add_option("--out", f.out, "output directory (default: the recorded one)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return ok;
    }
    return fail(err, usage, e.what());
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();

  if (name == "replay") {
    RunManifest m;
    try {
      std::ifstream in(f.manifest);
      if (!in) return fail(err, usage, "cannot open manifest " + f.manifest);
      m = manifest_from_json(json::parse(in));
    } catch (const std::exception& e) {
      return fail(err, validation, std::string("manifest: ") + e.what());
    }
    std::vector<std::string> argv = m.argv;
    if (!f.out.empty()) {
      auto it = std::find(argv.begin(), argv.end(), "--out");
      if (it == argv.end() || it + 1 == argv.end()) {
        argv.push_back("--out");
        argv.push_back(f.out);
      } else {
        *(it + 1) = f.out;
      }
    }
    return run(argv, out, err);
  }

  const bool seeded = name == "simulate" || name == "reconstruct" || name == "pipeline" || name == "experiment";
  const std::uint64_t seed = f.rng_seed ? *f.rng_seed : entropy_seed();
  RunManifest manifest;
  manifest.subcommand = name;
  manifest.started = utc_timestamp();

  try {
    check_inputs_exist(sub);
    if (name == "simulate") {
      run_simulate(f, seed, out);
    } else if (name == "loglik") {
      run_loglik(f, out, err);
    } else if (name == "reconstruct") {
      run_reconstruct(f, seed, out, err);
    } else if (name == "estimate") {
      run_estimate(f, out, err);
    } else if (name == "pipeline") {
      run_pipeline(f, seed, out, err);
    } else if (name == "experiment") {
      run_experiment(f, seed, out);
    } else if (name == "export") {
      run_export(f, err);
    }
  } catch (const UsageError& e) {
    return fail(err, usage, e.what());
  } catch (const ValidationError& e) {
    return fail(err, validation, e.what());
  } catch (const std::exception& e) {
    return fail(err, runtime, e.what());
  }

  if (!f.out.empty()) {
    try {
      manifest.argv = replay_argv(sub, seed);
      if (!seeded) manifest.argv.pop_back(), manifest.argv.pop_back();
      manifest.config = sub->config_to_str(true, false);
      manifest.rng_seed = seeded ? seed : 0;
      manifest.build_id = build_id();
      manifest.input_digests = input_digests(sub);
      manifest.finished = utc_timestamp();
      write_json(fs::path(f.out) / "manifest.json", manifest_to_json(manifest));
    } catch (const std::exception& e) {
      return fail(err, runtime, std::string("manifest: ") + e.what());
    }
  }
  return ok;
}

}  // namespace rdsnet::cli
