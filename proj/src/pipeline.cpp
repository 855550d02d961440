#include "rdsnet/pipeline.hpp"

#include <stdexcept>

namespace rdsnet {

RenderResult render(const ObservedStudy& study, const RenderConfig& config) {
  if (config.iota_max < 1) throw std::invalid_argument("render: iota_max must be at least 1");
  const Family family = config.theta0.family();
  const ParamSpace space(family, study);
  if (!space.contains(config.theta0.params()))
    throw std::invalid_argument("render: initial parameters lie outside the parameter space");

  const AdjacencyMatrix start = config.initial ? *config.initial : study.recruitment_adjacency();
  RenderResult result;
  WaitingTimeModel theta = config.theta0;
  AdjacencyMatrix current = start;
  for (std::size_t iota = 0; iota < config.iota_max; ++iota) {
    RenderIteration it;
    it.iota = iota;
    it.theta_in = theta.params();

    // A-step
    const LikelihoodWorkspace ws(study, theta, WorkspaceScope::coupon_support);
    const std::uint64_t step_seed = make_stream(config.rng_seed, iota)();
    const AdjacencyMatrix& init = config.warm_start ? current : start;
    AnnealResult annealed =
        anneal_chains(study, ws, config.prior, config.anneal, init, step_seed, config.chains, config.threads);
    current = annealed.best;
    it.a_step_logpost = annealed.best_logpost;
    it.a_step_edges = current.edge_count();

    // theta-step
    try {
      const ThetaEstimate est = estimate_theta(current, study, family, theta.params(), config.estimate);
      theta = est.model;
      it.theta_step_logpost = est.log_likelihood + config.prior.log_prior(current, study);
      if (!est.converged) it.warning = est.warning;
    } catch (const std::exception& e) {
      it.theta_step_ok = false;
      it.warning = e.what();
      it.theta_step_logpost = it.a_step_logpost;
      result.flagged = true;
    }
    it.theta_out = theta.params();
    result.trace.push_back(std::move(it));
    result.last_anneal = std::move(annealed);
  }
  result.a_hat = current;
  result.a_final_state = result.last_anneal.final_state;
  result.theta_hat = theta;
  result.logpost = result.trace.back().theta_step_logpost;
  return result;
}

RateReport tpr_fpr(const AdjacencyMatrix& estimate, const AdjacencyMatrix& truth, RateConvention convention) {
  if (estimate.size() != truth.size()) throw std::invalid_argument("tpr_fpr: dimension mismatch");
  const std::size_t n = truth.size();
  RateReport r;
  r.pairs = n < 2 ? 0 : n * (n - 1) / 2;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool t = truth.has_edge(i, j);
      const bool e = estimate.has_edge(i, j);
      if (t) ++r.positives;
      if (e && t) ++r.true_positives;
      if (e && !t) ++r.false_positives;
    }
  r.negatives = r.pairs - r.positives;
  auto ratio = [](std::size_t a, std::size_t b) {
    return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b);
  };
  if (convention == RateConvention::pairs) {
    r.tpr = ratio(r.true_positives, r.pairs);
    r.fpr = ratio(r.false_positives, r.pairs);
  } else {
    r.tpr = ratio(r.true_positives, r.positives);
    r.fpr = ratio(r.false_positives, r.negatives);
  }
  return r;
}

MetricsReport evaluate(const AdjacencyMatrix& estimate, const AdjacencyMatrix& truth,
                       const WaitingTimeModel& theta_hat, const WaitingTimeModel& theta_true) {
  MetricsReport m;
  m.roc = tpr_fpr(estimate, truth, RateConvention::roc);
  m.pairs = tpr_fpr(estimate, truth, RateConvention::pairs);
  m.estimated_edges = estimate.edge_count();
  m.true_edges = truth.edge_count();
  if (theta_hat.family() == theta_true.family())
    for (std::size_t k = 0; k < theta_hat.params().size(); ++k)
      m.theta_bias.push_back(theta_hat.params()[k] - theta_true.params()[k]);
  return m;
}

}  // namespace rdsnet
