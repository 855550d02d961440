#include "rdsnet/annealer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rdsnet/parallel.hpp"

namespace rdsnet {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::size_t pairs(std::size_t k) { return k < 2 ? 0 : k * (k - 1) / 2; }

}  // namespace

double CoolingSchedule::temperature(std::uint64_t j) const {
  const double step = static_cast<double>(j > 0 ? j - 1 : 0);
  double g = gamma0;
  switch (kind) {
    case Kind::geometric: g = gamma0 * std::pow(rate, step); break;
    case Kind::linear: g = gamma0 - rate * step; break;
    case Kind::logarithmic: g = gamma0 / (1.0 + rate * std::log1p(step)); break;
  }
  return std::max(g, floor);
}

CoolingSchedule::Kind parse_cooling_kind(const std::string& name) {
  if (name == "geometric") return CoolingSchedule::Kind::geometric;
  if (name == "linear") return CoolingSchedule::Kind::linear;
  if (name == "logarithmic" || name == "log") return CoolingSchedule::Kind::logarithmic;
  throw std::invalid_argument("unknown cooling schedule '" + name + "'");
}

std::string cooling_kind_name(CoolingSchedule::Kind kind) {
  switch (kind) {
    case CoolingSchedule::Kind::geometric: return "geometric";
    case CoolingSchedule::Kind::linear: return "linear";
    case CoolingSchedule::Kind::logarithmic: return "logarithmic";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// MoveSet

MoveSet::MoveSet(const AdjacencyMatrix& a, const ObservedStudy& study)
    : study_(&study),
      n_(a.size()),
      capacity_(study.degrees()),
      unsat_pos_(a.size(), -1),
      neighbors_in_u_(a.size(), 0),
      removable_pos_(a.size() * a.size(), -1) {
  if (a.size() != study.size()) throw std::invalid_argument("MoveSet: dimension mismatch");
  for (std::size_t v = 0; v < n_; ++v)
    if (unsaturated(v, a.degree(v))) insert_unsaturated(v);
  for (std::size_t v = 0; v < n_; ++v)
    for (std::size_t w : unsaturated_)
      if (a.has_edge(v, w)) ++neighbors_in_u_[v];
  std::size_t twice = 0;
  for (std::size_t v : unsaturated_) twice += neighbors_in_u_[v];
  edges_in_u_ = twice / 2;
  add_count_ = pairs(unsaturated_.size()) - edges_in_u_;
  const auto& ar = study.recruitment_adjacency();
  for (const auto& e : a.edges()) {
    if (ar.has_edge(e.first, e.second)) continue;
    removable_pos_[e.first * n_ + e.second] = static_cast<std::ptrdiff_t>(removable_.size());
    removable_.push_back(e);
  }
}

void MoveSet::insert_unsaturated(std::size_t v) {
  unsat_pos_[v] = static_cast<std::ptrdiff_t>(unsaturated_.size());
  unsaturated_.push_back(v);
}

void MoveSet::erase_unsaturated(std::size_t v) {
  const std::ptrdiff_t p = unsat_pos_[v];
  const std::size_t last = unsaturated_.back();
  unsaturated_[static_cast<std::size_t>(p)] = last;
  unsat_pos_[last] = p;
  unsaturated_.pop_back();
  unsat_pos_[v] = -1;
}

MoveSet::Counts MoveSet::counts_after(const AdjacencyMatrix& a, const ToggleMove& move) const {
  const std::size_t x = move.edge.first;
  const std::size_t y = move.edge.second;
  const bool add = move.kind == MoveKind::add;
  const int step = add ? 1 : -1;
  const bool x_before = unsaturated(x, a.degree(x));
  const bool y_before = unsaturated(y, a.degree(y));
  const bool x_after = unsaturated(x, a.degree(x) + step);
  const bool y_after = unsaturated(y, a.degree(y) + step);
  const bool edge_after = add;

  // Replays update() on scalars: the edge change first, then x's and y's
  // membership changes in that order.
  long long e = static_cast<long long>(edges_in_u_);
  long long size_u = static_cast<long long>(unsaturated_.size());
  long long nx = static_cast<long long>(neighbors_in_u_[x]);
  long long ny = static_cast<long long>(neighbors_in_u_[y]);
  if (y_before) nx += step;
  if (x_before) ny += step;
  if (x_before && y_before) e += step;
  if (x_before != x_after) {
    if (x_before) {
      e -= nx;
      --size_u;
      if (edge_after) --ny;
    } else {
      e += nx;
      ++size_u;
      if (edge_after) ++ny;
    }
  }
  if (y_before != y_after) {
    if (y_before) {
      e -= ny;
      --size_u;
    } else {
      e += ny;
      ++size_u;
    }
  }
  Counts c;
  c.add = pairs(static_cast<std::size_t>(size_u)) - static_cast<std::size_t>(e);
  c.remove = removable_.size() + (add ? 1 : 0) - (add ? 0 : 1);
  return c;
}

void MoveSet::update(const AdjacencyMatrix& a_after, const ToggleMove& move) {
  const std::size_t x = move.edge.first;
  const std::size_t y = move.edge.second;
  const bool add = move.kind == MoveKind::add;
  const int step = add ? 1 : -1;
  const std::size_t key = x * n_ + y;
  if (add) {
    removable_pos_[key] = static_cast<std::ptrdiff_t>(removable_.size());
    removable_.push_back(move.edge);
  } else {
    const std::ptrdiff_t p = removable_pos_[key];
    const VertexPair last = removable_.back();
    removable_[static_cast<std::size_t>(p)] = last;
    removable_pos_[last.first * n_ + last.second] = p;
    removable_.pop_back();
    removable_pos_[key] = -1;
  }

  const bool x_before = unsat_pos_[x] >= 0;
  const bool y_before = unsat_pos_[y] >= 0;
  if (y_before) neighbors_in_u_[x] += step;
  if (x_before) neighbors_in_u_[y] += step;
  if (x_before && y_before) edges_in_u_ += step;

  for (std::size_t v : {x, y}) {
    const bool before = unsat_pos_[v] >= 0;
    const bool after = unsaturated(v, a_after.degree(v));
    if (before == after) continue;
    if (before) {
      edges_in_u_ -= neighbors_in_u_[v];
      erase_unsaturated(v);
      for (std::size_t k = 0; k < n_; ++k)
        if (a_after.has_edge(v, k)) --neighbors_in_u_[k];
    } else {
      edges_in_u_ += neighbors_in_u_[v];
      insert_unsaturated(v);
      for (std::size_t k = 0; k < n_; ++k)
        if (a_after.has_edge(v, k)) ++neighbors_in_u_[k];
    }
  }
  add_count_ = pairs(unsaturated_.size()) - edges_in_u_;
}

std::optional<ToggleMove> MoveSet::sample(const AdjacencyMatrix& a, Rng& rng) const {
  const std::size_t all = total();
  if (all == 0) return std::nullopt;
  const std::size_t r = uniform_index(rng, all);
  if (r >= add_count_) return ToggleMove{removable_[r - add_count_], MoveKind::remove};

  // Uniform pair inside U, rejecting adjacent ones, is uniform over add moves.
  const std::size_t k = unsaturated_.size();
  for (int attempt = 0; attempt < 64; ++attempt) {
    const std::size_t i = uniform_index(rng, k);
    std::size_t j = uniform_index(rng, k - 1);
    if (j >= i) ++j;
    const std::size_t u = unsaturated_[i];
    const std::size_t v = unsaturated_[j];
    if (!a.has_edge(u, v)) return ToggleMove{VertexPair(u, v), MoveKind::add};
  }
  // Dense U: pick the target-th addable pair by enumeration (still uniform).
  std::size_t target = uniform_index(rng, add_count_);
  std::vector<std::size_t> members(unsaturated_);
  std::sort(members.begin(), members.end());
  for (std::size_t p = 0; p < members.size(); ++p)
    for (std::size_t q = p + 1; q < members.size(); ++q)
      if (!a.has_edge(members[p], members[q]) && target-- == 0)
        return ToggleMove{VertexPair(members[p], members[q]), MoveKind::add};
  throw std::logic_error("MoveSet::sample: add count out of sync");
}

std::optional<ToggleMove> MoveSet::sample_by_rejection(const AdjacencyMatrix& a, Rng& rng) const {
  if (total() == 0 || n_ < 2) return std::nullopt;
  const auto& ar = study_->recruitment_adjacency();
  for (;;) {
    const std::size_t i = uniform_index(rng, n_);
    std::size_t j = uniform_index(rng, n_ - 1);
    if (j >= i) ++j;
    if (!a.has_edge(i, j) && unsaturated(i, a.degree(i)) && unsaturated(j, a.degree(j)))
      return ToggleMove{VertexPair(i, j), MoveKind::add};
    if (a.has_edge(i, j) && !ar.has_edge(i, j)) return ToggleMove{VertexPair(i, j), MoveKind::remove};
  }
}

// ---------------------------------------------------------------------------

double proposal_ratio(std::size_t total_before, std::size_t total_after) {
  if (total_after == 0) throw std::logic_error("proposal_ratio: target state has no valid move");
  return static_cast<double>(total_before) / static_cast<double>(total_after);
}

double acceptance_prob(double delta_logpost, double ratio, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("acceptance_prob: temperature must be positive");
  if (std::isnan(delta_logpost) || delta_logpost == kNegInf) return 0.0;
  const double log_psi = delta_logpost / gamma + std::log(ratio);
  if (log_psi >= 0.0) return 1.0;
  return std::exp(log_psi);
}

// ---------------------------------------------------------------------------
// AnnealState

AnnealState::AnnealState(const ObservedStudy& study, const LikelihoodWorkspace& ws,
                         const EdgePrior& prior, AdjacencyMatrix initial, Rng rng)
    : study_(&study),
      ws_(&ws),
      prior_(prior),
      a_(std::move(initial)),
      cache_(init_cache(a_, ws)),
      moves_(a_, study),
      rng_(std::move(rng)) {
  if (!check_compatible(a_, study).is_compatible)
    throw std::invalid_argument("AnnealState: initial matrix is not compatible with the study");
  logpost_ = cache_log_likelihood(cache_, ws) + prior_.log_prior(a_, study);
  best_a_ = a_;
  best_logpost_ = logpost_;
}

std::optional<ToggleMove> AnnealState::propose(ProposalMode mode) {
  return mode == ProposalMode::uniform_moves ? moves_.sample(a_, rng_)
                                             : moves_.sample_by_rejection(a_, rng_);
}

double AnnealState::delta_logpost(const ToggleMove& move) const {
  return toggle_delta(cache_, *ws_, move) + prior_.move_delta(move);
}

double AnnealState::proposal_ratio_of(const ToggleMove& move) const {
  return proposal_ratio(moves_.total(), moves_.counts_after(a_, move).total());
}

void AnnealState::commit(const ToggleMove& move, double delta) {
  apply_toggle(cache_, *ws_, a_, move);
  moves_.update(a_, move);
  logpost_ += delta;
  ++accepted_;
  if (logpost_ > best_logpost_) {
    best_logpost_ = logpost_;
    best_a_ = a_;
  }
}

std::optional<bool> AnnealState::step(double gamma, ProposalMode mode) {
  const auto move = propose(mode);
  if (!move) return std::nullopt;
  ++iter_;
  const double delta = delta_logpost(*move);
  const double psi = acceptance_prob(delta, proposal_ratio_of(*move), gamma);
  const bool accept = psi >= 1.0 || uniform_open(rng_) < psi;
  if (accept) commit(*move, delta);
  return accept;
}

void AnnealState::verify(double tolerance) const {
  if (!check_compatible(a_, *study_).is_compatible)
    throw std::logic_error("annealer: state left the compatible space");
  if (moves_.add_count() != count_addable(a_, *study_) ||
      moves_.remove_count() != count_removable(a_, *study_))
    throw std::logic_error("annealer: move counts out of sync");
  const double dev = cache_deviation(cache_, *ws_, a_);
  if (!(dev <= tolerance)) throw std::logic_error("annealer: likelihood cache drifted");
}

double probe_gamma0(AnnealState& state, std::size_t probes, ProposalMode mode) {
  std::vector<double> deltas;
  for (std::size_t k = 0; k < probes; ++k) {
    const auto move = state.propose(mode);
    if (!move) break;
    const double d = state.delta_logpost(*move);
    if (std::isfinite(d)) deltas.push_back(d);
  }
  if (deltas.size() < 2) return 1.0;
  double mean = 0.0;
  for (double d : deltas) mean += d;
  mean /= static_cast<double>(deltas.size());
  double var = 0.0;
  for (double d : deltas) var += (d - mean) * (d - mean);
  var /= static_cast<double>(deltas.size() - 1);
  const double sd = std::sqrt(var);
  return sd > 1e-12 && std::isfinite(sd) ? sd : 1.0;
}

AnnealResult anneal(const ObservedStudy& study, const LikelihoodWorkspace& ws, const EdgePrior& prior,
                    const AnnealConfig& config, const AdjacencyMatrix& initial, Rng rng) {
  AnnealState state(study, ws, prior, initial, std::move(rng));
  CoolingSchedule schedule = config.schedule;
  if (config.auto_gamma0) schedule.gamma0 = probe_gamma0(state, config.probe_moves, config.proposal);

  AnnealResult result;
  result.gamma0 = schedule.gamma0;
  for (std::uint64_t j = 1; j <= config.iterations; ++j) {
    const double gamma = schedule.temperature(j);
    const auto accepted = state.step(gamma, config.proposal);
    if (!accepted) {
      result.stuck = true;
      result.diagnostic = "no valid toggle: the compatible space is a single matrix";
      break;
    }
    if (config.trace_every > 0 && j % config.trace_every == 0)
      result.trace.push_back({j, gamma, state.logpost(), *accepted});
    if (config.check_every > 0 && j % config.check_every == 0) state.verify();
  }
  result.best = state.best_matrix();
  result.best_logpost = state.best_logpost();
  result.final_state = state.matrix();
  result.final_logpost = state.logpost();
  result.iterations_run = state.iteration();
  result.accepted = state.accepted();
  return result;
}

AnnealResult anneal_chains(const ObservedStudy& study, const LikelihoodWorkspace& ws,
                           const EdgePrior& prior, const AnnealConfig& config,
                           const AdjacencyMatrix& initial, std::uint64_t master_seed,
                           std::size_t chains, std::size_t threads) {
  if (chains == 0) throw std::invalid_argument("anneal_chains: need at least one chain");
  std::vector<AnnealResult> results(chains);
  parallel_for(chains, threads, [&](std::size_t c) {
    results[c] = anneal(study, ws, prior, config, initial, make_stream(master_seed, c));
    results[c].chain = c;
  });
  std::size_t best = 0;
  for (std::size_t c = 1; c < chains; ++c)
    if (results[c].best_logpost > results[best].best_logpost) best = c;
  return std::move(results[best]);
}

}  // namespace rdsnet
