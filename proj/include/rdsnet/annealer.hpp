#pragma once

// Simulated-annealing search over compatible adjacency matrices with
// single-edge toggle proposals.
//
// Acceptance: psi = min{1, exp(dlogpost / gamma) * ratio}, where ratio is the
// Metropolis-Hastings proposal correction (Add + Remove before) / (Add +
// Remove after). Moves that raise the posterior are accepted at ratio 1, so
// the chain concentrates on posterior maxima as gamma falls.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rdsnet/likelihood.hpp"
#include "rdsnet/random.hpp"
#include "rdsnet/study.hpp"

namespace rdsnet {

struct CoolingSchedule {
  enum class Kind { geometric, linear, logarithmic };
  Kind kind = Kind::geometric;
  double gamma0 = 1.0;
  double rate = 0.999;
  double floor = 1e-4;

  /// Temperature at iteration j >= 1; positive, nonincreasing, floored.
  double temperature(std::uint64_t j) const;
};

CoolingSchedule::Kind parse_cooling_kind(const std::string& name);
std::string cooling_kind_name(CoolingSchedule::Kind kind);

/// Valid toggles of a compatible matrix, maintained incrementally:
/// Add = absent pairs whose endpoints both sit below their reported degree,
/// Remove = present non-recruitment edges.
class MoveSet {
 public:
  MoveSet(const AdjacencyMatrix& a, const ObservedStudy& study);

  std::size_t add_count() const { return add_count_; }
  std::size_t remove_count() const { return removable_.size(); }
  std::size_t total() const { return add_count_ + removable_.size(); }

  struct Counts {
    std::size_t add = 0;
    std::size_t remove = 0;
    std::size_t total() const { return add + remove; }
  };
  /// Counts after applying `move` to `a` (which still holds the old state).
  Counts counts_after(const AdjacencyMatrix& a, const ToggleMove& move) const;

  /// Updates the sets; `a_after` already has `move` applied.
  void update(const AdjacencyMatrix& a_after, const ToggleMove& move);

  /// Uniform draw over the valid moves; empty when there is none.
  std::optional<ToggleMove> sample(const AdjacencyMatrix& a, Rng& rng) const;
  /// Draws vertex pairs uniformly until one passes the add or remove guard.
  std::optional<ToggleMove> sample_by_rejection(const AdjacencyMatrix& a, Rng& rng) const;

 private:
  bool unsaturated(std::size_t v, std::size_t degree) const {
    return static_cast<int>(degree) < capacity_[v];
  }
  void insert_unsaturated(std::size_t v);
  void erase_unsaturated(std::size_t v);

  const ObservedStudy* study_;
  std::size_t n_;
  std::vector<int> capacity_;
  std::vector<std::size_t> unsaturated_;       // members of U
  std::vector<std::ptrdiff_t> unsat_pos_;      // position in unsaturated_, -1 if absent
  std::vector<std::size_t> neighbors_in_u_;    // per vertex, neighbours inside U
  std::size_t edges_in_u_ = 0;
  std::size_t add_count_ = 0;
  std::vector<VertexPair> removable_;
  std::vector<std::ptrdiff_t> removable_pos_;  // indexed by i * n + j, i < j
};

enum class ProposalMode { uniform_moves, rejection_loop };

double proposal_ratio(std::size_t total_before, std::size_t total_after);

/// min{1, exp(delta_logpost / gamma) * ratio}.
double acceptance_prob(double delta_logpost, double ratio, double gamma);

struct AnnealConfig {
  std::uint64_t iterations = 100000;
  CoolingSchedule schedule;
  bool auto_gamma0 = true;  // gamma0 = std of dlogpost over probe moves from the start state
  std::size_t probe_moves = 100;
  ProposalMode proposal = ProposalMode::uniform_moves;
  std::uint64_t trace_every = 100;
  std::uint64_t check_every = 0;  // periodic compatibility + cache check; 0 disables
};

struct TraceRow {
  std::uint64_t iter = 0;
  double gamma = 0.0;
  double logpost = 0.0;
  bool accepted = false;
};

/// One chain. The study and workspace are shared read-only and must outlive it.
class AnnealState {
 public:
  AnnealState(const ObservedStudy& study, const LikelihoodWorkspace& ws, const EdgePrior& prior,
              AdjacencyMatrix initial, Rng rng);

  const AdjacencyMatrix& matrix() const { return a_; }
  const LikelihoodCache& cache() const { return cache_; }
  const MoveSet& moves() const { return moves_; }
  double logpost() const { return logpost_; }
  const AdjacencyMatrix& best_matrix() const { return best_a_; }
  double best_logpost() const { return best_logpost_; }
  std::uint64_t iteration() const { return iter_; }
  std::uint64_t accepted() const { return accepted_; }
  Rng& rng() { return rng_; }

  std::optional<ToggleMove> propose(ProposalMode mode);
  /// Posterior change of `move` from the current state (likelihood + prior).
  double delta_logpost(const ToggleMove& move) const;
  double proposal_ratio_of(const ToggleMove& move) const;
  /// One Metropolis step at temperature gamma. Returns nullopt when stuck,
  /// otherwise whether the proposal was accepted.
  std::optional<bool> step(double gamma, ProposalMode mode);
  void commit(const ToggleMove& move, double delta);
  /// Throws std::logic_error if the state drifted (incompatible matrix, stale
  /// cache or move counts).
  void verify(double tolerance = 1e-9) const;

 private:
  const ObservedStudy* study_;
  const LikelihoodWorkspace* ws_;
  EdgePrior prior_;
  AdjacencyMatrix a_;
  LikelihoodCache cache_;
  MoveSet moves_;
  Rng rng_;
  double logpost_ = 0.0;
  AdjacencyMatrix best_a_;
  double best_logpost_ = 0.0;
  std::uint64_t iter_ = 0;
  std::uint64_t accepted_ = 0;
};

struct AnnealResult {
  AdjacencyMatrix best;
  double best_logpost = 0.0;
  AdjacencyMatrix final_state;
  double final_logpost = 0.0;
  std::vector<TraceRow> trace;
  std::uint64_t iterations_run = 0;
  std::uint64_t accepted = 0;
  double gamma0 = 0.0;
  bool stuck = false;
  std::string diagnostic;
  std::size_t chain = 0;  // chain that produced `best`
};

/// Probe-scaled starting temperature: standard deviation of dlogpost over
/// `probes` proposals from the current state (1.0 if degenerate).
double probe_gamma0(AnnealState& state, std::size_t probes, ProposalMode mode);

AnnealResult anneal(const ObservedStudy& study, const LikelihoodWorkspace& ws, const EdgePrior& prior,
                    const AnnealConfig& config, const AdjacencyMatrix& initial, Rng rng);

/// Independent chains on streams (master_seed, chain index), run on up to
/// `threads` workers; the best state across chains wins, ties to the lowest
/// chain index.
AnnealResult anneal_chains(const ObservedStudy& study, const LikelihoodWorkspace& ws,
                           const EdgePrior& prior, const AnnealConfig& config,
                           const AdjacencyMatrix& initial, std::uint64_t master_seed,
                           std::size_t chains, std::size_t threads = 1);

}  // namespace rdsnet
