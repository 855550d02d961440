#pragma once

// Log-likelihood of the recruitment time series given a candidate induced
// subgraph A and waiting-time parameters.
//
// Two routes compute the same quantity:
//   * log_likelihood_direct walks the recruiter sets event by event and calls
//     the waiting-time curves itself (slow, the reference route);
//   * log_likelihood_matrix uses precomputed matrices
//       H(u,i) = conditional hazard of edge (u,i) at event i,
//       S(u,i) = log conditional survival of edge (u,i) up to event i,
//       B = C o H,  D = C o S,
//     and evaluates  sum_{i not seed} log(e^beta_i) + sum_i delta_i  with
//       e^beta = B' u + LowerTri(A B)' 1,   delta = D' u + LowerTri(A D)' 1,
//       u = d - A 1 (edges to never-sampled neighbours).
//
// LikelihoodCache keeps e^beta and delta in the equivalent form
//   e^beta = B' d - StrictlyUpperTri(A B)' 1   (and likewise delta),
// which changes in O(n) under a single-edge toggle {x, y}, x < y:
//   adding subtracts  B(y,j) 1{x<j} + B(x,j) 1{y<j}  from e^beta_j,
//   removing adds it back (same for delta with D).
// The two contributions are summed: each endpoint's row of B enters once.
// This sign is what the from-scratch recomputation confirms (see the cache
// property tests); a difference of the two terms does not.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rdsnet/dense_matrix.hpp"
#include "rdsnet/study.hpp"
#include "rdsnet/waiting_time.hpp"

namespace rdsnet {

enum class WorkspaceScope {
  full,            // H and S on every pair u < i
  coupon_support,  // only pairs with C(u,i) = 1; H and S are left empty
};

class LikelihoodWorkspace {
 public:
  /// Throws std::domain_error naming the offending (u, i) pair if a curve
  /// cannot be evaluated.
  LikelihoodWorkspace(const ObservedStudy& study, const WaitingTimeModel& model,
                      WorkspaceScope scope = WorkspaceScope::full);

  std::size_t size() const { return n_; }
  const WaitingTimeModel& model() const { return model_; }
  const DenseMatrix<double>& hazard() const { return hazard_; }
  const DenseMatrix<double>& log_survival() const { return log_survival_; }
  const DenseMatrix<double>& b() const { return b_; }
  const DenseMatrix<double>& d() const { return d_; }
  bool non_seed(std::size_t i) const { return non_seed_[i] != 0; }
  const std::vector<double>& degrees() const { return degrees_; }

 private:
  std::size_t n_;
  WaitingTimeModel model_;
  DenseMatrix<double> hazard_;
  DenseMatrix<double> log_survival_;
  DenseMatrix<double> b_;
  DenseMatrix<double> d_;
  std::vector<std::uint8_t> non_seed_;
  std::vector<double> degrees_;
};

inline LikelihoodWorkspace build_workspace(const ObservedStudy& study, const WaitingTimeModel& model,
                                           WorkspaceScope scope = WorkspaceScope::full) {
  return LikelihoodWorkspace(study, model, scope);
}

/// Event-by-event evaluation. Returns -inf when a non-seed event has no
/// positive hazard.
double log_likelihood_direct(const AdjacencyMatrix& a, const ObservedStudy& study,
                             const WaitingTimeModel& model);

double log_likelihood_matrix(const AdjacencyMatrix& a, const LikelihoodWorkspace& ws);

struct LikelihoodCache {
  std::vector<double> pendant;  // u = d - A 1
  std::vector<double> expbeta;
  std::vector<double> delta;
};

LikelihoodCache init_cache(const AdjacencyMatrix& a, const LikelihoodWorkspace& ws);

/// sum over non-seeds of log(expbeta) plus sum of delta.
double cache_log_likelihood(const LikelihoodCache& cache, const LikelihoodWorkspace& ws);

/// Change in log-likelihood if `move` were applied; O(n), no mutation.
double toggle_delta(const LikelihoodCache& cache, const LikelihoodWorkspace& ws, const ToggleMove& move);

/// Applies `move` to both the matrix and the cache. Throws std::logic_error
/// if the move does not match the matrix.
void apply_toggle(LikelihoodCache& cache, const LikelihoodWorkspace& ws, AdjacencyMatrix& a,
                  const ToggleMove& move);

/// Largest relative deviation between the cache and a recomputation from `a`.
double cache_deviation(const LikelihoodCache& cache, const LikelihoodWorkspace& ws,
                       const AdjacencyMatrix& a);

/// Prior over compatible matrices. Uniform is constant (log prior 0);
/// Bernoulli(p) contributes log(p / (1 - p)) per non-recruitment edge.
struct EdgePrior {
  enum class Kind { uniform, bernoulli } kind = Kind::uniform;
  double p = 0.5;

  static EdgePrior uniform() { return {}; }
  static EdgePrior bernoulli(double p);

  double log_prior(const AdjacencyMatrix& a, const ObservedStudy& study) const;
  double move_delta(const ToggleMove& move) const;
};

double log_posterior(const AdjacencyMatrix& a, const ObservedStudy& study, const LikelihoodWorkspace& ws,
                     const EdgePrior& prior);

}  // namespace rdsnet
