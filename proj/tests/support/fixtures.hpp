#pragma once

// Study builders and brute-force oracles shared by the test binaries.
// Vertex labels are 0-based here; "chain 1-2-3" in a test name is 0-1-2.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rdsnet/random.hpp"
#include "rdsnet/study.hpp"
#include "rdsnet/waiting_time.hpp"

namespace fixtures {

using namespace rdsnet;

/// Seed 0 recruits 1, 1 recruits 2, ...; times 0, 1, 2, ...; coupons derived
/// with `coupons` per subject.
ObservedStudy chain(std::vector<int> degrees, std::vector<double> times = {}, int coupons = 3);

/// General builder; coupons derived with `coupons` per subject.
ObservedStudy study(std::size_t n, const std::vector<DirectedEdge>& edges, const std::vector<std::size_t>& seeds,
                    std::vector<int> degrees, std::vector<double> times, int coupons = 3);

struct RandomStudyOptions {
  std::size_t n = 10;
  double seed_probability = 0.15;  // chance a later vertex is a seed
  int max_extra_degree = 3;        // degree = recruitment degree + U{0..max}
  int min_coupons = 1;
  int max_coupons = 3;
};

/// Random recruitment forest with exponential inter-event gaps and derived
/// coupons. Vertex 0 is always a seed.
ObservedStudy random_study(Rng& rng, const RandomStudyOptions& options);

/// A_R plus random valid additions (each attempted pair added with
/// probability `fill`).
AdjacencyMatrix random_compatible(const ObservedStudy& s, Rng& rng, double fill = 0.5);

/// Random parameters for a family, kept in a numerically tame range.
WaitingTimeModel random_model(Family family, Rng& rng);

/// Every compatible matrix, by enumeration over non-recruitment pairs.
std::vector<AdjacencyMatrix> enumerate_compatible(const ObservedStudy& s);

/// Independent pair-by-pair oracles for the move counts.
std::size_t brute_addable(const AdjacencyMatrix& a, const ObservedStudy& s);
std::size_t brute_removable(const AdjacencyMatrix& a, const ObservedStudy& s);

/// Compatibility by definition: A >= A_R entrywise and row sums <= d.
bool brute_compatible(const AdjacencyMatrix& a, const ObservedStudy& s);

double relative_gap(double x, double y);

/// Asymptotic one-sample Kolmogorov-Smirnov 1% critical value.
double ks_critical_1pct(std::size_t samples);

/// KS statistic of `samples` against `cdf`.
template <typename Cdf>
double ks_statistic(std::vector<double> samples, Cdf cdf);

}  // namespace fixtures

#include "support/fixtures_impl.hpp"
