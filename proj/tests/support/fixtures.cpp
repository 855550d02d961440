#include "support/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace fixtures {

ObservedStudy study(std::size_t n, const std::vector<DirectedEdge>& edges, const std::vector<std::size_t>& seeds,
                    std::vector<int> degrees, std::vector<double> times, int coupons) {
  auto graph = RecruitmentGraph::create(n, edges, seeds);
  auto c = derive_coupons(graph, coupons);
  return ObservedStudy::create(std::move(graph), std::move(degrees), std::move(times), std::move(c));
}

ObservedStudy chain(std::vector<int> degrees, std::vector<double> times, int coupons) {
  const std::size_t n = degrees.size();
  if (times.empty()) {
    times.resize(n);
    std::iota(times.begin(), times.end(), 0.0);
  }
  std::vector<DirectedEdge> edges;
  for (std::size_t i = 1; i < n; ++i) edges.push_back({i - 1, i});
  return study(n, edges, {0}, std::move(degrees), std::move(times), coupons);
}

ObservedStudy random_study(Rng& rng, const RandomStudyOptions& o) {
  const std::size_t n = o.n;
  std::vector<DirectedEdge> edges;
  std::vector<std::size_t> seeds{0};
  std::vector<int> rec_degree(n, 0);
  std::vector<int> coupons_left(n, 0);
  std::vector<int> allowance(n, 0);
  std::uniform_int_distribution<int> coupon_draw(o.min_coupons, o.max_coupons);
  for (std::size_t i = 0; i < n; ++i) allowance[i] = coupon_draw(rng);
  coupons_left[0] = allowance[0];
  for (std::size_t i = 1; i < n; ++i) {
    std::vector<std::size_t> holders;
    for (std::size_t u = 0; u < i; ++u)
      if (coupons_left[u] > 0) holders.push_back(u);
    if (holders.empty() || uniform_open(rng) < o.seed_probability) {
      seeds.push_back(i);
    } else {
      const std::size_t u = holders[uniform_index(rng, holders.size())];
      edges.push_back({u, i});
      --coupons_left[u];
      ++rec_degree[u];
      ++rec_degree[i];
    }
    coupons_left[i] = allowance[i];
  }
  std::vector<double> times(n);
  double t = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    times[i] = t;
    t += 0.05 - std::log(uniform_open(rng));
  }
  std::vector<int> degrees(n);
  for (std::size_t i = 0; i < n; ++i)
    degrees[i] = rec_degree[i] + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(o.max_extra_degree) + 1));
  auto graph = RecruitmentGraph::create(n, edges, seeds);
  // Coupons follow the per-subject allowances drawn above.
  DenseMatrix<std::uint8_t> c(n, n);
  std::vector<int> held(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < j; ++i) c(i, j) = held[i] > 0 ? 1 : 0;
    if (auto r = graph.recruiter_of(j)) --held[*r];
    held[j] = allowance[j];
  }
  return ObservedStudy::create(std::move(graph), std::move(degrees), std::move(times), std::move(c));
}

AdjacencyMatrix random_compatible(const ObservedStudy& s, Rng& rng, double fill) {
  AdjacencyMatrix a = s.recruitment_adjacency();
  const std::size_t n = s.size();
  std::vector<VertexPair> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  std::shuffle(pairs.begin(), pairs.end(), rng);
  for (const auto& p : pairs) {
    if (a.has_edge(p.first, p.second)) continue;
    if (static_cast<int>(a.degree(p.first)) >= s.degrees()[p.first]) continue;
    if (static_cast<int>(a.degree(p.second)) >= s.degrees()[p.second]) continue;
    if (uniform_open(rng) < fill) a.set_edge(p.first, p.second, true);
  }
  return a;
}

WaitingTimeModel random_model(Family family, Rng& rng) {
  auto in = [&](double lo, double hi) { return lo + (hi - lo) * uniform_open(rng); };
  switch (family) {
    case Family::exponential: return WaitingTimeModel::exponential(in(0.3, 3.0));
    case Family::gamma: return WaitingTimeModel::gamma(in(0.3, 3.0), in(0.3, 3.0));
    case Family::power_law: return WaitingTimeModel::power_law(in(1.2, 3.5), in(0.01, 0.05));
  }
  return WaitingTimeModel::exponential(1.0);
}

std::vector<AdjacencyMatrix> enumerate_compatible(const ObservedStudy& s) {
  const std::size_t n = s.size();
  const AdjacencyMatrix& ar = s.recruitment_adjacency();
  std::vector<VertexPair> free_pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!ar.has_edge(i, j)) free_pairs.emplace_back(i, j);
  std::vector<AdjacencyMatrix> out;
  const std::uint64_t limit = std::uint64_t{1} << free_pairs.size();
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    AdjacencyMatrix a = ar;
    for (std::size_t k = 0; k < free_pairs.size(); ++k)
      if (mask >> k & 1U) a.set_edge(free_pairs[k].first, free_pairs[k].second, true);
    if (brute_compatible(a, s)) out.push_back(std::move(a));
  }
  return out;
}

namespace {
int row_sum(const AdjacencyMatrix& a, std::size_t i) {
  int total = 0;
  for (std::size_t k = 0; k < a.size(); ++k) total += a.has_edge(i, k) ? 1 : 0;
  return total;
}
}  // namespace

std::size_t brute_addable(const AdjacencyMatrix& a, const ObservedStudy& s) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (!a.has_edge(i, j) && row_sum(a, i) < s.degrees()[i] && row_sum(a, j) < s.degrees()[j]) ++count;
  return count;
}

std::size_t brute_removable(const AdjacencyMatrix& a, const ObservedStudy& s) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (a.has_edge(i, j) && !s.recruitment_adjacency().has_edge(i, j)) ++count;
  return count;
}

bool brute_compatible(const AdjacencyMatrix& a, const ObservedStudy& s) {
  for (const auto& e : s.recruitment_graph().edges())
    if (!a.has_edge(e.recruiter, e.recruitee)) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (row_sum(a, i) > s.degrees()[i]) return false;
  return true;
}

double relative_gap(double x, double y) { return std::abs(x - y) / (1.0 + std::abs(x)); }

double ks_critical_1pct(std::size_t samples) { return 1.6276 / std::sqrt(static_cast<double>(samples)); }

}  // namespace fixtures
