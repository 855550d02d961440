#include "rdsnet/study.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rdsnet {

ToggleMove inverse(const ToggleMove& move) {
  return {move.edge, move.kind == MoveKind::add ? MoveKind::remove : MoveKind::add};
}

AdjacencyMatrix::AdjacencyMatrix(std::size_t n) : n_(n), bits_(n * n, 0), degree_(n, 0) {}

void AdjacencyMatrix::set_edge(std::size_t i, std::size_t j, bool present) {
  if (i == j) throw std::invalid_argument("AdjacencyMatrix: self-loops are not allowed");
  if (i >= n_ || j >= n_) throw std::out_of_range("AdjacencyMatrix: vertex index out of range");
  const bool current = has_edge(i, j);
  if (current == present) return;
  const std::uint8_t v = present ? 1 : 0;
  bits_[i * n_ + j] = v;
  bits_[j * n_ + i] = v;
  if (present) {
    ++degree_[i];
    ++degree_[j];
    ++edges_;
  } else {
    --degree_[i];
    --degree_[j];
    --edges_;
  }
}

void AdjacencyMatrix::apply(const ToggleMove& move) {
  const bool present = has_edge(move.edge.first, move.edge.second);
  if (present != (move.kind == MoveKind::remove))
    throw std::logic_error("AdjacencyMatrix::apply: toggle does not match current entry");
  set_edge(move.edge.first, move.edge.second, move.kind == MoveKind::add);
}

std::vector<VertexPair> AdjacencyMatrix::edges() const {
  std::vector<VertexPair> out;
  out.reserve(edges_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (has_edge(i, j)) out.emplace_back(i, j);
  return out;
}

bool AdjacencyMatrix::is_subgraph_of(const AdjacencyMatrix& other) const {
  if (n_ != other.n_) return false;
  for (std::size_t k = 0; k < bits_.size(); ++k)
    if (bits_[k] && !other.bits_[k]) return false;
  return true;
}

RecruitmentGraph RecruitmentGraph::create(std::size_t n, std::vector<DirectedEdge> edges,
                                          const std::vector<std::size_t>& seeds) {
  RecruitmentGraph g;
  g.n_ = n;
  g.recruiter_.assign(n, std::nullopt);
  std::vector<bool> seed(n, false);
  for (std::size_t s : seeds) {
    if (s >= n) throw ValidationError("seeds", "seed label " + std::to_string(s + 1) + " out of range");
    seed[s] = true;
  }
  for (const auto& e : edges) {
    const std::string where = "edge (" + std::to_string(e.recruiter + 1) + ", " +
                              std::to_string(e.recruitee + 1) + ")";
    if (e.recruiter >= n || e.recruitee >= n)
      throw ValidationError("recruitment_edges", where + " references an unknown subject");
    if (e.recruiter == e.recruitee)
      throw ValidationError("recruitment_edges", where + " is a self-recruitment");
    if (seed[e.recruitee])
      throw ValidationError("recruitment_edges", where + " recruits a seed");
    if (g.recruiter_[e.recruitee])
      throw ValidationError("recruitment_edges", where + " gives a second recruiter to a subject");
    if (e.recruiter > e.recruitee)
      throw ValidationError("recruitment_edges", where + " has a recruiter who entered after the recruitee");
    g.recruiter_[e.recruitee] = e.recruiter;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!seed[i] && !g.recruiter_[i])
      throw ValidationError("seeds", "subject " + std::to_string(i + 1) +
                                         " is neither a seed nor recruited by anyone");
  std::sort(edges.begin(), edges.end(),
            [](const DirectedEdge& a, const DirectedEdge& b) { return a.recruitee < b.recruitee; });
  g.edges_ = std::move(edges);
  return g;
}

std::vector<std::size_t> RecruitmentGraph::seeds() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n_; ++i)
    if (is_seed(i)) out.push_back(i);
  return out;
}

AdjacencyMatrix undirected_projection(const RecruitmentGraph& graph) {
  AdjacencyMatrix a(graph.size());
  for (const auto& e : graph.edges()) a.set_edge(e.recruiter, e.recruitee, true);
  return a;
}

ObservedStudy ObservedStudy::create(RecruitmentGraph graph, std::vector<int> degrees,
                                    std::vector<double> times, DenseMatrix<std::uint8_t> coupons,
                                    std::vector<std::int64_t> original_ids) {
  const std::size_t n = graph.size();
  if (degrees.size() != n)
    throw ValidationError("degrees", "expected " + std::to_string(n) + " entries, got " +
                                         std::to_string(degrees.size()));
  if (times.size() != n)
    throw ValidationError("times", "expected " + std::to_string(n) + " entries, got " +
                                       std::to_string(times.size()));
  if (coupons.rows() != n || coupons.cols() != n)
    throw ValidationError("coupons", "expected a " + std::to_string(n) + "x" + std::to_string(n) +
                                         " matrix");
  if (original_ids.empty()) {
    original_ids.resize(n);
    std::iota(original_ids.begin(), original_ids.end(), std::int64_t{1});
  } else if (original_ids.size() != n) {
    throw ValidationError("ids", "expected " + std::to_string(n) + " entries");
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(times[i]))
      throw ValidationError("times", "entry " + std::to_string(i + 1) + " is not finite");
    if (i > 0 && !(times[i] > times[i - 1]))
      throw ValidationError("times", "not strictly increasing at subject " + std::to_string(i + 1));
  }

  AdjacencyMatrix projection = undirected_projection(graph);
  for (std::size_t i = 0; i < n; ++i) {
    if (degrees[i] < 0 || static_cast<std::size_t>(degrees[i]) < projection.degree(i))
      throw ValidationError("degrees", "subject " + std::to_string(i + 1) + " reports degree " +
                                           std::to_string(degrees[i]) + " but took part in " +
                                           std::to_string(projection.degree(i)) +
                                           " recruitments");
  }

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      if (coupons(i, j) != 0)
        throw ValidationError("coupons", "entry (" + std::to_string(i + 1) + ", " +
                                             std::to_string(j + 1) +
                                             ") is set but the subject had not entered yet");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (coupons(i, j) > 1)
        throw ValidationError("coupons", "entries must be 0 or 1");
  for (const auto& e : graph.edges())
    if (coupons(e.recruiter, e.recruitee) == 0)
      throw ValidationError("coupons", "recruiter " + std::to_string(e.recruiter + 1) +
                                           " holds no coupon before recruiting " +
                                           std::to_string(e.recruitee + 1));

  ObservedStudy s;
  s.graph_ = std::move(graph);
  s.degrees_ = std::move(degrees);
  s.times_ = std::move(times);
  s.coupons_ = std::move(coupons);
  s.original_ids_ = std::move(original_ids);
  s.recruitment_adjacency_ = std::move(projection);
  return s;
}

DenseMatrix<std::uint8_t> derive_coupons(const RecruitmentGraph& graph, int per_subject_coupons) {
  if (per_subject_coupons < 1)
    throw ValidationError("coupons.per_subject_coupons", "must be a positive integer");
  const std::size_t n = graph.size();
  std::vector<int> remaining(n, per_subject_coupons);
  DenseMatrix<std::uint8_t> c(n, n, 0);
  // Column j is the coupon state just before event j; the recruitment that
  // event j represents is charged afterwards.
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < j; ++i) c(i, j) = remaining[i] > 0 ? 1 : 0;
    if (auto r = graph.recruiter_of(j)) {
      if (remaining[*r] <= 0)
        throw ValidationError("coupons", "subject " + std::to_string(*r + 1) +
                                             " recruits more subjects than it has coupons");
      --remaining[*r];
    }
  }
  return c;
}

CompatibilityReport check_compatible(const AdjacencyMatrix& a, const ObservedStudy& study) {
  if (a.size() != study.size())
    throw std::invalid_argument("check_compatible: matrix has " + std::to_string(a.size()) +
                                " vertices, study has " + std::to_string(study.size()));
  CompatibilityReport report;
  const auto& ar = study.recruitment_adjacency();
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (ar.has_edge(i, j) && !a.has_edge(i, j)) report.violated_subgraph_pairs.emplace_back(i, j);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.degree(i) > static_cast<std::size_t>(study.degrees()[i]))
      report.violated_degree_vertices.push_back(i);
  report.is_compatible =
      report.violated_subgraph_pairs.empty() && report.violated_degree_vertices.empty();
  return report;
}

std::size_t count_addable(const AdjacencyMatrix& a, const ObservedStudy& study) {
  const auto& d = study.degrees();
  std::size_t count = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.degree(i) >= static_cast<std::size_t>(d[i])) continue;
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (!a.has_edge(i, j) && a.degree(j) < static_cast<std::size_t>(d[j])) ++count;
  }
  return count;
}

std::size_t count_removable(const AdjacencyMatrix& a, const ObservedStudy& study) {
  const auto& ar = study.recruitment_adjacency();
  std::size_t count = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (a.has_edge(i, j) && !ar.has_edge(i, j)) ++count;
  return count;
}

bool is_valid_move(const AdjacencyMatrix& a, const ObservedStudy& study, const ToggleMove& move) {
  const auto [i, j] = move.edge;
  if (i == j || j >= a.size()) return false;
  if (move.kind == MoveKind::add) {
    const auto& d = study.degrees();
    return !a.has_edge(i, j) && a.degree(i) < static_cast<std::size_t>(d[i]) &&
           a.degree(j) < static_cast<std::size_t>(d[j]);
  }
  return a.has_edge(i, j) && !study.recruitment_adjacency().has_edge(i, j);
}

std::vector<ToggleMove> compatible_path(const AdjacencyMatrix& from, const AdjacencyMatrix& to,
                                        const ObservedStudy& study) {
  if (from.size() != study.size() || to.size() != study.size())
    throw std::invalid_argument("compatible_path: dimension mismatch");
  std::vector<ToggleMove> path;
  for (const auto& e : from.edges())
    if (!to.has_edge(e.first, e.second)) path.push_back({e, MoveKind::remove});
  for (const auto& e : to.edges())
    if (!from.has_edge(e.first, e.second)) path.push_back({e, MoveKind::add});
  return path;
}

}  // namespace rdsnet
