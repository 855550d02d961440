#pragma once

// Graph and study data model: adjacency matrices, the recruitment graph,
// the observed study record, compatibility predicates and the valid-move
// counts that drive the annealer's proposal ratio.
//
// Vertices are addressed by zero-based index throughout the library; index i
// is the subject recruited in event i+1 (recruitment order). Loaders map
// arbitrary input IDs onto this order and keep the original IDs for export.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rdsnet/dense_matrix.hpp"

namespace rdsnet {

/// Input data that cannot describe a valid study (bad degrees, times, coupons).
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Unordered vertex pair, normalized so that first < second.
struct VertexPair {
  std::size_t first = 0;
  std::size_t second = 0;

  VertexPair() = default;
  VertexPair(std::size_t a, std::size_t b) : first(a < b ? a : b), second(a < b ? b : a) {}

  auto operator<=>(const VertexPair&) const = default;
};

enum class MoveKind { add, remove };

/// A single-edge toggle on an adjacency matrix.
struct ToggleMove {
  VertexPair edge;
  MoveKind kind = MoveKind::add;

  bool operator==(const ToggleMove&) const = default;
};

ToggleMove inverse(const ToggleMove& move);

/// Symmetric, binary, zero-diagonal adjacency matrix with cached row sums.
class AdjacencyMatrix {
 public:
  AdjacencyMatrix() = default;
  explicit AdjacencyMatrix(std::size_t n);

  std::size_t size() const { return n_; }
  bool has_edge(std::size_t i, std::size_t j) const { return bits_[i * n_ + j] != 0; }
  std::size_t degree(std::size_t i) const { return degree_[i]; }
  std::size_t edge_count() const { return edges_; }

  /// Sets or clears {i, j}; throws std::invalid_argument on i == j.
  void set_edge(std::size_t i, std::size_t j, bool present);
  void apply(const ToggleMove& move);

  /// Edges as normalized pairs in lexicographic order.
  std::vector<VertexPair> edges() const;

  bool operator==(const AdjacencyMatrix& other) const {
    return n_ == other.n_ && bits_ == other.bits_;
  }

  /// True when every edge of this matrix is also present in `other`.
  bool is_subgraph_of(const AdjacencyMatrix& other) const;

 private:
  std::size_t n_ = 0;
  std::size_t edges_ = 0;
  std::vector<std::uint8_t> bits_;
  std::vector<std::size_t> degree_;
};

struct DirectedEdge {
  std::size_t recruiter = 0;
  std::size_t recruitee = 0;

  auto operator<=>(const DirectedEdge&) const = default;
};

/// Who recruited whom. Seeds have no recruiter; every other subject has
/// exactly one, recruited strictly earlier.
class RecruitmentGraph {
 public:
  RecruitmentGraph() = default;

  /// Validates and builds; throws ValidationError.
  static RecruitmentGraph create(std::size_t n, std::vector<DirectedEdge> edges,
                                 const std::vector<std::size_t>& seeds);

  std::size_t size() const { return n_; }
  const std::vector<DirectedEdge>& edges() const { return edges_; }
  bool is_seed(std::size_t i) const { return recruiter_[i] == std::nullopt; }
  std::optional<std::size_t> recruiter_of(std::size_t i) const { return recruiter_[i]; }
  std::vector<std::size_t> seeds() const;

 private:
  std::size_t n_ = 0;
  std::vector<DirectedEdge> edges_;
  std::vector<std::optional<std::size_t>> recruiter_;
};

/// The observables: recruitment graph, reported degrees, recruitment times
/// and the coupon matrix (C(i,j) = 1 iff subject i holds a coupon just before
/// event j).
class ObservedStudy {
 public:
  ObservedStudy() = default;

  /// Validates every invariant; throws ValidationError naming the field.
  /// `original_ids` defaults to 1..n.
  static ObservedStudy create(RecruitmentGraph graph, std::vector<int> degrees,
                              std::vector<double> times, DenseMatrix<std::uint8_t> coupons,
                              std::vector<std::int64_t> original_ids = {});

  std::size_t size() const { return graph_.size(); }
  const RecruitmentGraph& recruitment_graph() const { return graph_; }
  const std::vector<int>& degrees() const { return degrees_; }
  const std::vector<double>& times() const { return times_; }
  const DenseMatrix<std::uint8_t>& coupons() const { return coupons_; }
  bool holds_coupon(std::size_t i, std::size_t j) const { return coupons_(i, j) != 0; }
  bool is_seed(std::size_t i) const { return graph_.is_seed(i); }
  const std::vector<std::int64_t>& original_ids() const { return original_ids_; }
  /// Undirected projection of the recruitment graph, cached.
  const AdjacencyMatrix& recruitment_adjacency() const { return recruitment_adjacency_; }

 private:
  RecruitmentGraph graph_;
  std::vector<int> degrees_;
  std::vector<double> times_;
  DenseMatrix<std::uint8_t> coupons_;
  std::vector<std::int64_t> original_ids_;
  AdjacencyMatrix recruitment_adjacency_;
};

/// Coupon matrix implied by a fixed per-subject coupon allowance and the
/// order of recruitment events.
DenseMatrix<std::uint8_t> derive_coupons(const RecruitmentGraph& graph, int per_subject_coupons);

struct CompatibilityReport {
  bool is_compatible = true;
  std::vector<VertexPair> violated_subgraph_pairs;
  std::vector<std::size_t> violated_degree_vertices;
};

AdjacencyMatrix undirected_projection(const RecruitmentGraph& graph);

/// Checks A >= A_R entrywise and A*1 <= d. Throws std::invalid_argument on a
/// dimension mismatch.
CompatibilityReport check_compatible(const AdjacencyMatrix& a, const ObservedStudy& study);

/// Number of absent pairs whose addition keeps both endpoints within their
/// reported degree.
std::size_t count_addable(const AdjacencyMatrix& a, const ObservedStudy& study);

/// Number of present edges that are not recruitment edges.
std::size_t count_removable(const AdjacencyMatrix& a, const ObservedStudy& study);

bool is_valid_move(const AdjacencyMatrix& a, const ObservedStudy& study, const ToggleMove& move);

/// Single-edge toggles turning `from` into `to` through compatible matrices:
/// removals down to the entrywise intersection, then additions.
std::vector<ToggleMove> compatible_path(const AdjacencyMatrix& from, const AdjacencyMatrix& to,
                                        const ObservedStudy& study);

}  // namespace rdsnet
