#pragma once

// File formats: observed-study JSON, TSV edge lists, CSV logs, DOT exports.

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rdsnet/annealer.hpp"
#include "rdsnet/population.hpp"
#include "rdsnet/rds_sim.hpp"
#include "rdsnet/study.hpp"
#include "rdsnet/waiting_time.hpp"

namespace rdsnet {

using IdPair = std::pair<std::int64_t, std::int64_t>;

/// Subjects may carry arbitrary integer "ids"; seeds and recruitment_edges
/// refer to them. Without "ids" the subjects are 1..n in file order.
/// Subjects are relabeled by recruitment time; exact ties are separated by
/// k * kTieEpsilon (k = rank within the tie) and reported in `warnings`.
/// Throws ValidationError naming the offending field.
ObservedStudy study_from_json(const nlohmann::json& doc, std::vector<std::string>* warnings = nullptr);
nlohmann::json study_to_json(const ObservedStudy& study);

ObservedStudy load_study(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);
void save_study(const std::filesystem::path& path, const ObservedStudy& study);

/// "u<TAB>v" per line (any whitespace accepted), '#' starts a comment.
/// Errors are ValidationError with field "line N".
std::vector<IdPair> read_edge_list(std::istream& in);
std::vector<IdPair> read_edge_list(const std::filesystem::path& path);

/// Population graph from an edge list; vertices keep the file's IDs, indexed
/// in ascending ID order. Self-loops and duplicate edges are dropped.
PopulationGraph population_from_edges(const std::vector<IdPair>& edges);

/// Maps an edge list in original-ID space onto the study's labels.
AdjacencyMatrix adjacency_from_edges(const std::vector<IdPair>& edges, const ObservedStudy& study);
std::vector<IdPair> edges_to_ids(const AdjacencyMatrix& a, const ObservedStudy& study);
void write_edge_list(std::ostream& out, const AdjacencyMatrix& a, const ObservedStudy& study);

void write_event_log(std::ostream& out, const SimResult& sim);
void write_trace(std::ostream& out, const std::vector<TraceRow>& trace);

nlohmann::json theta_to_json(const WaitingTimeModel& model);
WaitingTimeModel theta_from_json(const nlohmann::json& doc);

/// DOT renderings keyed by original IDs.
void write_dot_subgraph(std::ostream& out, const AdjacencyMatrix& a, const ObservedStudy& study,
                        const std::string& name);
void write_dot_recruitment(std::ostream& out, const ObservedStudy& study);
/// Recruitment edges as blue arrows, inferred edges gray dashed.
void write_dot_estimate(std::ostream& out, const AdjacencyMatrix& estimate, const ObservedStudy& study);
/// Estimate against truth: recruitment edges blue arrows, recovered edges
/// green, missed edges light gray, false positives red dashed.
void write_dot_overlay(std::ostream& out, const AdjacencyMatrix& estimate, const AdjacencyMatrix& truth,
                       const ObservedStudy& study);

}  // namespace rdsnet
