#include "rdsnet/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace rdsnet {

using nlohmann::json;

namespace {

template <typename T>
T get_field(const json& doc, const char* field) {
  if (!doc.contains(field)) throw ValidationError(field, "missing");
  try {
    return doc.at(field).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(field, e.what());
  }
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::string quote(std::int64_t id) { return "\"" + std::to_string(id) + "\""; }

void dot_vertices(std::ostream& out, const ObservedStudy& study) {
  for (std::size_t i = 0; i < study.size(); ++i) {
    out << "  " << quote(study.original_ids()[i]);
    if (study.is_seed(i)) out << " [shape=box]";
    out << ";\n";
  }
}

bool is_recruitment_pair(const ObservedStudy& study, std::size_t i, std::size_t j) {
  return study.recruitment_adjacency().has_edge(i, j);
}

void dot_recruitment_arrows(std::ostream& out, const ObservedStudy& study, const char* attrs) {
  const auto& ids = study.original_ids();
  for (const auto& e : study.recruitment_graph().edges())
    out << "  " << quote(ids[e.recruiter]) << " -> " << quote(ids[e.recruitee]) << " [" << attrs << "];\n";
}

}  // namespace

ObservedStudy study_from_json(const json& doc, std::vector<std::string>* warnings) {
  if (!doc.is_object()) throw ValidationError("study", "expected a JSON object");
  const auto n = get_field<std::size_t>(doc, "n");
  auto times = get_field<std::vector<double>>(doc, "times");
  auto degrees = get_field<std::vector<int>>(doc, "degrees");
  const auto seeds = get_field<std::vector<std::int64_t>>(doc, "seeds");
  const auto edges = get_field<std::vector<std::array<std::int64_t, 2>>>(doc, "recruitment_edges");
  std::vector<std::int64_t> ids;
  if (doc.contains("ids")) {
    ids = get_field<std::vector<std::int64_t>>(doc, "ids");
  } else {
    ids.resize(n);
    std::iota(ids.begin(), ids.end(), std::int64_t{1});
  }
  if (times.size() != n) throw ValidationError("times", "expected " + std::to_string(n) + " entries");
  if (degrees.size() != n) throw ValidationError("degrees", "expected " + std::to_string(n) + " entries");
  if (ids.size() != n) throw ValidationError("ids", "expected " + std::to_string(n) + " entries");
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(times[i])) throw ValidationError("times", "entry " + std::to_string(i) + " is not finite");

  std::unordered_map<std::int64_t, std::size_t> file_index;
  for (std::size_t i = 0; i < n; ++i)
    if (!file_index.emplace(ids[i], i).second)
      throw ValidationError("ids", "duplicate id " + std::to_string(ids[i]));
  auto lookup = [&](std::int64_t id, const char* field) {
    auto it = file_index.find(id);
    if (it == file_index.end()) throw ValidationError(field, "unknown id " + std::to_string(id));
    return it->second;
  };

  // Relabel by time; stable so file order decides ties.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return times[a] < times[b]; });
  std::vector<std::size_t> label(n);
  for (std::size_t k = 0; k < n; ++k) label[order[k]] = k;

  std::vector<double> new_times(n);
  std::vector<int> new_degrees(n);
  std::vector<std::int64_t> new_ids(n);
  std::size_t tie_rank = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t f = order[k];
    new_degrees[k] = degrees[f];
    new_ids[k] = ids[f];
    if (k > 0 && times[f] == times[order[k - 1]]) {
      ++tie_rank;
      new_times[k] = times[f] + static_cast<double>(tie_rank) * kTieEpsilon;
      if (warnings)
        warnings->push_back("tied time for id " + std::to_string(ids[f]) + " shifted by " +
                            std::to_string(tie_rank) + "e-9");
    } else {
      tie_rank = 0;
      new_times[k] = times[f];
    }
  }

  std::vector<std::size_t> seed_labels;
  for (auto s : seeds) seed_labels.push_back(label[lookup(s, "seeds")]);
  std::vector<DirectedEdge> rec;
  for (const auto& e : edges)
    rec.push_back(DirectedEdge{label[lookup(e[0], "recruitment_edges")], label[lookup(e[1], "recruitment_edges")]});
  RecruitmentGraph graph = RecruitmentGraph::create(n, std::move(rec), std::move(seed_labels));

  if (!doc.contains("coupons")) throw ValidationError("coupons", "missing");
  const json& cj = doc.at("coupons");
  DenseMatrix<std::uint8_t> coupons;
  if (cj.is_object()) {
    if (!cj.value("derive", false)) throw ValidationError("coupons", "object form requires \"derive\": true");
    if (!cj.contains("per_subject_coupons") || !cj.at("per_subject_coupons").is_number_integer())
      throw ValidationError("coupons.per_subject_coupons", "expected an integer");
    const int c = cj.at("per_subject_coupons").get<int>();
    if (c < 0) throw ValidationError("coupons.per_subject_coupons", "must be nonnegative");
    coupons = derive_coupons(graph, c);
  } else if (cj.is_array()) {
    if (cj.size() != n) throw ValidationError("coupons", "expected " + std::to_string(n) + " rows");
    coupons = DenseMatrix<std::uint8_t>(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      const json& row = cj[r];
      if (!row.is_array() || row.size() != n)
        throw ValidationError("coupons", "row " + std::to_string(r) + " must have " + std::to_string(n) + " entries");
      for (std::size_t c = 0; c < n; ++c) {
        if (!row[c].is_number_integer()) throw ValidationError("coupons", "entries must be 0 or 1");
        const auto v = row[c].get<int>();
        if (v != 0 && v != 1) throw ValidationError("coupons", "entries must be 0 or 1");
        coupons(label[r], label[c]) = static_cast<std::uint8_t>(v);
      }
    }
  } else {
    throw ValidationError("coupons", "expected a matrix or a derive object");
  }
  return ObservedStudy::create(std::move(graph), std::move(new_degrees), std::move(new_times), std::move(coupons),
                               std::move(new_ids));
}

json study_to_json(const ObservedStudy& study) {
  const auto& ids = study.original_ids();
  json doc;
  doc["n"] = study.size();
  doc["ids"] = ids;
  std::vector<std::int64_t> seeds;
  for (auto s : study.recruitment_graph().seeds()) seeds.push_back(ids[s]);
  doc["seeds"] = seeds;
  doc["times"] = study.times();
  doc["degrees"] = study.degrees();
  json edges = json::array();
  for (const auto& e : study.recruitment_graph().edges()) edges.push_back({ids[e.recruiter], ids[e.recruitee]});
  doc["recruitment_edges"] = std::move(edges);
  json rows = json::array();
  for (std::size_t i = 0; i < study.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < study.size(); ++j) row.push_back(static_cast<int>(study.coupons()(i, j)));
    rows.push_back(std::move(row));
  }
  doc["coupons"] = std::move(rows);
  return doc;
}

ObservedStudy load_study(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  auto in = open_input(path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string(), e.what());
  }
  return study_from_json(doc, warnings);
}

void save_study(const std::filesystem::path& path, const ObservedStudy& study) {
  auto out = open_output(path);
  out << study_to_json(study).dump() << '\n';
}

std::vector<IdPair> read_edge_list(std::istream& in) {
  std::vector<IdPair> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a)) continue;
    const std::string where = "line " + std::to_string(lineno);
    if (!(fields >> b) || (fields >> extra)) throw ValidationError(where, "expected two vertex ids");
    try {
      std::size_t pa = 0, pb = 0;
      const auto u = std::stoll(a, &pa);
      const auto v = std::stoll(b, &pb);
      if (pa != a.size() || pb != b.size()) throw std::invalid_argument("trailing characters");
      edges.emplace_back(u, v);
    } catch (const std::logic_error&) {
      throw ValidationError(where, "vertex ids must be integers");
    }
  }
  return edges;
}

std::vector<IdPair> read_edge_list(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_edge_list(in);
}

PopulationGraph population_from_edges(const std::vector<IdPair>& edges) {
  std::vector<std::int64_t> ids;
  for (const auto& [u, v] : edges) {
    ids.push_back(u);
    ids.push_back(v);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::unordered_map<std::int64_t, std::size_t> index;
  for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], i);
  PopulationGraph g(ids);
  for (const auto& [u, v] : edges) g.add_edge(index.at(u), index.at(v));
  g.finalize();
  return g;
}

AdjacencyMatrix adjacency_from_edges(const std::vector<IdPair>& edges, const ObservedStudy& study) {
  std::unordered_map<std::int64_t, std::size_t> index;
  for (std::size_t i = 0; i < study.size(); ++i) index.emplace(study.original_ids()[i], i);
  AdjacencyMatrix a(study.size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto [u, v] = edges[k];
    auto iu = index.find(u);
    auto iv = index.find(v);
    const std::string where = "edge " + std::to_string(k + 1);
    if (iu == index.end() || iv == index.end())
      throw ValidationError(where, "id not in study: " + std::to_string(iu == index.end() ? u : v));
    if (iu->second == iv->second) throw ValidationError(where, "self-loop on " + std::to_string(u));
    a.set_edge(iu->second, iv->second, true);
  }
  return a;
}

std::vector<IdPair> edges_to_ids(const AdjacencyMatrix& a, const ObservedStudy& study) {
  std::vector<IdPair> out;
  for (const auto& e : a.edges()) out.emplace_back(study.original_ids()[e.first], study.original_ids()[e.second]);
  return out;
}

void write_edge_list(std::ostream& out, const AdjacencyMatrix& a, const ObservedStudy& study) {
  out << "# u\tv\n";
  for (const auto& [u, v] : edges_to_ids(a, study)) out << u << '\t' << v << '\n';
}

void write_event_log(std::ostream& out, const SimResult& sim) {
  const auto& ids = sim.observed.original_ids();
  out << "time,recruiter,recruitee\n" << std::setprecision(17);
  for (const auto& e : sim.event_log) {
    out << e.time << ',';
    if (e.recruiter) out << ids[*e.recruiter];
    out << ',' << ids[e.recruitee] << '\n';
  }
}

void write_trace(std::ostream& out, const std::vector<TraceRow>& trace) {
  out << "iter,gamma,logpost,accepted\n" << std::setprecision(17);
  for (const auto& r : trace) out << r.iter << ',' << r.gamma << ',' << r.logpost << ',' << (r.accepted ? 1 : 0) << '\n';
}

json theta_to_json(const WaitingTimeModel& model) {
  json doc;
  doc["family"] = std::string(family_name(model.family()));
  const auto names = parameter_names(model.family());
  for (std::size_t k = 0; k < names.size(); ++k) doc[names[k]] = model.params()[k];
  return doc;
}

WaitingTimeModel theta_from_json(const json& doc) {
  const auto family = parse_family(get_field<std::string>(doc, "family"));
  std::vector<double> params;
  for (const auto& name : parameter_names(family)) params.push_back(get_field<double>(doc, name.c_str()));
  return WaitingTimeModel::create(family, params);
}

void write_dot_subgraph(std::ostream& out, const AdjacencyMatrix& a, const ObservedStudy& study,
                        const std::string& name) {
  out << "graph " << name << " {\n";
  dot_vertices(out, study);
  for (const auto& [u, v] : edges_to_ids(a, study)) out << "  " << quote(u) << " -- " << quote(v) << ";\n";
  out << "}\n";
}

void write_dot_recruitment(std::ostream& out, const ObservedStudy& study) {
  out << "digraph recruitment {\n";
  dot_vertices(out, study);
  dot_recruitment_arrows(out, study, "style=solid");
  out << "}\n";
}

void write_dot_estimate(std::ostream& out, const AdjacencyMatrix& estimate, const ObservedStudy& study) {
  const auto& ids = study.original_ids();
  out << "digraph estimate {\n";
  dot_vertices(out, study);
  dot_recruitment_arrows(out, study, "color=blue");
  for (const auto& e : estimate.edges()) {
    if (is_recruitment_pair(study, e.first, e.second)) continue;
    out << "  " << quote(ids[e.first]) << " -> " << quote(ids[e.second])
        << " [dir=none, color=gray, style=dashed];\n";
  }
  out << "}\n";
}

void write_dot_overlay(std::ostream& out, const AdjacencyMatrix& estimate, const AdjacencyMatrix& truth,
                       const ObservedStudy& study) {
  const auto& ids = study.original_ids();
  out << "digraph overlay {\n";
  dot_vertices(out, study);
  dot_recruitment_arrows(out, study, "color=blue");
  for (std::size_t i = 0; i < study.size(); ++i) {
    for (std::size_t j = i + 1; j < study.size(); ++j) {
      if (is_recruitment_pair(study, i, j)) continue;
      const bool est = estimate.has_edge(i, j);
      const bool tru = truth.has_edge(i, j);
      if (!est && !tru) continue;
      const char* attrs = est && tru ? "color=darkgreen" : (tru ? "color=lightgray" : "color=red, style=dashed");
      out << "  " << quote(ids[i]) << " -> " << quote(ids[j]) << " [dir=none, " << attrs << "];\n";
    }
  }
  out << "}\n";
}

}  // namespace rdsnet
