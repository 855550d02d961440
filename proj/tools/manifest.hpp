#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace rdsnet::cli {

struct RunManifest {
  std::string subcommand;
  std::vector<std::string> argv;  // replayable invocation, seed included
  std::string config;             // every option of the subcommand, defaults materialized
  std::uint64_t rng_seed = 0;
  std::string build_id;
  std::map<std::string, std::string> input_digests;  // absolute path -> SHA-256 hex
  std::string started;
  std::string finished;
};

std::string sha256_file(const std::filesystem::path& path);
/// UTC, ISO 8601, seconds resolution.
std::string utc_timestamp();
std::string build_id();

nlohmann::json manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& doc);

}  // namespace rdsnet::cli
