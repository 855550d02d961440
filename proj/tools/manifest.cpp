#include "manifest.hpp"

#include <array>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

namespace rdsnet::cli {

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return hex.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

std::string build_id() {
#ifdef RDSNET_BUILD_ID
  return RDSNET_BUILD_ID;
#else
  return "unknown";
#endif
}

nlohmann::json manifest_to_json(const RunManifest& m) {
  return {{"subcommand", m.subcommand}, {"argv", m.argv},           {"config", m.config},
          {"rng_seed", m.rng_seed},     {"build_id", m.build_id},   {"input_digests", m.input_digests},
          {"started", m.started},       {"finished", m.finished}};
}

RunManifest manifest_from_json(const nlohmann::json& doc) {
  RunManifest m;
  m.subcommand = doc.at("subcommand").get<std::string>();
  m.argv = doc.at("argv").get<std::vector<std::string>>();
  m.config = doc.value("config", "");
  m.rng_seed = doc.value("rng_seed", std::uint64_t{0});
  m.build_id = doc.value("build_id", "");
  m.input_digests = doc.value("input_digests", std::map<std::string, std::string>{});
  m.started = doc.value("started", "");
  m.finished = doc.value("finished", "");
  return m;
}

}  // namespace rdsnet::cli
