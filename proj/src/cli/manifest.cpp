#include <unistd.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <memory>

#include <openssl/evp.h>

#include "cli/common.hpp"
#include "dasp/error.hpp"

#ifndef DASP_VERSION
#define DASP_VERSION "unknown"
#endif

namespace dasp::cli {

namespace fs = std::filesystem;

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "' for hashing");

  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::Io, "SHA-256 initialisation failed");
  }
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, std::size_t(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);

  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + tmp.string() + "'");
    out.write(content.data(), std::streamsize(content.size()));
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw Error(ErrorKind::Io, "write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorKind::Io, "cannot move output into place at '" + path.string() + "': " + ec.message());
  }
}

fs::path manifest_path_for_file(const fs::path& out) {
  fs::path m = out;
  m += ".manifest.json";
  return m;
}

void ensure_directory(const fs::path& dir) {
  if (fs::exists(dir) && !fs::is_directory(dir)) {
    throw UsageError("output '" + dir.string() + "' exists and is not a directory");
  }
  fs::create_directories(dir);
}

RunRecord::RunRecord(std::string command, const Invocation& inv)
    : command_(std::move(command)), argv_(inv.argv), started_at_(utc_timestamp()) {}

void RunRecord::add_seed(const std::string& name, std::uint64_t value, const std::string& source) {
  seeds_[name] = value;
  if (!source.empty()) seeds_[name + "_source"] = source;
}

void RunRecord::add_input(const std::string& path) {
  if (path.empty() || inputs_.contains(path)) return;
  inputs_[path] = {{"sha256", sha256_file(path)}, {"bytes", fs::file_size(path)}};
}

void RunRecord::add_output(const fs::path& path) { outputs_.push_back(path.filename().string()); }

json RunRecord::to_json() const {
  return {{"schema", "dasp.manifest.v1"},
          {"tool", "dasp"},
          {"version", DASP_VERSION},
          {"command", command_},
          {"argv", argv_},
          {"config", config_},
          {"seeds", seeds_},
          {"inputs", inputs_},
          {"outputs", outputs_},
          {"details", details_},
          {"started_at", started_at_},
          {"finished_at", utc_timestamp()}};
}

void write_manifest(const fs::path& path, const RunRecord& record) {
  write_atomic(path, record.to_json().dump(2) + "\n");
}

}  // namespace dasp::cli
