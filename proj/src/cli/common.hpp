#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <set>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dasp/cov_estimation.hpp"
#include "dasp/dataset.hpp"
#include "dasp/priors.hpp"
#include "dasp/sampler.hpp"

namespace dasp::cli {

using nlohmann::json;

/// Bad flags, bad config values or unusable input files. Exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Invocation {
  std::vector<std::string> argv;
  std::ostream& out;
  std::ostream& err;
};

/// Options that may also be supplied by a --config JSON file. Precedence is
/// defaults < config file < command-line flags. The config file is either a
/// flat object keyed like `effective()`, or a run manifest, in which case its
/// "config" member is used.
class ConfigBinder {
 public:
  explicit ConfigBinder(CLI::App* app);

  template <class T>
  CLI::Option* option(const std::string& flags, const std::string& key, T& target, const std::string& help) {
    CLI::Option* opt = nullptr;
    if constexpr (std::is_same_v<T, bool>) {
      opt = app_->add_flag(flags, target, help);
    } else {
      opt = app_->add_option(flags, target, help)->capture_default_str();
    }
    entries_.push_back(Entry{key, opt, [&target](const json& j) { target = j.get<T>(); },
                             [&target] { return json(target); }});
    return opt;
  }

  /// Loads the --config file, if one was given, into every option that was
  /// not set on the command line. Throws UsageError on unknown keys or a
  /// manifest from a different command.
  void apply_config(const std::string& command);

  /// Every bound option with its resolved value.
  json effective() const;

  /// "flag", "config", or empty when the key kept its default.
  std::string source(const std::string& key) const;

  const std::string& config_path() const { return config_path_; }

 private:
  struct Entry {
    std::string key;
    CLI::Option* opt;
    std::function<void(const json&)> load;
    std::function<json()> dump;
  };
  CLI::App* app_;
  std::vector<Entry> entries_;
  std::string config_path_;
  std::set<std::string> from_config_;
};

/// Where a seed came from, for the manifest.
struct SeedResolution {
  std::uint64_t value = 0;
  std::string source;  // flag, config, env, default
};

/// The bound seed if it was supplied, else DASP_SEED, else 0.
SeedResolution resolve_seed(const ConfigBinder& binder, const std::string& key, std::uint64_t& seed);

/// Everything the manifest records about one run.
class RunRecord {
 public:
  RunRecord(std::string command, const Invocation& inv);

  void set_config(json config) { config_ = std::move(config); }
  void add_seed(const std::string& name, std::uint64_t value, const std::string& source = "");
  /// Records the SHA-256 of an input file's contents.
  void add_input(const std::string& path);
  void add_output(const std::filesystem::path& path);
  json& details() { return details_; }

  json to_json() const;

 private:
  std::string command_;
  std::vector<std::string> argv_;
  std::string started_at_;
  json config_ = json::object();
  json seeds_ = json::object();
  json inputs_ = json::object();
  json outputs_ = json::array();
  json details_ = json::object();
};

std::string sha256_file(const std::string& path);
std::string utc_timestamp();

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// never see a partial file.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Manifest for a single-file output lives next to it as <file>.manifest.json.
std::filesystem::path manifest_path_for_file(const std::filesystem::path& out);

void write_manifest(const std::filesystem::path& path, const RunRecord& record);

/// Creates `dir` if needed; refuses a path that exists as a regular file.
void ensure_directory(const std::filesystem::path& dir);

std::vector<std::string> split_list(const std::string& text);

/// "lo:hi:step" (inclusive of hi within half a step) or "a,b,c".
std::vector<double> parse_grid(const std::string& text);

/// "key=value" pairs from --set.
PriorOverrides parse_overrides(const std::vector<std::string>& pairs);

/// Reads a numeric CSV; every column except `response` is a predictor.
/// Without a header columns are named c1, c2, ...
RegressionDataset load_dataset(const std::string& path, const std::string& response, bool header,
                               std::vector<std::string>* predictor_names = nullptr);

Eigen::MatrixXd load_matrix(const std::string& path);

/// identity | known (alias true) | direct | sample | ledoit-wolf | user.
/// `known` and `direct` need a Sigma_X file; `user` needs an Omega file.
OmegaSpec make_omega_spec(const std::string& mode, const std::string& sigma_x_path,
                          const std::string& omega_path, bool center);

/// Sampler flags shared by fit, simulate and loo.
struct SamplerOptions {
  int chains = 4;
  int warmup = 1000;
  int draws = 1000;
  int thin = 1;
  bool intercept = true;
};

void add_sampler_options(ConfigBinder& binder, SamplerOptions& opts);
McmcConfig make_mcmc_config(const SamplerOptions& opts, std::uint64_t seed, int jobs);

std::string upper(std::string s);

}  // namespace dasp::cli
