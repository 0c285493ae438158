#include <cctype>
#include <cmath>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cli/common.hpp"
#include "dasp/csv.hpp"
#include "dasp/error.hpp"

namespace dasp::cli {

ConfigBinder::ConfigBinder(CLI::App* app) : app_(app) {
  app_->add_option("--config", config_path_,
                   "JSON config (or a manifest.json from an earlier run); flags override it");
}

void ConfigBinder::apply_config(const std::string& command) {
  if (config_path_.empty()) return;
  std::ifstream in(config_path_);
  if (!in) throw UsageError("cannot open config '" + config_path_ + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("config '" + config_path_ + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw UsageError("config '" + config_path_ + "' must be a JSON object");
  if (j.value("schema", std::string{}) == "dasp.manifest.v1") {
    const std::string other = j.value("command", std::string{});
    if (other != command) {
      throw UsageError("manifest '" + config_path_ + "' is from '" + other + "', not '" + command + "'");
    }
    j = j.at("config");
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "config") continue;
    auto it = std::find_if(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.key == key; });
    if (it == entries_.end()) throw UsageError("unknown config key '" + key + "'");
    if (it->opt->count() > 0) continue;
    try {
      it->load(value);
    } catch (const json::exception& e) {
      throw UsageError("config key '" + key + "' has the wrong type: " + e.what());
    }
    from_config_.insert(key);
  }
}

json ConfigBinder::effective() const {
  json j = json::object();
  for (const auto& e : entries_) j[e.key] = e.dump();
  return j;
}

std::string ConfigBinder::source(const std::string& key) const {
  for (const auto& e : entries_) {
    if (e.key == key && e.opt->count() > 0) return "flag";
  }
  return from_config_.count(key) ? "config" : "";
}

SeedResolution resolve_seed(const ConfigBinder& binder, const std::string& key, std::uint64_t& seed) {
  if (std::string src = binder.source(key); !src.empty()) return {seed, src};
  if (const char* env = std::getenv("DASP_SEED"); env && *env) {
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (errno != 0 || *end != '\0') throw UsageError(std::string("DASP_SEED is not an integer: '") + env + "'");
    seed = v;
    return {seed, "env"};
  }
  seed = 0;
  return {seed, "default"};
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::vector<double> parse_grid(const std::string& text) {
  auto number = [&](const std::string& s) {
    try {
      return csv::to_number(s);
    } catch (const Error&) {
      throw UsageError("bad number '" + s + "' in grid '" + text + "'");
    }
  };
  if (text.find(':') == std::string::npos) {
    std::vector<double> out;
    for (const auto& s : split_list(text)) out.push_back(number(s));
    if (out.empty()) throw UsageError("empty grid");
    return out;
  }
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw UsageError("grid must be lo:hi:step, got '" + text + "'");
  const double lo = number(parts[0]);
  const double hi = number(parts[1]);
  const double step = number(parts[2]);
  if (!(step > 0.0) || hi < lo) throw UsageError("grid needs lo <= hi and step > 0: '" + text + "'");
  const long count = long(std::floor((hi - lo) / step + 0.5)) + 1;
  std::vector<double> out;
  // Rounding keeps 0:0.95:0.05 printing as 0.15 rather than 0.15000000000000002.
  for (long k = 0; k < count; ++k) out.push_back(std::min(hi, std::round((lo + double(k) * step) * 1e12) / 1e12));
  return out;
}

PriorOverrides parse_overrides(const std::vector<std::string>& pairs) {
  PriorOverrides out;
  for (const auto& pair : pairs) {
    const auto eq = pair.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--set expects key=value, got '" + pair + "'");
    try {
      out[pair.substr(0, eq)] = csv::to_number(pair.substr(eq + 1));
    } catch (const Error&) {
      throw UsageError("--set value for '" + pair.substr(0, eq) + "' is not a number");
    }
  }
  return out;
}

RegressionDataset load_dataset(const std::string& path, const std::string& response, bool header,
                               std::vector<std::string>* predictor_names) {
  const csv::Table t = csv::read(path, header);
  const Eigen::Index r = t.column(response);
  if (t.data.rows() < 2) throw UsageError("'" + path + "' needs at least 2 rows");
  if (t.data.cols() < 2) throw UsageError("'" + path + "' needs a response and at least one predictor");
  RegressionDataset d;
  d.y = t.data.col(r);
  d.x.resize(t.data.rows(), t.data.cols() - 1);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < t.data.cols(); ++j) {
    if (j == r) continue;
    d.x.col(k++) = t.data.col(j);
    if (predictor_names) predictor_names->push_back(t.columns[std::size_t(j)]);
  }
  if (!d.x.allFinite() || !d.y.allFinite()) throw UsageError("'" + path + "' contains non-finite values");
  return d;
}

Eigen::MatrixXd load_matrix(const std::string& path) { return csv::read(path, false).data; }

OmegaSpec make_omega_spec(const std::string& mode, const std::string& sigma_x_path, const std::string& omega_path,
                          bool center) {
  OmegaSpec spec;
  spec.center = center;
  if (mode == "identity") {
    spec.mode = IdentityOmega{};
  } else if (mode == "known" || mode == "true") {
    if (sigma_x_path.empty()) throw UsageError("omega mode '" + mode + "' needs --sigma-x");
    spec.mode = KnownCovariance{load_matrix(sigma_x_path)};
  } else if (mode == "direct") {
    if (sigma_x_path.empty()) throw UsageError("omega mode 'direct' needs --sigma-x");
    spec.mode = DirectCovariance{load_matrix(sigma_x_path)};
  } else if (mode == "sample") {
    spec.mode = SampleCovOmega{};
  } else if (mode == "ledoit-wolf" || mode == "lw") {
    spec.mode = LedoitWolfOmega{};
  } else if (mode == "user") {
    if (omega_path.empty()) throw UsageError("omega mode 'user' needs --omega-file");
    spec.mode = UserOmega{CorrelationMatrix::validate(load_matrix(omega_path))};
  } else {
    throw UsageError("unknown omega mode '" + mode + "'");
  }
  return spec;
}

void add_sampler_options(ConfigBinder& binder, SamplerOptions& opts) {
  binder.option("--chains", "chains", opts.chains, "Number of chains")->check(CLI::PositiveNumber);
  binder.option("--warmup", "warmup", opts.warmup, "Warmup iterations per chain")->check(CLI::PositiveNumber);
  binder.option("--draws", "draws", opts.draws, "Kept draws per chain")->check(CLI::PositiveNumber);
  binder.option("--thin", "thin", opts.thin, "Keep every thin-th draw")->check(CLI::PositiveNumber);
  binder.option("--intercept,!--no-intercept", "intercept", opts.intercept, "Fit an intercept (default on)");
}

McmcConfig make_mcmc_config(const SamplerOptions& opts, std::uint64_t seed, int jobs) {
  McmcConfig cfg;
  cfg.chains = opts.chains;
  cfg.warmup = opts.warmup;
  cfg.draws = opts.draws;
  cfg.thin = opts.thin;
  cfg.fit_intercept = opts.intercept;
  cfg.seed = seed;
  cfg.jobs = jobs;
  return cfg;
}

std::string upper(std::string s) {
  for (auto& c : s) c = char(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace dasp::cli
