#pragma once

#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli/common.hpp"

namespace dasp::cli {

/// A leaf subcommand and the action to run once it has been parsed.
struct Command {
  CLI::App* app = nullptr;
  std::function<void(const Invocation&)> run;
};

using Registry = std::vector<Command>;

void add_omega_commands(CLI::App& root, Registry& registry);
void add_analyze_commands(CLI::App& root, Registry& registry);
void add_fit_command(CLI::App& root, Registry& registry);
void add_simulate_command(CLI::App& root, Registry& registry);
void add_loo_commands(CLI::App& root, Registry& registry);
void add_report_command(CLI::App& root, Registry& registry);

/// LOO comparison table (CSV text) for a file written by `dasp loo`; also
/// prints one line per model to `text` when given.
std::string loo_comparison_csv(const std::string& loo_path, std::ostream* text);

/// Seed of stream `stream` under a master seed, for per-task seeding.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace dasp::cli
