#include "dasp/cli.hpp"

#include <filesystem>
#include <iostream>

#include "cli/commands.hpp"
#include "dasp/error.hpp"
#include "dasp/rng.hpp"

#ifndef DASP_VERSION
#define DASP_VERSION "unknown"
#endif

namespace dasp::cli {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) { return Rng(master, stream).engine()(); }

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dependency-aware shrinkage priors for high-dimensional linear regression", "dasp"};
  app.set_version_flag("--version", DASP_VERSION);
  app.require_subcommand(1);
  app.fallthrough(false);

  Registry registry;
  add_omega_commands(app, registry);
  add_analyze_commands(app, registry);
  add_fit_command(app, registry);
  add_simulate_command(app, registry);
  add_loo_commands(app, registry);
  add_report_command(app, registry);

  std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << DASP_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    // help() delegates to the deepest subcommand that was selected.
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  const Command* selected = nullptr;
  for (const auto& cmd : registry) {
    if (cmd.app->parsed()) selected = &cmd;
  }
  if (!selected) {
    err << "error: a subcommand is required\n\n" << app.help();
    return kExitUsage;
  }

  const Invocation inv{args, out, err};
  try {
    selected->run(inv);
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << selected->app->help();
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_numerical(e.kind()) ? kExitNumerical : kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: bad JSON: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int dispatch(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace dasp::cli
