#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "cli/commands.hpp"
#include "dasp/csv.hpp"
#include "dasp/error.hpp"
#include "dasp/metrics.hpp"

namespace dasp::cli {

namespace {

namespace fs = std::filesystem;
using csv::format;

struct ReportOptions {
  std::string results;
  std::string out;
};

using FitKey = std::tuple<std::string, std::string, std::string>;  // rep, prior, omega

const std::vector<std::string> kDeltaMetrics = {"elpd", "rmse_all", "rmse_zero", "rmse_nonzero"};

// Column layout of the published coverage tables, metric keys alongside.
const std::vector<std::pair<std::string, std::string>> kCoverageColumns = {
    {"Coverage", "coverage"},
    {"Specificity", "specificity"},
    {"Sensitivity (Power)", "sensitivity"},
    {"Avg. CI Width", "avg_ci_width"},
    {"Coverage Zero", "coverage_zero"},
    {"Coverage Nonzero", "coverage_nonzero"}};

std::string model_id(const std::string& prior, const std::string& omega) {
  const std::string base = upper(prior);
  if (omega == "identity") return base;
  if (omega == "true") return base + "O";
  return base + "O[" + omega + "]";
}

void push_unique(std::vector<std::string>& v, const std::string& s) {
  if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? std::nan("") : s / double(v.size());
}

struct TextGrid {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void print(std::ostream& out) const {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& r : rows) {
      for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
    }
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t c = 0; c < cells.size(); ++c) {
        out << (c ? "  " : "") << std::left << std::setw(int(width[c])) << cells[c];
      }
      out << "\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
  }
};

std::string fixed(double v, int digits = 3) {
  if (std::isnan(v)) return "NA";
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(digits) << v;
  return ss.str();
}

void simulation_report(const fs::path& in_dir, const fs::path& out_dir, RunRecord& record, std::ostream& text) {
  const csv::TextTable t = csv::read_text((in_dir / "results.csv").string());
  const auto c_rep = std::size_t(t.column("rep"));
  const auto c_prior = std::size_t(t.column("prior"));
  const auto c_omega = std::size_t(t.column("omega_mode"));
  const auto c_metric = std::size_t(t.column("metric"));
  const auto c_value = std::size_t(t.column("value"));

  std::map<FitKey, std::map<std::string, double>> values;
  std::vector<std::string> reps, priors, omegas;
  for (const auto& row : t.rows) {
    values[{row[c_rep], row[c_prior], row[c_omega]}][row[c_metric]] = csv::to_number(row[c_value]);
    push_unique(reps, row[c_rep]);
    push_unique(priors, row[c_prior]);
    push_unique(omegas, row[c_omega]);
  }
  if (values.empty()) throw Error(ErrorKind::MissingColumns, "results.csv has no rows");

  const fs::path fits_path = in_dir / "fits.json";
  std::ifstream fits_in(fits_path);
  if (!fits_in) throw Error(ErrorKind::MissingColumns, "'" + fits_path.string() + "' is missing; cannot check pairing");
  record.add_input(fits_path.string());
  std::map<FitKey, json> manifests;
  for (const auto& f : json::parse(fits_in)) {
    manifests[{std::to_string(f.at("rep").get<long>()), f.at("prior").get<std::string>(),
               f.at("omega_mode").get<std::string>()}] = f.at("manifest");
  }

  std::ostringstream deltas, per_rep;
  csv::write_header(deltas, "report_deltas",
                    {"prior", "omega_mode", "metric", "n", "mean", "median", "q25", "q75", "min", "max"});
  csv::write_header(per_rep, "report_delta_reps", {"rep", "prior", "omega_mode", "metric", "delta"});
  TextGrid delta_grid{{"prior", "omega", "metric", "n", "median", "q25", "q75"}, {}};

  for (const auto& prior : priors) {
    for (const auto& omega : omegas) {
      for (const auto& metric : kDeltaMetrics) {
        std::vector<double> d;
        for (const auto& rep : reps) {
          const FitKey with{rep, prior, omega};
          const FitKey without{rep, prior, "identity"};
          if (!values.count(with) || !values.count(without)) continue;
          const auto mw = values[with].find(metric);
          const auto mo = values[without].find(metric);
          if (mw == values[with].end() || mo == values[without].end()) continue;
          if (std::isnan(mw->second) || std::isnan(mo->second)) continue;
          if (!manifests.count(with) || !manifests.count(without)) {
            throw Error(ErrorKind::PairingMismatch, "fits.json has no manifest for rep " + rep + " " + prior);
          }
          const double delta = paired_delta(manifests[with], mw->second, manifests[without], mo->second);
          d.push_back(delta);
          csv::write_row(per_rep, {rep, prior, omega, metric, format(delta)});
        }
        if (d.empty()) continue;
        const auto [lo, hi] = std::minmax_element(d.begin(), d.end());
        const double mn = *lo, mx = *hi;
        csv::write_row(deltas, {prior, omega, metric, std::to_string(d.size()), format(mean_of(d)),
                                format(quantile(d, 0.5)), format(quantile(d, 0.25)), format(quantile(d, 0.75)),
                                format(mn), format(mx)});
        delta_grid.rows.push_back({prior, omega, metric, std::to_string(d.size()), fixed(quantile(d, 0.5)),
                                   fixed(quantile(d, 0.25)), fixed(quantile(d, 0.75))});
      }
    }
  }

  std::vector<std::string> cov_header{"Model ID"};
  for (const auto& [title, key] : kCoverageColumns) cov_header.push_back(title);
  std::ostringstream coverage;
  csv::write_header(coverage, "report_coverage", cov_header);
  TextGrid cov_grid{cov_header, {}};
  for (const auto& prior : priors) {
    for (const auto& omega : omegas) {
      std::vector<std::string> row{model_id(prior, omega)};
      std::vector<std::string> text_row{model_id(prior, omega)};
      bool any = false;
      for (const auto& [title, key] : kCoverageColumns) {
        std::vector<double> v;
        for (const auto& rep : reps) {
          const auto it = values.find({rep, prior, omega});
          if (it == values.end()) continue;
          any = true;
          const auto m = it->second.find(key);
          if (m != it->second.end() && !std::isnan(m->second)) v.push_back(m->second);
        }
        row.push_back(format(mean_of(v)));
        text_row.push_back(fixed(mean_of(v)));
      }
      if (!any) continue;
      csv::write_row(coverage, row);
      cov_grid.rows.push_back(text_row);
    }
  }

  write_atomic(out_dir / "deltas.csv", deltas.str());
  record.add_output(out_dir / "deltas.csv");
  write_atomic(out_dir / "delta_reps.csv", per_rep.str());
  record.add_output(out_dir / "delta_reps.csv");
  write_atomic(out_dir / "coverage.csv", coverage.str());
  record.add_output(out_dir / "coverage.csv");

  text << "Paired differences (with Omega minus without; ELPD > 0 and RMSE < 0 favour Omega)\n\n";
  delta_grid.print(text);
  text << "\nCoverage (means over " << reps.size() << " replications)\n\n";
  cov_grid.print(text);
}

void run_report(const Invocation& inv, ReportOptions& o, ConfigBinder& binder) {
  binder.apply_config("report");
  if (o.results.empty()) throw UsageError("--results is required");
  const fs::path in_dir(o.results);
  if (!fs::is_directory(in_dir)) throw UsageError("'" + o.results + "' is not a directory");
  const fs::path out_dir = o.out.empty() ? in_dir / "report" : fs::path(o.out);

  const bool has_results = fs::exists(in_dir / "results.csv");
  const bool has_loo = fs::exists(in_dir / "loo.csv");
  if (!has_results && !has_loo) {
    throw Error(ErrorKind::MissingColumns, "'" + o.results + "' has neither results.csv nor loo.csv");
  }

  RunRecord record("report", inv);
  record.set_config(binder.effective());
  ensure_directory(out_dir);
  std::ostringstream text;
  if (has_results) {
    record.add_input((in_dir / "results.csv").string());
    simulation_report(in_dir, out_dir, record, text);
  }
  if (has_loo) {
    record.add_input((in_dir / "loo.csv").string());
    if (has_results) text << "\n";
    text << "Exact LOO, each model against the best\n\n";
    write_atomic(out_dir / "loo_compare.csv", loo_comparison_csv((in_dir / "loo.csv").string(), &text));
    record.add_output(out_dir / "loo_compare.csv");
  }
  write_atomic(out_dir / "summary.txt", text.str());
  record.add_output(out_dir / "summary.txt");
  write_manifest(out_dir / "manifest.json", record);
  inv.out << text.str();
}

}  // namespace

void add_report_command(CLI::App& root, Registry& registry) {
  CLI::App* app = root.add_subcommand("report", "Summary tables from a simulate or loo output directory");
  auto o = std::make_shared<ReportOptions>();
  auto binder = std::make_shared<ConfigBinder>(app);
  binder->option("--results", "results", o->results, "Directory written by simulate (or holding loo.csv)");
  binder->option("--out", "out", o->out, "Output directory (default <results>/report)");
  registry.push_back({app, [o, binder](const Invocation& inv) { run_report(inv, *o, *binder); }});
}

}  // namespace dasp::cli
