// Command-line front end: clusterability {test,simulate,hist,datasets}.
//
// Exit codes: 0 success, 1 dip verdict unclusterable (only with
// --exit-on-unclusterable), 2 usage error, 3 data error, 4 internal error.
// Standard output carries data only; diagnostics go to standard error.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "clusterability/dataset_io.hpp"
#include "clusterability/distances.hpp"
#include "clusterability/pipeline.hpp"
#include "clusterability/simulation.hpp"

namespace cl = clusterability;

namespace {

enum ExitCode { kOk = 0, kUnclusterable = 1, kUsage = 2, kData = 3, kInternal = 4 };

struct IngestFlags {
  std::string delimiter = ",";
  std::string header = "auto";
  std::string non_numeric = "drop";

  void add_to(CLI::App& cmd) {
    cmd.add_option("--delimiter", delimiter, "Field delimiter (single character)");
    cmd.add_option("--header", header, "Header row: auto, yes or no")
        ->check(CLI::IsMember({"auto", "yes", "no"}));
    cmd.add_option("--non-numeric", non_numeric, "Non-numeric columns: drop or error")
        ->check(CLI::IsMember({"drop", "error"}));
  }

  cl::IngestOptions options() const {
    if (delimiter.size() != 1) throw cl::UsageError("--delimiter takes exactly one character");
    cl::IngestOptions opts;
    opts.delimiter = delimiter[0];
    opts.header = header == "yes"  ? cl::HeaderMode::present
                  : header == "no" ? cl::HeaderMode::absent
                                   : cl::HeaderMode::auto_detect;
    opts.non_numeric =
        non_numeric == "error" ? cl::NonNumericPolicy::error : cl::NonNumericPolicy::drop_column;
    opts.on_warning = [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };
    return opts;
  }
};

// A path that exists wins over a bundled dataset of the same name.
cl::DataMatrix resolve_input(const std::string& input, const IngestFlags& flags) {
  const auto opts = flags.options();
  std::error_code ec;
  if (std::filesystem::exists(input, ec)) return cl::load_matrix(input, opts);
  const auto& names = cl::bundled_dataset_names();
  if (std::find(names.begin(), names.end(), input) != names.end()) {
    return cl::bundled_dataset(input);
  }
  throw cl::DataError("'" + input + "' is neither a readable file nor a bundled dataset");
}

std::string proportion_text(const std::optional<double>& p) {
  return p ? cl::format_number(*p) : "NA";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clusterability assessment via multimodality tests on pairwise distances"};
  app.require_subcommand(1);

  // test
  std::string test_input;
  std::string test_list = "dip,silverman";
  double alpha = 0.05;
  std::uint64_t seed = 0;
  std::optional<cl::Index> replicates;
  std::string format = "json";
  unsigned threads = 0;
  bool exit_on_unclusterable = false;
  bool timing = false;
  IngestFlags ingest;
  auto* test = app.add_subcommand("test", "Assess the clusterability of a dataset");
  test->add_option("input", test_input, "CSV file or bundled dataset name")->required();
  test->add_option("--tests", test_list, "Comma-separated tests: dip,silverman");
  test->add_option("--alpha", alpha, "Significance level");
  test->add_option("--seed", seed, "Random seed");
  test->add_option("--replicates", replicates,
                   "Bootstrap replicates per test (default: dip 2000, silverman 999)")
      ->check(CLI::PositiveNumber);
  test->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));
  test->add_option("--threads", threads, "Worker threads (0 = all cores)");
  test->add_flag("--exit-on-unclusterable", exit_on_unclusterable,
                 "Exit with status 1 when the dip verdict is unclusterable");
  test->add_flag("--timing", timing, "Include per-stage wall time in JSON output");
  ingest.add_to(*test);

  // simulate
  std::string preset = "all";
  cl::Index runs = 100;
  cl::Index sim_replicates = 500;
  std::string presets_path;
  std::string sim_format = "text";
  auto* simulate = app.add_subcommand(
      "simulate",
      "Proportion of simulated datasets classified clusterable; one tab-separated row per "
      "preset: id, runs, proportion_dip, proportion_silverman");
  simulate->add_option("--preset", preset, "Preset id (a..q) or 'all'");
  simulate->add_option("--runs", runs, "Datasets per preset")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", seed, "Random seed");
  simulate->add_option("--replicates", sim_replicates, "Bootstrap replicates per test")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--tests", test_list, "Comma-separated tests: dip,silverman");
  simulate->add_option("--alpha", alpha, "Significance level");
  simulate->add_option("--threads", threads, "Worker threads (0 = all cores)");
  simulate->add_option("--presets", presets_path, "Preset file overriding the bundled one");
  simulate->add_option("--format", sim_format, "Output format")->check(CLI::IsMember({"json", "text"}));

  // hist
  std::string hist_input;
  cl::Index bins = 30;
  auto* hist = app.add_subcommand(
      "hist", "Histogram of pairwise distances as tab-separated midpoint/count rows");
  hist->add_option("input", hist_input, "CSV file or bundled dataset name")->required();
  hist->add_option("--bins", bins, "Number of bins")->check(CLI::PositiveNumber);
  ingest.add_to(*hist);

  auto* datasets = app.add_subcommand("datasets", "List bundled datasets (name, rows, columns)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\nRun with --help for usage.\n";
    return kUsage;
  }

  try {
    if (test->parsed()) {
      cl::AssessOptions opts;
      opts.tests = cl::parse_test_selection(test_list);
      opts.alpha = cl::Significance(alpha);
      opts.seed = cl::RandomSeed{seed};
      opts.replicates = replicates;
      opts.threads = threads;
      const cl::DataMatrix data = resolve_input(test_input, ingest);
      const auto report = cl::assess_clusterability(data, opts, test_input);
      std::cout << (format == "json" ? cl::report_to_json(report, timing)
                                     : cl::report_to_text(report));
      if (exit_on_unclusterable && report.verdict_dip == cl::Verdict::unclusterable) {
        return kUnclusterable;
      }
    } else if (simulate->parsed()) {
      cl::BatchOptions opts;
      opts.tests = cl::parse_test_selection(test_list);
      opts.alpha = cl::Significance(alpha);
      opts.seed = cl::RandomSeed{seed};
      opts.replicates = sim_replicates;
      opts.threads = threads;
      const auto presets =
          presets_path.empty() ? cl::default_presets() : cl::load_presets(presets_path);
      std::vector<const cl::SimulationSpec*> selected;
      if (preset == "all") {
        for (const auto& p : presets) selected.push_back(&p);
      } else {
        selected.push_back(&cl::find_preset(presets, preset));
      }
      nlohmann::ordered_json rows = nlohmann::ordered_json::array();
      for (const auto* spec : selected) {
        const auto s = cl::run_batch(*spec, runs, opts);
        if (sim_format == "json") {
          nlohmann::ordered_json row;
          row["id"] = s.id;
          row["runs"] = s.runs;
          row["proportion_dip"] = s.proportion_dip ? nlohmann::ordered_json(*s.proportion_dip) : nullptr;
          row["proportion_silverman"] =
              s.proportion_silverman ? nlohmann::ordered_json(*s.proportion_silverman) : nullptr;
          row["seed"] = s.seed.value;
          row["replicates"] = s.replicates;
          rows.push_back(std::move(row));
        } else {
          std::cout << s.id << '\t' << s.runs << '\t' << proportion_text(s.proportion_dip) << '\t'
                    << proportion_text(s.proportion_silverman) << '\n'
                    << std::flush;
        }
      }
      if (sim_format == "json") std::cout << rows.dump(2) << '\n';
    } else if (hist->parsed()) {
      const cl::DataMatrix data = resolve_input(hist_input, ingest);
      const auto h = cl::histogram(cl::pairwise_distances(data), bins);
      const auto mid = h.midpoints();
      for (cl::Index b = 0; b < h.counts.size(); ++b) {
        std::cout << cl::format_number(mid[b]) << '\t' << h.counts[b] << '\n';
      }
    } else if (datasets->parsed()) {
      for (const auto& name : cl::bundled_dataset_names()) {
        const auto data = cl::bundled_dataset(name);
        std::cout << name << '\t' << data.rows() << '\t' << data.cols() << '\n';
      }
    }
  } catch (const cl::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const cl::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kOk;
}
