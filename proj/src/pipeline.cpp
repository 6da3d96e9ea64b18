#include "clusterability/pipeline.hpp"

#include <charconv>
#include <chrono>

#include <json.hpp>

#include "clusterability/random.hpp"

namespace clusterability {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

nlohmann::ordered_json verdict_json(const std::optional<Verdict>& v) {
  if (!v) return nullptr;
  return std::string(to_string(*v));
}

}  // namespace

std::string_view to_string(Verdict v) {
  return v == Verdict::clusterable ? "clusterable" : "unclusterable";
}

TestSelection parse_test_selection(std::string_view list) {
  TestSelection sel{false, false};
  while (!list.empty()) {
    const auto comma = list.find(',');
    const auto item = list.substr(0, comma);
    if (item == "dip") {
      sel.dip = true;
    } else if (item == "silverman") {
      sel.silverman = true;
    } else {
      throw UsageError("unknown test '" + std::string(item) + "' (expected dip or silverman)");
    }
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
  }
  if (!sel.any()) throw UsageError("no test selected");
  return sel;
}

ClusterabilityReport assess_clusterability(const DataMatrix& data, const AssessOptions& opts,
                                           std::string dataset_id) {
  if (!opts.tests.any()) throw UsageError("no test selected");
  if (data.rows() < 3) {
    throw DataError("at least 3 points are needed, got " + std::to_string(data.rows()));
  }
  if (opts.tests.dip && data.rows() < 4) {
    throw DataError("the dip test needs at least 4 points, got " + std::to_string(data.rows()));
  }

  ClusterabilityReport report;
  report.dataset_id = std::move(dataset_id);
  report.n = data.rows();
  report.d = data.cols();
  report.alpha = opts.alpha;
  report.seed = opts.seed;

  auto start = Clock::now();
  const SampleVector<double> distances = pairwise_distances(data, opts.distances);
  report.timing.distances = seconds_since(start);
  report.m = distances.size();
  report.distance_checksum = distances.checksum();

  if (opts.tests.dip) {
    DipOptions dip = opts.dip;
    if (opts.replicates) dip.replicates = *opts.replicates;
    dip.threads = opts.threads;
    start = Clock::now();
    report.dip = dip_test(distances, derive_substream(opts.seed, 0), dip);
    report.timing.dip = seconds_since(start);
    report.verdict_dip = verdict_for(report.dip->p_value, opts.alpha);
  }
  if (opts.tests.silverman) {
    SilvermanOptions silverman = opts.silverman;
    if (opts.replicates) silverman.replicates = *opts.replicates;
    silverman.threads = opts.threads;
    start = Clock::now();
    report.silverman = silverman_pvalue(distances, derive_substream(opts.seed, 1), silverman);
    report.timing.silverman = seconds_since(start);
    report.verdict_silverman = verdict_for(report.silverman->p_value, opts.alpha);
  }
  return report;
}

std::string report_to_json(const ClusterabilityReport& report, bool include_timing) {
  nlohmann::ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["dataset_id"] = report.dataset_id;
  j["n"] = report.n;
  j["d"] = report.d;
  j["m"] = report.m;
  j["alpha"] = report.alpha.alpha();
  if (report.dip) {
    const auto& r = *report.dip;
    j["dip"] = {{"dip", r.dip},
                {"p_value", r.p_value},
                {"m", r.m},
                {"replicates", r.replicates},
                {"seed", r.seed.value},
                {"modal_interval", {r.modal_interval.first, r.modal_interval.second}}};
  } else {
    j["dip"] = nullptr;
  }
  if (report.silverman) {
    const auto& r = *report.silverman;
    j["silverman"] = {{"h_crit", r.h_crit},
                      {"p_value", r.p_value},
                      {"m", r.m},
                      {"replicates", r.replicates},
                      {"seed", r.seed.value},
                      {"null_modes", r.null_modes}};
  } else {
    j["silverman"] = nullptr;
  }
  j["verdict_dip"] = verdict_json(report.verdict_dip);
  j["verdict_silverman"] = verdict_json(report.verdict_silverman);
  j["seed"] = report.seed.value;
  if (include_timing) {
    j["timing"] = {{"distances", report.timing.distances},
                   {"dip", report.timing.dip},
                   {"silverman", report.timing.silverman}};
  } else {
    j["timing"] = nullptr;
  }
  return j.dump(2) + "\n";
}

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string report_to_text(const ClusterabilityReport& report) {
  std::string out;
  if (report.dip) {
    const auto& r = *report.dip;
    out += "dip: p=" + format_number(r.p_value) + ", " +
           std::string(to_string(*report.verdict_dip)) + "\n";
    out += "  D=" + format_number(r.dip) + " modal_interval=[" +
           std::to_string(r.modal_interval.first) + "," + std::to_string(r.modal_interval.second) +
           "] m=" + std::to_string(r.m) + " replicates=" + std::to_string(r.replicates) + "\n";
  }
  if (report.silverman) {
    const auto& r = *report.silverman;
    out += "silverman: p=" + format_number(r.p_value) + ", " +
           std::string(to_string(*report.verdict_silverman)) + "\n";
    out += "  h_crit=" + format_number(r.h_crit) + " m=" + std::to_string(r.m) +
           " replicates=" + std::to_string(r.replicates) + "\n";
  }
  return out;
}

}  // namespace clusterability
