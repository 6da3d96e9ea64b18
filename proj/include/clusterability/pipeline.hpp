#ifndef CLUSTERABILITY_PIPELINE_HPP
#define CLUSTERABILITY_PIPELINE_HPP

#include <optional>
#include <string>
#include <string_view>

#include "clusterability/core.hpp"
#include "clusterability/dataset_io.hpp"
#include "clusterability/dip.hpp"
#include "clusterability/distances.hpp"
#include "clusterability/silverman.hpp"

namespace clusterability {

enum class Verdict { clusterable, unclusterable };

std::string_view to_string(Verdict v);

/// Clusterable exactly when p < alpha; a tie reads unclusterable.
inline Verdict verdict_for(double p_value, Significance alpha) {
  return p_value < alpha.alpha() ? Verdict::clusterable : Verdict::unclusterable;
}

struct TestSelection {
  bool dip = true;
  bool silverman = true;

  bool any() const { return dip || silverman; }
};

/// Parses a comma-separated list such as "dip,silverman".
TestSelection parse_test_selection(std::string_view list);

/// Wall-clock seconds per stage.
struct StageTiming {
  double distances = 0.0;
  double dip = 0.0;
  double silverman = 0.0;
};

struct ClusterabilityReport {
  std::string dataset_id;
  Index n = 0;
  Index d = 0;
  Index m = 0;
  Significance alpha;
  std::optional<DipResult> dip;
  std::optional<SilvermanResult> silverman;
  std::optional<Verdict> verdict_dip;
  std::optional<Verdict> verdict_silverman;
  RandomSeed seed;
  StageTiming timing;
  /// Checksum of the distance sample handed to every test.
  std::uint64_t distance_checksum = 0;
};

struct AssessOptions {
  TestSelection tests;
  Significance alpha;
  RandomSeed seed;
  /// Overrides both tests' replicate counts when set.
  std::optional<Index> replicates;
  DipOptions dip;
  SilvermanOptions silverman;
  DistanceOptions distances;
  /// 0 selects all hardware threads; never changes results.
  unsigned threads = 0;
};

/// Pairwise distances of `data`, then each selected multimodality test on
/// that one sample: the dip test on derive_substream(seed, 0), the Silverman
/// test on derive_substream(seed, 1).
ClusterabilityReport assess_clusterability(const DataMatrix& data, const AssessOptions& opts,
                                           std::string dataset_id = {});

inline constexpr int kReportSchemaVersion = 1;

/// Report as a JSON document with a fixed field order. Timings are wall-clock
/// and therefore emitted only on request; otherwise "timing" is null.
std::string report_to_json(const ClusterabilityReport& report, bool include_timing = false);

/// Two lines per test: "<test>: p=<p>, <verdict>" and a detail line.
std::string report_to_text(const ClusterabilityReport& report);

/// Shortest round-trip decimal form of `v`.
std::string format_number(double v);

}  // namespace clusterability

#endif  // CLUSTERABILITY_PIPELINE_HPP
