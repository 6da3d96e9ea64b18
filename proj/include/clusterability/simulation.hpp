#ifndef CLUSTERABILITY_SIMULATION_HPP
#define CLUSTERABILITY_SIMULATION_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "clusterability/core.hpp"
#include "clusterability/dataset_io.hpp"
#include "clusterability/pipeline.hpp"

namespace clusterability {

struct GaussianComponent {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  Index size = 0;
};

struct OutlierSpec {
  enum class Kind {
    fixed,    ///< at `position`
    offset,   ///< `multiple` standard deviations from a component mean along `direction`
    sampled,  ///< as `offset`, with a direction drawn uniformly from the sphere
  };
  Kind kind = Kind::fixed;
  Eigen::VectorXd position;
  Index component = 0;
  double multiple = 10.0;
  Eigen::VectorXd direction;
};

/// Parameters of one simulated family (a row label "a".."q").
struct SimulationSpec {
  std::string id;
  std::string description;
  Index dimension = 0;
  std::vector<GaussianComponent> components;
  std::vector<OutlierSpec> outliers;

  Index total_points() const;

  /// Throws UsageError on inconsistent dimensions, non-positive sizes, fewer
  /// than 4 points, or a covariance that is not positive semidefinite.
  void validate() const;
};

/// Parses a preset file (JSON, see data/presets.json for the format).
std::vector<SimulationSpec> parse_presets(std::string_view json);
std::vector<SimulationSpec> load_presets(const std::filesystem::path& path);

/// The preset file shipped with the library.
const std::vector<SimulationSpec>& default_presets();

/// Throws UsageError naming the valid ids when `id` is unknown.
const SimulationSpec& find_preset(const std::vector<SimulationSpec>& presets, std::string_view id);

/// Draws every component, appends the outliers and shuffles the rows.
DataMatrix generate(const SimulationSpec& spec, RandomSeed seed);

struct SimulationSummary {
  std::string id;
  Index runs = 0;
  /// Fraction of runs with p < alpha; empty when the test was not run.
  std::optional<double> proportion_dip;
  std::optional<double> proportion_silverman;
  RandomSeed seed;
  Index replicates = 0;
};

struct BatchOptions {
  TestSelection tests;
  Significance alpha;
  RandomSeed seed;
  Index replicates = 500;
  /// 0 selects all hardware threads; never changes results.
  unsigned threads = 0;
};

/// Run r generates from derive_substream(derive_substream(seed, r), 2) and
/// bootstraps Silverman with derive_substream(derive_substream(seed, r), 1).
/// The dip null is shared by all runs, seeded with derive_substream(seed, 2^64 - 1).
SimulationSummary run_batch(const SimulationSpec& spec, Index runs, const BatchOptions& opts);

}  // namespace clusterability

#endif  // CLUSTERABILITY_SIMULATION_HPP
