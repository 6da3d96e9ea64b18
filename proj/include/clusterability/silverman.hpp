#ifndef CLUSTERABILITY_SILVERMAN_HPP
#define CLUSTERABILITY_SILVERMAN_HPP

#include <span>

#include <Eigen/Core>

#include "clusterability/core.hpp"
#include "clusterability/distances.hpp"

namespace clusterability {

/// Gaussian kernel density estimate on an equally spaced grid.
struct KdeGrid {
  Eigen::VectorXd points;
  Eigen::VectorXd density;
  double bandwidth = 0.0;
};

enum class KdeMethod {
  automatic,  ///< direct below `binned_threshold` observations, binned above
  direct,     ///< exact sum over all observations, O(m * G)
  binned,     ///< linear binning and truncated discrete convolution
};

struct KdeOptions {
  /// Minimum number of grid points. The grid is refined further when its
  /// spacing would exceed a quarter of the bandwidth, up to `max_grid_size`.
  Index grid_size = 512;
  Index max_grid_size = Index{1} << 20;
  KdeMethod method = KdeMethod::automatic;
  Index binned_threshold = 256;
};

/// f(x) = 1/(m h) sum_i phi((x - x_i) / h) on a grid spanning
/// [min - 4h, max + 4h].
KdeGrid kde(const SampleVector<double>& sample, double bandwidth, const KdeOptions& opts = {});

/// Local maxima of a sequence, counting a run of equal values as one point.
Index count_local_maxima(std::span<const double> values);

/// Number of modes of the Gaussian KDE at bandwidth h (always >= 1).
Index count_modes(const SampleVector<double>& sample, double bandwidth,
                  const KdeOptions& opts = {});

/// Smallest bandwidth whose KDE has at most `null_modes` modes, by bisection
/// over [range * 1e-6, range]. Returns the bracket midpoint once the
/// bracket's relative width is at most `tol` (or after 40 halvings).
double critical_bandwidth(const SampleVector<double>& sample, Index null_modes = 1,
                          double tol = 1e-3, const KdeOptions& opts = {});

struct SilvermanOptions {
  Index replicates = 999;
  Index null_modes = 1;
  double tol = 1e-3;
  KdeOptions kde;
  /// 0 selects all hardware threads.
  unsigned threads = 0;
};

struct SilvermanResult {
  double h_crit = 0.0;
  double p_value = 1.0;
  Index m = 0;
  Index replicates = 0;
  RandomSeed seed;
  Index null_modes = 1;
  /// Checksum of the sample the test consumed.
  std::uint64_t sample_checksum = 0;
};

/// Silverman's critical-bandwidth test with the variance-rescaled smoothed
/// bootstrap. Replicate b resamples the data with replacement, adds
/// h_crit-scaled Gaussian noise, shrinks towards the mean by
/// (1 + h_crit^2 / var)^(-1/2) and counts as multimodal when its KDE at
/// h_crit has more than `null_modes` modes. The p-value is
/// (1 + #multimodal) / (B + 1); replicate b draws from derive_substream(seed, b).
SilvermanResult silverman_pvalue(const SampleVector<double>& sample, RandomSeed seed,
                                 const SilvermanOptions& opts = {});

}  // namespace clusterability

#endif  // CLUSTERABILITY_SILVERMAN_HPP
