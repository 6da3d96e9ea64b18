#ifndef CLUSTERABILITY_DISTANCES_HPP
#define CLUSTERABILITY_DISTANCES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>

#include <Eigen/Core>

#include "clusterability/core.hpp"
#include "clusterability/dataset_io.hpp"

namespace clusterability {

/// A sorted (ascending, ties kept) one-dimensional sample of finite values.
template <typename Scalar>
class SampleVector {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  SampleVector() = default;

  /// Sorts `values`; throws DataError on non-finite entries.
  static SampleVector from_unsorted(Vector values) {
    check_finite(values);
    std::sort(values.data(), values.data() + values.size());
    return SampleVector(std::move(values));
  }

  /// Takes `values` as is; throws UsageError when they are not ascending.
  static SampleVector from_sorted(Vector values) {
    check_finite(values);
    if (!std::is_sorted(values.data(), values.data() + values.size())) {
      throw UsageError("sample values are not sorted ascending");
    }
    return SampleVector(std::move(values));
  }

  const Vector& values() const { return values_; }
  Index size() const { return values_.size(); }
  bool empty() const { return values_.size() == 0; }
  Scalar operator[](Index i) const { return values_[i]; }
  Scalar min() const { return values_[0]; }
  Scalar max() const { return values_[values_.size() - 1]; }
  const Scalar* begin() const { return values_.data(); }
  const Scalar* end() const { return values_.data() + values_.size(); }

  /// FNV-1a over the value bytes; identifies the exact sample a test consumed.
  std::uint64_t checksum() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (Index i = 0; i < values_.size(); ++i) {
      unsigned char bytes[sizeof(Scalar)];
      std::memcpy(bytes, &values_[i], sizeof(Scalar));
      for (unsigned char b : bytes) h = (h ^ b) * 0x100000001b3ULL;
    }
    return h;
  }

  friend bool operator==(const SampleVector& a, const SampleVector& b) {
    return a.values_.size() == b.values_.size() && a.values_ == b.values_;
  }

 private:
  explicit SampleVector(Vector values) : values_(std::move(values)) {}

  static void check_finite(const Vector& values) {
    if (!values.allFinite()) throw DataError("sample values must be finite");
  }

  Vector values_;
};

enum class DistanceMetric { euclidean };

struct DistanceOptions {
  DistanceMetric metric = DistanceMetric::euclidean;
  /// Inputs with more rows are refused: the output holds n(n-1)/2 values.
  Index max_rows = 20000;
};

/// All n(n-1)/2 pairwise distances between the rows of `points`, sorted.
template <typename Derived>
SampleVector<typename Derived::Scalar> pairwise_distances(
    const Eigen::MatrixBase<Derived>& points, const DistanceOptions& opts = {}) {
  using Scalar = typename Derived::Scalar;
  const Index n = points.rows();
  if (n < 2) throw DataError("at least two points are needed to form a distance");
  if (n > opts.max_rows) {
    throw DataError("refusing " + std::to_string(n) + " rows (limit " +
                    std::to_string(opts.max_rows) +
                    "): the distance sample grows quadratically; subsample the "
                    "input or raise the row limit");
  }

  // Row-major copy keeps each point contiguous in the inner loop.
  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows = points;
  typename SampleVector<Scalar>::Vector out(n * (n - 1) / 2);
  Index k = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      out[k++] = (rows.row(i) - rows.row(j)).norm();
    }
  }
  return SampleVector<Scalar>::from_unsorted(std::move(out));
}

inline SampleVector<double> pairwise_distances(const DataMatrix& data,
                                               const DistanceOptions& opts = {}) {
  return pairwise_distances(data.values(), opts);
}

/// Equal-width histogram; `edges` has one more entry than `counts`.
template <typename Scalar>
struct HistogramBins {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> edges;
  Eigen::Matrix<Index, Eigen::Dynamic, 1> counts;

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> midpoints() const {
    const Index k = counts.size();
    return (edges.head(k) + edges.tail(k)) / Scalar(2);
  }
};

/// Bins spanning [min, max]; the maximum lands in the last bin. A sample with
/// zero range is spread over a window of width 1 centred on its value.
template <typename Scalar>
HistogramBins<Scalar> histogram(const SampleVector<Scalar>& sample, Index bin_count) {
  if (sample.empty()) throw DataError("cannot build a histogram of an empty sample");
  if (bin_count < 1) throw UsageError("bin count must be positive");

  Scalar lo = sample.min();
  Scalar hi = sample.max();
  if (!(hi > lo)) {
    lo -= Scalar(0.5);
    hi += Scalar(0.5);
  }
  const Scalar width = (hi - lo) / Scalar(bin_count);

  HistogramBins<Scalar> bins;
  bins.edges.resize(bin_count + 1);
  for (Index b = 0; b <= bin_count; ++b) bins.edges[b] = lo + width * Scalar(b);
  bins.edges[bin_count] = hi;
  bins.counts = Eigen::Matrix<Index, Eigen::Dynamic, 1>::Zero(bin_count);
  for (Scalar v : sample) {
    auto b = static_cast<Index>(std::floor((v - lo) / width));
    bins.counts[std::clamp<Index>(b, 0, bin_count - 1)] += 1;
  }
  return bins;
}

}  // namespace clusterability

#endif  // CLUSTERABILITY_DISTANCES_HPP
