#ifndef CLUSTERABILITY_DIP_HPP
#define CLUSTERABILITY_DIP_HPP

#include <algorithm>
#include <span>
#include <utility>
#include <vector>

#include "clusterability/core.hpp"
#include "clusterability/distances.hpp"

namespace clusterability {

/// Dip statistic and the modal interval (0-based sample indices lo <= hi)
/// found by the fitting procedure.
struct DipFit {
  double dip = 0.0;
  std::pair<Index, Index> modal_interval{0, 0};
};

struct DipResult {
  double dip = 0.0;
  double p_value = 1.0;
  Index m = 0;
  Index replicates = 0;
  RandomSeed seed;
  std::pair<Index, Index> modal_interval{0, 0};
  /// Checksum of the sample the statistic was computed on.
  std::uint64_t sample_checksum = 0;
};

struct DipOptions {
  Index replicates = 2000;
  /// 0 selects all hardware threads.
  unsigned threads = 0;
  /// Reuse uniform-null replicate dips across calls with equal (m, B, seed).
  bool use_cache = true;
};

namespace detail {

// Hartigan & Hartigan's dip for sorted `x`, computed in units of 1/(2n) on
// the ECDF count scale and rescaled at the end. Linear time on sorted input.
//
// The greatest convex minorant is fitted through the lower ECDF corners
// (x_j, j-1) and the least concave majorant through the upper corners (x_j, j).
// Each pass shrinks [low, high] to the interval between the points where the
// two envelopes are furthest apart, accumulating the envelope deviations
// outside it, until neither end moves.
template <typename Scalar>
DipFit dip_sorted(std::span<const Scalar> sample) {
  const Index n = static_cast<Index>(sample.size());
  if (n < 2) throw DataError("the dip needs at least two observations");
  for (Index k = 1; k < n; ++k) {
    if (sample[k] < sample[k - 1]) throw UsageError("dip input must be sorted ascending");
  }
  if (sample[n - 1] == sample[0]) return DipFit{0.0, {0, n - 1}};

  // 1-based views to keep the index arithmetic readable.
  auto x = [&](Index i) -> double { return static_cast<double>(sample[i - 1]); };
  std::vector<Index> mn(n + 1), mj(n + 1), gcm(n + 2), lcm(n + 2);

  // mn[j]: predecessor of j on the convex minorant of points 1..j.
  mn[1] = 1;
  for (Index j = 2; j <= n; ++j) {
    mn[j] = j - 1;
    for (;;) {
      const Index a = mn[j];
      const Index b = mn[a];
      if (a == 1 || (x(j) - x(a)) * double(a - b) < (x(a) - x(b)) * double(j - a)) break;
      mn[j] = b;
    }
  }
  // mj[k]: successor of k on the concave majorant of points k..n.
  mj[n] = n;
  for (Index k = n - 1; k >= 1; --k) {
    mj[k] = k + 1;
    for (;;) {
      const Index a = mj[k];
      const Index b = mj[a];
      if (a == n || (x(k) - x(a)) * double(a - b) < (x(a) - x(b)) * double(k - a)) break;
      mj[k] = b;
    }
  }

  Index low = 1;
  Index high = n;
  double dip = 1.0;
  for (;;) {
    // Knots of the minorant from high down to low, of the majorant from low up.
    Index l_gcm = 1;
    gcm[1] = high;
    while (gcm[l_gcm] > low) {
      gcm[l_gcm + 1] = mn[gcm[l_gcm]];
      ++l_gcm;
    }
    Index l_lcm = 1;
    lcm[1] = low;
    while (lcm[l_lcm] < high) {
      lcm[l_lcm + 1] = mj[lcm[l_lcm]];
      ++l_lcm;
    }

    Index ig = l_gcm;
    Index ih = l_lcm;
    double d = 0.0;
    if (l_gcm != 2 || l_lcm != 2) {
      Index ix = l_gcm - 1;
      Index iv = 2;
      do {
        const Index g = gcm[ix];
        const Index l = lcm[iv];
        if (g > l) {
          const Index g1 = gcm[ix + 1];
          const double dx = double(l - g1 + 1) - (x(l) - x(g1)) * double(g - g1) / (x(g) - x(g1));
          ++iv;
          if (dx >= d) {
            d = dx;
            ig = ix + 1;
            ih = iv - 1;
          }
        } else {
          const Index l1 = lcm[iv - 1];
          const double dx = (x(g) - x(l1)) * double(l - l1) / (x(l) - x(l1)) - double(g - l1 - 1);
          --ix;
          if (dx >= d) {
            d = dx;
            ig = ix + 1;
            ih = iv;
          }
        }
        ix = std::max<Index>(ix, 1);
        iv = std::min(iv, l_lcm);
      } while (gcm[ix] != lcm[iv]);
    } else {
      d = 1.0;
    }
    if (d < dip) break;

    // Largest deviation of the minorant segments left of the new modal interval.
    double dip_l = 0.0;
    for (Index j = ig; j < l_gcm; ++j) {
      double max_t = 1.0;
      const Index jb = gcm[j + 1];
      const Index je = gcm[j];
      if (je - jb > 1 && x(je) != x(jb)) {
        const double c = double(je - jb) / (x(je) - x(jb));
        for (Index jj = jb; jj <= je; ++jj) {
          max_t = std::max(max_t, double(jj - jb + 1) - (x(jj) - x(jb)) * c);
        }
      }
      dip_l = std::max(dip_l, max_t);
    }
    // And of the majorant segments right of it.
    double dip_u = 0.0;
    for (Index j = ih; j < l_lcm; ++j) {
      double max_t = 1.0;
      const Index jb = lcm[j];
      const Index je = lcm[j + 1];
      if (je - jb > 1 && x(je) != x(jb)) {
        const double c = double(je - jb) / (x(je) - x(jb));
        for (Index jj = jb; jj <= je; ++jj) {
          max_t = std::max(max_t, (x(jj) - x(jb)) * c - double(jj - jb - 1));
        }
      }
      dip_u = std::max(dip_u, max_t);
    }
    dip = std::max({dip, dip_l, dip_u});

    // Without this check the cycle can repeat forever.
    if (low == gcm[ig] && high == lcm[ih]) break;
    low = gcm[ig];
    high = lcm[ih];
  }
  return DipFit{dip / (2.0 * double(n)), {low - 1, high - 1}};
}

}  // namespace detail

/// Dip of the sample: the smallest sup-distance between its empirical
/// distribution function and any unimodal distribution function.
/// A sample whose values are all equal has dip 0.
template <typename Scalar>
DipFit dip_statistic(const SampleVector<Scalar>& sample) {
  return detail::dip_sorted(std::span<const Scalar>(sample.begin(), sample.end()));
}

/// Monte Carlo p-value of `dip` under the uniform null:
/// (1 + #{b : dip_b >= dip}) / (B + 1) over B uniform samples of size m.
/// Replicate b draws from derive_substream(seed, b).
double dip_pvalue(double dip, Index m, Index replicates, RandomSeed seed,
                  const DipOptions& opts = {});

/// Dip statistic plus its p-value. An all-equal sample yields dip 0 and p 1
/// without bootstrapping.
DipResult dip_test(const SampleVector<double>& sample, RandomSeed seed,
                   const DipOptions& opts = {});

/// Definitional dip by exhaustive search, for samples of 2..12 values.
///
/// For every candidate mode position it evaluates the convex-minorant
/// deviation left of the mode, the concave-majorant deviation right of it,
/// and the two-point constraints that couple both sides at the mode, each of
/// which is linear in the band half-width. It shares no code with
/// dip_statistic and serves as its test oracle.
double dip_reference_oracle(const SampleVector<double>& sample);

/// Drops all cached null distributions.
void clear_dip_null_cache();

}  // namespace clusterability

#endif  // CLUSTERABILITY_DIP_HPP
