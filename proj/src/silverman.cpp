#include "clusterability/silverman.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "clusterability/random.hpp"
#include "parallel.hpp"

namespace clusterability {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;

struct Grid {
  double lo = 0.0;
  double step = 0.0;
  Index size = 0;

  double at(Index g) const { return lo + step * double(g); }
};

Grid make_grid(double min, double max, double h, const KdeOptions& opts) {
  const double lo = min - 4.0 * h;
  const double span = (max + 4.0 * h) - lo;
  const double wanted = std::ceil(span / (0.25 * h)) + 1.0;
  Index size = std::max(opts.grid_size, Index{2});
  if (wanted > double(size)) size = static_cast<Index>(std::min(wanted, double(opts.max_grid_size)));
  size = std::max(size, std::max(opts.grid_size, Index{2}));
  return Grid{lo, span / double(size - 1), size};
}

bool use_binned(Index m, const KdeOptions& opts) {
  switch (opts.method) {
    case KdeMethod::direct: return false;
    case KdeMethod::binned: return true;
    case KdeMethod::automatic: break;
  }
  return m > opts.binned_threshold;
}

// Scratch buffers reused across evaluations by one thread.
struct KdeWorkspace {
  std::vector<double> weights;
  std::vector<double> kernel;
  std::vector<double> density;
};

void density_direct(std::span<const double> x, double h, const Grid& grid, KdeWorkspace& ws) {
  ws.density.assign(static_cast<std::size_t>(grid.size), 0.0);
  const double inv_h = 1.0 / h;
  for (Index g = 0; g < grid.size; ++g) {
    const double p = grid.at(g);
    double sum = 0.0;
    for (double xi : x) {
      const double z = (p - xi) * inv_h;
      sum += std::exp(-0.5 * z * z);
    }
    ws.density[static_cast<std::size_t>(g)] = sum;
  }
  const double norm = kInvSqrt2Pi / (double(x.size()) * h);
  for (auto& d : ws.density) d *= norm;
}

void density_binned(std::span<const double> x, double h, const Grid& grid, KdeWorkspace& ws) {
  const auto size = static_cast<std::size_t>(grid.size);
  ws.weights.assign(size, 0.0);
  const double inv_step = 1.0 / grid.step;
  for (double xi : x) {
    const double t = (xi - grid.lo) * inv_step;
    const auto g = std::min(static_cast<std::size_t>(t), size - 2);
    const double frac = t - double(g);
    ws.weights[g] += 1.0 - frac;
    ws.weights[g + 1] += frac;
  }

  const auto reach = static_cast<std::size_t>(
      std::min(std::ceil(6.0 * h * inv_step), double(size - 1)));
  ws.kernel.resize(reach + 1);
  for (std::size_t j = 0; j <= reach; ++j) {
    const double z = double(j) * grid.step / h;
    ws.kernel[j] = std::exp(-0.5 * z * z);
  }

  ws.density.assign(size, 0.0);
  for (std::size_t s = 0; s < size; ++s) {
    const double w = ws.weights[s];
    if (w == 0.0) continue;
    const std::size_t first = s >= reach ? s - reach : 0;
    const std::size_t last = std::min(size - 1, s + reach);
    double* out = ws.density.data();
    for (std::size_t g = first; g <= last; ++g) {
      out[g] += w * ws.kernel[g > s ? g - s : s - g];
    }
  }
  const double norm = kInvSqrt2Pi / (double(x.size()) * h);
  for (auto& d : ws.density) d *= norm;
}

Grid evaluate(std::span<const double> x, double h, const KdeOptions& opts, KdeWorkspace& ws) {
  const auto [min_it, max_it] = std::minmax_element(x.begin(), x.end());
  const Grid grid = make_grid(*min_it, *max_it, h, opts);
  if (use_binned(static_cast<Index>(x.size()), opts)) {
    density_binned(x, h, grid, ws);
  } else {
    density_direct(x, h, grid, ws);
  }
  return grid;
}

void check_bandwidth(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw UsageError("bandwidth must be positive and finite");
}

Index modes_of(std::span<const double> x, double h, const KdeOptions& opts, KdeWorkspace& ws) {
  evaluate(x, h, opts, ws);
  return count_local_maxima(ws.density);
}

}  // namespace

KdeGrid kde(const SampleVector<double>& sample, double bandwidth, const KdeOptions& opts) {
  check_bandwidth(bandwidth);
  if (sample.empty()) throw DataError("cannot estimate a density from an empty sample");
  if (opts.grid_size < 16) throw UsageError("KDE grid needs at least 16 points");
  KdeWorkspace ws;
  const Grid grid = evaluate(std::span<const double>(sample.begin(), sample.end()), bandwidth, opts, ws);
  KdeGrid out;
  out.bandwidth = bandwidth;
  out.points.resize(grid.size);
  for (Index g = 0; g < grid.size; ++g) out.points[g] = grid.at(g);
  out.density = Eigen::Map<const Eigen::VectorXd>(ws.density.data(), grid.size);
  return out;
}

Index count_local_maxima(std::span<const double> values) {
  // Collapse runs of equal values, then count runs above both neighbours.
  std::vector<double> runs;
  runs.reserve(values.size());
  for (double v : values) {
    if (runs.empty() || v != runs.back()) runs.push_back(v);
  }
  Index count = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const bool left_lower = i == 0 || runs[i - 1] < runs[i];
    const bool right_lower = i + 1 == runs.size() || runs[i + 1] < runs[i];
    if (left_lower && right_lower) ++count;
  }
  return count;
}

Index count_modes(const SampleVector<double>& sample, double bandwidth, const KdeOptions& opts) {
  check_bandwidth(bandwidth);
  if (sample.empty()) throw DataError("cannot count modes of an empty sample");
  if (opts.grid_size < 16) throw UsageError("KDE grid needs at least 16 points");
  KdeWorkspace ws;
  return modes_of(std::span<const double>(sample.begin(), sample.end()), bandwidth, opts, ws);
}

double critical_bandwidth(const SampleVector<double>& sample, Index null_modes, double tol,
                          const KdeOptions& opts) {
  if (sample.size() < 2) throw DataError("the critical bandwidth needs at least two observations");
  if (sample.min() == sample.max()) {
    throw DataError("the critical bandwidth is undefined for a sample with a single distinct value");
  }
  if (!(tol > 0.0 && tol < 0.1)) throw UsageError("bisection tolerance must lie in (0, 0.1)");
  if (null_modes < 1) throw UsageError("null mode count must be at least 1");
  if (opts.grid_size < 16) throw UsageError("KDE grid needs at least 16 points");

  const std::span<const double> x(sample.begin(), sample.end());
  const double range = sample.max() - sample.min();
  double lo = range * 1e-6;
  double hi = range;
  KdeWorkspace ws;
  for (int iter = 0; iter < 40 && (hi - lo) > tol * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (modes_of(x, mid, opts, ws) > null_modes) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

SilvermanResult silverman_pvalue(const SampleVector<double>& sample, RandomSeed seed,
                                 const SilvermanOptions& opts) {
  if (sample.size() < 4) {
    throw DataError("the Silverman test needs at least 4 observations, got " +
                    std::to_string(sample.size()));
  }
  if (opts.replicates < 1) throw UsageError("replicate count must be at least 1");

  SilvermanResult result;
  result.m = sample.size();
  result.replicates = opts.replicates;
  result.seed = seed;
  result.null_modes = opts.null_modes;
  result.sample_checksum = sample.checksum();
  result.h_crit = critical_bandwidth(sample, opts.null_modes, opts.tol, opts.kde);

  const auto& x = sample.values();
  const double mean = x.mean();
  const double variance = (x.array() - mean).square().sum() / double(x.size() - 1);
  const double h = result.h_crit;
  const double shrink = 1.0 / std::sqrt(1.0 + h * h / variance);
  const auto m = static_cast<std::uint64_t>(x.size());

  const auto replicates = static_cast<std::size_t>(opts.replicates);
  std::vector<unsigned char> multimodal(replicates, 0);
  const unsigned workers = detail::resolve_threads(opts.threads);
  const std::size_t chunks = std::min<std::size_t>(replicates, std::size_t{workers} * 8);
  detail::parallel_for(chunks, workers, [&](std::size_t c) {
    KdeWorkspace ws;
    std::vector<double> z(static_cast<std::size_t>(m));
    for (std::size_t b = c; b < replicates; b += chunks) {
      RandomStream rng(derive_substream(seed, b));
      for (auto& zi : z) {
        const double y = x[static_cast<Index>(rng.below(m))];
        zi = mean + shrink * (y - mean + h * rng.normal());
      }
      multimodal[b] = modes_of(z, h, opts.kde, ws) > opts.null_modes ? 1 : 0;
    }
  });
  const auto hits = std::count(multimodal.begin(), multimodal.end(), 1);
  result.p_value = double(1 + hits) / double(opts.replicates + 1);
  return result;
}

}  // namespace clusterability
