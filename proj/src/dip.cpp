#include "clusterability/dip.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "clusterability/random.hpp"
#include "parallel.hpp"

namespace clusterability {

namespace {

// Dip of one uniform sample of size m. Partial sums of standard exponentials
// are distributed as scaled uniform order statistics, so the sample arrives
// sorted; the dip is scale invariant, so no normalisation is needed.
double uniform_null_dip(Index m, RandomSeed seed, std::vector<double>& scratch) {
  RandomStream rng(seed);
  scratch.resize(static_cast<std::size_t>(m));
  double total = 0.0;
  for (auto& v : scratch) {
    total += rng.exponential();
    v = total;
  }
  return detail::dip_sorted(std::span<const double>(scratch)).dip;
}

// Sorted replicate dips.
std::vector<double> simulate_null(Index m, Index replicates, RandomSeed seed, unsigned threads) {
  std::vector<double> dips(static_cast<std::size_t>(replicates));
  const unsigned workers = detail::resolve_threads(threads);
  const std::size_t chunks = std::min<std::size_t>(dips.size(), std::size_t{workers} * 8);
  detail::parallel_for(chunks, workers, [&](std::size_t c) {
    std::vector<double> scratch;
    for (std::size_t b = c; b < dips.size(); b += chunks) {
      dips[b] = uniform_null_dip(m, derive_substream(seed, b), scratch);
    }
  });
  std::sort(dips.begin(), dips.end());
  return dips;
}

class NullCache {
 public:
  using Key = std::tuple<Index, Index, std::uint64_t>;

  std::shared_ptr<const std::vector<double>> get(const Key& key) {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : it->second;
  }

  void put(const Key& key, std::shared_ptr<const std::vector<double>> dips) {
    std::lock_guard lock(mutex_);
    if (entries_.size() >= kMaxEntries) entries_.clear();
    entries_.emplace(key, std::move(dips));
  }

  void clear() {
    std::lock_guard lock(mutex_);
    entries_.clear();
  }

 private:
  static constexpr std::size_t kMaxEntries = 64;
  std::mutex mutex_;
  std::map<Key, std::shared_ptr<const std::vector<double>>> entries_;
};

NullCache& null_cache() {
  static NullCache cache;
  return cache;
}

}  // namespace

double dip_pvalue(double dip, Index m, Index replicates, RandomSeed seed,
                  const DipOptions& opts) {
  if (m < 4) throw DataError("the dip test needs at least 4 observations, got " + std::to_string(m));
  if (replicates < 1) throw UsageError("replicate count must be at least 1");
  if (!(dip >= 0.0 && dip <= 0.25)) throw UsageError("dip must lie in [0, 0.25]");

  std::shared_ptr<const std::vector<double>> null;
  const NullCache::Key key{m, replicates, seed.value};
  if (opts.use_cache) null = null_cache().get(key);
  if (!null) {
    null = std::make_shared<const std::vector<double>>(
        simulate_null(m, replicates, seed, opts.threads));
    if (opts.use_cache) null_cache().put(key, null);
  }
  const auto at_least = null->end() - std::lower_bound(null->begin(), null->end(), dip);
  return double(1 + at_least) / double(replicates + 1);
}

DipResult dip_test(const SampleVector<double>& sample, RandomSeed seed, const DipOptions& opts) {
  DipResult result;
  result.m = sample.size();
  result.replicates = opts.replicates;
  result.seed = seed;
  result.sample_checksum = sample.checksum();
  if (!sample.empty() && sample.min() == sample.max()) {
    result.modal_interval = {0, sample.size() - 1};
    return result;
  }
  if (sample.size() < 4) {
    throw DataError("the dip test needs at least 4 observations, got " +
                    std::to_string(sample.size()));
  }
  const DipFit fit = dip_statistic(sample);
  result.dip = fit.dip;
  result.modal_interval = fit.modal_interval;
  result.p_value = dip_pvalue(fit.dip, sample.size(), opts.replicates, seed, opts);
  return result;
}

void clear_dip_null_cache() { null_cache().clear(); }

}  // namespace clusterability
