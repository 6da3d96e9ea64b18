#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "clusterability/dataset_io.hpp"
#include "clusterability/random.hpp"
#include "clusterability/silverman.hpp"

using namespace clusterability;

namespace {

SampleVector<double> sample(std::vector<double> v) {
  return SampleVector<double>::from_unsorted(Eigen::Map<Eigen::VectorXd>(v.data(), Index(v.size())));
}

double trapezoid(const KdeGrid& g) {
  const Index n = g.points.size();
  double sum = 0.0;
  for (Index i = 1; i < n; ++i) sum += 0.5 * (g.density[i] + g.density[i - 1]) * (g.points[i] - g.points[i - 1]);
  return sum;
}

// Fuzz corpus: Gaussian mixtures with one to three components.
std::vector<SampleVector<double>> corpus(Index count, std::uint64_t seed) {
  RandomStream rng(RandomSeed{seed});
  std::vector<SampleVector<double>> out;
  for (Index c = 0; c < count; ++c) {
    const Index m = 20 + Index(rng.below(400));
    const auto parts = 1 + rng.below(3);
    Eigen::VectorXd v(m);
    for (Index i = 0; i < m; ++i) v[i] = 6.0 * double(rng.below(parts)) + rng.normal();
    out.push_back(SampleVector<double>::from_unsorted(v));
  }
  return out;
}

}  // namespace

TEST_CASE("kde of a single point is the normal curve") {
  const KdeGrid g = kde(sample({0}), 1.0);
  Index argmax = 0;
  g.density.maxCoeff(&argmax);
  CHECK(std::abs(g.points[argmax]) <= g.points.cwiseAbs().minCoeff() + 1e-12);
  for (Index i = 0; i < g.points.size(); ++i) {
    const double x = g.points[i];
    CHECK(g.density[i] == doctest::Approx(std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-12));
  }
  CHECK(g.points[0] == -4.0);
  CHECK(g.points[g.points.size() - 1] == doctest::Approx(4.0));
}

TEST_CASE("kde of a symmetric sample is symmetric") {
  for (double h : {0.1, 0.7, 3.0}) {
    const KdeGrid g = kde(sample({-1, 1}), h);
    const Index n = g.density.size();
    for (Index i = 0; i < n; ++i) CHECK(std::abs(g.density[i] - g.density[n - 1 - i]) <= 1e-12);
  }
}

TEST_CASE("kde integrates to one within 1%") {
  for (const auto& s : corpus(40, 1)) {
    for (double h : {0.05, 0.3, 2.0}) {
      for (KdeMethod method : {KdeMethod::direct, KdeMethod::binned}) {
        KdeOptions opts;
        opts.method = method;
        const double area = trapezoid(kde(s, h, opts));
        CHECK(area >= 0.99);
        CHECK(area <= 1.01);
      }
    }
  }
}

TEST_CASE("kde preconditions") {
  CHECK_THROWS_AS(kde(sample({1, 2}), 0.0), UsageError);
  CHECK_THROWS_AS(kde(sample({1, 2}), -1.0), UsageError);
  CHECK_THROWS_AS(kde(SampleVector<double>{}, 1.0), DataError);
  KdeOptions tiny;
  tiny.grid_size = 8;
  CHECK_THROWS_AS(kde(sample({1, 2}), 1.0, tiny), UsageError);
}

TEST_CASE("local maxima treat plateaus as one point") {
  const std::vector<double> v{0, 1, 1, 1, 0, 2, 2, 0, 3};
  CHECK(count_local_maxima(v) == 3);
  CHECK(count_local_maxima(std::vector<double>{5, 5, 5}) == 1);
  CHECK(count_local_maxima(std::vector<double>{1, 2, 3}) == 1);
}

TEST_CASE("mode count examples") {
  CHECK(count_modes(sample({-10, 10}), 0.5) == 2);
  CHECK(count_modes(sample({-10, 10}), 20.0) == 1);
  for (const auto& s : corpus(10, 2)) CHECK(count_modes(s, 1e6 * (s.max() - s.min())) == 1);
}

TEST_CASE("mode count is non-increasing in the bandwidth") {
  for (const auto& s : corpus(40, 3)) {
    const double range = s.max() - s.min();
    Index previous = std::numeric_limits<Index>::max();
    for (int step = 0; step <= 60; ++step) {
      const double h = range * 1e-4 * std::pow(10.0, step / 15.0);
      const Index modes = count_modes(s, h);
      CHECK(modes <= previous);
      previous = modes;
    }
  }
}

TEST_CASE("binned and direct kde agree on mode counts") {
  KdeOptions direct;
  direct.method = KdeMethod::direct;
  KdeOptions binned;
  binned.method = KdeMethod::binned;
  for (const auto& s : corpus(40, 4)) {
    const double h = critical_bandwidth(s, 1, 1e-3, direct);
    for (double f : {0.5, 0.9, 1.1, 2.0}) CHECK(count_modes(s, f * h, direct) == count_modes(s, f * h, binned));
  }
}

TEST_CASE("critical bandwidth of two points is half their separation") {
  const double tol = 1e-3;
  CHECK(std::abs(critical_bandwidth(sample({-10, 10}), 1, tol) - 10.0) <= tol * 10.0);
}

TEST_CASE("critical bandwidth brackets the mode transition") {
  const double tol = 1e-3;
  for (const auto& s : corpus(60, 5)) {
    const double h = critical_bandwidth(s, 1, tol);
    CHECK(count_modes(s, h * (1.0 + 2.0 * tol)) <= 1);
    CHECK(count_modes(s, h * (1.0 - 2.0 * tol)) > 1);
  }
}

TEST_CASE("critical bandwidth scales with the data") {
  const double tol = 1e-3;
  for (const auto& s : corpus(30, 6)) {
    const double h = critical_bandwidth(s, 1, tol);
    for (double a : {0.001, 3.7, 1000.0}) {
      const auto scaled = SampleVector<double>::from_sorted(a * s.values());
      CHECK(std::abs(critical_bandwidth(scaled, 1, tol) - a * h) <= 2.0 * tol * a * h);
    }
  }
}

TEST_CASE("critical bandwidth of a normal sample is below its spread") {
  RandomStream rng(RandomSeed{12});
  for (int t = 0; t < 20; ++t) {
    Eigen::VectorXd v(200);
    for (auto& x : v) x = rng.normal();
    CHECK(critical_bandwidth(SampleVector<double>::from_unsorted(v)) < 1.0);
  }
}

TEST_CASE("critical bandwidth preconditions") {
  CHECK_THROWS_AS(critical_bandwidth(sample({2, 2, 2})), DataError);
  CHECK_THROWS_AS(critical_bandwidth(sample({1})), DataError);
  CHECK_THROWS_AS(critical_bandwidth(sample({1, 2}), 1, 0.0), UsageError);
  CHECK_THROWS_AS(critical_bandwidth(sample({1, 2}), 1, 0.2), UsageError);
}

TEST_CASE("silverman p-value is reproducible and schedule independent") {
  const auto s = corpus(1, 7)[0];
  SilvermanOptions one;
  one.replicates = 200;
  one.threads = 1;
  SilvermanOptions many = one;
  many.threads = 4;
  const auto a = silverman_pvalue(s, RandomSeed{3}, one);
  const auto b = silverman_pvalue(s, RandomSeed{3}, many);
  CHECK(a.p_value == b.p_value);
  CHECK(a.h_crit == b.h_crit);
  CHECK(a.m == s.size());
  CHECK(a.replicates == 200);
  CHECK(a.null_modes == 1);
  CHECK(a.sample_checksum == s.checksum());
  CHECK((a.p_value > 0.0 && a.p_value <= 1.0));
}

TEST_CASE("silverman p-value is invariant under positive affine maps") {
  SilvermanOptions opts;
  opts.replicates = 300;
  for (const auto& s : corpus(5, 8)) {
    const double p = silverman_pvalue(s, RandomSeed{1}, opts).p_value;
    const auto mapped = SampleVector<double>::from_sorted((4.0 * s.values().array() + 16.0).matrix());
    CHECK(silverman_pvalue(mapped, RandomSeed{1}, opts).p_value == p);
  }
}

TEST_CASE("silverman preconditions") {
  CHECK_THROWS_AS(silverman_pvalue(sample({1, 2, 3}), RandomSeed{}), DataError);
  SilvermanOptions none;
  none.replicates = 0;
  CHECK_THROWS_AS(silverman_pvalue(sample({1, 2, 3, 4}), RandomSeed{}, none), UsageError);
}

TEST_CASE("silverman on bundled data") {
  SilvermanOptions opts;
  opts.replicates = 10000;
  CHECK(silverman_pvalue(pairwise_distances(bundled_dataset("iris")), RandomSeed{0}, opts).p_value < 1e-4);

  opts.replicates = 999;
  CHECK(silverman_pvalue(pairwise_distances(bundled_dataset("rivers")), RandomSeed{0}, opts).p_value < 0.05);

  opts.replicates = 2000;
  const double p = silverman_pvalue(pairwise_distances(bundled_dataset("attitude")), RandomSeed{0}, opts).p_value;
  CHECK(std::abs(p - 0.9449) <= 0.10);
}
