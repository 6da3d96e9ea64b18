#include <doctest.h>

#include <json.hpp>

#include "clusterability/pipeline.hpp"
#include "clusterability/random.hpp"

using namespace clusterability;

namespace {

DataMatrix blobs(Index per_blob, double separation, std::uint64_t seed) {
  RandomStream rng(RandomSeed{seed});
  Eigen::MatrixXd x(2 * per_blob, 2);
  for (Index i = 0; i < x.rows(); ++i) {
    x(i, 0) = rng.normal() + (i < per_blob ? 0.0 : separation);
    x(i, 1) = rng.normal();
  }
  return DataMatrix(x);
}

AssessOptions quick(std::uint64_t seed = 0) {
  AssessOptions opts;
  opts.seed = RandomSeed{seed};
  opts.replicates = 300;
  return opts;
}

}  // namespace

TEST_CASE("bundled datasets reach the published verdicts") {
  AssessOptions opts;
  const auto iris = assess_clusterability(bundled_dataset("iris"), opts, "iris");
  CHECK(*iris.verdict_dip == Verdict::clusterable);
  CHECK(*iris.verdict_silverman == Verdict::clusterable);

  const auto rivers = assess_clusterability(bundled_dataset("rivers"), opts, "rivers");
  CHECK(*rivers.verdict_dip == Verdict::unclusterable);
  CHECK(*rivers.verdict_silverman == Verdict::clusterable);

  for (const char* name : {"USArrests", "cars"}) {
    CAPTURE(name);
    const auto r = assess_clusterability(bundled_dataset(name), opts, name);
    CHECK(*r.verdict_dip == Verdict::unclusterable);
    CHECK(*r.verdict_silverman == Verdict::unclusterable);
  }
}

TEST_CASE("report shape and shared distance sample") {
  const DataMatrix data = blobs(20, 8.0, 1);
  const auto r = assess_clusterability(data, quick(), "blobs");
  CHECK(r.dataset_id == "blobs");
  CHECK(r.n == 40);
  CHECK(r.d == 2);
  CHECK(r.m == 40 * 39 / 2);
  REQUIRE(r.dip);
  REQUIRE(r.silverman);
  CHECK(r.dip->m == r.m);
  CHECK(r.silverman->m == r.m);
  CHECK(r.dip->sample_checksum == r.distance_checksum);
  CHECK(r.silverman->sample_checksum == r.distance_checksum);
  CHECK(r.dip->replicates == 300);
  CHECK(r.silverman->replicates == 300);
  CHECK(r.dip->seed == derive_substream(RandomSeed{0}, 0));
  CHECK(r.silverman->seed == derive_substream(RandomSeed{0}, 1));
}

TEST_CASE("verdicts follow the strict p < alpha rule") {
  CHECK(verdict_for(0.049, Significance(0.05)) == Verdict::clusterable);
  CHECK(verdict_for(0.05, Significance(0.05)) == Verdict::unclusterable);
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const DataMatrix data = blobs(15, double(seed) * 0.5, seed);
    for (double alpha : {0.01, 0.05, 0.2}) {
      AssessOptions opts = quick(seed);
      opts.alpha = Significance(alpha);
      const auto r = assess_clusterability(data, opts);
      CHECK((*r.verdict_dip == Verdict::clusterable) == (r.dip->p_value < alpha));
      CHECK((*r.verdict_silverman == Verdict::clusterable) == (r.silverman->p_value < alpha));
    }
  }
}

TEST_CASE("raising alpha never turns clusterable into unclusterable") {
  const double alphas[] = {0.001, 0.01, 0.05, 0.1, 0.25, 0.5, 0.9};
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const DataMatrix data = blobs(15, double(seed), 100 + seed);
    bool dip_seen = false;
    bool silverman_seen = false;
    for (double alpha : alphas) {
      AssessOptions opts = quick(seed);
      opts.alpha = Significance(alpha);
      const auto r = assess_clusterability(data, opts);
      const bool dip = *r.verdict_dip == Verdict::clusterable;
      const bool silverman = *r.verdict_silverman == Verdict::clusterable;
      CHECK((!dip_seen || dip));
      CHECK((!silverman_seen || silverman));
      dip_seen = dip_seen || dip;
      silverman_seen = silverman_seen || silverman;
    }
  }
}

TEST_CASE("reports are deterministic and thread independent") {
  const DataMatrix data = blobs(25, 3.0, 9);
  AssessOptions opts = quick(77);
  opts.threads = 1;
  const std::string first = report_to_json(assess_clusterability(data, opts, "x"));
  CHECK(report_to_json(assess_clusterability(data, opts, "x")) == first);
  opts.threads = 3;
  CHECK(report_to_json(assess_clusterability(data, opts, "x")) == first);
  CHECK(report_to_text(assess_clusterability(data, opts, "x")) == report_to_text(assess_clusterability(data, opts, "x")));
}

TEST_CASE("json report field order") {
  const auto r = assess_clusterability(blobs(10, 5.0, 2), quick(), "blobs");
  const auto doc = nlohmann::ordered_json::parse(report_to_json(r));
  std::vector<std::string> keys;
  for (const auto& [key, value] : doc.items()) keys.push_back(key);
  CHECK(keys == std::vector<std::string>{"schema_version", "dataset_id", "n", "d", "m", "alpha", "dip",
                                         "silverman", "verdict_dip", "verdict_silverman", "seed", "timing"});
  CHECK(doc["schema_version"] == kReportSchemaVersion);
  CHECK(doc["timing"].is_null());
  CHECK(doc["dip"]["p_value"].get<double>() == r.dip->p_value);
  CHECK(nlohmann::json::parse(report_to_json(r, true))["timing"].is_object());
}

TEST_CASE("a single selected test leaves the other empty") {
  AssessOptions opts = quick();
  opts.tests = parse_test_selection("silverman");
  const auto r = assess_clusterability(blobs(10, 5.0, 3), opts);
  CHECK(!r.dip);
  CHECK(!r.verdict_dip);
  CHECK(r.silverman);
  const auto doc = nlohmann::json::parse(report_to_json(r));
  CHECK(doc["dip"].is_null());
  CHECK(doc["verdict_dip"].is_null());
}

TEST_CASE("text report") {
  const auto r = assess_clusterability(blobs(10, 20.0, 4), quick(), "blobs");
  const std::string text = report_to_text(r);
  CHECK(text.rfind("dip: p=", 0) == 0);
  CHECK(text.find("\nsilverman: p=") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
}

TEST_CASE("selection parsing and size preconditions") {
  CHECK(parse_test_selection("dip").dip);
  CHECK(!parse_test_selection("dip").silverman);
  CHECK(parse_test_selection("silverman,dip").any());
  CHECK_THROWS_AS(parse_test_selection(""), UsageError);
  CHECK_THROWS_AS(parse_test_selection("dip,kmeans"), UsageError);
  CHECK_THROWS_AS(Significance(0.0), UsageError);
  CHECK_THROWS_AS(Significance(1.0), UsageError);

  Eigen::MatrixXd three(3, 1);
  three << 0, 1, 5;
  CHECK_THROWS_AS(assess_clusterability(DataMatrix(three), quick()), DataError);
  AssessOptions none = quick();
  none.tests = TestSelection{false, false};
  CHECK_THROWS_AS(assess_clusterability(blobs(5, 1.0, 1), none), UsageError);
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345.678, 0.0}) CHECK(std::stod(format_number(v)) == v);
  CHECK(format_number(0.5) == "0.5");
}
