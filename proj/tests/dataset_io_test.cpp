#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "clusterability/dataset_io.hpp"

using namespace clusterability;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

std::string error_of(const std::string& text, const IngestOptions& opts = {}) {
  try {
    parse_matrix(text, opts, "t.csv");
  } catch (const DataError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("bundled fixtures have their published shapes") {
  struct Shape {
    const char* name;
    Index n, d;
  };
  const Shape shapes[] = {{"iris", 150, 4},     {"swiss", 47, 6},           {"faithful", 272, 2},
                          {"rivers", 141, 1},   {"trees", 31, 3},           {"USJudgeRatings", 43, 12},
                          {"USArrests", 50, 4}, {"attitude", 30, 7},        {"cars", 50, 2}};
  REQUIRE(bundled_dataset_names().size() == 9);
  for (const auto& s : shapes) {
    CAPTURE(s.name);
    const DataMatrix m = bundled_dataset(s.name);
    CHECK(m.rows() == s.n);
    CHECK(m.cols() == s.d);
    CHECK(m.values().allFinite());
    CHECK(m.column_names().size() == std::size_t(s.d));
  }
}

TEST_CASE("iris drops the species column") {
  const auto names = bundled_dataset("iris").column_names();
  CHECK(names == std::vector<std::string>{"Sepal.Length", "Sepal.Width", "Petal.Length", "Petal.Width"});
}

TEST_CASE("bundled names are case-sensitive and unknown names list the roster") {
  CHECK_THROWS_AS(bundled_dataset("Iris"), UsageError);
  try {
    bundled_dataset("nope");
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("USJudgeRatings") != std::string::npos);
  }
}

TEST_CASE("every fixture round-trips through text") {
  for (const auto& name : bundled_dataset_names()) {
    CAPTURE(name);
    const DataMatrix m = bundled_dataset(name);
    std::ostringstream out;
    write_matrix(out, m);
    CHECK(parse_matrix(out.str()) == m);
  }
}

TEST_CASE("loading is idempotent") {
  const auto path = write_temp("clusterability_idem.csv", "a,b\n1,2\n3,4.25\n");
  CHECK(load_matrix(path) == load_matrix(path));
  std::filesystem::remove(path);
}

TEST_CASE("text columns are dropped with a warning or rejected by policy") {
  const std::string text = "x,name,y\n1,foo,2\n3,bar,4\n";
  std::vector<std::string> warnings;
  IngestOptions opts;
  opts.on_warning = [&](const std::string& w) { warnings.push_back(w); };
  const DataMatrix m = parse_matrix(text, opts);
  CHECK(m.cols() == 2);
  CHECK(m.column_names() == std::vector<std::string>{"x", "y"});
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("name") != std::string::npos);

  opts.non_numeric = NonNumericPolicy::error;
  try {
    parse_matrix(text, opts, "t.csv");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("name") != std::string::npos);
  }
}

TEST_CASE("header detection") {
  CHECK(parse_matrix("1,2\n3,4\n").rows() == 2);
  CHECK(parse_matrix("a,b\n3,4\n").rows() == 1);
  IngestOptions opts;
  opts.header = HeaderMode::present;
  CHECK(parse_matrix("1,2\n3,4\n", opts).rows() == 1);
}

TEST_CASE("quoting, CRLF and other delimiters") {
  const DataMatrix m = parse_matrix("\"a, b\";c\r\n\"1\";2\r\n3;4\r\n", [] {
    IngestOptions o;
    o.delimiter = ';';
    return o;
  }());
  CHECK(m.column_names() == std::vector<std::string>{"a, b", "c"});
  CHECK(m.values()(1, 0) == 3.0);
}

TEST_CASE("malformed input is reported with its position") {
  CHECK(error_of("a,b\n1,2\n3\n").find("line 3") != std::string::npos);
  CHECK(error_of("a,b\n1,NA\n3,4\n").find("line 2") != std::string::npos);
  CHECK(error_of("a,b\n1,inf\n") != "");
  CHECK(error_of("") != "");
  CHECK(error_of("a,b\n") != "");
  CHECK(error_of("name\nfoo\nbar\n") != "");
  CHECK_THROWS_AS(load_matrix("/nonexistent/file.csv"), DataError);
}

TEST_CASE("DataMatrix rejects empty and non-finite values") {
  CHECK_THROWS(DataMatrix(Eigen::MatrixXd(0, 2)));
  Eigen::MatrixXd bad(1, 1);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS(DataMatrix(bad));
}
