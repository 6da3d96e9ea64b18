#ifndef CLUSTERABILITY_DATASET_IO_HPP
#define CLUSTERABILITY_DATASET_IO_HPP

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "clusterability/core.hpp"

namespace clusterability {

/// An n x d table of finite observations: rows are points, columns features.
class DataMatrix {
 public:
  DataMatrix(Eigen::MatrixXd values, std::vector<std::string> column_names = {});

  const Eigen::MatrixXd& values() const { return values_; }
  Index rows() const { return values_.rows(); }
  Index cols() const { return values_.cols(); }

  /// Empty when the source carried no header.
  const std::vector<std::string>& column_names() const { return column_names_; }

  friend bool operator==(const DataMatrix& a, const DataMatrix& b) {
    return a.column_names_ == b.column_names_ &&
           a.values_.rows() == b.values_.rows() &&
           a.values_.cols() == b.values_.cols() && a.values_ == b.values_;
  }

 private:
  Eigen::MatrixXd values_;
  std::vector<std::string> column_names_;
};

enum class HeaderMode { auto_detect, present, absent };
enum class NonNumericPolicy { drop_column, error };

struct IngestOptions {
  char delimiter = ',';
  HeaderMode header = HeaderMode::auto_detect;
  NonNumericPolicy non_numeric = NonNumericPolicy::drop_column;
  /// Receives warnings such as the list of dropped columns. May be empty.
  std::function<void(const std::string&)> on_warning;
};

/// Parses delimited text (LF or CRLF, optional header, RFC 4180 quoting).
/// Throws DataError naming the offending row/column on malformed input.
DataMatrix parse_matrix(std::string_view text, const IngestOptions& opts = {},
                        std::string_view source = "<input>");

DataMatrix load_matrix(const std::filesystem::path& path,
                       const IngestOptions& opts = {});

/// Writes a matrix as delimited text with a header row (when names exist),
/// using shortest round-trip formatting so that parsing reproduces it exactly.
void write_matrix(std::ostream& out, const DataMatrix& data, char delimiter = ',');

/// Names of the bundled reference datasets, in roster order.
const std::vector<std::string>& bundled_dataset_names();

/// One of the bundled reference datasets (case-sensitive name).
/// Throws UsageError listing the valid names otherwise.
DataMatrix bundled_dataset(std::string_view name);

}  // namespace clusterability

#endif  // CLUSTERABILITY_DATASET_IO_HPP
