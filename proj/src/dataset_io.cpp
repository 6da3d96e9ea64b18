#include "clusterability/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "embedded_data.hpp"

namespace clusterability {

DataMatrix::DataMatrix(Eigen::MatrixXd values, std::vector<std::string> column_names)
    : values_(std::move(values)), column_names_(std::move(column_names)) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw DataError("a data matrix needs at least one row and one column");
  }
  if (!column_names_.empty() &&
      static_cast<Index>(column_names_.size()) != values_.cols()) {
    throw UsageError("column name count does not match column count");
  }
  if (!values_.allFinite()) {
    throw DataError("data matrix entries must be finite");
  }
}

namespace {

struct Record {
  std::vector<std::string> fields;
  std::size_t line = 0;  // 1-based line where the record starts
};

std::vector<Record> split_records(std::string_view text, char delimiter,
                                  std::string_view source) {
  std::vector<Record> records;
  Record current;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;
  current.line = 1;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    const bool blank = current.fields.size() == 1 && current.fields[0].empty();
    if (!blank) records.push_back(std::move(current));
    current = Record{};
    current.line = line;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == delimiter) {
      end_field();
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      continue;
    } else if (c == '\n') {
      ++line;
      end_record();
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (in_quotes) {
    throw DataError(std::string(source) + ": unterminated quoted field starting on line " +
                    std::to_string(current.line));
  }
  if (field_started || !field.empty() || !current.fields.empty()) end_record();
  return records;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

bool is_missing(std::string_view s) {
  s = trim(s);
  return s.empty() || s == "NA";
}

// Parses a complete numeric token; std::nullopt when the token is not a number.
std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

bool column_numeric(const std::vector<Record>& records, std::size_t first_row,
                    std::size_t col) {
  bool any = false;
  for (std::size_t r = first_row; r < records.size(); ++r) {
    const auto& f = records[r].fields[col];
    if (is_missing(f)) continue;
    if (!parse_number(f)) return false;
    any = true;
  }
  return any;
}

bool detect_header(const std::vector<Record>& records) {
  if (records.size() < 2) {
    return std::ranges::any_of(records.front().fields,
                               [](const auto& f) { return !parse_number(f); });
  }
  for (std::size_t c = 0; c < records.front().fields.size(); ++c) {
    if (!parse_number(records.front().fields[c]) && column_numeric(records, 1, c)) {
      return true;
    }
  }
  return false;
}

std::string column_label(const std::vector<std::string>& header, std::size_t c) {
  std::string label = "column " + std::to_string(c + 1);
  if (!header.empty()) label += " ('" + header[c] + "')";
  return label;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

DataMatrix parse_matrix(std::string_view text, const IngestOptions& opts,
                        std::string_view source) {
  if (opts.delimiter == '"' || opts.delimiter == '\n' || opts.delimiter == '\r' ||
      (static_cast<unsigned char>(opts.delimiter) < 0x20 && opts.delimiter != '\t')) {
    throw UsageError("delimiter must be a single printable character");
  }
  const std::string src(source);
  const auto records = split_records(text, opts.delimiter, source);
  if (records.empty()) throw DataError(src + ": no rows");

  const std::size_t width = records.front().fields.size();
  for (const auto& rec : records) {
    if (rec.fields.size() != width) {
      throw DataError(src + ": line " + std::to_string(rec.line) + " has " +
                      std::to_string(rec.fields.size()) + " fields, expected " +
                      std::to_string(width));
    }
  }

  bool has_header = false;
  switch (opts.header) {
    case HeaderMode::present: has_header = true; break;
    case HeaderMode::absent: has_header = false; break;
    case HeaderMode::auto_detect: has_header = detect_header(records); break;
  }
  const std::size_t first_row = has_header ? 1 : 0;
  if (records.size() <= first_row) throw DataError(src + ": no data rows");

  std::vector<std::string> header;
  if (has_header) {
    for (const auto& f : records.front().fields) header.emplace_back(trim(f));
  }

  std::vector<std::size_t> kept;
  std::vector<std::string> dropped;
  for (std::size_t c = 0; c < width; ++c) {
    if (column_numeric(records, first_row, c)) {
      kept.push_back(c);
      continue;
    }
    if (opts.non_numeric == NonNumericPolicy::error) {
      throw DataError(src + ": " + column_label(header, c) + " is not numeric");
    }
    dropped.push_back(has_header ? header[c] : "column " + std::to_string(c + 1));
  }
  if (kept.empty()) throw DataError(src + ": no numeric columns");
  if (!dropped.empty() && opts.on_warning) {
    std::string msg = src + ": dropped non-numeric column(s):";
    for (const auto& d : dropped) msg += " " + d;
    opts.on_warning(msg);
  }

  const Index n = static_cast<Index>(records.size() - first_row);
  Eigen::MatrixXd values(n, static_cast<Index>(kept.size()));
  for (Index i = 0; i < n; ++i) {
    const auto& rec = records[first_row + static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < kept.size(); ++k) {
      const auto& f = rec.fields[kept[k]];
      const auto where = "line " + std::to_string(rec.line) + ", " + column_label(header, kept[k]);
      if (is_missing(f)) throw DataError(src + ": missing value at " + where);
      const double v = *parse_number(f);
      if (!std::isfinite(v)) throw DataError(src + ": non-finite value at " + where);
      values(i, static_cast<Index>(k)) = v;
    }
  }

  std::vector<std::string> names;
  if (has_header) {
    for (auto c : kept) names.push_back(header[c]);
  }
  return DataMatrix(std::move(values), std::move(names));
}

DataMatrix load_matrix(const std::filesystem::path& path, const IngestOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw DataError("failed reading '" + path.string() + "'");
  return parse_matrix(buffer.str(), opts, path.string());
}

void write_matrix(std::ostream& out, const DataMatrix& data, char delimiter) {
  const auto& names = data.column_names();
  auto quoted = [&](const std::string& s) {
    if (s.find_first_of(std::string{delimiter, '"', '\n', '\r'}) == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + '"';
  };
  if (!names.empty()) {
    for (std::size_t c = 0; c < names.size(); ++c) {
      if (c) out << delimiter;
      out << quoted(names[c]);
    }
    out << '\n';
  }
  for (Index i = 0; i < data.rows(); ++i) {
    for (Index j = 0; j < data.cols(); ++j) {
      if (j) out << delimiter;
      out << format_double(data.values()(i, j));
    }
    out << '\n';
  }
}

const std::vector<std::string>& bundled_dataset_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& f : detail::kBundledFiles) v.emplace_back(f.name);
    return v;
  }();
  return names;
}

DataMatrix bundled_dataset(std::string_view name) {
  for (const auto& f : detail::kBundledFiles) {
    if (f.name == name) {
      IngestOptions opts;
      opts.header = HeaderMode::present;
      return parse_matrix(f.content, opts, f.name);
    }
  }
  std::string msg = "unknown bundled dataset '" + std::string(name) + "'; valid names:";
  for (const auto& n : bundled_dataset_names()) msg += " " + n;
  throw UsageError(msg);
}

}  // namespace clusterability
