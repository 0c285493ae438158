#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dasp::csv {

struct Table {
  std::vector<std::string> columns;
  Eigen::MatrixXd data;

  /// Index of a named column; throws MissingColumns.
  Eigen::Index column(const std::string& name) const;
};

/// Headed CSV with string cells, for long-format result files.
struct TextTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  Eigen::Index column(const std::string& name) const;
};

/// Numeric CSV. Lines starting with '#' and blank lines are skipped. Without
/// a header the columns are named c1, c2, ...
Table parse(std::istream& in, bool header);
Table read(const std::string& path, bool header);

TextTable parse_text(std::istream& in);
TextTable read_text(const std::string& path);

/// Parses one numeric cell ("nan" and "inf" included).
double to_number(const std::string& cell);

/// Shortest round-trip text for a double (17 significant digits at most).
std::string format(double v);

/// Dense matrix, one row per line, no header.
void write_matrix(std::ostream& out, const Eigen::MatrixXd& m);

/// Writes "# schema: dasp.<name>.v<version>" followed by the column header.
void write_header(std::ostream& out, const std::string& schema, const std::vector<std::string>& columns);

/// Joins already formatted cells with commas and ends the line.
void write_row(std::ostream& out, const std::vector<std::string>& cells);

}  // namespace dasp::csv
