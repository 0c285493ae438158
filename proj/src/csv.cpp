#include "dasp/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "dasp/error.hpp"

namespace dasp::csv {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double to_double(const std::string& cell, long line_no) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = first + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (cell.empty() || ec != std::errc() || ptr != last) {
    throw Error(ErrorKind::InvalidParameter,
                "line " + std::to_string(line_no) + ": '" + cell + "' is not a number");
  }
  return v;
}

}  // namespace

Eigen::Index Table::column(const std::string& name) const {
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (columns[k] == name) return Eigen::Index(k);
  }
  throw Error(ErrorKind::MissingColumns, "no column named '" + name + "'");
}

Eigen::Index TextTable::column(const std::string& name) const {
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (columns[k] == name) return Eigen::Index(k);
  }
  throw Error(ErrorKind::MissingColumns, "no column named '" + name + "'");
}

TextTable parse_text(std::istream& in) {
  TextTable t;
  std::string line;
  long line_no = 0;
  bool header_done = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    auto cells = split(s);
    if (!header_done) {
      t.columns = std::move(cells);
      header_done = true;
      continue;
    }
    if (cells.size() != t.columns.size()) {
      throw Error(ErrorKind::InvalidParameter, "line " + std::to_string(line_no) + ": expected " +
                                                   std::to_string(t.columns.size()) + " fields, found " +
                                                   std::to_string(cells.size()));
    }
    t.rows.push_back(std::move(cells));
  }
  if (!header_done) throw Error(ErrorKind::MissingColumns, "CSV has no header");
  return t;
}

TextTable read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  return parse_text(in);
}

double to_number(const std::string& cell) { return to_double(cell, 0); }

Table parse(std::istream& in, bool header) {
  Table t;
  std::vector<std::vector<double>> rows;
  std::string line;
  long line_no = 0;
  bool header_done = !header;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    auto cells = split(s);
    if (!header_done) {
      t.columns = cells;
      header_done = true;
      continue;
    }
    if (t.columns.empty()) {
      for (std::size_t k = 0; k < cells.size(); ++k) t.columns.push_back("c" + std::to_string(k + 1));
    }
    if (cells.size() != t.columns.size()) {
      throw Error(ErrorKind::InvalidParameter, "line " + std::to_string(line_no) + ": expected " +
                                                   std::to_string(t.columns.size()) + " fields, found " +
                                                   std::to_string(cells.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(to_double(c, line_no));
    rows.push_back(std::move(row));
  }
  t.data.resize(Eigen::Index(rows.size()), Eigen::Index(t.columns.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) t.data(Eigen::Index(i), Eigen::Index(j)) = rows[i][j];
  }
  return t;
}

Table read(const std::string& path, bool header) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  return parse(in, header);
}

std::string format(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format(m(i, j));
    }
    out << '\n';
  }
}

void write_header(std::ostream& out, const std::string& schema, const std::vector<std::string>& columns) {
  out << "# schema: dasp." << schema << ".v1\n";
  write_row(out, columns);
}

void write_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) out << ',';
    out << cells[k];
  }
  out << '\n';
}

}  // namespace dasp::csv
