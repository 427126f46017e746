#include "optdes/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <vector>

namespace optdes {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& token) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    throw std::invalid_argument("cannot parse number '" + token + "'");
  return v;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim surrounding whitespace
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    fields.push_back(b == std::string::npos ? ""
                                            : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool parses_as_double(const std::string& token) {
  double v = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  return res.ec == std::errc() && res.ptr == token.data() + token.size();
}

}  // namespace

Design read_design_csv(const std::string& path, int expected_k) {
  if (expected_k < 1)
    throw std::invalid_argument("read_design_csv: factor count must be >= 1");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open design file '" + path + "'");

  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_csv_line(line);

    // An optional x1,...,xK header: a first line whose leading field is not
    // numeric is skipped.
    if (first_content_line && !fields.empty() && !parses_as_double(fields[0])) {
      first_content_line = false;
      continue;
    }
    first_content_line = false;

    if (static_cast<int>(fields.size()) != expected_k)
      throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                               ": expected " + std::to_string(expected_k) +
                               " columns, found " +
                               std::to_string(fields.size()));
    std::vector<double> row(expected_k);
    for (int j = 0; j < expected_k; ++j) {
      double v;
      try {
        v = parse_double(fields[j]);
      } catch (const std::exception&) {
        throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                 ", column " + std::to_string(j + 1) +
                                 ": cannot parse value '" + fields[j] + "'");
      }
      if (!(v >= -1.0 && v <= 1.0))
        throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                 ", column " + std::to_string(j + 1) +
                                 ": value " + fields[j] +
                                 " outside [-1,1]");
      row[j] = v;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty())
    throw std::runtime_error(path + ": no data rows");

  Eigen::MatrixXd pts(static_cast<int>(rows.size()), expected_k);
  for (int i = 0; i < pts.rows(); ++i)
    for (int j = 0; j < expected_k; ++j) pts(i, j) = rows[i][j];
  return Design{std::move(pts)};
}

void write_design_csv(const std::string& path, const Design& d) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write design file '" + path + "'");
  for (int j = 0; j < d.factors(); ++j) {
    if (j) out << ',';
    out << 'x' << (j + 1);
  }
  out << '\n';
  for (int i = 0; i < d.runs(); ++i) {
    for (int j = 0; j < d.factors(); ++j) {
      if (j) out << ',';
      out << format_double(d.points(i, j));
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace optdes
