#ifndef MAXREG_IO_HPP
#define MAXREG_IO_HPP

#include "maxreg/timegrid.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace maxreg {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::vector<double> parse_csv_line(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      throw IoError("csv: not a number: '" + cell + "'");
    }
    while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
    if (used != cell.size()) throw IoError("csv: not a number: '" + cell + "'");
    out.push_back(v);
  }
  return out;
}

inline bool is_header(const std::string& line) {
  return !line.empty() && (std::isalpha(static_cast<unsigned char>(line[0])) || line[0] == '#');
}

}  // namespace detail

/// One line per row: re,im,re,im,... (2 columns per entry).
inline void write_matrix_csv(std::ostream& os, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << detail::fmt_double(m(i, j).real()) << ',' << detail::fmt_double(m(i, j).imag());
    }
    os << '\n';
  }
}

inline Matrix read_matrix_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r" || detail::is_header(line)) continue;
    rows.push_back(detail::parse_csv_line(line));
  }
  if (rows.empty()) throw IoError("matrix csv: no rows");
  const auto cols = rows.front().size();
  if (cols % 2 != 0 || cols / 2 != rows.size()) throw IoError("matrix csv: expected d rows of 2d numbers");
  const auto d = static_cast<Eigen::Index>(rows.size());
  Matrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (rows[i].size() != cols) throw IoError("matrix csv: ragged rows");
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = Complex(rows[i][2 * j], rows[i][2 * j + 1]);
  }
  return m;
}

inline Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_matrix_csv(in);
}

/// Header "t,re0,im0,re1,im1,...", then one line per node.
inline void write_grid_function_csv(std::ostream& os, const GridFunction& f) {
  os << 't';
  for (int i = 0; i < f.dim(); ++i) os << ",re" << i << ",im" << i;
  os << '\n';
  for (int k = 0; k < f.size(); ++k) {
    os << detail::fmt_double(f.grid().node(k));
    for (int i = 0; i < f.dim(); ++i)
      os << ',' << detail::fmt_double(f.value(k)(i).real()) << ',' << detail::fmt_double(f.value(k)(i).imag());
    os << '\n';
  }
}

/// Reads values back onto `grid`; the t column must match its nodes to relative 1e-12.
inline GridFunction read_grid_function_csv(std::istream& is, const TimeGrid& grid) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r" || detail::is_header(line)) continue;
    rows.push_back(detail::parse_csv_line(line));
  }
  if (static_cast<int>(rows.size()) != grid.size()) throw IoError("grid function csv: node count mismatch");
  const auto cols = rows.front().size();
  if (cols < 3 || (cols - 1) % 2 != 0) throw IoError("grid function csv: expected t then re/im pairs");
  const int d = static_cast<int>((cols - 1) / 2);
  GridFunction f(grid, d);
  for (int k = 0; k < grid.size(); ++k) {
    const auto& r = rows[k];
    if (r.size() != cols) throw IoError("grid function csv: ragged rows");
    if (std::abs(r[0] - grid.node(k)) > 1e-12 * grid.node(k)) throw IoError("grid function csv: node mismatch");
    for (int i = 0; i < d; ++i) f.value(k)(i) = Complex(r[1 + 2 * i], r[2 + 2 * i]);
  }
  return f;
}

}  // namespace maxreg

#endif  // MAXREG_IO_HPP
