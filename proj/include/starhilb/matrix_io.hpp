#pragma once

// Plain-text matrix format:
//
//   <kappa_out> <kappa_in>
//   re,im re,im ...      (one line per row, kappa_in pairs)
//
// Values are written with 17 significant digits so a write/read cycle is
// bit-exact.

#include "starhilb/core.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace starhilb {

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& token) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (token.empty() || end != token.c_str() + token.size())
    throw IoError("matrix file: bad number '" + token + "'");
  return v;
}

}  // namespace detail

inline void write_matrix(std::ostream& os, const Matrix& m) {
  os << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << detail::format_double(m(i, j).real()) << ',' << detail::format_double(m(i, j).imag());
    }
    os << '\n';
  }
  if (!os) throw IoError("matrix file: write failed");
}

inline Matrix read_matrix(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw IoError("matrix file: missing header");
  std::istringstream hs(header);
  long rows = -1, cols = -1;
  std::string extra;
  if (!(hs >> rows >> cols) || (hs >> extra) || rows < 1 || cols < 1)
    throw IoError("matrix file: header must be 'kappa_out kappa_in'");
  Matrix m(rows, cols);
  std::string line;
  for (long i = 0; i < rows; ++i) {
    if (!std::getline(is, line)) throw IoError("matrix file: missing row " + std::to_string(i + 1));
    std::istringstream ls(line);
    std::string pair;
    long j = 0;
    while (ls >> pair) {
      if (j >= cols) throw IoError("matrix file: too many entries in row " + std::to_string(i + 1));
      const auto comma = pair.find(',');
      if (comma == std::string::npos) throw IoError("matrix file: entry '" + pair + "' is not re,im");
      m(i, j++) = Scalar(detail::parse_double(pair.substr(0, comma)),
                         detail::parse_double(pair.substr(comma + 1)));
    }
    if (j != cols) throw IoError("matrix file: too few entries in row " + std::to_string(i + 1));
  }
  return m;
}

inline void write_morphism(std::ostream& os, const Morphism& f) { write_matrix(os, f.matrix()); }

/// Reads a matrix and types it dom -> cod; ShapeMismatch if the header disagrees.
inline Morphism read_morphism(std::istream& is, const TruncObject& dom, const TruncObject& cod) {
  return Morphism(dom, cod, read_matrix(is));
}

inline void save_morphism(const std::string& path, const Morphism& f) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  write_morphism(os, f);
}

inline Morphism load_morphism(const std::string& path, const TruncObject& dom, const TruncObject& cod) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path + "'");
  return read_morphism(is, dom, cod);
}

}  // namespace starhilb
