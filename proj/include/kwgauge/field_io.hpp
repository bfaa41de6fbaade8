#pragma once

// Field fixtures: a text header describing the grid, followed by the matrix
// entries either as CSV rows or as raw little-endian doubles. Numbers in text
// use shortest round-trip formatting, so both encodings are bit-exact.

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "kwgauge/forms.hpp"

namespace kwg {

enum class FieldEncoding { Csv, Binary };

namespace detail {

inline const char* axis_kind_name(AxisKind k) {
  switch (k) {
    case AxisKind::Periodic: return "periodic";
    case AxisKind::Interval: return "interval";
    case AxisKind::Graded: return "graded";
  }
  return "?";
}

inline AxisKind parse_axis_kind(const std::string& s) {
  if (s == "periodic") return AxisKind::Periodic;
  if (s == "interval") return AxisKind::Interval;
  if (s == "graded") return AxisKind::Graded;
  throw io_error("field fixture: unknown axis kind '" + s + "'");
}

inline std::string expect_token(std::istream& is, const char* what) {
  std::string tok;
  if (!(is >> tok)) throw io_error(std::string("field fixture: missing ") + what);
  return tok;
}

inline int parse_int(const std::string& s) {
  int v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw io_error("malformed integer '" + s + "'");
  return v;
}

}  // namespace detail

inline void write_field(std::ostream& os, const LatticeField& f, FieldEncoding enc = FieldEncoding::Csv) {
  static_assert(std::endian::native == std::endian::little, "binary fixtures assume little-endian hosts");
  const auto& g = f.grid();
  os << "kwgfield 1 " << (enc == FieldEncoding::Csv ? "csv" : "binary") << " dim " << g.dim() << " degree "
     << f.degree() << " rank " << f.rank() << '\n';
  for (const auto& a : g.axes())
    os << "axis " << detail::axis_kind_name(a.kind) << ' ' << format_double(a.lo) << ' ' << format_double(a.hi)
       << ' ' << a.points << ' ' << format_double(a.ratio) << '\n';
  os << "data\n";
  const int n = f.rank();
  if (enc == FieldEncoding::Csv) {
    for (std::size_t e = 0; e < f.entries(); ++e) {
      const auto m = f.entry(e);
      for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r) {
          if (r || c) os << ',';
          os << format_double(m(r, c).real()) << ',' << format_double(m(r, c).imag());
        }
      os << '\n';
    }
  } else {
    // std::complex<double> is layout-compatible with double[2].
    os.write(reinterpret_cast<const char*>(f.data().data()),
             static_cast<std::streamsize>(f.data().size() * sizeof(cplx)));
  }
  if (!os) throw io_error("field fixture: write failed");
}

inline LatticeField read_field(std::istream& is) {
  using detail::expect_token;
  if (expect_token(is, "magic") != "kwgfield") throw io_error("field fixture: bad magic");
  if (expect_token(is, "version") != "1") throw io_error("field fixture: unsupported version");
  const std::string enc = expect_token(is, "encoding");
  if (enc != "csv" && enc != "binary") throw io_error("field fixture: unknown encoding");
  auto keyed = [&](const char* key) {
    if (expect_token(is, key) != key) throw io_error(std::string("field fixture: expected ") + key);
    return detail::parse_int(expect_token(is, key));
  };
  const int dim = keyed("dim"), degree = keyed("degree"), rank = keyed("rank");
  if (dim < 1 || dim > 4) throw io_error("field fixture: bad dimension");
  std::vector<Axis> axes;
  for (int d = 0; d < dim; ++d) {
    if (expect_token(is, "axis") != "axis") throw io_error("field fixture: expected axis line");
    Axis a;
    a.kind = detail::parse_axis_kind(expect_token(is, "axis kind"));
    a.lo = parse_double(expect_token(is, "axis lo"));
    a.hi = parse_double(expect_token(is, "axis hi"));
    a.points = detail::parse_int(expect_token(is, "axis points"));
    a.ratio = parse_double(expect_token(is, "axis ratio"));
    axes.push_back(a);
  }
  if (expect_token(is, "data") != "data") throw io_error("field fixture: expected data marker");
  is.get();  // newline after the marker

  LatticeField f;
  try {
    f = LatticeField(make_grid(axes), degree, rank);
  } catch (const Error& e) {
    throw io_error(std::string("field fixture: ") + e.what());
  }
  const int n = rank;
  if (enc == "csv") {
    std::string line;
    for (std::size_t e = 0; e < f.entries(); ++e) {
      auto m = f.entry(e);
      if (!std::getline(is, line)) throw io_error("field fixture: truncated data");
      std::stringstream row(line);
      std::string cell;
      std::vector<double> vals;
      while (std::getline(row, cell, ',')) vals.push_back(parse_double(cell));
      if (vals.size() != static_cast<std::size_t>(2 * n * n)) throw io_error("field fixture: bad row width");
      std::size_t k = 0;
      for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r, k += 2) m(r, c) = cplx(vals[k], vals[k + 1]);
    }
  } else {
    const auto bytes = static_cast<std::streamsize>(f.data().size() * sizeof(cplx));
    is.read(reinterpret_cast<char*>(f.data().data()), bytes);
    if (is.gcount() != bytes) throw io_error("field fixture: truncated data");
  }
  return f;
}

inline void save_field(const std::string& path, const LatticeField& f, FieldEncoding enc = FieldEncoding::Csv) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw io_error("cannot open '" + path + "' for writing");
  write_field(os, f, enc);
}

inline LatticeField load_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw io_error("cannot open '" + path + "'");
  return read_field(is);
}

}  // namespace kwg
