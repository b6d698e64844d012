#include "nlkg/io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "nlkg/errors.hpp"

namespace nlkg {

namespace {

constexpr const char* kMagic = "NLKG1";

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int b = 0; b < 8; ++b) r |= ((v >> (8 * b)) & 0xffu) << (8 * (7 - b));
    return r;
  } else {
    return v;
  }
}

void put_block(std::ostream& out, const ComplexVector& u) {
  std::vector<std::uint64_t> buf;
  buf.reserve(2 * u.size());
  for (const auto& z : u) {
    buf.push_back(to_little(std::bit_cast<std::uint64_t>(z.real())));
    buf.push_back(to_little(std::bit_cast<std::uint64_t>(z.imag())));
  }
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(std::uint64_t)));
}

bool get_block(std::istream& in, ComplexVector& u) {
  std::vector<std::uint64_t> buf(2 * u.size());
  const auto bytes = static_cast<std::streamsize>(buf.size() * sizeof(std::uint64_t));
  in.read(reinterpret_cast<char*>(buf.data()), bytes);
  if (in.gcount() != bytes) return false;
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] = Complex(std::bit_cast<double>(to_little(buf[2 * i])),
                   std::bit_cast<double>(to_little(buf[2 * i + 1])));
  }
  return true;
}

std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

}  // namespace

void write_field(const std::filesystem::path& path, const Field& w, double time) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::io, "cannot open " + path.string() + " for writing");
  out << kMagic << ' ' << w.grid.points() << ' ' << format_double(w.grid.length()) << ' '
      << format_double(time) << '\n';
  put_block(out, w.u1);
  put_block(out, w.u2);
  if (!out) fail(ErrorKind::io, "write failed: " + path.string());
}

FieldDump read_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open " + path.string());
  std::string header;
  if (!std::getline(in, header)) fail(ErrorKind::io, path.string() + ": missing header");
  std::istringstream hs(header);
  std::string magic;
  std::size_t points = 0;
  double length = 0.0, time = 0.0;
  hs >> magic;
  if (magic != kMagic) {
    if (magic.rfind("NLKG", 0) == 0) {
      fail(ErrorKind::io, path.string() + ": unsupported version '" + magic + "' (expected " + kMagic + ")");
    }
    fail(ErrorKind::io, path.string() + ": header mismatch, not a field dump");
  }
  if (!(hs >> points >> length >> time) || points < 2 || !(length > 0.0)) {
    fail(ErrorKind::io, path.string() + ": malformed header");
  }
  Field w{Grid(length, points)};
  if (!get_block(in, w.u1) || !get_block(in, w.u2)) {
    fail(ErrorKind::io, path.string() + ": truncated payload");
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    fail(ErrorKind::io, path.string() + ": trailing bytes after payload");
  }
  return {std::move(w), time};
}

void write_csv(const std::filesystem::path& path, const Table& table) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorKind::io, "cannot open " + path.string() + " for writing");
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out << (c ? "," : "") << table.columns[c];
  }
  out << '\n' << std::setprecision(17);
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) fail(ErrorKind::dimension, "write_csv: ragged row");
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
    out << '\n';
  }
  if (!out) fail(ErrorKind::io, "write failed: " + path.string());
}

Table read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open " + path.string());
  Table t;
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::io, path.string() + ": empty csv");
  {
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) t.columns.push_back(cell);
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    RealVector row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        fail(ErrorKind::io, path.string() + ": bad number on line " + std::to_string(line_no));
      }
      row.push_back(v);
    }
    if (row.size() != t.columns.size()) {
      fail(ErrorKind::io, path.string() + ": wrong column count on line " + std::to_string(line_no));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table diagnostics_table(std::span<const DiagnosticsRow> rows) {
  Table t;
  const std::size_t count = rows.empty() ? 0 : rows.front().local.energy.size();
  t.columns = {"t", "E", "Q", "P"};
  for (std::size_t j = 1; j <= count; ++j) {
    const auto s = std::to_string(j);
    t.columns.insert(t.columns.end(), {"E_" + s, "Q_" + s, "P_" + s});
  }
  t.columns.insert(t.columns.end(), {"S_localized", "error"});
  for (const auto& r : rows) {
    RealVector row{r.t, r.energy, r.charge, r.momentum};
    for (std::size_t j = 0; j < count; ++j) {
      row.insert(row.end(), {r.local.energy[j], r.local.charge[j], r.local.momentum[j]});
    }
    row.push_back(r.local.action);
    row.push_back(r.error);
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorKind::io, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) fail(ErrorKind::io, "write failed: " + path.string());
}

std::filesystem::path resolve_output_dir(const std::string& explicit_dir, const std::string& name) {
  std::filesystem::path dir;
  if (!explicit_dir.empty()) {
    dir = explicit_dir;
  } else if (const char* env = std::getenv("NLKG_OUT_DIR"); env && *env) {
    dir = std::filesystem::path(env) / name;
  } else {
    dir = std::filesystem::path("nlkg_out") / name;
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorKind::io, "cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

}  // namespace nlkg
