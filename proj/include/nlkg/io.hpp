#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nlkg/experiments.hpp"

namespace nlkg {

/// Raw field dump: text header line "NLKG1 <points> <length> <time>" followed by
/// little-endian doubles, u1 as interleaved (re, im) pairs then u2 likewise.
void write_field(const std::filesystem::path& path, const Field& w, double time);

struct FieldDump {
  Field field;
  double time = 0.0;
};
FieldDump read_field(const std::filesystem::path& path);

struct Table {
  std::vector<std::string> columns;
  std::vector<RealVector> rows;
};

/// CSV with 17 significant digits.
void write_csv(const std::filesystem::path& path, const Table& table);
Table read_csv(const std::filesystem::path& path);

/// Columns t, E, Q, P, then E_j, Q_j, P_j per soliton (cutoff order), S_localized, error.
Table diagnostics_table(std::span<const DiagnosticsRow> rows);

void write_text(const std::filesystem::path& path, const std::string& text);

/// Explicit directory if given, otherwise $NLKG_OUT_DIR/<name>, otherwise ./nlkg_out/<name>.
/// The directory is created.
std::filesystem::path resolve_output_dir(const std::string& explicit_dir, const std::string& name);

}  // namespace nlkg
