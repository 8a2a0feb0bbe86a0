#pragma once

#include "lrflow/grid.hpp"

#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

namespace lrflow {

/// One field on the n x n spatial grid. Values are stored with x1 contiguous,
/// which is row-major with one row per x2 index.
struct Snapshot {
  int nx = 0;
  double time = 0.0;
  std::string field;
  Field values;
};

/// Compact time label used in file names: 2 -> "2", 0.25 -> "0.25".
std::string format_time(double t);

/// Writes <dir>/snap_<field>_<t>.bin (raw little-endian float64) and the
/// matching .meta text file; returns the path of the .meta file.
std::filesystem::path write_snapshot(const std::filesystem::path& dir, const Snapshot& snap);

/// Reads a snapshot given the path of its .meta (or .bin) file.
Snapshot read_snapshot(const std::filesystem::path& path);

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

struct DiagnosticsRow {
  double time = 0.0;
  double mass = 0.0;
  double mom1 = 0.0;
  double mom2 = 0.0;
  double mass_drift = 0.0;
  double max_u = 0.0;
  double smin = kMissing;
  double err_rho = kMissing;
  double err_u = kMissing;
};

/// The exact header line of diagnostics.csv.
const char* diagnostics_header();

class DiagnosticsWriter {
 public:
  explicit DiagnosticsWriter(const std::filesystem::path& path);
  void write(const DiagnosticsRow& row);

 private:
  std::ofstream out_;
};

std::vector<DiagnosticsRow> read_diagnostics(const std::filesystem::path& path);

/// Shortest decimal text that reads back to the same double ("nan" for NaN).
std::string format_double(double x);

}  // namespace lrflow
