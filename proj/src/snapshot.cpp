#include "lrflow/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <map>
#include <sstream>
#include <stdexcept>

namespace lrflow {

namespace fs = std::filesystem;

std::string format_time(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", t);
  std::string s(buf);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

namespace {

std::uint64_t byteswap64(std::uint64_t v) {
  std::uint64_t out = 0;
  for (int i = 0; i < 8; ++i) out |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
  return out;
}

std::string stem(const Snapshot& s) { return "snap_" + s.field + "_" + format_time(s.time); }

}  // namespace

fs::path write_snapshot(const fs::path& dir, const Snapshot& snap) {
  if (snap.values.size() != static_cast<Eigen::Index>(snap.nx) * snap.nx)
    throw std::invalid_argument("write_snapshot: payload does not hold nx^2 values");
  fs::create_directories(dir);
  const fs::path bin = dir / (stem(snap) + ".bin");
  const fs::path meta = dir / (stem(snap) + ".meta");

  std::ofstream b(bin, std::ios::binary);
  if (!b) throw std::runtime_error("cannot open " + bin.string() + " for writing");
  for (Eigen::Index i = 0; i < snap.values.size(); ++i) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(snap.values[i]);
    if constexpr (std::endian::native == std::endian::big) bits = byteswap64(bits);
    char bytes[8];
    std::memcpy(bytes, &bits, 8);
    b.write(bytes, 8);
  }
  if (!b) throw std::runtime_error("failed writing " + bin.string());

  std::ofstream m(meta);
  if (!m) throw std::runtime_error("cannot open " + meta.string() + " for writing");
  m << "nx = " << snap.nx << "\n"
    << "time = " << format_double(snap.time) << "\n"
    << "field = " << snap.field << "\n"
    << "dtype = float64\n"
    << "byte_order = little\n"
    << "layout = row_major\n"
    << "rows = x2\n"
    << "data = " << bin.filename().string() << "\n";
  if (!m) throw std::runtime_error("failed writing " + meta.string());
  return meta;
}

Snapshot read_snapshot(const fs::path& path) {
  fs::path meta = path;
  if (meta.extension() == ".bin") meta.replace_extension(".meta");
  std::ifstream in(meta);
  if (!in) throw std::runtime_error("cannot open snapshot header " + meta.string());

  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("malformed line in " + meta.string() + ": " + line);
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  auto need = [&](const char* key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw std::runtime_error(meta.string() + ": missing key '" + key + "'");
    return it->second;
  };
  if (need("dtype") != "float64") throw std::runtime_error(meta.string() + ": unsupported dtype '" + kv["dtype"] + "'");
  const std::string order = need("byte_order");
  if (order != "little" && order != "big")
    throw std::runtime_error(meta.string() + ": bad byte_order '" + order + "'");

  Snapshot s;
  try {
    s.nx = std::stoi(need("nx"));
    s.time = std::stod(need("time"));
  } catch (const std::logic_error&) {
    throw std::runtime_error(meta.string() + ": nx or time is not a number");
  }
  if (s.nx <= 0) throw std::runtime_error(meta.string() + ": bad key 'nx'");
  s.field = need("field");

  fs::path bin = meta;
  bin.replace_extension(".bin");
  if (kv.count("data")) bin = meta.parent_path() / kv["data"];
  std::ifstream b(bin, std::ios::binary);
  if (!b) throw std::runtime_error("cannot open snapshot payload " + bin.string());
  const Eigen::Index count = static_cast<Eigen::Index>(s.nx) * s.nx;
  s.values.resize(count);
  const bool swap = (order == "big") != (std::endian::native == std::endian::big);
  for (Eigen::Index i = 0; i < count; ++i) {
    char bytes[8];
    if (!b.read(bytes, 8)) throw std::runtime_error(bin.string() + ": payload shorter than nx^2 values");
    std::uint64_t bits;
    std::memcpy(&bits, bytes, 8);
    if (swap) bits = byteswap64(bits);
    s.values[i] = std::bit_cast<double>(bits);
  }
  if (b.peek() != std::char_traits<char>::eof())
    throw std::runtime_error(bin.string() + ": payload longer than nx^2 values");
  return s;
}

// ---------------------------------------------------------------------------
// Diagnostics

const char* diagnostics_header() { return "time,mass,mom1,mom2,mass_drift,max_u,smin,err_rho,err_u"; }

DiagnosticsWriter::DiagnosticsWriter(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  out_.open(path);
  if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out_ << diagnostics_header() << "\n";
}

void DiagnosticsWriter::write(const DiagnosticsRow& r) {
  out_ << format_double(r.time) << ',' << format_double(r.mass) << ',' << format_double(r.mom1) << ','
       << format_double(r.mom2) << ',' << format_double(r.mass_drift) << ',' << format_double(r.max_u) << ','
       << format_double(r.smin) << ',' << format_double(r.err_rho) << ',' << format_double(r.err_u) << '\n';
  out_.flush();
}

std::vector<DiagnosticsRow> read_diagnostics(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != diagnostics_header())
    throw std::runtime_error(path.string() + ": unexpected header");
  std::vector<DiagnosticsRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(cell == "nan" ? kMissing : std::stod(cell));
    if (v.size() != 9) throw std::runtime_error(path.string() + ": expected 9 columns in '" + line + "'");
    rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]});
  }
  return rows;
}

}  // namespace lrflow
