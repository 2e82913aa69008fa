// Bit-stable CSV/JSON serialization for scatter clouds, sweeps, hulls and
// scan reports. Floats are written with shortest round-trip formatting, rows
// are hashed (FNV-1a 64) into the manifest, and identical inputs produce
// byte-identical files.
//
// Cloud CSV layout:
//   # manifest: {...single-line JSON...}
//   a,b,c[,y],source
//   <rows>
#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "rdmgeo/core.hpp"
#include "rdmgeo/hull.hpp"

namespace rdmgeo {

inline constexpr const char* kToolVersion = "0.1.0";

/// Shortest decimal string that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error("parse_double: malformed number '" + std::string(s) + "'");
  return v;
}

inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (const unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct DatasetManifest {
  std::string model_tag;
  std::array<std::string, 3> axes = {"a", "b", "c"};
  std::map<std::string, std::string> params;  // generator parameters, sorted keys
  std::string tool_version = kToolVersion;
  std::string created;  // from SOURCE_DATE_EPOCH when set; excluded from the hash
  std::uint64_t content_hash = 0;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["model_tag"] = model_tag;
    j["axes"] = axes;
    j["params"] = params;
    j["tool_version"] = tool_version;
    j["created"] = created;
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(content_hash));
    j["content_hash"] = hex;
    return j;
  }

  static DatasetManifest from_json(const nlohmann::json& j) {
    DatasetManifest m;
    m.model_tag = j.value("model_tag", "");
    if (j.contains("axes")) {
      const auto ax = j["axes"];
      for (std::size_t k = 0; k < 3 && k < ax.size(); ++k) m.axes[k] = ax[k];
    }
    if (j.contains("params"))
      for (const auto& [key, val] : j["params"].items()) m.params[key] = val.get<std::string>();
    m.tool_version = j.value("tool_version", "");
    m.created = j.value("created", "");
    if (j.contains("content_hash"))
      m.content_hash = std::stoull(j["content_hash"].get<std::string>(), nullptr, 16);
    return m;
  }
};

/// Timestamp convention keeping outputs reproducible: honor SOURCE_DATE_EPOCH
/// when set, otherwise use the fixed epoch string.
inline std::string dataset_timestamp() {
  if (const char* sde = std::getenv("SOURCE_DATE_EPOCH")) {
    const std::time_t t = static_cast<std::time_t>(std::strtoll(sde, nullptr, 10));
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
  }
  return "1970-01-01T00:00:00Z";
}

namespace io_detail {

inline std::string cloud_rows(std::span<const CloudPoint> points, bool with_y) {
  std::string rows;
  for (const auto& cp : points) {
    rows += format_double(cp.p.a);
    rows += ',';
    rows += format_double(cp.p.b);
    rows += ',';
    rows += format_double(cp.p.c);
    if (with_y) {
      rows += ',';
      if (cp.y) rows += format_double(*cp.y);
    }
    rows += ',';
    rows += to_string(cp.source);
    rows += '\n';
  }
  return rows;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

}  // namespace io_detail

/// Write a cloud CSV. The y column is included when any point carries one.
inline void write_cloud(std::span<const CloudPoint> points, DatasetManifest manifest,
                        const std::filesystem::path& path) {
  bool with_y = false;
  for (const auto& cp : points) with_y = with_y || cp.y.has_value();
  const std::string rows = io_detail::cloud_rows(points, with_y);
  manifest.content_hash = fnv1a64(rows);
  if (manifest.created.empty()) manifest.created = dataset_timestamp();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("write_cloud: cannot open " + path.string());
  out << "# manifest: " << manifest.to_json().dump() << "\n";
  out << (with_y ? "a,b,c,y,source" : "a,b,c,source") << "\n";
  out << rows;
  if (!out) throw Error("write_cloud: write failed for " + path.string());
}

/// Read a cloud CSV; verifies the row hash against the manifest.
inline std::pair<std::vector<CloudPoint>, DatasetManifest> read_cloud(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("read_cloud: cannot open " + path.string());
  std::string line;
  int lineno = 0;

  DatasetManifest manifest;
  bool have_manifest = false;
  std::string header;
  std::vector<CloudPoint> points;
  std::string rows;

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("manifest:");
      if (pos != std::string::npos) {
        try {
          manifest = DatasetManifest::from_json(nlohmann::json::parse(line.substr(pos + 9)));
          have_manifest = true;
        } catch (const nlohmann::json::exception& e) {
          throw Error("read_cloud: bad manifest at line " + std::to_string(lineno) + ": " +
                      e.what());
        }
      }
      continue;
    }
    if (header.empty()) {
      header = line;
      if (header != "a,b,c,source" && header != "a,b,c,y,source")
        throw Error("read_cloud: unexpected header at line " + std::to_string(lineno) + ": '" +
                    header + "'");
      continue;
    }
    rows += line;
    rows += '\n';
    const bool with_y = header == "a,b,c,y,source";
    const auto fields = io_detail::split(line, ',');
    const std::size_t expected = with_y ? 5 : 4;
    if (fields.size() != expected)
      throw Error("read_cloud: wrong column count at line " + std::to_string(lineno));
    try {
      CloudPoint cp;
      cp.p.a = parse_double(fields[0]);
      cp.p.b = parse_double(fields[1]);
      cp.p.c = parse_double(fields[2]);
      if (with_y && !fields[3].empty()) cp.y = parse_double(fields[3]);
      cp.source = point_source_from_string(std::string(fields[expected - 1]));
      points.push_back(cp);
    } catch (const Error& e) {
      throw Error("read_cloud: line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (have_manifest && manifest.content_hash != fnv1a64(rows))
    throw Error("read_cloud: content hash mismatch in " + path.string() +
                " (file edited or truncated)");
  return {std::move(points), manifest};
}

/// Hull as JSON: vertices, facet triangles, edge list, degeneracy flag.
inline void write_hull(const ConvexHull3& hull, const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["degenerate"] = hull.degenerate();
  j["dim"] = static_cast<int>(hull.dim);
  auto verts = nlohmann::ordered_json::array();
  for (const auto& v : hull.vertices)
    verts.push_back({v.x(), v.y(), v.z()});
  j["vertices"] = std::move(verts);
  auto facets = nlohmann::ordered_json::array();
  for (const auto& f : hull.facets) facets.push_back({f[0], f[1], f[2]});
  j["facets"] = std::move(facets);
  auto edges = nlohmann::ordered_json::array();
  for (const auto& [a, b] : hull.edges) edges.push_back({a, b});
  j["edges"] = std::move(edges);
  auto crease = nlohmann::ordered_json::array();
  for (const auto& [a, b] : hull.crease_edges) crease.push_back({a, b});
  j["crease_edges"] = std::move(crease);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("write_hull: cannot open " + path.string());
  out << j.dump(1, '\t') << "\n";
  if (!out) throw Error("write_hull: write failed for " + path.string());
}

inline ConvexHull3 read_hull(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("read_hull: cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("read_hull: parse error in " + path.string() + ": " + e.what());
  }
  ConvexHull3 h;
  h.dim = static_cast<HullDimension>(j.at("dim").get<int>());
  for (const auto& v : j.at("vertices")) h.vertices.push_back({v[0], v[1], v[2]});
  for (const auto& f : j.at("facets"))
    h.facets.push_back({f[0].get<int>(), f[1].get<int>(), f[2].get<int>()});
  for (const auto& e : j.at("edges")) h.edges.push_back({e[0].get<int>(), e[1].get<int>()});
  for (const auto& e : j.at("crease_edges"))
    h.crease_edges.push_back({e[0].get<int>(), e[1].get<int>()});
  return h;
}

}  // namespace rdmgeo
