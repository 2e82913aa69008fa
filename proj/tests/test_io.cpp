#include <catch2/catch_amalgamated.hpp>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "rdmgeo/dataset_io.hpp"
#include "rdmgeo/hull.hpp"
#include "rdmgeo/rng.hpp"
#include "rdmgeo/run_grid.hpp"

using namespace rdmgeo;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path d = fs::temp_directory_path() / "rdmgeo_io_test";
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cloud round-trip is lossless") {
  SeededRng rng(1);
  std::vector<CloudPoint> cloud;
  for (int k = 0; k < 1000; ++k) {
    CloudPoint cp;
    cp.p = {rng.gaussian() * 1e3, rng.uniform() * 1e-7, -rng.gaussian()};
    if (k % 3 == 0) cp.y = rng.gaussian();
    cp.source = k % 2 ? PointSource::random : PointSource::oracle;
    cloud.push_back(cp);
  }
  DatasetManifest m;
  m.model_tag = "spin1d";
  m.axes = axis_labels(ModelTag::spin1d);
  m.params["seed"] = "1";
  const fs::path path = temp_dir() / "cloud.csv";
  write_cloud(cloud, m, path);
  const auto [back, m2] = read_cloud(path);
  REQUIRE(back.size() == cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    REQUIRE(back[i].p.a == cloud[i].p.a);  // exact: shortest round-trip floats
    REQUIRE(back[i].p.b == cloud[i].p.b);
    REQUIRE(back[i].p.c == cloud[i].p.c);
    REQUIRE(back[i].y.has_value() == cloud[i].y.has_value());
    if (back[i].y) REQUIRE(*back[i].y == *cloud[i].y);
    REQUIRE(back[i].source == cloud[i].source);
  }
  REQUIRE(m2.model_tag == "spin1d");
  REQUIRE(m2.params.at("seed") == "1");
}

TEST_CASE("deterministic bytes for identical inputs") {
  std::vector<CloudPoint> cloud;
  for (int k = 0; k < 50; ++k)
    cloud.push_back({{k * 0.1, k * -0.2, k * 0.3}, std::nullopt, PointSource::sweep});
  DatasetManifest m;
  m.model_tag = "spin0d";
  const fs::path p1 = temp_dir() / "d1.csv";
  const fs::path p2 = temp_dir() / "d2.csv";
  write_cloud(cloud, m, p1);
  write_cloud(cloud, m, p2);
  REQUIRE(slurp(p1) == slurp(p2));
}

TEST_CASE("manifest hash detects manual edits") {
  std::vector<CloudPoint> cloud = {{{1.0, 2.0, 3.0}, std::nullopt, PointSource::random}};
  DatasetManifest m;
  m.model_tag = "spin1d";
  const fs::path path = temp_dir() / "tamper.csv";
  write_cloud(cloud, m, path);
  std::string text = slurp(path);
  const auto pos = text.find("1,2,3");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 5, "1,2,4");
  std::ofstream(path, std::ios::binary) << text;
  REQUIRE_THROWS_WITH(read_cloud(path), Catch::Matchers::ContainsSubstring("hash mismatch"));
}

TEST_CASE("empty cloud writes a valid header-only file") {
  const fs::path path = temp_dir() / "empty.csv";
  DatasetManifest m;
  m.model_tag = "spin1d";
  write_cloud(std::vector<CloudPoint>{}, m, path);
  const auto [back, m2] = read_cloud(path);
  REQUIRE(back.empty());
}

TEST_CASE("malformed rows report the line number") {
  const fs::path path = temp_dir() / "bad.csv";
  std::ofstream(path, std::ios::binary) << "a,b,c,source\n1,2,notanumber,random\n";
  REQUIRE_THROWS_WITH(read_cloud(path), Catch::Matchers::ContainsSubstring("line 2"));
}

TEST_CASE("hull json round-trip preserves the edge graph") {
  std::vector<Vec3> pts = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}};
  const ConvexHull3 h = convex_hull(pts);
  const fs::path path = temp_dir() / "hull.json";
  write_hull(h, path);
  const ConvexHull3 back = read_hull(path);
  REQUIRE(back.dim == h.dim);
  REQUIRE(back.vertices.size() == h.vertices.size());
  REQUIRE(back.facets.size() == h.facets.size());
  REQUIRE(back.edges == h.edges);
  REQUIRE(back.crease_edges == h.crease_edges);
}

TEST_CASE("degenerate hull is serialized with the flag set") {
  std::vector<Vec3> line = {{0, 0, 0}, {1, 1, 1}, {2, 2, 2}};
  const ConvexHull3 h = convex_hull(line);
  const fs::path path = temp_dir() / "degenerate.json";
  write_hull(h, path);
  const std::string text = slurp(path);
  REQUIRE(text.find("\"degenerate\": true") != std::string::npos);
}

TEST_CASE("tetrahedron hull file carries 4 vertices and 4 facets") {
  std::vector<Vec3> pts = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0.2, 0.2, 0.2}};
  const fs::path path = temp_dir() / "tetra.json";
  write_hull(convex_hull(pts), path);
  const ConvexHull3 back = read_hull(path);
  REQUIRE(back.vertices.size() == 4);
  REQUIRE(back.facets.size() == 4);
}

TEST_CASE("grid parsing") {
  const auto g = parse_grid("0:3:61");
  REQUIRE(g.size() == 61);
  REQUIRE(g.front() == 0.0);
  REQUIRE(g.back() == 3.0);
  REQUIRE(g[1] == Catch::Approx(0.05));
  const auto list = parse_grid("0,0.05,0.1");
  REQUIRE(list == std::vector<double>{0.0, 0.05, 0.1});
  REQUIRE(parse_grid("2.5") == std::vector<double>{2.5});
  REQUIRE(parse_grid("1:2:1") == std::vector<double>{1.0});
  REQUIRE_THROWS_AS(parse_grid(""), Error);
  REQUIRE_THROWS_AS(parse_grid("1:2"), Error);
  REQUIRE_THROWS_AS(parse_grid("1:2:0"), Error);
}

TEST_CASE("indexed parallel map is order-stable") {
  std::vector<int> out(400, -1);
  parallel_for_indexed(400, 7, [&](std::size_t i) { out[i] = static_cast<int>(i * i); });
  for (int i = 0; i < 400; ++i) REQUIRE(out[i] == i * i);
}
