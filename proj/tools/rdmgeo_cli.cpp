// Command-line frontend: every backend is a subcommand that emits the
// dataset files behind the corresponding figure.
//
//   surface   extreme-point sweeps of the spin / classical / Bose sets
//   scatter   random uniform-MPS clouds
//   opscan    d_max(Theta) order-parameter scan over a cloud file
//   exponent  critical-exponent fits on surface/border files
//
// Exit codes: 0 success, 1 partial failure (recorded in the manifest),
// 2 usage error. Identical flags and seed give byte-identical outputs for
// any worker count.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "rdmgeo/bose.hpp"
#include "rdmgeo/classical_ising.hpp"
#include "rdmgeo/core.hpp"
#include "rdmgeo/dataset_io.hpp"
#include "rdmgeo/fit.hpp"
#include "rdmgeo/geometry.hpp"
#include "rdmgeo/mean_field.hpp"
#include "rdmgeo/mps.hpp"
#include "rdmgeo/pfeuty.hpp"
#include "rdmgeo/run_grid.hpp"
#include "rdmgeo/spin_chain.hpp"

namespace fs = std::filesystem;
using namespace rdmgeo;

namespace {

struct SweepResult {
  std::vector<CloudPoint> rows;
  std::vector<std::string> failures;  // "index: message"
};

int finish(const SweepResult& result, DatasetManifest manifest, const fs::path& out) {
  if (!result.failures.empty()) {
    std::string joined;
    for (const auto& f : result.failures) {
      if (!joined.empty()) joined += "; ";
      joined += f;
    }
    manifest.params["failed_cells"] = joined;
  }
  fs::create_directories(out.parent_path().empty() ? "." : out.parent_path());
  write_cloud(result.rows, manifest, out);
  std::cout << out.string() << ": " << result.rows.size() << " rows";
  if (!result.failures.empty()) std::cout << ", " << result.failures.size() << " failed cells";
  std::cout << "\n";
  return result.failures.empty() ? 0 : 1;
}

SweepResult run_cells(std::size_t n, int workers,
                      const std::function<CloudPoint(std::size_t)>& cell) {
  std::vector<std::optional<CloudPoint>> slots(n);
  std::vector<std::string> errors(n);
  parallel_for_indexed(n, workers, [&](std::size_t i) {
    try {
      slots[i] = cell(i);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  SweepResult res;
  for (std::size_t i = 0; i < n; ++i) {
    if (slots[i])
      res.rows.push_back(*slots[i]);
    else
      res.failures.push_back(std::to_string(i) + ": " + errors[i]);
  }
  return res;
}

int cmd_surface(const std::string& model, const std::string& j_spec, const std::string& bz_spec,
                const std::string& bx_spec, const std::string& t_spec, const std::string& h_spec,
                const std::string& v_spec, int n_sites, const std::string& boundary_name, int w,
                std::uint64_t seed, const fs::path& out_dir, int workers) {
  const ModelTag tag = model_tag_from_string(model);
  fs::create_directories(out_dir);
  DatasetManifest manifest;
  manifest.model_tag = model;
  manifest.axes = axis_labels(tag);
  manifest.params["seed"] = std::to_string(seed);

  if (tag == ModelTag::spin0d || tag == ModelTag::spin1d || tag == ModelTag::spinMF) {
    const auto js = parse_grid(j_spec);
    const auto bzs = parse_grid(bz_spec);
    const auto bxs = parse_grid(bx_spec);
    manifest.params["J"] = j_spec;
    manifest.params["Bz"] = bz_spec;
    manifest.params["Bx"] = bx_spec;
    const Boundary bc = boundary_name == "open" ? Boundary::open : Boundary::periodic;
    if (tag == ModelTag::spin1d) {
      manifest.params["N"] = std::to_string(n_sites);
      manifest.params["boundary"] = boundary_name;
    }
    const std::size_t n = js.size() * bzs.size() * bxs.size();
    const SweepResult result = run_cells(n, workers, [&](std::size_t i) {
      const double J = js[i / (bzs.size() * bxs.size())];
      const double Bz = bzs[(i / bxs.size()) % bzs.size()];
      const double Bx = bxs[i % bxs.size()];
      const SpinParams p{J, Bz, Bx};
      CloudPoint cp;
      cp.source = PointSource::sweep;
      if (tag == ModelTag::spin0d) {
        cp.p = two_spin_ground(p).point;
      } else if (tag == ModelTag::spin1d) {
        cp.p = chain_ground(ChainSpec{n_sites, bc}, p).point;
      } else {
        cp.p = mean_field_extreme(p, 32, SeededRng(seed, i)).point;
      }
      return cp;
    });

    int rc = finish(result, manifest, out_dir / (model + "_surface.csv"));
    if (tag == ModelTag::spin1d) {
      // exact thermodynamic-limit companions: the Bx = 0 line and the two
      // symmetry-broken borders of the ruled surface
      const auto hs = parse_grid(bz_spec);
      auto emit_branch = [&](Branch branch, const std::string& name) {
        std::vector<CloudPoint> rows;
        rows.reserve(hs.size());
        for (const double h : hs)
          rows.push_back({pfeuty_point(h, branch), std::nullopt, PointSource::oracle});
        DatasetManifest m2;
        m2.model_tag = model;
        m2.axes = manifest.axes;
        m2.params["h"] = bz_spec;
        m2.params["branch"] = name;
        write_cloud(rows, m2, out_dir / ("pfeuty_" + name + ".csv"));
      };
      emit_branch(Branch::symmetric, "line");
      emit_branch(Branch::plus, "border_plus");
      emit_branch(Branch::minus, "border_minus");
    }
    return rc;
  }

  if (tag == ModelTag::classical2d) {
    const auto js = parse_grid(j_spec);
    const auto hs = parse_grid(h_spec);
    const auto ts = parse_grid(t_spec);
    manifest.params["J"] = j_spec;
    manifest.params["h"] = h_spec;
    manifest.params["T"] = t_spec;
    manifest.params["W"] = std::to_string(w);
    const std::size_t n = js.size() * hs.size() * ts.size();
    const SweepResult result = run_cells(n, workers, [&](std::size_t i) {
      const double J = js[i / (hs.size() * ts.size())];
      const double h = hs[(i / ts.size()) % hs.size()];
      const double T = ts[i % ts.size()];
      const GibbsPoint g = gibbs_observables(CylinderSpec{w}, ClassicalParams{J, h, T});
      return CloudPoint{{g.zz, g.S, g.z}, std::nullopt, PointSource::sweep};
    });
    return finish(result, manifest, out_dir / (model + "_surface.csv"));
  }

  // bose3d
  const auto vs = parse_grid(v_spec);
  const auto ts = parse_grid(t_spec);
  manifest.params["v"] = v_spec;
  manifest.params["T"] = t_spec;
  const std::size_t n = vs.size() * ts.size();
  const SweepResult result = run_cells(n, workers, [&](std::size_t i) {
    const double v = vs[i / ts.size()];
    const double T = ts[i % ts.size()];
    const BoseState st =
        v > 0.0 ? solve_mu(BoseParams{v, T}) : bose_v0_branch(T, PsiBranch::plus);
    return CloudPoint{st.point(), std::nullopt, PointSource::sweep};
  });
  return finish(result, manifest, out_dir / (model + "_surface.csv"));
}

int cmd_scatter(int count, int d_min, int d_max_dim, std::uint64_t seed, bool augment,
                int augment_sites, double augment_bz, const fs::path& out_dir, int workers) {
  ScatterOptions opts;
  opts.count = count;
  opts.D_min = d_min;
  opts.D_max = d_max_dim;
  opts.seed = seed;
  opts.with_y = true;

  // scatter_generate is already stream-per-index; parallelize by chunks
  std::vector<CloudPoint> cloud(count);
  const int chunk = 256;
  const std::size_t n_chunks = (count + chunk - 1) / chunk;
  parallel_for_indexed(n_chunks, workers, [&](std::size_t ci) {
    ScatterOptions part = opts;
    part.count = static_cast<int>(std::min<std::size_t>(chunk, count - ci * chunk));
    // reproduce the exact per-index streams of a serial run
    const std::size_t base = ci * chunk;
    for (int k = 0; k < part.count; ++k) {
      ScatterOptions one = opts;
      one.count = 1;
      // draw index base+k with its own stream
      const int span = opts.D_max - opts.D_min + 1;
      const int D = opts.D_min + static_cast<int>((base + k) % span);
      SeededRng rng(opts.seed, base + k);
      std::vector<Eigen::Matrix2cd> singles = {pauli_z(), pauli_x(), pauli_y()};
      const Eigen::Matrix4cd xx =
          (Eigen::Matrix4cd() << 0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0).finished();
      for (int attempt = 0;; ++attempt) {
        try {
          const UniformMpsTensor t = random_uniform_mps(D, rng);
          const auto vals = mps_expectations(t, singles, xx);
          cloud[base + k] = CloudPoint{{vals[0], vals[1], vals[2]}, vals[3], PointSource::random};
          break;
        } catch (const ResampleError&) {
          if (attempt > 64) throw Error("scatter: persistent resampling at index " +
                                        std::to_string(base + k));
        }
      }
    }
  });

  if (augment) {
    for (const double bx : {1e-3, -1e-3}) {
      const GroundStateResult g =
          chain_ground(ChainSpec{augment_sites, Boundary::periodic}, SpinParams{1.0, augment_bz, bx});
      cloud.push_back({g.point, 0.0, PointSource::oracle});
    }
  }

  DatasetManifest manifest;
  manifest.model_tag = "spin1d";
  manifest.axes = axis_labels(ModelTag::spin1d);
  manifest.params["count"] = std::to_string(count);
  manifest.params["D"] = std::to_string(d_min) + ".." + std::to_string(d_max_dim);
  manifest.params["seed"] = std::to_string(seed);
  if (augment) {
    manifest.params["augment"] = "Bx=+-1e-3,N=" + std::to_string(augment_sites) +
                                 ",Bz=" + format_double(augment_bz);
  }
  fs::create_directories(out_dir);
  write_cloud(cloud, manifest, out_dir / "scatter.csv");
  std::cout << (out_dir / "scatter.csv").string() << ": " << cloud.size() << " rows\n";
  return 0;
}

int cmd_opscan(const fs::path& cloud_path, const std::string& theta_spec, const fs::path& out_dir) {
  auto [points, cloud_manifest] = read_cloud(cloud_path);
  std::vector<ScanQuadruple> quads;
  quads.reserve(points.size());
  for (const auto& cp : points) {
    if (!cp.y)
      throw Error("opscan: cloud file lacks the y column required for Theta scans: " +
                  cloud_path.string());
    quads.push_back({cp.p.a, cp.p.b, cp.p.c, *cp.y});
  }
  const auto thetas = parse_grid(theta_spec);
  const RuledSurfaceReport rep = theta_scan(quads, thetas);

  fs::create_directories(out_dir);
  const fs::path out = out_dir / "opscan.csv";
  DatasetManifest manifest;
  manifest.model_tag = cloud_manifest.model_tag;
  manifest.axes = {"theta", "d_max", ""};
  manifest.params["thetas"] = theta_spec;
  manifest.params["theta_star"] = format_double(rep.theta_star.value_or(0.0));
  manifest.params["d_max"] = format_double(rep.d_max);
  manifest.params["cloud"] = cloud_path.filename().string();

  std::string rows;
  for (const auto& [th, d] : rep.curve) {
    rows += format_double(th);
    rows += ',';
    rows += format_double(d);
    rows += '\n';
  }
  manifest.content_hash = fnv1a64(rows);
  manifest.created = dataset_timestamp();
  std::ofstream f(out, std::ios::binary);
  if (!f) throw Error("opscan: cannot open " + out.string());
  f << "# manifest: " << manifest.to_json().dump() << "\n";
  f << "theta,d_max\n" << rows;
  std::cout << out.string() << ": theta_star = " << format_double(rep.theta_star.value_or(0.0))
            << ", d_max = " << format_double(rep.d_max) << "\n";
  return 0;
}

int cmd_exponent(const fs::path& surface_path, const std::string& window_spec,
                 const std::string& kind, const fs::path& out_dir) {
  const auto win = io_detail::split(window_spec, ':');
  if (win.size() != 2) throw Error("exponent: window must be 'lo:hi'");
  const double lo = parse_double(win[0]), hi = parse_double(win[1]);

  auto [points, manifest] = read_cloud(surface_path);
  double exponent = 0.0;
  std::size_t used = 0;

  if (kind == "pfeuty") {
    // rows follow the h grid recorded in the manifest; the tangent-plane
    // slope d<XX>/d<Z> between adjacent samples is -h, so slope + 1 = 1 - h
    const auto it = manifest.params.find("h");
    if (it == manifest.params.end())
      throw Error("exponent: surface manifest lacks the h grid");
    const auto hs = parse_grid(it->second);
    if (hs.size() != points.size())
      throw Error("exponent: row count does not match the manifest h grid");
    std::vector<std::pair<double, double>> samples;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
      const double hmid = 0.5 * (hs[i] + hs[i + 1]);
      if (hmid < lo || hmid > hi) continue;
      const double dxx = points[i + 1].p.a - points[i].p.a;
      const double dz = points[i + 1].p.b - points[i].p.b;
      if (dz == 0.0) continue;
      const double slope_plus_one = dxx / dz + 1.0;
      const double order = 0.5 * std::fabs(points[i].p.c + points[i + 1].p.c);
      if (slope_plus_one > 0.0 && order > 0.0) samples.push_back({slope_plus_one, order});
    }
    used = samples.size();
    exponent = critical_exponent_fit(samples);
  } else if (kind == "bose") {
    const auto it = manifest.params.find("T");
    if (it == manifest.params.end())
      throw Error("exponent: surface manifest lacks the T grid");
    const auto ts = parse_grid(it->second);
    if (ts.size() != points.size())
      throw Error("exponent: row count does not match the manifest T grid");
    const double tc = bose_tc(1.0);
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double frac = ts[i] / tc;
      if (frac < lo || frac > hi) continue;
      const double psi = points[i].p.c;
      if (psi <= 0.0) continue;
      lx.push_back(std::log(tc - ts[i]));
      ly.push_back(std::log(psi));
    }
    if (lx.size() < 5) throw Error("exponent: window selects fewer than 5 points");
    used = lx.size();
    exponent = linear_slope(lx, ly);
  } else {
    throw Error("exponent: kind must be 'pfeuty' or 'bose'");
  }

  fs::create_directories(out_dir);
  nlohmann::ordered_json j;
  j["kind"] = kind;
  j["window"] = window_spec;
  j["points_used"] = used;
  j["exponent"] = exponent;
  std::ofstream f(out_dir / "exponent.json", std::ios::binary);
  f << j.dump(1, '\t') << "\n";
  std::cout << "exponent (" << kind << ", window " << window_spec << ", " << used
            << " points): " << format_double(exponent) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex sets of many-body expectation values: dataset generator"};
  app.require_subcommand(1);

  // surface
  auto* surface = app.add_subcommand("surface", "extreme-point sweep of one model backend");
  std::string model, j_spec = "1", bz_spec = "0:3:31", bx_spec = "0.001";
  std::string t_spec = "1:4:31", h_spec = "0", v_spec = "0";
  std::string boundary_name = "periodic";
  int n_sites = 12, w = 10, workers = default_worker_count();
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  surface->add_option("--model", model, "spin0d|spin1d|spinMF|classical2d|bose3d")->required();
  surface->add_option("--J", j_spec, "coupling grid (spin/classical)");
  surface->add_option("--Bz", bz_spec, "transverse-field grid (spin)");
  surface->add_option("--Bx", bx_spec, "longitudinal-field grid (spin)");
  surface->add_option("--T", t_spec, "temperature grid (classical/bose)");
  surface->add_option("--h", h_spec, "field grid (classical)");
  surface->add_option("--v", v_spec, "source grid (bose)");
  surface->add_option("--N", n_sites, "chain length (spin1d)");
  surface->add_option("--boundary", boundary_name, "periodic|open (spin1d)");
  surface->add_option("--W", w, "cylinder circumference (classical2d)");
  surface->add_option("--seed", seed, "RNG seed (spinMF restarts)");
  surface->add_option("--out", out_dir, "output directory");
  surface->add_option("--workers", workers, "worker threads");

  // scatter
  auto* scatter = app.add_subcommand("scatter", "random uniform-MPS cloud");
  int count = 1000, d_min = 2, d_max_dim = 10, augment_sites = 14;
  double augment_bz = 0.2;
  bool augment = false;
  scatter->add_option("--count", count, "number of random states");
  scatter->add_option("--Dmin", d_min, "minimum bond dimension");
  scatter->add_option("--Dmax", d_max_dim, "maximum bond dimension");
  scatter->add_option("--seed", seed, "RNG seed");
  scatter->add_flag("--augment", augment, "append Bx=+-1e-3 ED extreme points");
  scatter->add_option("--augment-N", augment_sites, "chain length for the oracle points");
  scatter->add_option("--augment-Bz", augment_bz, "transverse field for the oracle points");
  scatter->add_option("--out", out_dir, "output directory");
  scatter->add_option("--workers", workers, "worker threads");

  // opscan
  auto* opscan = app.add_subcommand("opscan", "d_max(Theta) order-parameter scan");
  std::string cloud_path, theta_spec = "0:3.092505268:64";
  opscan->add_option("--cloud", cloud_path, "cloud CSV with a y column")->required();
  opscan->add_option("--thetas", theta_spec, "Theta grid in [0, pi)");
  opscan->add_option("--out", out_dir, "output directory");

  // exponent
  auto* exponent = app.add_subcommand("exponent", "critical-exponent fit on surface data");
  std::string surface_path, window_spec = "0.9:0.99", kind = "pfeuty";
  exponent->add_option("--surface", surface_path, "surface/border CSV")->required();
  exponent->add_option("--window", window_spec, "parameter window lo:hi");
  exponent->add_option("--kind", kind, "pfeuty|bose");
  exponent->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (surface->parsed())
      return cmd_surface(model, j_spec, bz_spec, bx_spec, t_spec, h_spec, v_spec, n_sites,
                         boundary_name, w, seed, out_dir, workers);
    if (scatter->parsed())
      return cmd_scatter(count, d_min, d_max_dim, seed, augment, augment_sites, augment_bz,
                         out_dir, workers);
    if (opscan->parsed()) return cmd_opscan(cloud_path, theta_spec, out_dir);
    if (exponent->parsed()) return cmd_exponent(surface_path, window_spec, kind, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
