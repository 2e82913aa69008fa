// Ruled-surface detection on sampled convex sets: the d_max hull-edge metric,
// the Theta scan over the rotated order-parameter family
// O(Theta) = cos(Theta/2) X + sin(Theta/2) Y, and support-point sweeps.
#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rdmgeo/core.hpp"
#include "rdmgeo/hull.hpp"

namespace rdmgeo {

struct RuledSurfaceReport {
  double d_max = 0.0;
  std::pair<int, int> edge = {-1, -1};  // indices into the hull's vertex list
  std::optional<double> theta_star;
  std::vector<std::pair<double, double>> curve;  // (Theta, d_max(Theta))
};

struct ObservableDirection {
  double theta = 0.0;  // in [0, pi)

  void validate() const {
    if (!(theta >= 0.0) || !(theta < M_PI))
      throw Error("ObservableDirection: theta must lie in [0, pi)");
  }
};

/// Maximum Euclidean edge length over the hull's crease-edge graph (facet
/// diagonals across merged coplanar regions do not count). Defined for 2D
/// and 3D hulls; lower-dimensional hulls are an error.
inline RuledSurfaceReport d_max(const ConvexHull3& hull) {
  if (hull.dim != HullDimension::volume && hull.dim != HullDimension::polygon)
    throw Error("d_max: hull is degenerate below a polygon");
  RuledSurfaceReport rep;
  for (const auto& [a, b] : hull.crease_edges) {
    const double d = (hull.vertices[a] - hull.vertices[b]).norm();
    if (d > rep.d_max) {
      rep.d_max = d;
      rep.edge = {a, b};
    }
  }
  return rep;
}

/// A scan-ready sample: the plotted pair (<XX>, <Z>) plus both candidate
/// order-parameter components <X> and <Y>.
struct ScanQuadruple {
  double xx = 0.0, z = 0.0, x = 0.0, y = 0.0;
};

inline double scan_axis_value(const ScanQuadruple& q, double theta) {
  return std::cos(0.5 * theta) * q.x + std::sin(0.5 * theta) * q.y;
}

/// d_max of the cloud (xx, z, <O(Theta)>) for each Theta, plus the arg-max.
/// Clouds that degenerate below a polygon for some Theta record d_max = 0
/// there. theta_star is refined by golden-section search around the coarse
/// arg-max when `refine` is set.
inline RuledSurfaceReport theta_scan(std::span<const ScanQuadruple> base_points,
                                     std::span<const double> thetas, bool refine = true,
                                     const HullOptions& hull_opts = {}) {
  if (thetas.empty()) throw Error("theta_scan: empty Theta grid");
  for (const double th : thetas) ObservableDirection{th}.validate();

  auto dmax_at = [&](double theta) {
    std::vector<Vec3> pts;
    pts.reserve(base_points.size());
    for (const auto& q : base_points) pts.push_back({q.xx, q.z, scan_axis_value(q, theta)});
    const ConvexHull3 h = convex_hull(pts, hull_opts);
    if (h.dim != HullDimension::volume && h.dim != HullDimension::polygon)
      return std::pair<double, std::pair<int, int>>{0.0, {-1, -1}};
    const RuledSurfaceReport r = d_max(h);
    return std::pair<double, std::pair<int, int>>{r.d_max, r.edge};
  };

  RuledSurfaceReport rep;
  double best_theta = thetas[0];
  for (const double th : thetas) {
    const auto [d, edge] = dmax_at(th);
    rep.curve.push_back({th, d});
    if (d > rep.d_max) {
      rep.d_max = d;
      rep.edge = edge;
      best_theta = th;
    }
  }
  rep.theta_star = best_theta;

  if (refine && thetas.size() >= 2) {
    // golden-section around the coarse arg-max, one grid cell on each side
    double step = 0.0;
    for (std::size_t i = 1; i < thetas.size(); ++i)
      step = std::max(step, std::fabs(thetas[i] - thetas[i - 1]));
    double a = std::max(0.0, best_theta - step);
    double b = std::min(M_PI - 1e-12, best_theta + step);
    const double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
    double f1 = dmax_at(x1).first, f2 = dmax_at(x2).first;
    for (int it = 0; it < 24; ++it) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + invphi * (b - a);
        f2 = dmax_at(x2).first;
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - invphi * (b - a);
        f1 = dmax_at(x1).first;
      }
    }
    const double theta_ref = 0.5 * (a + b);
    const auto [d_ref, edge_ref] = dmax_at(theta_ref);
    if (d_ref >= rep.d_max) {
      rep.d_max = d_ref;
      rep.edge = edge_ref;
      rep.theta_star = theta_ref;
    }
  }
  return rep;
}

/// One support-point evaluation: the backend solves its extreme-state problem
/// for Hamiltonian coefficients proportional to the direction.
struct SupportSample {
  ExpectationPoint point;
  bool degenerate = false;  // flagged when the backend reports a degenerate ground set
};

using SupportEvaluator = std::function<SupportSample(const Direction3&)>;

inline ExpectationPoint support_point(const Direction3& dir, const SupportEvaluator& backend) {
  return backend(dir).point;
}

struct SweepEntry {
  Direction3 direction;
  std::optional<ExpectationPoint> point;  // empty on backend failure
  bool degenerate_support = false;
  std::string error;
};

/// Support sweep over a direction grid; per-direction failures are recorded
/// and the sweep continues.
inline std::vector<SweepEntry> surface_sweep(const SupportEvaluator& backend,
                                             std::span<const Direction3> directions) {
  std::vector<SweepEntry> out;
  out.reserve(directions.size());
  for (const auto& dir : directions) {
    SweepEntry entry;
    entry.direction = dir;
    try {
      const SupportSample s = backend(dir);
      entry.point = s.point;
      entry.degenerate_support = s.degenerate;
    } catch (const std::exception& e) {
      entry.error = e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

/// Deterministic quasi-uniform direction grid on the unit sphere
/// (Fibonacci lattice), used by the sweep commands and the acceptance tests.
inline std::vector<Direction3> fibonacci_sphere(int count) {
  if (count < 1) throw Error("fibonacci_sphere: count must be >= 1");
  std::vector<Direction3> dirs;
  dirs.reserve(count);
  const double ga = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double th = ga * i;
    dirs.emplace_back(r * std::cos(th), z, r * std::sin(th));
  }
  return dirs;
}

}  // namespace rdmgeo
