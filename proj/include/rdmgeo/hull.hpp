// Randomized incremental 3D convex hull with explicit epsilon handling on
// per-axis-normalized coordinates. Degenerate inputs (coplanar, collinear,
// coincident) produce flagged lower-dimensional hulls instead of failing.
//
// Facets are kept as triangles; the crease-edge graph additionally merges
// adjacent near-coplanar facets, which is what the ruled-surface metric
// d_max consumes (facet diagonals across flat regions are not edges).
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "rdmgeo/core.hpp"
#include "rdmgeo/rng.hpp"

namespace rdmgeo {

using Vec3 = Eigen::Vector3d;

enum class HullDimension { point = 0, segment = 1, polygon = 2, volume = 3 };

struct ConvexHull3 {
  HullDimension dim = HullDimension::volume;
  std::vector<Vec3> vertices;                    // original (unscaled) coordinates
  std::vector<std::array<int, 3>> facets;        // outward-oriented triangles
  std::vector<std::pair<int, int>> edges;        // all facet edges (polygon edges if dim == 2)
  std::vector<std::pair<int, int>> crease_edges; // edges after coplanar merge
  std::vector<int> input_indices;                // map vertex -> index into the input span

  bool degenerate() const { return dim != HullDimension::volume; }
};

struct HullOptions {
  double epsilon = 1e-9;          // visibility / containment tolerance (scaled coords)
  double merge_angle = 1e-4;      // facet-normal angle below which an edge is merged away
};

namespace hull_detail {

struct Face {
  std::array<int, 3> v;
  std::array<int, 3> neighbor;  // neighbor[i] across edge (v[i], v[(i+1)%3])
  Vec3 n;                       // unit outward normal (scaled coords)
  double off;                   // plane offset: n . x = off
  std::vector<int> conflicts;
  int far_point = -1;
  double far_dist = 0.0;
  bool alive = true;
};

inline void face_plane(Face& f, const std::vector<Vec3>& pts) {
  const Vec3 a = pts[f.v[0]], b = pts[f.v[1]], c = pts[f.v[2]];
  Vec3 n = (b - a).cross(c - a);
  const double len = n.norm();
  f.n = len > 0 ? Vec3(n / len) : Vec3(0, 0, 1);
  f.off = f.n.dot(a);
}

inline double signed_dist(const Face& f, const Vec3& p) { return f.n.dot(p) - f.off; }

}  // namespace hull_detail

/// Convex hull of a 3D point cloud. Input coordinates are scaled per axis to
/// unit range for all tolerance tests and restored on output. Inputs are
/// canonically sorted and deterministically shuffled, so the result does not
/// depend on the caller's point order.
inline ConvexHull3 convex_hull(std::span<const Vec3> points, const HullOptions& opts = {}) {
  using hull_detail::Face;
  if (points.empty()) throw Error("convex_hull: empty input");
  for (const auto& p : points)
    if (!p.allFinite()) throw Error("convex_hull: non-finite input point");

  // --- scaling ------------------------------------------------------------
  Vec3 lo = points[0], hi = points[0];
  for (const auto& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  Vec3 scale;
  for (int k = 0; k < 3; ++k) {
    const double r = hi[k] - lo[k];
    scale[k] = r > 1e-300 ? 1.0 / r : 1.0;
  }
  const double eps = opts.epsilon;

  // order: canonical sort on scaled coordinates, dedup, deterministic shuffle
  std::vector<Vec3> pts(points.size());
  std::vector<int> orig(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    pts[i] = (points[i] - lo).cwiseProduct(scale);
    orig[i] = static_cast<int>(i);
  }
  std::vector<int> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const Vec3 &pa = pts[a], &pb = pts[b];
    if (pa.x() != pb.x()) return pa.x() < pb.x();
    if (pa.y() != pb.y()) return pa.y() < pb.y();
    if (pa.z() != pb.z()) return pa.z() < pb.z();
    return a < b;
  });
  order.erase(std::unique(order.begin(), order.end(),
                          [&](int a, int b) { return (pts[a] - pts[b]).norm() < 1e-13; }),
              order.end());
  {
    SeededRng shuffle_rng(0x48554c4cULL);  // fixed: result independent of call site
    for (std::size_t i = order.size(); i > 1; --i) {
      const std::size_t j = shuffle_rng.next_u64() % i;
      std::swap(order[i - 1], order[j]);
    }
  }

  auto unscale = [&](const Vec3& q) { return Vec3(q.cwiseQuotient(scale) + lo); };

  auto finish_degenerate = [&](ConvexHull3&& h) {
    h.vertices.clear();
    for (const int idx : h.input_indices) h.vertices.push_back(points[idx]);
    return std::move(h);
  };

  // --- rank detection -----------------------------------------------------
  const int i0 = order[0];
  int i1 = -1;
  double best = 0.0;
  for (const int i : order) {
    const double d = (pts[i] - pts[i0]).norm();
    if (d > best) {
      best = d;
      i1 = i;
    }
  }
  if (i1 < 0 || best < eps) {
    ConvexHull3 h;
    h.dim = HullDimension::point;
    h.input_indices = {i0};
    return finish_degenerate(std::move(h));
  }
  const Vec3 u = (pts[i1] - pts[i0]).normalized();
  int i2 = -1;
  best = 0.0;
  for (const int i : order) {
    const Vec3 d = pts[i] - pts[i0];
    const double dist = (d - d.dot(u) * u).norm();
    if (dist > best) {
      best = dist;
      i2 = i;
    }
  }
  if (i2 < 0 || best < eps) {
    // segment: extremes of the projection onto u
    int amin = i0, amax = i0;
    double tmin = 0.0, tmax = 0.0;
    for (const int i : order) {
      const double t = (pts[i] - pts[i0]).dot(u);
      if (t < tmin) { tmin = t; amin = i; }
      if (t > tmax) { tmax = t; amax = i; }
    }
    ConvexHull3 h;
    h.dim = HullDimension::segment;
    h.input_indices = {amin, amax};
    h.edges = {{0, 1}};
    h.crease_edges = h.edges;
    return finish_degenerate(std::move(h));
  }
  Vec3 w = u.cross((pts[i2] - pts[i0]).normalized()).normalized();
  int i3 = -1;
  best = 0.0;
  for (const int i : order) {
    const double dist = std::fabs((pts[i] - pts[i0]).dot(w));
    if (dist > best) {
      best = dist;
      i3 = i;
    }
  }
  if (i3 < 0 || best < eps) {
    // planar: 2D monotone-chain hull in the (u, v) frame
    const Vec3 v2 = w.cross(u);
    std::vector<std::pair<Eigen::Vector2d, int>> flat;
    flat.reserve(order.size());
    for (const int i : order) {
      const Vec3 d = pts[i] - pts[i0];
      flat.push_back({{d.dot(u), d.dot(v2)}, i});
    }
    std::sort(flat.begin(), flat.end(), [](const auto& a, const auto& b) {
      if (a.first.x() != b.first.x()) return a.first.x() < b.first.x();
      return a.first.y() < b.first.y();
    });
    auto cross2 = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a,
                     const Eigen::Vector2d& b) {
      return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
    };
    const double area_eps = eps * 1e-2;
    const int nf = static_cast<int>(flat.size());
    auto extend = [&](std::vector<int>& half, int idx) {
      while (half.size() >= 2 &&
             cross2(flat[half[half.size() - 2]].first, flat[half.back()].first,
                    flat[idx].first) <= area_eps)
        half.pop_back();
      half.push_back(idx);
    };
    std::vector<int> lower, upper;
    for (int k = 0; k < nf; ++k) extend(lower, k);
    for (int k = nf - 1; k >= 0; --k) extend(upper, k);
    ConvexHull3 h;
    h.dim = HullDimension::polygon;
    std::vector<int> ring;
    for (std::size_t k = 0; k + 1 < lower.size(); ++k) ring.push_back(lower[k]);
    for (std::size_t k = 0; k + 1 < upper.size(); ++k) ring.push_back(upper[k]);
    if (ring.size() < 3) ring = lower;  // numerically collapsed chain
    for (const int fidx : ring) h.input_indices.push_back(flat[fidx].second);
    const int m = static_cast<int>(h.input_indices.size());
    for (int k = 0; k < m; ++k) h.edges.push_back({k, (k + 1) % m});
    if (m == 2) h.edges.pop_back();
    h.crease_edges = h.edges;
    return finish_degenerate(std::move(h));
  }

  // --- full 3D incremental hull --------------------------------------------
  std::vector<Face> faces;
  faces.reserve(6 * order.size());
  const Vec3 interior =
      0.25 * (pts[i0] + pts[i1] + pts[i2] + pts[i3]);

  auto add_face = [&](int a, int b, int c) {
    Face f;
    f.v = {a, b, c};
    hull_detail::face_plane(f, pts);
    if (hull_detail::signed_dist(f, interior) > 0) {
      std::swap(f.v[1], f.v[2]);
      hull_detail::face_plane(f, pts);
    }
    f.neighbor = {-1, -1, -1};
    faces.push_back(std::move(f));
    return static_cast<int>(faces.size()) - 1;
  };

  const int f0 = add_face(i0, i1, i2);
  const int f1 = add_face(i0, i1, i3);
  const int f2 = add_face(i0, i2, i3);
  const int f3 = add_face(i1, i2, i3);
  // wire neighbors by shared (undirected) edges
  auto wire_all = [&](std::span<const int> ids) {
    std::map<std::pair<int, int>, std::pair<int, int>> half;  // edge -> (face, slot)
    for (const int fi : ids)
      for (int e = 0; e < 3; ++e) {
        const int a = faces[fi].v[e], b = faces[fi].v[(e + 1) % 3];
        const auto key = std::minmax(a, b);
        auto it = half.find(key);
        if (it == half.end()) {
          half[key] = {fi, e};
        } else {
          faces[fi].neighbor[e] = it->second.first;
          faces[it->second.first].neighbor[it->second.second] = fi;
        }
      }
  };
  {
    const int ids[] = {f0, f1, f2, f3};
    wire_all(ids);
  }

  // conflict lists
  auto assign_conflict = [&](int pt, std::span<const int> candidate_faces) {
    double bestd = eps;
    int bestf = -1;
    for (const int fi : candidate_faces) {
      if (!faces[fi].alive) continue;
      const double d = hull_detail::signed_dist(faces[fi], pts[pt]);
      if (d > bestd) {
        bestd = d;
        bestf = fi;
      }
    }
    if (bestf >= 0) {
      faces[bestf].conflicts.push_back(pt);
      if (bestd > faces[bestf].far_dist) {
        faces[bestf].far_dist = bestd;
        faces[bestf].far_point = pt;
      }
      return true;
    }
    return false;
  };
  {
    const int ids[] = {f0, f1, f2, f3};
    for (const int i : order) {
      if (i == i0 || i == i1 || i == i2 || i == i3) continue;
      assign_conflict(i, ids);
    }
  }

  std::vector<int> pending = {f0, f1, f2, f3};
  std::vector<int> visible, horizon_faces;
  std::vector<std::array<int, 4>> horizon;  // (a, b, invisible face, its slot)

  while (!pending.empty()) {
    const int fi = pending.back();
    pending.pop_back();
    if (!faces[fi].alive || faces[fi].conflicts.empty()) continue;
    const int apex = faces[fi].far_point;

    // BFS for the visible region
    visible.clear();
    horizon.clear();
    std::vector<std::pair<int, int>> stack = {{fi, -1}};
    std::vector<char> mark(faces.size(), 0);
    mark[fi] = 1;
    while (!stack.empty()) {
      auto [cur, from] = stack.back();
      stack.pop_back();
      visible.push_back(cur);
      for (int e = 0; e < 3; ++e) {
        const int nb = faces[cur].neighbor[e];
        if (nb < 0) throw Error("convex_hull: open mesh (internal error)");
        if (mark[nb]) continue;
        if (hull_detail::signed_dist(faces[nb], pts[apex]) > eps) {
          mark[nb] = 1;
          stack.push_back({nb, cur});
        } else {
          // horizon edge (a -> b) as oriented in the visible face
          const int a = faces[cur].v[e], b = faces[cur].v[(e + 1) % 3];
          int slot = -1;
          for (int k = 0; k < 3; ++k)
            if (faces[nb].neighbor[k] == cur) slot = k;
          horizon.push_back({a, b, nb, slot});
        }
      }
    }

    // gather points to redistribute, kill visible faces
    std::vector<int> orphans;
    for (const int vf : visible) {
      faces[vf].alive = false;
      for (const int p : faces[vf].conflicts)
        if (p != apex) orphans.push_back(p);
      faces[vf].conflicts.clear();
    }

    // build the cone of new faces
    std::vector<int> fresh;
    fresh.reserve(horizon.size());
    std::map<std::pair<int, int>, std::pair<int, int>> open_edge;  // apex-side edges
    for (const auto& [a, b, nb, slot] : horizon) {
      Face f;
      f.v = {apex, a, b};
      hull_detail::face_plane(f, pts);
      if (hull_detail::signed_dist(f, interior) > 0) {
        std::swap(f.v[1], f.v[2]);
        hull_detail::face_plane(f, pts);
      }
      f.neighbor = {-1, -1, -1};
      faces.push_back(std::move(f));
      const int nf = static_cast<int>(faces.size()) - 1;
      mark.push_back(0);
      fresh.push_back(nf);
      // wire against the surviving neighbor across (a, b)
      for (int e = 0; e < 3; ++e) {
        const int ea = faces[nf].v[e], eb = faces[nf].v[(e + 1) % 3];
        if (std::minmax(ea, eb) == std::minmax(a, b)) {
          faces[nf].neighbor[e] = nb;
          faces[nb].neighbor[slot] = nf;
        } else {
          const auto key = std::minmax(ea, eb);
          auto it = open_edge.find(key);
          if (it == open_edge.end()) {
            open_edge[key] = {nf, e};
          } else {
            faces[nf].neighbor[e] = it->second.first;
            faces[it->second.first].neighbor[it->second.second] = nf;
            open_edge.erase(it);
          }
        }
      }
    }
    if (!open_edge.empty()) throw Error("convex_hull: horizon did not close (internal error)");

    for (const int p : orphans) assign_conflict(p, fresh);
    for (const int nf : fresh)
      if (!faces[nf].conflicts.empty()) pending.push_back(nf);
  }

  // --- output --------------------------------------------------------------
  ConvexHull3 h;
  h.dim = HullDimension::volume;
  std::vector<int> vmap(pts.size(), -1);
  for (const auto& f : faces) {
    if (!f.alive) continue;
    std::array<int, 3> tri;
    for (int k = 0; k < 3; ++k) {
      const int p = f.v[k];
      if (vmap[p] < 0) {
        vmap[p] = static_cast<int>(h.vertices.size());
        h.vertices.push_back(unscale(pts[p]));
        h.input_indices.push_back(orig[p]);
      }
      tri[k] = vmap[p];
    }
    h.facets.push_back(tri);
  }

  // edge sets: all triangle edges, and crease edges (dihedral above merge_angle)
  std::map<std::pair<int, int>, std::vector<int>> edge_faces;  // remapped edge -> face list
  {
    int fid = 0;
    for (const auto& f : faces) {
      if (!f.alive) continue;
      for (int e = 0; e < 3; ++e) {
        const auto key = std::minmax(vmap[f.v[e]], vmap[f.v[(e + 1) % 3]]);
        edge_faces[key].push_back(fid);
      }
      ++fid;
    }
  }
  std::vector<const hull_detail::Face*> alive_faces;
  for (const auto& f : faces)
    if (f.alive) alive_faces.push_back(&f);
  const double cos_merge = std::cos(opts.merge_angle);
  for (const auto& [edge, flist] : edge_faces) {
    h.edges.push_back(edge);
    if (flist.size() == 2) {
      const double c = alive_faces[flist[0]]->n.dot(alive_faces[flist[1]]->n);
      if (c >= cos_merge) continue;  // coplanar within tolerance: merged away
    }
    h.crease_edges.push_back(edge);
  }
  return h;
}

inline ConvexHull3 convex_hull(const std::vector<Vec3>& points, const HullOptions& opts = {}) {
  return convex_hull(std::span<const Vec3>(points.data(), points.size()), opts);
}

/// Signed distance from p to the hull boundary: positive outside, negative
/// inside. For degenerate hulls the distance is measured to the affine piece.
inline double signed_distance(const ConvexHull3& h, const Vec3& p) {
  switch (h.dim) {
    case HullDimension::point:
      return (p - h.vertices[0]).norm();
    case HullDimension::segment: {
      const Vec3 a = h.vertices[0], b = h.vertices[1];
      const double t = std::clamp((p - a).dot(b - a) / (b - a).squaredNorm(), 0.0, 1.0);
      return (p - (a + t * (b - a))).norm();
    }
    case HullDimension::polygon: {
      const Vec3 a = h.vertices[0];
      Vec3 n = Vec3::Zero();
      for (std::size_t k = 1; k + 1 < h.vertices.size(); ++k) {
        n = (h.vertices[k] - a).cross(h.vertices[k + 1] - a);
        if (n.norm() > 1e-30) break;
      }
      n.normalize();
      const double off = n.dot(p - a);
      double inplane = -1e300;
      const int m = static_cast<int>(h.vertices.size());
      for (int k = 0; k < m; ++k) {
        const Vec3 e = h.vertices[(k + 1) % m] - h.vertices[k];
        const Vec3 out = e.cross(n).normalized();
        inplane = std::max(inplane, out.dot(p - h.vertices[k]));
      }
      return std::max(std::fabs(off), inplane);
    }
    case HullDimension::volume: {
      double d = -1e300;
      for (const auto& tri : h.facets) {
        const Vec3 a = h.vertices[tri[0]];
        Vec3 n = (h.vertices[tri[1]] - a).cross(h.vertices[tri[2]] - a);
        const double len = n.norm();
        if (len < 1e-300) continue;
        d = std::max(d, n.dot(p - a) / len);
      }
      return d;
    }
  }
  throw Error("signed_distance: invalid hull");
}

}  // namespace rdmgeo
