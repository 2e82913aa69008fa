// Mean-field (d -> infinity) extreme points: minimize the product-state
// energy e(a,b) = -J ax bx - Bz (az+bz)/2 - Bx (ax+bx)/2 over two unit
// Bloch vectors. Linear functionals attain their extrema over the separable
// set at pure products, so this sweep reproduces the separable-set surface.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "rdmgeo/core.hpp"
#include "rdmgeo/rng.hpp"
#include "rdmgeo/spin_chain.hpp"

namespace rdmgeo {

/// Pure single-spin state as a point on (or inside, for mixtures) the unit sphere.
struct BlochVector {
  double ax = 0.0, ay = 0.0, az = 0.0;
  double norm() const { return std::sqrt(ax * ax + ay * ay + az * az); }
};

struct MeanFieldSolution {
  GroundStateResult ground;
  BlochVector a, b;  // optimal product pair (one branch if degenerate)
};

/// Thrown when no restart reaches the gradient tolerance; carries the best
/// candidate found so far.
class OptimizerError : public Error {
 public:
  OptimizerError(const std::string& what, GroundStateResult best)
      : Error(what), best_so_far(best) {}
  GroundStateResult best_so_far;
};

namespace detail {

using Vec3 = Eigen::Vector3d;

struct ProductCandidate {
  Vec3 a, b;
  double energy;
  bool converged;
};

inline double product_energy(const SpinParams& p, const Vec3& a, const Vec3& b) {
  return -p.J * a.x() * b.x() - p.Bz * 0.5 * (a.z() + b.z()) - p.Bx * 0.5 * (a.x() + b.x());
}

inline double tangent_grad_norm(const SpinParams& p, const Vec3& a, const Vec3& b) {
  const Vec3 ga_full(-p.J * b.x() - 0.5 * p.Bx, 0.0, -0.5 * p.Bz);
  const Vec3 gb_full(-p.J * a.x() - 0.5 * p.Bx, 0.0, -0.5 * p.Bz);
  const Vec3 ga = ga_full - ga_full.dot(a) * a;
  const Vec3 gb = gb_full - gb_full.dot(b) * b;
  return std::sqrt(ga.squaredNorm() + gb.squaredNorm());
}

/// Minimize from one start: projected gradient steps select the basin, then
/// exact alternating minimization (for fixed b the optimal a is the
/// normalized effective field, and vice versa) polishes to the tolerance.
inline bool descend(const SpinParams& p, Vec3& a, Vec3& b, double tol) {
  double step = 0.25;
  double e = product_energy(p, a, b);
  for (int it = 0; it < 200; ++it) {
    const Vec3 ga_full(-p.J * b.x() - 0.5 * p.Bx, 0.0, -0.5 * p.Bz);
    const Vec3 gb_full(-p.J * a.x() - 0.5 * p.Bx, 0.0, -0.5 * p.Bz);
    const Vec3 ga = ga_full - ga_full.dot(a) * a;
    const Vec3 gb = gb_full - gb_full.dot(b) * b;
    const double gnorm = std::sqrt(ga.squaredNorm() + gb.squaredNorm());
    if (gnorm < 1e-6) break;
    bool moved = false;
    for (int ls = 0; ls < 30; ++ls) {
      const Vec3 an = (a - step * ga).normalized();
      const Vec3 bn = (b - step * gb).normalized();
      const double en = product_energy(p, an, bn);
      if (en < e - 1e-4 * step * gnorm * gnorm) {
        a = an;
        b = bn;
        e = en;
        step = std::min(step * 1.3, 1.0);
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  for (int it = 0; it < 2000; ++it) {
    const Vec3 fa(p.J * b.x() + 0.5 * p.Bx, 0.0, 0.5 * p.Bz);
    if (fa.norm() > 1e-300) a = fa.normalized();
    const Vec3 fb(p.J * a.x() + 0.5 * p.Bx, 0.0, 0.5 * p.Bz);
    if (fb.norm() > 1e-300) b = fb.normalized();
    if (tangent_grad_norm(p, a, b) < tol) return true;
  }
  return tangent_grad_norm(p, a, b) < tol;
}

inline ExpectationPoint product_point(const Vec3& a, const Vec3& b) {
  return {a.x() * b.x(), 0.5 * (a.z() + b.z()), 0.5 * (a.x() + b.x())};
}

}  // namespace detail

/// Multi-start minimization over pure product states. Restart directions
/// follow a deterministic low-discrepancy lattice jittered by `rng`. When the
/// minimum is attained by a symmetry-related pair (Bx = 0), the reported
/// point is the symmetric one (<X> = 0, degeneracy 2); branches are selected
/// by probing Bx = +-epsilon explicitly.
inline MeanFieldSolution mean_field_solve(const SpinParams& params, int restarts, SeededRng rng) {
  using detail::Vec3;
  if (!params.finite()) throw Error("mean_field_extreme: non-finite parameters");
  if (restarts < 8) throw Error("mean_field_extreme: need restarts >= 8");

  constexpr double kGradTol = 1e-10;

  // R2 low-discrepancy sequence on (cos theta, phi), jittered once per call.
  constexpr double g1 = 0.7548776662466927;  // plastic-constant lattice
  constexpr double g2 = 0.5698402909980532;
  const double j1 = rng.uniform(), j2 = rng.uniform(), j3 = rng.uniform(), j4 = rng.uniform();

  auto unit_from = [](double u, double v) {
    const double ct = 1.0 - 2.0 * u;
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    const double ph = 2.0 * M_PI * v;
    return Vec3(st * std::cos(ph), st * std::sin(ph), ct);
  };

  std::vector<detail::ProductCandidate> minima;
  minima.reserve(restarts);
  for (int r = 0; r < restarts; ++r) {
    Vec3 a = unit_from(std::fmod(j1 + g1 * r, 1.0), std::fmod(j2 + g2 * r, 1.0));
    Vec3 b = unit_from(std::fmod(j3 + g2 * r, 1.0), std::fmod(j4 + g1 * r, 1.0));
    const bool ok = detail::descend(params, a, b, kGradTol);
    minima.push_back({a, b, detail::product_energy(params, a, b), ok});
  }

  const auto best = std::min_element(
      minima.begin(), minima.end(),
      [](const auto& l, const auto& r) { return l.energy < r.energy; });

  MeanFieldSolution sol;
  sol.ground.energy_per_site = best->energy;
  sol.ground.point = detail::product_point(best->a, best->b);
  sol.ground.gap = 0.0;
  sol.ground.degeneracy = 1;
  sol.a = {best->a.x(), best->a.y(), best->a.z()};
  sol.b = {best->b.x(), best->b.y(), best->b.z()};

  // Detect a symmetry-related twin minimum with opposite x-magnetization.
  const double c_best = sol.ground.point.c;
  for (const auto& m : minima) {
    if (m.energy > best->energy + 1e-9) continue;
    const ExpectationPoint q = detail::product_point(m.a, m.b);
    if (std::fabs(q.c + c_best) < 1e-8 && std::fabs(c_best) > 1e-8) {
      sol.ground.degeneracy = 2;
      sol.ground.point.a = 0.5 * (sol.ground.point.a + q.a);
      sol.ground.point.b = 0.5 * (sol.ground.point.b + q.b);
      sol.ground.point.c = 0.0;
      break;
    }
  }

  bool any_converged = false;
  for (const auto& m : minima)
    if (m.converged && m.energy < best->energy + 1e-9) any_converged = true;
  if (!any_converged)
    throw OptimizerError("mean_field_extreme: optimizer did not converge", sol.ground);
  return sol;
}

inline GroundStateResult mean_field_extreme(const SpinParams& params, int restarts,
                                            SeededRng rng) {
  return mean_field_solve(params, restarts, rng).ground;
}

}  // namespace rdmgeo
