// Adaptive Gauss-Kronrod (G7/K15) quadrature for the exact-solution
// oracles (Pfeuty chain energy, Onsager free energy).
#pragma once

#include <cmath>
#include <cstddef>
#include <utility>

#include "rdmgeo/core.hpp"

namespace rdmgeo {

namespace detail {

// 15-point Kronrod nodes/weights on [-1,1] with the embedded 7-point Gauss rule.
inline constexpr double kKronrodNodes[15] = {
    -0.991455371120812639206854697526329, -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926, -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730, -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245, 0.0,
    0.207784955007898467600689403773245,  0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,  0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,  0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};

inline constexpr double kKronrodWeights[15] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    0.204432940075298892414161999234649, 0.190350578064785409913256402421014,
    0.169004726639267902826583426598550, 0.140653259715525918745189590510238,
    0.104790010322250183839876322541518, 0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};

inline constexpr double kGaussWeights[7] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
    0.381830050505118944950369775488975, 0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};

template <class F>
std::pair<double, double> gk15(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double kron = 0.0, gauss = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double fx = f(mid + half * kKronrodNodes[i]);
    kron += kKronrodWeights[i] * fx;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * fx;
  }
  kron *= half;
  gauss *= half;
  return {kron, std::fabs(kron - gauss)};
}

template <class F>
double integrate_rec(F&& f, double a, double b, double tol, int depth) {
  auto [val, err] = gk15(f, a, b);
  if (err <= tol || depth >= 60) return val;
  const double mid = 0.5 * (a + b);
  return integrate_rec(f, a, mid, 0.5 * tol, depth + 1) +
         integrate_rec(f, mid, b, 0.5 * tol, depth + 1);
}

}  // namespace detail

/// Adaptive quadrature of f over [a, b] to absolute tolerance tol.
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-12) {
  if (!(a < b)) {
    if (a == b) return 0.0;
    return -integrate(std::forward<F>(f), b, a, tol);
  }
  // Seed the recursion with a fixed split so narrow integrand features near
  // interval midpoints are not missed by a single coarse panel.
  const int n0 = 8;
  double total = 0.0;
  for (int i = 0; i < n0; ++i) {
    const double x0 = a + (b - a) * i / n0;
    const double x1 = a + (b - a) * (i + 1) / n0;
    total += detail::integrate_rec(f, x0, x1, tol / n0, 0);
  }
  return total;
}

}  // namespace rdmgeo
