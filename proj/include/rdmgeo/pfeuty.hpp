// Exact thermodynamic-limit solution of the transverse-field Ising chain at
// Bx = 0 (J = 1, field h = Bz): ground energy from the free-fermion
// dispersion, transverse magnetization from the field derivative, and the
// spontaneous longitudinal magnetization (1 - h^2)^(1/8) below h = 1.
#pragma once

#include <cmath>

#include "rdmgeo/core.hpp"
#include "rdmgeo/quadrature.hpp"

namespace rdmgeo {

enum class Branch { plus, minus, symmetric };

/// Ground energy per site, e(h) = -(1/pi) \int_0^pi sqrt(1 + h^2 - 2 h cos k) dk.
inline double pfeuty_energy(double h) {
  if (!(h >= 0.0)) throw Error("pfeuty_energy: h must be >= 0");
  auto eps = [h](double k) { return std::sqrt(1.0 + h * h - 2.0 * h * std::cos(k)); };
  return -integrate(eps, 0.0, M_PI, 1e-13) / M_PI;
}

/// Transverse magnetization <Z> = -de/dh, from the analytic derivative of the
/// dispersion integral.
inline double pfeuty_transverse(double h) {
  if (!(h >= 0.0)) throw Error("pfeuty_transverse: h must be >= 0");
  if (h == 0.0) return 0.0;
  auto dd = [h](double k) {
    const double c = std::cos(k);
    const double eps = std::sqrt(1.0 + h * h - 2.0 * h * c);
    if (eps < 1e-300) return 0.0;
    return (h - c) / eps;
  };
  return integrate(dd, 0.0, M_PI, 1e-13) / M_PI;
}

/// Spontaneous magnetization of the ordered phase; 0 at and above h = 1.
inline double pfeuty_magnetization(double h) {
  if (!(h >= 0.0)) throw Error("pfeuty_magnetization: h must be >= 0");
  if (h >= 1.0) return 0.0;
  return std::pow(1.0 - h * h, 0.125);
}

/// Boundary point of the d = 1 set on the Bx = 0 slice. The (<XX>, <Z>)
/// pair follows from the Hellmann-Feynman split e = -<XX> - h <Z>; the third
/// coordinate is the branch-resolved order parameter.
inline ExpectationPoint pfeuty_point(double h, Branch branch) {
  const double e = pfeuty_energy(h);
  const double z = pfeuty_transverse(h);
  const double xx = -e - h * z;
  double x = 0.0;
  if (branch == Branch::plus) x = pfeuty_magnetization(h);
  else if (branch == Branch::minus) x = -pfeuty_magnetization(h);
  return {xx, z, x};
}

}  // namespace rdmgeo
