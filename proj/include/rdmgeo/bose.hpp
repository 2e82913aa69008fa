// Closed-form thermodynamics of the 3D ideal Bose gas with a U(1)-breaking
// source v (units m = 1, rho = 1, k_B = 1):
//   <psi> = -v / mu,
//   S     = (5/2) lambda^-3 F_{5/2}(-beta mu) - beta mu lambda^-3 F_{3/2}(-beta mu),
//   E_kin = 3 / (2 beta^2 lambda^3) F_{5/2}(-beta mu),
// with lambda^2 = 2 pi / T, the density constraint
//   v^2/mu^2 + lambda^-3 F_{3/2}(-beta mu) = 1
// fixing the chemical potential, and F_sigma(x) = sum_{n>=1} n^-sigma e^{-n x}.
#pragma once

#include <cmath>

#include "rdmgeo/core.hpp"

namespace rdmgeo {

namespace detail {

/// Riemann zeta for s > 1: direct sum with an Euler-Maclaurin tail.
inline double zeta_gt1(double s) {
  const int n0 = 64;
  double sum = 0.0;
  for (int n = 1; n < n0; ++n) sum += std::pow(double(n), -s);
  const double a = n0;
  // tail: a^{1-s}/(s-1) + a^{-s}/2 + s a^{-s-1}/12 - s(s+1)(s+2) a^{-s-3}/720
  sum += std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s) +
         s * std::pow(a, -s - 1.0) / 12.0 -
         s * (s + 1.0) * (s + 2.0) * std::pow(a, -s - 3.0) / 720.0;
  return sum;
}

/// Dirichlet eta for s > 0 via the Euler-transformed alternating series.
inline double eta_positive(double s) {
  // Borwein-style acceleration with Chebyshev coefficients
  const int n = 32;
  double d = std::pow(3.0 + std::sqrt(8.0), n);
  d = 0.5 * (d + 1.0 / d);
  double b = -1.0, c = -d, sum = 0.0;
  for (int k = 0; k < n; ++k) {
    c = b - c;
    sum += (k % 2 == 0 ? 1.0 : -1.0) * c * std::pow(double(k + 1), -s);
    b *= 2.0 * (k + n) * (k - n) / ((2.0 * k + 1.0) * (k + 1.0));
  }
  return sum / d;
}

}  // namespace detail

/// Riemann zeta on the real line (s != 1); negative arguments through the
/// functional equation.
inline double riemann_zeta(double s) {
  if (s == 1.0) throw Error("riemann_zeta: pole at s = 1");
  if (s > 1.0) return detail::zeta_gt1(s);
  if (s > 0.0) return detail::eta_positive(s) / (1.0 - std::pow(2.0, 1.0 - s));
  if (s == 0.0) return -0.5;
  // zeta(s) = 2^s pi^{s-1} sin(pi s / 2) Gamma(1 - s) zeta(1 - s)
  return std::pow(2.0, s) * std::pow(M_PI, s - 1.0) * std::sin(0.5 * M_PI * s) *
         std::tgamma(1.0 - s) * riemann_zeta(1.0 - s);
}

/// Bose-Einstein series F_sigma(x) = sum_{n>=1} n^-sigma e^{-n x}, x >= 0.
/// Direct summation for x >= 0.1; below that the series converges too slowly
/// and the small-x expansion
///   F_sigma(x) = Gamma(1-sigma) x^{sigma-1} + sum_k zeta(sigma-k) (-x)^k / k!
/// is used (valid for non-integer sigma, |x| < 2 pi).
inline double polylog_F(double sigma, double x) {
  if (x < 0.0) throw Error("polylog_F: x must be >= 0");
  if (x == 0.0) {
    if (sigma <= 1.0) throw Error("polylog_F: series diverges at x = 0 for sigma <= 1");
    return riemann_zeta(sigma);
  }
  if (x >= 0.1) {
    double sum = 0.0;
    const double emx = std::exp(-x);
    double en = 1.0;
    for (int n = 1; n < 2000000; ++n) {
      en *= emx;
      const double term = std::pow(double(n), -sigma) * en;
      sum += term;
      if (term < 1e-18 * (1.0 - emx) && n > 4) break;
    }
    return sum;
  }
  if (sigma == std::floor(sigma))
    throw Error("polylog_F: small-x expansion requires non-integer sigma");
  double sum = std::tgamma(1.0 - sigma) * std::pow(x, sigma - 1.0);
  double xk = 1.0;  // (-x)^k / k!
  for (int k = 0; k <= 24; ++k) {
    const double term = riemann_zeta(sigma - k) * xk;
    sum += term;
    if (k > 2 && std::fabs(term) < 1e-17 * std::fabs(sum)) break;
    xk *= -x / (k + 1);
  }
  return sum;
}

struct BoseParams {
  double v = 0.0;  // U(1)-breaking source, >= 0
  double T = 1.0;

  void validate() const {
    if (!(v >= 0.0) || !std::isfinite(v) || !(T > 0.0) || !std::isfinite(T))
      throw Error("BoseParams: need v >= 0 and T > 0");
  }
};

struct BoseState {
  double mu = 0.0;      // chemical potential, <= 0
  double lambda = 0.0;  // thermal wavelength, lambda^2 = 2 pi / T
  double psi = 0.0;     // |<psi>|
  int psi_sign = 0;     // branch bookkeeping for the v = 0 ruled surface
  double S = 0.0;       // entropy density
  double Ekin = 0.0;    // kinetic energy density

  ExpectationPoint point() const { return {Ekin, S, psi}; }
};

/// Critical temperature at density rho: T_c = 2 pi / lambda_c^2 with
/// lambda_c^3 = zeta(3/2) / rho.
inline double bose_tc(double rho) {
  if (!(rho > 0.0)) throw Error("bose_tc: rho must be > 0");
  const double lambda_c2 = std::pow(riemann_zeta(1.5) / rho, 2.0 / 3.0);
  return 2.0 * M_PI / lambda_c2;
}

namespace detail {

inline BoseState fill_state(double mu, double T, double v, int sign) {
  const double lambda = std::sqrt(2.0 * M_PI / T);
  const double l3 = lambda * lambda * lambda;
  const double x = -mu / T;  // -beta mu >= 0
  const double f32 = polylog_F(1.5, x);
  const double f52 = polylog_F(2.5, x);
  BoseState st;
  st.mu = mu;
  st.lambda = lambda;
  st.psi = mu < 0.0 ? std::fabs(v / mu) : (v == 0.0 ? 0.0 : INFINITY);
  st.psi_sign = sign;
  st.S = 2.5 * f52 / l3 - (mu / T) * f32 / l3;
  st.Ekin = 1.5 * T * T * f52 / l3;
  return st;
}

inline double density_residual(double mu, double T, double v) {
  const double lambda = std::sqrt(2.0 * M_PI / T);
  const double l3 = lambda * lambda * lambda;
  return v * v / (mu * mu) + polylog_F(1.5, -mu / T) / l3 - 1.0;
}

}  // namespace detail

/// Chemical potential and state at fixed density rho = 1 for v > 0. The
/// constraint g(mu) = v^2/mu^2 + lambda^-3 F_{3/2}(-mu/T) - 1 is strictly
/// increasing on mu < 0, so bisection brackets the unique root.
inline BoseState solve_mu(const BoseParams& params) {
  params.validate();
  if (!(params.v > 0.0))
    throw Error("solve_mu: requires v > 0 (use bose_v0_branch for the v = 0 limit)");
  const double T = params.T, v = params.v;

  double hi = -1e-18;  // g(hi) > 0 (v^2/mu^2 diverges)
  double lo = -std::max({1.0, v, T});
  while (detail::density_residual(lo, T, v) > 0.0) {
    lo *= 4.0;
    if (lo < -1e12) throw Error("solve_mu: failed to bracket the density constraint");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (detail::density_residual(mid, T, v) > 0.0)
      hi = mid;
    else
      lo = mid;
  }
  const double mu = 0.5 * (lo + hi);
  const double resid = detail::density_residual(mu, T, v);
  if (std::fabs(resid) > 1e-10)
    throw Error("solve_mu: density constraint residual " + std::to_string(resid));
  return detail::fill_state(mu, T, v, +1);
}

enum class PsiBranch { plus, minus };

/// v = 0 limit. Above T_c the constraint fixes mu < 0 and psi = 0; below T_c
/// the gas condenses: mu = 0 and psi = +-sqrt(1 - lambda^-3 zeta(3/2)), the
/// two extreme points of the ruled surface.
inline BoseState bose_v0_branch(double T, PsiBranch branch = PsiBranch::plus) {
  if (!(T > 0.0)) throw Error("bose_v0_branch: T must be > 0");
  const double tc = bose_tc(1.0);
  const double lambda = std::sqrt(2.0 * M_PI / T);
  const double l3 = lambda * lambda * lambda;
  if (T <= tc) {
    const double n0 = std::max(0.0, 1.0 - riemann_zeta(1.5) / l3);
    BoseState st = detail::fill_state(0.0, T, 0.0, branch == PsiBranch::plus ? +1 : -1);
    st.psi = std::sqrt(n0);
    return st;
  }
  // thermal phase: lambda^-3 F_{3/2}(-mu/T) = 1, monotone in mu
  double lo = -50.0 * T, hi = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (polylog_F(1.5, -mid / T) / l3 - 1.0 > 0.0)
      hi = mid;
    else
      lo = mid;
  }
  BoseState st = detail::fill_state(0.5 * (lo + hi), T, 0.0, 0);
  st.psi = 0.0;
  return st;
}

/// Exact momentum-shell RG flow at fixed density:
/// beta(s) = beta(0) e^{-2s} and v(s) = v(0) e^{(7/2)s}.
inline BoseParams rg_flow(const BoseParams& params, double s) {
  params.validate();
  if (!std::isfinite(s)) throw Error("rg_flow: s must be finite");
  return {params.v * std::exp(3.5 * s), params.T * std::exp(2.0 * s)};
}

}  // namespace rdmgeo
