// Exact diagonalization of the transverse-field Ising chain
//   H = -J sum_i X_i X_{i+1} - Bz sum_i Z_i - Bx sum_i X_i
// on N <= 22 sites with periodic or open boundary. Dense solver for small
// chains, thick-restart Lanczos on the matrix-free operator above.
//
// Basis convention: computational z-basis, bit b_i = 0 means Z_i = +1.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "rdmgeo/core.hpp"
#include "rdmgeo/lanczos.hpp"

namespace rdmgeo {

enum class Boundary { periodic, open };

struct ChainSpec {
  int n_sites = 8;
  Boundary boundary = Boundary::periodic;

  void validate() const {
    if (n_sites < 2 || n_sites > 22)
      throw Error("ChainSpec: n_sites must be in [2, 22]");
  }
  int n_bonds() const { return boundary == Boundary::periodic ? n_sites : n_sites - 1; }
};

struct GroundStateResult {
  double energy_per_site = 0.0;
  ExpectationPoint point;   // (<XX> per bond, <Z> per site, <X> per site)
  double gap = 0.0;         // E1 - E0
  int degeneracy = 1;       // eigenvalues within 1e-10 of the minimum
};

namespace detail {

constexpr double kDegeneracyTol = 1e-10;

/// y = H x for the chain Hamiltonian, matrix-free.
struct ChainApply {
  int n;
  bool periodic;
  double J, Bz, Bx;
  std::vector<double> zdiag;  // -Bz * sum_i Z_i per basis state

  ChainApply(const ChainSpec& spec, const SpinParams& p)
      : n(spec.n_sites), periodic(spec.boundary == Boundary::periodic),
        J(p.J), Bz(p.Bz), Bx(p.Bx) {
    const std::int64_t dim = std::int64_t{1} << n;
    zdiag.resize(dim);
    for (std::int64_t s = 0; s < dim; ++s)
      zdiag[s] = -Bz * (n - 2 * __builtin_popcountll(s));
  }

  std::int64_t dim() const { return std::int64_t{1} << n; }

  void operator()(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
    const std::int64_t d = dim();
    for (std::int64_t s = 0; s < d; ++s) y[s] = zdiag[s] * x[s];
    const int nb = periodic ? n : n - 1;
    if (J != 0.0) {
      for (int i = 0; i < nb; ++i) {
        const std::int64_t mask = (std::int64_t{1} << i) | (std::int64_t{1} << ((i + 1) % n));
        for (std::int64_t s = 0; s < d; ++s) y[s] -= J * x[s ^ mask];
      }
    }
    if (Bx != 0.0) {
      for (int i = 0; i < n; ++i) {
        const std::int64_t mask = std::int64_t{1} << i;
        for (std::int64_t s = 0; s < d; ++s) y[s] -= Bx * x[s ^ mask];
      }
    }
  }
};

struct ChainObservables {
  double xx, z, x;
};

/// Translation-averaged expectations of one eigenvector.
inline ChainObservables chain_expectations(const ChainSpec& spec, const Eigen::VectorXd& v) {
  const int n = spec.n_sites;
  const std::int64_t d = std::int64_t{1} << n;
  double z = 0.0;
  for (std::int64_t s = 0; s < d; ++s) z += v[s] * v[s] * (n - 2 * __builtin_popcountll(s));
  double xx = 0.0;
  const int nb = spec.n_bonds();
  for (int i = 0; i < nb; ++i) {
    const std::int64_t mask = (std::int64_t{1} << i) | (std::int64_t{1} << ((i + 1) % n));
    double acc = 0.0;
    for (std::int64_t s = 0; s < d; ++s) acc += v[s] * v[s ^ mask];
    xx += acc;
  }
  double x = 0.0;
  for (int i = 0; i < n; ++i) {
    const std::int64_t mask = std::int64_t{1} << i;
    double acc = 0.0;
    for (std::int64_t s = 0; s < d; ++s) acc += v[s] * v[s ^ mask];
    x += acc;
  }
  return {xx / nb, z / n, x / n};
}

}  // namespace detail

/// Ground state of the chain. Degenerate ground spaces (within 1e-10) are
/// reported via the subspace-averaged (trace) expectations; at Bx = 0 the
/// returned point is additionally spin-flip symmetrized, so <X> = 0 exactly.
/// Branch points are obtained by probing Bx = +-epsilon explicitly.
inline GroundStateResult chain_ground(const ChainSpec& spec, const SpinParams& params) {
  spec.validate();
  if (!params.finite()) throw Error("chain_ground: non-finite parameters");

  const std::int64_t dim = std::int64_t{1} << spec.n_sites;
  Eigen::VectorXd evals;
  Eigen::MatrixXd evecs;

  if (dim <= 1024) {
    detail::ChainApply apply(spec, params);
    Eigen::MatrixXd H(dim, dim);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(dim), col(dim);
    for (std::int64_t j = 0; j < dim; ++j) {
      e[j] = 1.0;
      apply(e, col);
      H.col(j) = col;
      e[j] = 0.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    // keep the lowest block: enough columns to cover any plausible degeneracy
    int keep = 1;
    while (keep < dim && es.eigenvalues()[keep] - es.eigenvalues()[0] < 10 * detail::kDegeneracyTol)
      ++keep;
    keep = std::min<std::int64_t>(keep + 1, dim);
    evals = es.eigenvalues().head(keep);
    evecs = es.eigenvectors().leftCols(keep);
  } else {
    detail::ChainApply apply(spec, params);
    LanczosOptions opts;
    opts.num_eigenpairs = std::min<std::int64_t>(4, dim);
    opts.tolerance = 1e-10;
    LanczosResult r = lanczos_lowest(dim, apply, opts);
    evals = r.eigenvalues;
    evecs = r.vectors;
  }

  const double e0 = evals[0];
  int degeneracy = 1;
  while (degeneracy < evals.size() && evals[degeneracy] - e0 < detail::kDegeneracyTol) ++degeneracy;
  const double gap = degeneracy < evals.size() ? evals[degeneracy] - e0
                                               : (evals.size() > 1 ? evals[1] - e0 : 0.0);

  // Subspace-averaged expectations (equal-weight trace over the degenerate block).
  double xx = 0.0, z = 0.0, x = 0.0;
  for (int k = 0; k < degeneracy; ++k) {
    const auto obs = detail::chain_expectations(spec, evecs.col(k));
    xx += obs.xx;
    z += obs.z;
    x += obs.x;
  }
  xx /= degeneracy;
  z /= degeneracy;
  x /= degeneracy;
  if (params.Bx == 0.0) x = 0.0;  // symmetric tie-break convention

  GroundStateResult res;
  res.energy_per_site = e0 / spec.n_sites;
  res.point = {xx, z, x};
  res.gap = degeneracy < evals.size() ? gap : evals.size() > 1 ? evals[1] - e0 : 0.0;
  res.degeneracy = degeneracy;
  return res;
}

/// Exact ground state of two spins (the d = 0 backend): the 4x4 problem
///   H = -J X(x)X - Bz (Z(x)I + I(x)Z) - Bx (X(x)I + I(x)X).
inline GroundStateResult two_spin_ground(const SpinParams& params) {
  if (!params.finite()) throw Error("two_spin_ground: non-finite parameters");
  return chain_ground(ChainSpec{2, Boundary::open}, params);
}

/// Ground-state observables including <Y>, for scans over rotated order
/// parameters O(Theta) = cos(Theta/2) X + sin(Theta/2) Y.
struct ChainQuadruple {
  double xx = 0.0, z = 0.0, x = 0.0, y = 0.0;
  double energy_per_site = 0.0;
  int degeneracy = 1;
};

namespace detail {

// Complex chain Hamiltonian H = -J sum XX - Bz sum Z - Bx sum X - By sum Y,
// real-ified: the complex vector u + iv is stored as [u; v] and Y (purely
// imaginary in the z-basis, <s^bit|Y_i|s> = i(1 - 2 bit_i(s))) couples the
// two halves antisymmetrically.
struct ChainApplyXY {
  ChainApply base;
  double By;

  ChainApplyXY(const ChainSpec& spec, const SpinParams& p, double by)
      : base(spec, p), By(by) {}

  std::int64_t dim() const { return 2 * base.dim(); }

  void operator()(const Eigen::VectorXd& xin, Eigen::VectorXd& yout) const {
    const std::int64_t d = base.dim();
    // block-diagonal real part
    Eigen::Map<const Eigen::VectorXd> u(xin.data(), d), v(xin.data() + d, d);
    Eigen::Map<Eigen::VectorXd> ru(yout.data(), d), rv(yout.data() + d, d);
    Eigen::VectorXd tmp(d);
    base(u, tmp);
    ru = tmp;
    base(v, tmp);
    rv = tmp;
    if (By != 0.0) {
      // -By Y_i: imaginary coefficient B(s^b, s) = -By (1 - 2 bit_i(s));
      // contributes (-B v; +B u) to (real; imag).
      for (int i = 0; i < base.n; ++i) {
        const std::int64_t mask = std::int64_t{1} << i;
        for (std::int64_t s = 0; s < d; ++s) {
          const double coef = -By * (s & mask ? -1.0 : 1.0);
          ru[s ^ mask] -= coef * v[s];
          rv[s ^ mask] += coef * u[s];
        }
      }
    }
  }
};

}  // namespace detail

/// Ground state of the chain with an additional By field. Returns the
/// translation-averaged (<XX>, <Z>, <X>, <Y>) quadruple; degenerate ground
/// spaces are trace-averaged as in chain_ground.
inline ChainQuadruple chain_ground_xy(const ChainSpec& spec, const SpinParams& params,
                                      double By) {
  spec.validate();
  if (!params.finite() || !std::isfinite(By)) throw Error("chain_ground_xy: non-finite parameters");
  if (By == 0.0) {
    const GroundStateResult r = chain_ground(spec, params);
    return {r.point.a, r.point.b, r.point.c, 0.0, r.energy_per_site, r.degeneracy};
  }

  const int n = spec.n_sites;
  const std::int64_t d = std::int64_t{1} << n;
  detail::ChainApplyXY apply(spec, params, By);

  // Every eigenvalue of the real-ified operator is doubled (psi and i psi),
  // so ask for twice the usual block and de-duplicate.
  LanczosOptions opts;
  opts.num_eigenpairs = static_cast<int>(std::min<std::int64_t>(6, 2 * d));
  opts.tolerance = 1e-10;
  LanczosResult r = lanczos_lowest(2 * d, apply, opts);

  const double e0 = r.eigenvalues[0];
  int block = 1;
  while (block < r.eigenvalues.size() && r.eigenvalues[block] - e0 < detail::kDegeneracyTol)
    ++block;
  // physical degeneracy: each complex eigenvector appears twice
  const int degeneracy = std::max(1, block / 2);

  // Trace-average expectations over the real-ified block (covers the complex
  // ground space with equal weights).
  double xx = 0.0, z = 0.0, x = 0.0, y = 0.0;
  const int nb = spec.n_bonds();
  for (int k = 0; k < block; ++k) {
    Eigen::Map<const Eigen::VectorXd> u(r.vectors.col(k).data(), d);
    Eigen::Map<const Eigen::VectorXd> v(r.vectors.col(k).data() + d, d);
    for (std::int64_t s = 0; s < d; ++s) {
      const double w2 = u[s] * u[s] + v[s] * v[s];
      z += w2 * (n - 2 * __builtin_popcountll(s));
    }
    for (int i = 0; i < nb; ++i) {
      const std::int64_t mask =
          (std::int64_t{1} << i) | (std::int64_t{1} << ((i + 1) % n));
      for (std::int64_t s = 0; s < d; ++s) xx += u[s] * u[s ^ mask] + v[s] * v[s ^ mask];
    }
    for (int i = 0; i < n; ++i) {
      const std::int64_t mask = std::int64_t{1} << i;
      for (std::int64_t s = 0; s < d; ++s) {
        x += u[s] * u[s ^ mask] + v[s] * v[s ^ mask];
        // <Y_i> = sum_s Re[ conj(psi[s^mask]) i (1-2bit) psi[s] ]
        const double sign = (s & mask) ? -1.0 : 1.0;
        y += sign * (u[s ^ mask] * v[s] - v[s ^ mask] * u[s]);
      }
    }
  }
  const double norm = block;  // eigenvectors are unit-norm
  ChainQuadruple q;
  q.xx = xx / (norm * nb);
  q.z = z / (norm * n);
  q.x = x / (norm * n);
  q.y = y / (norm * n);
  q.energy_per_site = e0 / n;
  q.degeneracy = degeneracy;
  return q;
}

}  // namespace rdmgeo
