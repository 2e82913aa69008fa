// Random translation-invariant MPS from the circular unitary ensemble and
// the transfer-matrix evaluation of their 1- and 2-site expectation values.
//
// A tensor A_s (s = 0, 1) of bond dimension D is the s-block of the first D
// columns of a Haar 2D x 2D unitary, which makes it left-canonical by
// construction: sum_s A_s^dag A_s = 1.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "rdmgeo/core.hpp"
#include "rdmgeo/rng.hpp"

namespace rdmgeo {

/// Raised when a sampled tensor is not injective enough (degenerate transfer
/// spectrum) for a reliable fixed point; callers draw a fresh sample.
class ResampleError : public Error {
 public:
  using Error::Error;
};

struct UniformMpsTensor {
  int D = 1;
  std::array<Eigen::MatrixXcd, 2> A;

  /// max |sum_s A_s^dag A_s - 1|, zero for exact left canonical form.
  double canonical_defect() const {
    Eigen::MatrixXcd g = A[0].adjoint() * A[0] + A[1].adjoint() * A[1];
    g -= Eigen::MatrixXcd::Identity(D, D);
    return g.cwiseAbs().maxCoeff();
  }
};

struct TransferFixedPoint {
  Eigen::MatrixXcd rho_R;  // Hermitian, PSD, trace 1
  double eigenvalue = 1.0;
  double gap = 0.0;  // |lambda_1| - |lambda_2|
};

/// Haar sample via QR of a complex Ginibre matrix with the R-diagonal phase
/// correction (the standard CUE construction).
inline UniformMpsTensor random_uniform_mps(int D, SeededRng& rng) {
  if (D < 1 || D > 64) throw Error("random_uniform_mps: D must be in [1, 64]");
  const int m = 2 * D;
  Eigen::MatrixXcd g(m, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) g(i, j) = rng.complex_gaussian();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(m, D);
  const Eigen::MatrixXcd r = qr.matrixQR().topLeftCorner(D, D).triangularView<Eigen::Upper>();
  for (int j = 0; j < D; ++j) {
    const std::complex<double> rjj = r(j, j);
    const double a = std::abs(rjj);
    if (a > 0) q.col(j) *= rjj / a;
  }
  UniformMpsTensor t;
  t.D = D;
  t.A[0] = q.topRows(D);
  t.A[1] = q.bottomRows(D);
  return t;
}

namespace detail {

inline Eigen::MatrixXcd transfer_right(const UniformMpsTensor& t, const Eigen::MatrixXcd& rho) {
  return t.A[0] * rho * t.A[0].adjoint() + t.A[1] * rho * t.A[1].adjoint();
}

/// Dominant right fixed point via a small Arnoldi iteration on the D^2-dim
/// map; also estimates the subleading magnitude for the injectivity gap.
inline TransferFixedPoint fixed_point_arnoldi(const UniformMpsTensor& t) {
  const int D = t.D;
  const int n = D * D;
  const int m = std::min(n, 36);
  using Eigen::MatrixXcd;
  using Eigen::VectorXcd;

  auto apply = [&](const VectorXcd& x) {
    Eigen::Map<const MatrixXcd> xm(x.data(), D, D);
    MatrixXcd y = transfer_right(t, xm);
    return VectorXcd(Eigen::Map<VectorXcd>(y.data(), n));
  };

  MatrixXcd basis(n, m + 1);
  MatrixXcd hess = MatrixXcd::Zero(m + 1, m);
  // start from the identity direction (overlaps the Perron mode)
  {
    MatrixXcd id = MatrixXcd::Identity(D, D);
    basis.col(0) = Eigen::Map<VectorXcd>(id.data(), n) / std::sqrt(double(D));
  }
  int built = 0;
  for (int k = 0; k < m; ++k) {
    VectorXcd w = apply(basis.col(k));
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j <= k; ++j) {
        const std::complex<double> c = basis.col(j).dot(w);
        w -= c * basis.col(j);
        hess(j, k) += c;
      }
    const double beta = w.norm();
    built = k + 1;
    if (beta < 1e-14) break;
    hess(k + 1, k) = beta;
    basis.col(k + 1) = w / beta;
  }

  Eigen::ComplexEigenSolver<MatrixXcd> es(hess.topLeftCorner(built, built));
  int imax = 0, isecond = -1;
  for (int i = 1; i < built; ++i)
    if (std::abs(es.eigenvalues()[i]) > std::abs(es.eigenvalues()[imax])) imax = i;
  for (int i = 0; i < built; ++i) {
    if (i == imax) continue;
    if (isecond < 0 || std::abs(es.eigenvalues()[i]) > std::abs(es.eigenvalues()[isecond]))
      isecond = i;
  }
  const double lam1 = std::abs(es.eigenvalues()[imax]);
  const double lam2 = isecond >= 0 ? std::abs(es.eigenvalues()[isecond]) : 0.0;

  VectorXcd fp = basis.leftCols(built) * es.eigenvectors().col(imax);
  // residual check; the Krylov space from the identity converges fast for
  // injective tensors, slow convergence itself signals a tiny gap
  VectorXcd resid = apply(fp) - es.eigenvalues()[imax] * fp;
  TransferFixedPoint out;
  out.eigenvalue = lam1;
  out.gap = lam1 - lam2;
  Eigen::Map<MatrixXcd> rho(fp.data(), D, D);
  MatrixXcd r = 0.5 * (MatrixXcd(rho) + MatrixXcd(rho).adjoint());
  const std::complex<double> tr = r.trace();
  if (std::abs(tr) < 1e-14) throw ResampleError("transfer fixed point has vanishing trace");
  r /= tr;
  out.rho_R = r;
  if (resid.norm() > 1e-9) throw ResampleError("transfer fixed point did not converge");
  return out;
}

}  // namespace detail

/// Dominant right fixed point of the transfer map rho -> sum_s A_s rho A_s^dag.
/// Dense eigendecomposition for D <= 8, Arnoldi above. Throws ResampleError
/// when the spectral gap is below 1e-8 (non-injective tensor).
inline TransferFixedPoint transfer_fixed_point(const UniformMpsTensor& t) {
  const int D = t.D;
  TransferFixedPoint out;
  if (D <= 8) {
    const int n = D * D;
    Eigen::MatrixXcd tm(n, n);
    // column j: image of the j-th matrix unit
    for (int j = 0; j < n; ++j) {
      Eigen::MatrixXcd unit = Eigen::MatrixXcd::Zero(D, D);
      unit(j % D, j / D) = 1.0;
      Eigen::MatrixXcd img = detail::transfer_right(t, unit);
      tm.col(j) = Eigen::Map<Eigen::VectorXcd>(img.data(), n);
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(tm);
    int imax = 0, isecond = -1;
    for (int i = 1; i < n; ++i)
      if (std::abs(es.eigenvalues()[i]) > std::abs(es.eigenvalues()[imax])) imax = i;
    for (int i = 0; i < n; ++i) {
      if (i == imax) continue;
      if (isecond < 0 || std::abs(es.eigenvalues()[i]) > std::abs(es.eigenvalues()[isecond]))
        isecond = i;
    }
    out.eigenvalue = std::abs(es.eigenvalues()[imax]);
    out.gap = out.eigenvalue - (isecond >= 0 ? std::abs(es.eigenvalues()[isecond]) : 0.0);
    Eigen::VectorXcd fp = es.eigenvectors().col(imax);
    Eigen::Map<Eigen::MatrixXcd> rho(fp.data(), D, D);
    Eigen::MatrixXcd r = 0.5 * (Eigen::MatrixXcd(rho) + Eigen::MatrixXcd(rho).adjoint());
    const std::complex<double> tr = r.trace();
    if (std::abs(tr) < 1e-14) throw ResampleError("transfer fixed point has vanishing trace");
    out.rho_R = r / tr;
  } else {
    out = detail::fixed_point_arnoldi(t);
  }
  if (out.gap < 1e-8) throw ResampleError("degenerate transfer spectrum: resample");
  if (std::abs(out.eigenvalue - 1.0) > 1e-10)
    throw Error("transfer_fixed_point: leading eigenvalue deviates from 1 (tensor not canonical)");
  return out;
}

/// Expectation values of single-site operators and one bond operator in the
/// thermodynamic-limit state defined by a left-canonical tensor. Outputs are
/// real within 1e-10 and clamped to the operator's spectral range.
inline std::vector<double> mps_expectations(const UniformMpsTensor& t,
                                            std::span<const Eigen::Matrix2cd> single_ops,
                                            const Eigen::Matrix4cd& bond_op) {
  const TransferFixedPoint fp = transfer_fixed_point(t);
  const Eigen::MatrixXcd& rho = fp.rho_R;

  auto clamp_real = [](std::complex<double> val, double bound) {
    if (std::abs(val.imag()) > 1e-10)
      throw Error("mps_expectations: non-real expectation value");
    return std::min(bound, std::max(-bound, val.real()));
  };
  auto spectral_bound = [](const Eigen::MatrixXcd& op) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  };

  std::vector<double> out;
  out.reserve(single_ops.size() + 1);
  // bond operator first: <O2> = sum O2_{(s1' s2'),(s1 s2)} Tr(A_s1 A_s2 rho A_s2'^+ A_s1'^+)
  {
    std::complex<double> acc = 0.0;
    for (int s1 = 0; s1 < 2; ++s1)
      for (int s2 = 0; s2 < 2; ++s2) {
        const Eigen::MatrixXcd m = t.A[s1] * t.A[s2] * rho;
        for (int s1p = 0; s1p < 2; ++s1p)
          for (int s2p = 0; s2p < 2; ++s2p) {
            const std::complex<double> coef = bond_op(2 * s1p + s2p, 2 * s1 + s2);
            if (coef == 0.0) continue;
            acc += coef * (m * t.A[s2p].adjoint() * t.A[s1p].adjoint()).trace();
          }
      }
    out.push_back(clamp_real(acc, spectral_bound(bond_op)));
  }
  for (const auto& op : single_ops) {
    std::complex<double> acc = 0.0;
    for (int s = 0; s < 2; ++s) {
      const Eigen::MatrixXcd m = t.A[s] * rho;
      for (int sp = 0; sp < 2; ++sp) {
        const std::complex<double> coef = op(sp, s);
        if (coef == 0.0) continue;
        acc += coef * (m * t.A[sp].adjoint()).trace();
      }
    }
    out.push_back(clamp_real(acc, spectral_bound(op)));
  }
  return out;
}

// Pauli matrices in the basis Z|0> = +|0>.
inline Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}
inline Eigen::Matrix2cd pauli_y() {
  Eigen::Matrix2cd m;
  m << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0;
  return m;
}
inline Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

struct ScatterOptions {
  int count = 1000;
  int D_min = 2;
  int D_max = 10;
  bool with_y = true;  // also record <Y> for Theta scans
  std::uint64_t seed = 1;
};

/// Random-state cloud of (<XX>, <Z>, <X>[, <Y>]) points. Point k draws from
/// the RNG stream (seed, k), so the result is independent of any work
/// partitioning; bond dimensions cycle over [D_min, D_max]. Non-injective
/// samples are redrawn from the same stream; an overall resample rate above
/// 50% aborts with diagnostics.
inline std::vector<CloudPoint> scatter_generate(const ScatterOptions& opts) {
  if (opts.count < 0) throw Error("scatter_generate: count must be >= 0");
  if (opts.D_min < 1 || opts.D_max < opts.D_min)
    throw Error("scatter_generate: need 1 <= D_min <= D_max");
  std::vector<Eigen::Matrix2cd> singles = {pauli_z(), pauli_x()};
  if (opts.with_y) singles.push_back(pauli_y());
  const Eigen::Matrix4cd xx = Eigen::Matrix4cd(
      (Eigen::Matrix4cd() << 0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0).finished());

  std::vector<CloudPoint> cloud(opts.count);
  long long resamples = 0;
  const int span = opts.D_max - opts.D_min + 1;
  for (int k = 0; k < opts.count; ++k) {
    const int D = opts.D_min + (k % span);
    SeededRng rng(opts.seed, static_cast<std::uint64_t>(k));
    for (int attempt = 0;; ++attempt) {
      try {
        const UniformMpsTensor t = random_uniform_mps(D, rng);
        const std::vector<double> vals = mps_expectations(t, singles, xx);
        CloudPoint cp;
        cp.p = {vals[0], vals[1], vals[2]};
        if (opts.with_y) cp.y = vals[3];
        cp.source = PointSource::random;
        cloud[k] = cp;
        break;
      } catch (const ResampleError&) {
        ++resamples;
        if (attempt > 64 || resamples > opts.count / 2 + 8)
          throw Error("scatter_generate: resample rate exceeded 50% (seed " +
                      std::to_string(opts.seed) + ", index " + std::to_string(k) + ")");
      }
    }
  }
  return cloud;
}

}  // namespace rdmgeo
