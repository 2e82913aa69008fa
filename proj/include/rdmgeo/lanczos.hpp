// Thick-restart Lanczos for the extremal eigenpairs of large symmetric
// operators given only as a matvec. Used for the sparse spin chains
// (dimension up to 2^22) and the classical row transfer matrices (2^16).
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <utility>

#include "rdmgeo/core.hpp"
#include "rdmgeo/rng.hpp"

namespace rdmgeo {

struct LanczosOptions {
  int num_eigenpairs = 2;          // lowest eigenpairs to converge
  int max_basis = 48;              // Krylov basis size before a thick restart
  int max_restarts = 500;
  double tolerance = 1e-10;        // residual ||H v - theta v||
  std::uint64_t seed = 0x5eedULL;  // fixed start vector for determinism
};

struct LanczosResult {
  Eigen::VectorXd eigenvalues;  // ascending
  Eigen::MatrixXd vectors;      // columns match eigenvalues
  bool converged = false;
  int matvecs = 0;
};

/// Lowest eigenpairs of a symmetric operator. `apply(x, y)` computes y = H x
/// (x and y never alias). Deterministic for fixed options.
template <class Apply>
LanczosResult lanczos_lowest(std::int64_t dim, Apply&& apply, const LanczosOptions& opts = {}) {
  using Eigen::MatrixXd;
  using Eigen::VectorXd;

  if (dim <= 0) throw Error("lanczos: empty operator");
  const int want = static_cast<int>(std::min<std::int64_t>(opts.num_eigenpairs, dim));

  // Cap the stored basis so large problems stay within a sane memory budget.
  std::int64_t m64 = std::min<std::int64_t>(opts.max_basis, dim);
  const std::int64_t budget_vectors = std::max<std::int64_t>((768LL << 20) / (8 * dim), 6);
  m64 = std::min(m64, budget_vectors);
  m64 = std::max(m64, std::min<std::int64_t>(dim, 2LL * want + 4));
  const int m = static_cast<int>(m64);

  MatrixXd basis(dim, m);
  MatrixXd hproj = MatrixXd::Zero(m, m);
  VectorXd w(dim);

  SeededRng rng(opts.seed);
  VectorXd v(dim);
  for (std::int64_t i = 0; i < dim; ++i) v[i] = rng.uniform() - 0.5;
  v.normalize();

  int nkeep = 0;
  int matvecs = 0;

  for (int restart = 0; restart < opts.max_restarts; ++restart) {
    basis.col(nkeep) = v;
    int kb = nkeep;  // index of the last filled basis column
    double beta = 0.0;
    while (true) {
      apply(basis.col(kb), w);
      ++matvecs;
      // Orthogonalize twice, accumulating the projection coefficients: they
      // are exactly the column hproj(0..kb, kb).
      for (int pass = 0; pass < 2; ++pass) {
        for (int j = 0; j <= kb; ++j) {
          const double c = basis.col(j).dot(w);
          w -= c * basis.col(j);
          hproj(j, kb) += c;
        }
      }
      for (int j = 0; j < kb; ++j) hproj(kb, j) = hproj(j, kb);
      beta = w.norm();
      if (kb + 1 >= m) break;
      if (beta < 1e-13) {
        // Invariant subspace: continue with a fresh random direction.
        for (std::int64_t i = 0; i < dim; ++i) w[i] = rng.uniform() - 0.5;
        for (int j = 0; j <= kb; ++j) w -= (basis.col(j).dot(w)) * basis.col(j);
        beta = w.norm();
        if (beta < 1e-12) break;  // space exhausted
        w /= beta;
        beta = 0.0;  // no coupling to the previous column
      } else {
        w /= beta;
      }
      ++kb;
      basis.col(kb) = w;
      // Column kb of hproj is accumulated from the matvec projections on the
      // next pass; nothing is pre-seeded here.
    }
    const int nb = kb + 1;

    Eigen::SelfAdjointEigenSolver<MatrixXd> es(hproj.topLeftCorner(nb, nb));
    const VectorXd theta = es.eigenvalues();
    const MatrixXd s = es.eigenvectors();

    // Residual estimates from the last beta; cheap and standard.
    bool maybe_done = true;
    for (int i = 0; i < want && i < nb; ++i)
      if (beta * std::fabs(s(nb - 1, i)) >
          0.1 * opts.tolerance * std::max(1.0, std::fabs(theta[i])))
        maybe_done = false;
    if (nb < want) maybe_done = false;

    if (maybe_done || nb >= dim) {
      MatrixXd ritz = basis.leftCols(nb) * s.leftCols(std::min(nb, want));
      bool ok = true;
      for (int i = 0; i < ritz.cols(); ++i) {
        ritz.col(i).normalize();
        apply(ritz.col(i), w);
        ++matvecs;
        const double r = (w - theta[i] * ritz.col(i)).norm();
        if (r > opts.tolerance * std::max(1.0, std::fabs(theta[i]))) ok = false;
      }
      if (ok || nb >= dim) {
        LanczosResult res;
        res.eigenvalues = theta.head(ritz.cols());
        res.vectors = std::move(ritz);
        res.converged = ok;
        res.matvecs = matvecs;
        if (!ok) throw Error("lanczos: failed to converge to the requested residual");
        return res;
      }
    }

    // Thick restart: retain the leading Ritz vectors; continue from the
    // residual direction. The coupling column is recomputed from an actual
    // matvec on the next expansion, so only the diagonal is seeded.
    nkeep = std::min(std::max(want + 4, 2 * want), nb - 1);
    nkeep = std::min(nkeep, m - 2);
    MatrixXd ritz = basis.leftCols(nb) * s.leftCols(nkeep);
    basis.leftCols(nkeep) = ritz;
    hproj.setZero();
    for (int i = 0; i < nkeep; ++i) hproj(i, i) = theta[i];
    if (beta < 1e-13) {
      for (std::int64_t i = 0; i < dim; ++i) w[i] = rng.uniform() - 0.5;
      for (int j = 0; j < nkeep; ++j) w -= (basis.col(j).dot(w)) * basis.col(j);
      w.normalize();
      v = w;
    } else {
      v = w / beta;
    }
  }
  throw Error("lanczos: restart limit exceeded");
}

/// Largest eigenpair of a symmetric operator (lanczos_lowest applied to -H).
template <class Apply>
std::pair<double, Eigen::VectorXd> lanczos_largest(std::int64_t dim, Apply&& apply,
                                                   LanczosOptions opts = {}) {
  opts.num_eigenpairs = std::max(opts.num_eigenpairs, 1);
  auto neg = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    apply(x, y);
    y = -y;
  };
  LanczosResult r = lanczos_lowest(dim, neg, opts);
  return {-r.eigenvalues[0], r.vectors.col(0)};
}

}  // namespace rdmgeo
