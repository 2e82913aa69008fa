// The bifurcation point J = -1, Bx = 2, Bz -> 0+ of the spin sets: the
// Hamiltonian H_TP = sum_j X_j X_{j+1} - 2 sum_j X_j is classical in the
// x-basis and its ground space is exponentially degenerate (configurations
// counted by a Fibonacci-type recurrence). The edge of the top plane follows
// from diagonalizing a perturbation projected onto that ground space.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "rdmgeo/core.hpp"
#include "rdmgeo/lanczos.hpp"
#include "rdmgeo/spin_chain.hpp"

namespace rdmgeo {

namespace detail {

// Integer energy of an x-basis configuration under H_TP (bit = 1 means x = -1):
// sum over bonds of x_j x_{j+1} minus 2 sum_j x_j. All values are integers,
// so ground-state membership needs no floating tolerance.
inline std::int64_t top_plane_energy(std::uint32_t config, int n, bool periodic) {
  std::int64_t e = 0;
  const int nb = periodic ? n : n - 1;
  for (int i = 0; i < nb; ++i) {
    const int xi = (config >> i) & 1 ? -1 : 1;
    const int xj = (config >> ((i + 1) % n)) & 1 ? -1 : 1;
    e += xi * xj;
  }
  int sx = 0;
  for (int i = 0; i < n; ++i) sx += (config >> i) & 1 ? -1 : 1;
  return e - 2 * sx;
}

}  // namespace detail

/// All minimal-energy x-basis configurations of H_TP.
inline std::vector<std::uint32_t> top_plane_ground_configs(const ChainSpec& spec) {
  spec.validate();
  const int n = spec.n_sites;
  const bool periodic = spec.boundary == Boundary::periodic;
  const std::uint32_t dim = 1u << n;
  std::int64_t emin = detail::top_plane_energy(0, n, periodic);
  for (std::uint32_t c = 1; c < dim; ++c)
    emin = std::min(emin, detail::top_plane_energy(c, n, periodic));
  std::vector<std::uint32_t> ground;
  for (std::uint32_t c = 0; c < dim; ++c)
    if (detail::top_plane_energy(c, n, periodic) == emin) ground.push_back(c);
  return ground;
}

/// Ground-space dimension of H_TP. With open boundary the counts run
/// 1, 2, 3, 5, 8, ... (the Fibonacci recurrence; downs are excluded from the
/// chain ends), with periodic boundary they are the Lucas numbers
/// 3, 4, 7, 11, ... — both satisfy g(N) = g(N-1) + g(N-2).
inline std::int64_t fibonacci_degeneracy(const ChainSpec& spec) {
  if (spec.n_sites < 2 || spec.n_sites > 24)
    throw Error("fibonacci_degeneracy: n_sites must be in [2, 24]");
  const int n = spec.n_sites;
  const bool periodic = spec.boundary == Boundary::periodic;
  // Tropical (min, count) transfer recursion over sites; exact in integers.
  struct MinCount {
    std::int64_t e;
    std::int64_t count;
  };
  auto combine = [](MinCount& acc, std::int64_t e, std::int64_t count) {
    if (count == 0) return;
    if (e < acc.e) {
      acc.e = e;
      acc.count = count;
    } else if (e == acc.e) {
      acc.count += count;
    }
  };
  const std::int64_t kInf = std::int64_t{1} << 60;
  MinCount best{kInf, 0};
  // first spin fixed (both values tried); state = (first spin, current spin)
  for (int x0 = 0; x0 < 2; ++x0) {
    // dp[x] = best (energy, count) of the prefix ending in spin value x
    MinCount dp[2] = {{kInf, 0}, {kInf, 0}};
    const int s0 = x0 ? -1 : 1;
    dp[x0] = {-2 * s0, 1};
    for (int site = 1; site < n; ++site) {
      MinCount nxt[2] = {{kInf, 0}, {kInf, 0}};
      for (int xp = 0; xp < 2; ++xp) {
        if (dp[xp].count == 0) continue;
        const int sp = xp ? -1 : 1;
        for (int x = 0; x < 2; ++x) {
          const int s = x ? -1 : 1;
          combine(nxt[x], dp[xp].e + sp * s - 2 * s, dp[xp].count);
        }
      }
      dp[0] = nxt[0];
      dp[1] = nxt[1];
    }
    for (int x = 0; x < 2; ++x) {
      if (dp[x].count == 0) continue;
      std::int64_t e = dp[x].e;
      if (periodic) e += (x ? -1 : 1) * s0;  // closing bond
      combine(best, e, dp[x].count);
    }
  }
  return best.count;
}

/// Boundary point of the top plane: ground state of the perturbation
/// H_1 = alpha sum_j X_j + beta sum_j Z_j restricted to the ground space of
/// H_TP, reported as the per-site (<XX>, <Z>, <X>) of the minimizing state.
/// Invariant under positive rescaling of (alpha, beta).
inline ExpectationPoint top_plane_edge(double alpha, double beta, const ChainSpec& spec) {
  if (alpha * alpha + beta * beta <= 0.0)
    throw Error("top_plane_edge: (alpha, beta) must be nonzero");
  if (spec.n_sites > 20) throw Error("top_plane_edge: n_sites must be <= 20");
  const auto configs = top_plane_ground_configs(spec);
  const int g = static_cast<int>(configs.size());
  const int n = spec.n_sites;

  std::unordered_map<std::uint32_t, int> index;
  index.reserve(2 * configs.size());
  for (int i = 0; i < g; ++i) index[configs[i]] = i;

  auto sum_x = [n](std::uint32_t c) { return n - 2 * __builtin_popcount(c); };

  // Projected operator: alpha sum X is diagonal in the x-basis; Z_j hops
  // between configurations differing by one spin flip (when both remain in
  // the ground manifold).
  Eigen::VectorXd ground;
  if (g <= 1500) {
    Eigen::MatrixXd hp = Eigen::MatrixXd::Zero(g, g);
    for (int i = 0; i < g; ++i) {
      hp(i, i) = alpha * sum_x(configs[i]);
      for (int j = 0; j < n; ++j) {
        const auto it = index.find(configs[i] ^ (1u << j));
        if (it != index.end()) hp(i, it->second) += beta;
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hp);
    ground = es.eigenvectors().col(0);
  } else {
    // Sparse flip lists for the Lanczos path.
    std::vector<std::vector<int>> hops(g);
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < n; ++j) {
        const auto it = index.find(configs[i] ^ (1u << j));
        if (it != index.end()) hops[i].push_back(it->second);
      }
    auto apply = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
      for (int i = 0; i < g; ++i) {
        double acc = alpha * sum_x(configs[i]) * x[i];
        for (const int j : hops[i]) acc += beta * x[j];
        y[i] = acc;
      }
    };
    LanczosOptions opts;
    opts.num_eigenpairs = 1;
    ground = lanczos_lowest(g, apply, opts).vectors.col(0);
  }

  // Expectations of the minimizing state: X and XX are diagonal; <Z> only
  // picks manifold-internal flips since the state lives in the manifold.
  const int nb = spec.n_bonds();
  double xx = 0.0, x = 0.0, z = 0.0;
  for (int i = 0; i < g; ++i) {
    const double w2 = ground[i] * ground[i];
    const std::uint32_t c = configs[i];
    std::int64_t bond = 0;
    for (int bnd = 0; bnd < nb; ++bnd) {
      const int xi = (c >> bnd) & 1 ? -1 : 1;
      const int xj = (c >> ((bnd + 1) % n)) & 1 ? -1 : 1;
      bond += xi * xj;
    }
    xx += w2 * bond;
    x += w2 * sum_x(c);
    for (int j = 0; j < n; ++j) {
      const auto it = index.find(c ^ (1u << j));
      if (it != index.end()) z += ground[i] * ground[it->second];
    }
  }
  return {xx / nb, z / n, x / n};
}

}  // namespace rdmgeo
