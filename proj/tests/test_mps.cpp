#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <complex>
#include <vector>

#include "rdmgeo/mps.hpp"

using namespace rdmgeo;
using cplx = std::complex<double>;

namespace {

/// Brute-force oracle: build the explicit N-site periodic state
/// psi(s_1..s_N) = Tr(A^{s_1} ... A^{s_N}) and evaluate expectations from
/// the full state vector.
struct RingState {
  int n;
  Eigen::VectorXcd psi;

  RingState(const UniformMpsTensor& t, int n_sites) : n(n_sites) {
    const std::int64_t dim = std::int64_t{1} << n;
    psi.resize(dim);
    for (std::int64_t s = 0; s < dim; ++s) {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(t.D, t.D);
      for (int i = 0; i < n; ++i) m = m * t.A[(s >> i) & 1];
      psi[s] = m.trace();
    }
    psi.normalize();
  }

  double site_avg(const Eigen::Matrix2cd& op) const {
    const std::int64_t dim = psi.size();
    cplx acc = 0.0;
    for (int i = 0; i < n; ++i)
      for (std::int64_t s = 0; s < dim; ++s) {
        const int b = (s >> i) & 1;
        for (int bp = 0; bp < 2; ++bp) {
          const cplx coef = op(bp, b);
          if (coef == 0.0) continue;
          const std::int64_t sp = (s & ~(std::int64_t{1} << i)) | (std::int64_t{bp} << i);
          acc += std::conj(psi[sp]) * coef * psi[s];
        }
      }
    return (acc / double(n)).real();
  }

  double bond_xx() const {
    const std::int64_t dim = psi.size();
    cplx acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const std::int64_t mask = (std::int64_t{1} << i) | (std::int64_t{1} << ((i + 1) % n));
      for (std::int64_t s = 0; s < dim; ++s) acc += std::conj(psi[s ^ mask]) * psi[s];
    }
    return (acc / double(n)).real();
  }
};

}  // namespace

TEST_CASE("left-canonical by construction over many draws") {
  double worst = 0.0;
  for (int seed = 0; seed < 200; ++seed) {
    SeededRng rng(1000 + seed);
    const int D = 2 + seed % 9;
    const UniformMpsTensor t = random_uniform_mps(D, rng);
    worst = std::max(worst, t.canonical_defect());
  }
  REQUIRE(worst < 1e-10);
}

TEST_CASE("D = 1 draws are Bloch-sphere points") {
  for (int seed = 0; seed < 50; ++seed) {
    SeededRng rng(7000 + seed);
    const UniformMpsTensor t = random_uniform_mps(1, rng);
    const auto vals =
        mps_expectations(t, std::vector<Eigen::Matrix2cd>{pauli_z(), pauli_x(), pauli_y()},
                         Eigen::Matrix4cd::Zero());
    const double r2 = vals[1] * vals[1] + vals[2] * vals[2] + vals[3] * vals[3];
    REQUIRE(r2 == Catch::Approx(1.0).margin(1e-10));
  }
}

TEST_CASE("fixed seed reproduces the tensor bit-for-bit") {
  SeededRng r1(99), r2(99);
  const UniformMpsTensor a = random_uniform_mps(4, r1);
  const UniformMpsTensor b = random_uniform_mps(4, r2);
  REQUIRE(a.A[0] == b.A[0]);
  REQUIRE(a.A[1] == b.A[1]);
}

TEST_CASE("product states reproduce trivial expectations") {
  UniformMpsTensor up;  // |0>: A_0 = 1, A_1 = 0
  up.D = 1;
  up.A[0] = Eigen::MatrixXcd::Constant(1, 1, 1.0);
  up.A[1] = Eigen::MatrixXcd::Constant(1, 1, 0.0);
  const Eigen::Matrix4cd xx =
      (Eigen::Matrix4cd() << 0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0).finished();
  auto vals = mps_expectations(up, std::vector<Eigen::Matrix2cd>{pauli_x(), pauli_z()}, xx);
  REQUIRE(vals[0] == Catch::Approx(0.0).margin(1e-12));  // <XX>
  REQUIRE(vals[1] == Catch::Approx(0.0).margin(1e-12));  // <X>
  REQUIRE(vals[2] == Catch::Approx(1.0).margin(1e-12));  // <Z>

  UniformMpsTensor plus;  // |+>
  plus.D = 1;
  plus.A[0] = Eigen::MatrixXcd::Constant(1, 1, M_SQRT1_2);
  plus.A[1] = Eigen::MatrixXcd::Constant(1, 1, M_SQRT1_2);
  vals = mps_expectations(plus, std::vector<Eigen::Matrix2cd>{pauli_x(), pauli_z()}, xx);
  REQUIRE(vals[0] == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(vals[1] == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(vals[2] == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("transfer fixed point: identity expectation and hermiticity") {
  for (const int D : {3, 6, 10, 13}) {
    SeededRng rng(40 + D);
    const UniformMpsTensor t = random_uniform_mps(D, rng);
    const TransferFixedPoint fp = transfer_fixed_point(t);
    REQUIRE(std::fabs(fp.eigenvalue - 1.0) < 1e-10);
    REQUIRE((fp.rho_R - fp.rho_R.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE(std::fabs(fp.rho_R.trace().real() - 1.0) < 1e-12);
    // <I> = Tr(rho) = 1
    const auto vals = mps_expectations(
        t, std::vector<Eigen::Matrix2cd>{Eigen::Matrix2cd::Identity()}, Eigen::Matrix4cd::Zero());
    REQUIRE(vals[1] == Catch::Approx(1.0).margin(1e-12));
    // PSD within numerical tolerance
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(fp.rho_R);
    REQUIRE(es.eigenvalues().minCoeff() > -1e-10);
  }
}

TEST_CASE("uniform-MPS expectations agree with an explicit N = 14 ring") {
  SeededRng rng(4242);
  const UniformMpsTensor t = random_uniform_mps(4, rng);
  const Eigen::Matrix4cd xx =
      (Eigen::Matrix4cd() << 0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0).finished();
  const auto vals =
      mps_expectations(t, std::vector<Eigen::Matrix2cd>{pauli_z(), pauli_x(), pauli_y()}, xx);

  const RingState ring(t, 14);
  REQUIRE(vals[0] == Catch::Approx(ring.bond_xx()).margin(1e-3));
  REQUIRE(vals[1] == Catch::Approx(ring.site_avg(pauli_z())).margin(1e-3));
  REQUIRE(vals[2] == Catch::Approx(ring.site_avg(pauli_x())).margin(1e-3));
  REQUIRE(vals[3] == Catch::Approx(ring.site_avg(pauli_y())).margin(1e-3));
}

TEST_CASE("scatter: determinism, bounds, D cycling") {
  ScatterOptions opts;
  opts.count = 300;
  opts.seed = 31337;
  const auto cloud1 = scatter_generate(opts);
  const auto cloud2 = scatter_generate(opts);
  REQUIRE(cloud1.size() == 300);
  for (std::size_t i = 0; i < cloud1.size(); ++i) {
    REQUIRE(cloud1[i].p.a == cloud2[i].p.a);
    REQUIRE(cloud1[i].p.b == cloud2[i].p.b);
    REQUIRE(cloud1[i].p.c == cloud2[i].p.c);
    REQUIRE(std::fabs(cloud1[i].p.a) <= 1.0);
    REQUIRE(std::fabs(cloud1[i].p.b) <= 1.0);
    REQUIRE(std::fabs(cloud1[i].p.c) <= 1.0);
    REQUIRE(std::fabs(*cloud1[i].y) <= 1.0);
  }
  // count = 0 is a valid empty cloud
  opts.count = 0;
  REQUIRE(scatter_generate(opts).empty());
}
