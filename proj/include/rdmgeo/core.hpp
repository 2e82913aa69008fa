// Shared domain types and axis conventions for convex-set reconstructions
// of many-body expectation values.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace rdmgeo {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Which physical backend a dataset belongs to. Fixes axis labels and the
/// meaning of the three plotted coordinates.
enum class ModelTag { spin0d, spin1d, spinMF, classical2d, bose3d };

using AxisLabels = std::array<std::string, 3>;

inline const char* to_string(ModelTag tag) {
  switch (tag) {
    case ModelTag::spin0d: return "spin0d";
    case ModelTag::spin1d: return "spin1d";
    case ModelTag::spinMF: return "spinMF";
    case ModelTag::classical2d: return "classical2d";
    case ModelTag::bose3d: return "bose3d";
  }
  throw Error("unknown model tag");
}

inline ModelTag model_tag_from_string(const std::string& s) {
  if (s == "spin0d") return ModelTag::spin0d;
  if (s == "spin1d") return ModelTag::spin1d;
  if (s == "spinMF") return ModelTag::spinMF;
  if (s == "classical2d") return ModelTag::classical2d;
  if (s == "bose3d") return ModelTag::bose3d;
  throw Error("unknown model tag: " + s);
}

/// Axis label triple for a backend, matching the plotted figure axes.
/// Spin lattices plot (<XX>, <Z>, <X>), the classical model plots the
/// bond correlation, entropy per site and magnetization per site, and the
/// Bose gas plots kinetic energy density, entropy density and |<psi>|.
inline AxisLabels axis_labels(ModelTag tag) {
  switch (tag) {
    case ModelTag::spin0d:
    case ModelTag::spin1d:
    case ModelTag::spinMF: return {"XX", "Z", "X"};
    case ModelTag::classical2d: return {"zz", "S", "z"};
    case ModelTag::bose3d: return {"Ekin", "S", "psi"};
  }
  throw Error("unknown model tag");
}

/// A labeled point in the 3D observable space. Spin observables are
/// normalized per site (single-site operators) and per bond (two-site
/// operators) so that sets from different system sizes are comparable.
struct ExpectationPoint {
  double a = 0.0;  // first axis, e.g. <XX> per bond
  double b = 0.0;  // second axis, e.g. <Z> per site or entropy per site
  double c = 0.0;  // third axis, e.g. <X> per site or |<psi>|

  bool finite() const {
    return std::isfinite(a) && std::isfinite(b) && std::isfinite(c);
  }
};

/// Provenance of a dataset row.
enum class PointSource { random, oracle, sweep };

inline const char* to_string(PointSource s) {
  switch (s) {
    case PointSource::random: return "random";
    case PointSource::oracle: return "oracle";
    case PointSource::sweep: return "sweep";
  }
  throw Error("unknown point source");
}

inline PointSource point_source_from_string(const std::string& s) {
  if (s == "random") return PointSource::random;
  if (s == "oracle") return PointSource::oracle;
  if (s == "sweep") return PointSource::sweep;
  throw Error("unknown point source: " + s);
}

/// A dataset row: the 3D point plus an optional fourth observable (used by
/// the Theta scans, which need <Y> alongside <X>) and its provenance.
struct CloudPoint {
  ExpectationPoint p;
  std::optional<double> y;
  PointSource source = PointSource::random;
};

/// Quantum Ising parameters: H = -J sum XX - Bz sum Z - Bx sum X.
struct SpinParams {
  double J = 0.0;
  double Bz = 0.0;
  double Bx = 0.0;

  bool finite() const {
    return std::isfinite(J) && std::isfinite(Bz) && std::isfinite(Bx);
  }
};

/// Unit direction in observable space; doubles as the (J, Bz, Bx) triple of
/// the tangent-plane Hamiltonian for support-point evaluations.
struct Direction3 {
  double nx = 0.0, ny = 0.0, nz = 0.0;

  Direction3() = default;
  Direction3(double x, double y, double z) : nx(x), ny(y), nz(z) {
    const double n = std::sqrt(nx * nx + ny * ny + nz * nz);
    if (!(n > 0.0) || !std::isfinite(n)) throw Error("Direction3: zero or non-finite vector");
    nx /= n;
    ny /= n;
    nz /= n;
  }

  double dot(const ExpectationPoint& p) const { return nx * p.a + ny * p.b + nz * p.c; }
};

}  // namespace rdmgeo
