// Small fitting helpers: power-law exponent extraction and sequence
// extrapolation for finite-size data.
#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "rdmgeo/core.hpp"

namespace rdmgeo {

/// Least-squares slope of y vs x.
inline double linear_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw Error("linear_slope: need >= 2 paired points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw Error("linear_slope: degenerate abscissae");
  return (n * sxy - sx * sy) / denom;
}

/// Power-law exponent from the slope of log(order_param) vs log(slope_plus_one).
/// Inputs must be strictly positive; the caller supplies d<XX>/d<Z> + 1 values
/// computed from adjacent surface samples.
inline double critical_exponent_fit(
    std::span<const std::pair<double, double>> points) {  // (slope_plus_one, order_param)
  if (points.size() < 5) throw Error("critical_exponent_fit: need >= 5 points");
  std::vector<double> lx, ly;
  lx.reserve(points.size());
  ly.reserve(points.size());
  for (const auto& [spo, op] : points) {
    if (!(spo > 0.0) || !(op > 0.0))
      throw Error("critical_exponent_fit: inputs must be strictly positive");
    lx.push_back(std::log(spo));
    ly.push_back(std::log(op));
  }
  return linear_slope(lx, ly);
}

/// Aitken delta-squared extrapolation of the last three terms of a sequence.
/// Falls back to the final term when the differences degenerate.
inline double aitken_extrapolate(std::span<const double> seq) {
  if (seq.size() < 3) throw Error("aitken_extrapolate: need >= 3 terms");
  const double s0 = seq[seq.size() - 3];
  const double s1 = seq[seq.size() - 2];
  const double s2 = seq[seq.size() - 1];
  const double d1 = s1 - s0;
  const double d2 = s2 - s1;
  const double denom = d1 - d2;
  if (std::fabs(denom) < 1e-300 * std::fabs(d2)) return s2;
  if (denom == 0.0) return s2;
  return s2 + d2 * d2 / denom;
}

}  // namespace rdmgeo
