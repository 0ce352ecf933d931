#pragma once

#include <cmath>
#include <stdexcept>

namespace specgap {

// log: the Lipschitz logarithmic cutoff zeta(r) = log(r/rho)/log(r_outer/rho).
// smoothstep: C^1 smoothing of the same profile (smoothstep applied in the
// logarithmic coordinate); W^{1,2}-close to the log kind but safe to feed to
// the discrete Laplacian, whose residual would otherwise be dominated by the
// derivative kinks.  linear: plain ramp in r.
enum class CutoffKind { log, linear, smoothstep };

struct CutoffSpec {
  double rho;
  double r_outer;
  CutoffKind kind;

  explicit CutoffSpec(double rho_, double r_outer_ = -1.0, CutoffKind kind_ = CutoffKind::log)
      : rho(rho_), r_outer(r_outer_ < 0.0 ? std::sqrt(rho_) : r_outer_), kind(kind_) {
    if (!(rho > 0.0) || !(rho < r_outer))
      throw std::invalid_argument("CutoffSpec: need 0 < rho < r_outer");
  }
};

// zeta(r): 0 for r <= rho, 1 for r >= r_outer, interpolation per kind.
inline double log_cutoff_value(const CutoffSpec& spec, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("log_cutoff_value: r must be positive");
  if (r <= spec.rho) return 0.0;
  if (r >= spec.r_outer) return 1.0;
  switch (spec.kind) {
    case CutoffKind::log:
      return std::log(r / spec.rho) / std::log(spec.r_outer / spec.rho);
    case CutoffKind::linear:
      return (r - spec.rho) / (spec.r_outer - spec.rho);
    case CutoffKind::smoothstep: {
      double x = std::log(r / spec.rho) / std::log(spec.r_outer / spec.rho);
      return x * x * (3.0 - 2.0 * x);
    }
  }
  return 0.0;
}

// Discrete Dirichlet energy of zeta on the flat annulus [rho, r_outer],
// 2 pi sum over faces of (d zeta / dr)^2 r dr.  For the log kind this tends
// to 2 pi / log(r_outer/rho).
inline double flat_annulus_cutoff_energy(const CutoffSpec& spec, double h) {
  const double two_pi = 6.283185307179586476925286766559;
  int n = static_cast<int>(std::ceil((spec.r_outer - spec.rho) / h));
  double hh = (spec.r_outer - spec.rho) / n;
  double e = 0.0;
  for (int i = 0; i < n; ++i) {
    double a = spec.rho + i * hh, b = a + hh;
    double dz = (log_cutoff_value(spec, b) - log_cutoff_value(spec, a)) / hh;
    e += dz * dz * 0.5 * (a + b) * hh;
  }
  return two_pi * e;
}

}  // namespace specgap
