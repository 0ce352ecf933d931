#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace specgap {

struct SphereLevel {
  double lambda;
  long long multiplicity;
};

// Eigenvalues of the round unit n-sphere: lambda_k = k(k+n-1) with
// multiplicity C(n+k,k) - C(n+k-2,k-2).  Defines the model spectrum used by
// the gap comparisons.
inline std::vector<SphereLevel> sphere_spectrum(int n, int k_max) {
  if (n < 2) throw std::invalid_argument("sphere_spectrum: dimension must be >= 2");
  if (k_max < 0) throw std::invalid_argument("sphere_spectrum: k_max must be >= 0");
  auto binom = [](long long a, long long b) -> long long {
    if (b < 0 || b > a) return 0;
    b = std::min(b, a - b);
    long long r = 1;
    for (long long i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };
  std::vector<SphereLevel> out;
  out.reserve(static_cast<std::size_t>(k_max) + 1);
  for (long long k = 0; k <= k_max; ++k) {
    double lam = static_cast<double>(k) * (k + n - 1);
    long long mult = binom(n + k, k) - binom(n + k - 2, k - 2);
    out.push_back({lam, mult});
  }
  return out;
}

// Conformal factor of the sphere metric over the euclidean ball,
// u(x) = 2 (eps + eps^-1 x^2)^-1 for 0 <= x <= 1.
inline double conformal_factor(double x, double eps) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("conformal_factor: x outside [0,1]");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("conformal_factor: eps outside (0,1)");
  return 2.0 / (eps + x * x / eps);
}

// Geodesic radius in the unit sphere of the euclidean sphere |x| = r under
// the conformal embedding: asin(r * u(r)).  Increasing on [0, eps] (radius
// reaches pi/2 at r = eps), decreasing on [eps, 1].
inline double spherical_radius(double r, double eps) {
  if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("spherical_radius: r outside [0,1]");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("spherical_radius: eps outside (0,1)");
  double arg = r * conformal_factor(r, eps);
  if (arg > 1.0) {
    if (arg > 1.0 + 1e-12) throw std::domain_error("spherical_radius: arcsine argument > 1");
    arg = 1.0;
  }
  return std::asin(arg);
}

// Neck aperture rho = spherical_radius(1, eps); rho ~ 2 eps for small eps.
inline double conformal_rho(double eps) { return spherical_radius(1.0, eps); }

// Radius r0 with spherical_radius(r0) = 2 rho, solved by bisection on the
// decreasing branch [eps, 1]; r0 ~ 1/2 for small eps.  The ball |x| <= r0 is
// the core of the conformal construction.
inline double conformal_core_radius(double eps) {
  double target = 2.0 * conformal_rho(eps);
  double lo = eps, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (spherical_radius(mid, eps) > target)
      lo = mid;  // decreasing branch: value too large means r too small
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// C^1 match data between the unit-sphere arc f = sin(sigma) and the catenoid
// neck f = eps*cosh(t/eps).  Matching sin = eps*cosh, cos = sinh forces
// cosh^2(tau) = 2/(1+eps^2).
struct NeckMatch {
  double tau_star;    // dimensionless half-width of the neck
  double f_match;     // radius at the junction
  double s_match;     // polar angle of the junction on the sphere
  double half_width;  // arclength half-width tau_star * eps
};

inline NeckMatch neck_match(double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("neck_match: eps outside (0,0.5)");
  double c = std::sqrt(2.0 / (1.0 + eps * eps));
  double tau = std::acosh(c);
  double fm = eps * c;
  return {tau, fm, std::asin(fm), tau * eps};
}

}  // namespace specgap
