#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "specgap/profile.hpp"

namespace specgap {

struct Monodromy {
  double m11 = 1.0, m12 = 0.0, m21 = 0.0, m22 = 1.0;
  double trace() const { return m11 + m22; }
  double det() const { return m11 * m22 - m12 * m21; }
};

// Profile radii pre-evaluated at the RK4 stage points of one period, so that
// lambda sweeps only pay arithmetic.  f is read from the analytic pieces,
// keeping this route independent of the finite-difference grid.
struct FloquetGrid {
  double hh = 0.0;
  int steps = 0;
  std::vector<double> f0, fm, f1;

  FloquetGrid(const Profile& profile, double step) {
    if (!profile.periodic) throw std::invalid_argument("floquet: profile must be periodic");
    if (!(step > 0.0) || step > 1e-3 + 1e-15)
      throw std::invalid_argument("floquet: step too large (require step <= 1e-3)");
    double L = profile.length;
    steps = static_cast<int>(std::ceil(L / step));
    hh = L / steps;
    f0.resize(steps);
    fm.resize(steps);
    f1.resize(steps);
    for (int i = 0; i < steps; ++i) {
      double s = i * hh;
      f0[i] = profile.eval(s);
      fm[i] = profile.eval(s + 0.5 * hh);
      f1[i] = profile.eval(s + hh);
    }
  }
};

// Fundamental solution of y1' = y2 / f, y2' = (m^2/f - lambda f) y1 across one
// period; fixed-step RK4 with canonical initial conditions.
inline Monodromy monodromy(const FloquetGrid& g, int m, double lambda) {
  const double mm = static_cast<double>(m) * m;
  double y[4] = {1.0, 0.0, 0.0, 1.0};  // columns (y1a,y2a),(y1b,y2b)
  const double hh = g.hh;
  for (int i = 0; i < g.steps; ++i) {
    const double fa = g.f0[i], fb = g.fm[i], fc = g.f1[i];
    const double qa = mm / fa - lambda * fa;
    const double qb = mm / fb - lambda * fb;
    const double qc = mm / fc - lambda * fc;
    for (int col = 0; col < 2; ++col) {
      double y1 = y[2 * col], y2 = y[2 * col + 1];
      const double k11 = y2 / fa, k12 = qa * y1;
      const double k21 = (y2 + 0.5 * hh * k12) / fb, k22 = qb * (y1 + 0.5 * hh * k11);
      const double k31 = (y2 + 0.5 * hh * k22) / fb, k32 = qb * (y1 + 0.5 * hh * k21);
      const double k41 = (y2 + hh * k32) / fc, k42 = qc * (y1 + hh * k31);
      y[2 * col] = y1 + hh / 6.0 * (k11 + 2.0 * k21 + 2.0 * k31 + k41);
      y[2 * col + 1] = y2 + hh / 6.0 * (k12 + 2.0 * k22 + 2.0 * k32 + k42);
    }
  }
  return {y[0], y[2], y[1], y[3]};
}

inline Monodromy monodromy(const Profile& profile, int m, double lambda, double step) {
  return monodromy(FloquetGrid(profile, step), m, lambda);
}

// Floquet discriminant D(lambda) = tr of the monodromy matrix; lambda lies in
// a spectral band iff |D| <= 2.
inline double discriminant(const FloquetGrid& g, int m, double lambda) {
  return monodromy(g, m, lambda).trace();
}

inline double discriminant(const Profile& profile, int m, double lambda, double step) {
  return monodromy(profile, m, lambda, step).trace();
}

}  // namespace specgap
