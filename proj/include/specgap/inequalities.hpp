#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "specgap/bands.hpp"
#include "specgap/cutoff.hpp"
#include "specgap/operators.hpp"
#include "specgap/profile.hpp"
#include "specgap/quasimode.hpp"
#include "specgap/rng.hpp"
#include "specgap/tridiag_eigs.hpp"

namespace specgap {

struct IneqReport {
  std::string inequality_id;
  int samples = 0;
  std::uint64_t seed = 0;
  double empirical_c = 0.0;  // smallest constant covering all samples
  bool holds_all = true;     // false when some denominator is nonpositive
  double extra = 0.0;        // op-specific reference value
};

// Documented sampler: iid gaussians smoothed by `passes` applications of the
// [1 2 1]/4 kernel (wrapping on periodic grids, reflecting otherwise).
inline std::vector<double> smoothed_noise(int n, SplitRng& rng, bool periodic, int passes = 8) {
  std::vector<double> u(n), v(n);
  for (auto& x : u) x = rng.next_gaussian();
  for (int p = 0; p < passes; ++p) {
    for (int i = 0; i < n; ++i) {
      int l = i == 0 ? (periodic ? n - 1 : 0) : i - 1;
      int r = i == n - 1 ? (periodic ? 0 : n - 1) : i + 1;
      v[i] = 0.25 * (u[l] + 2.0 * u[i] + u[r]);
    }
    u.swap(v);
  }
  return u;
}

// empirical constant for int_N u^2 <= eps * int_M (u^2 + |grad u|^2) over
// random smoothed-noise samples; the gradient form is the m = 0 operator's
// quadratic form, so the Dirichlet-eigenfunction identity ratio =
// 1/(1 + lambda_1(N)) holds exactly.
inline IneqReport neck_estimate_check(const Profile& profile, int n_samples, std::uint64_t seed) {
  if (n_samples < 100) throw std::invalid_argument("neck_estimate_check: need n_samples >= 100");
  if (!profile.f_match) throw std::invalid_argument("neck_estimate_check: profile has no neck metadata");
  const int n = profile.size();
  const double cut = 2.0 * *profile.f_match;
  TridiagOp op = sl_discretize(profile, 0, profile.periodic ? Bc::periodic : Bc::neumann);

  IneqReport rep;
  rep.inequality_id = "neck_l2";
  rep.samples = n_samples;
  rep.seed = seed;
  double worst = 0.0;
  for (int t = 0; t < n_samples; ++t) {
    SplitRng rng = SplitRng::for_task(seed, t);
    std::vector<double> u = smoothed_noise(n, rng, profile.periodic);
    double num = 0.0, mass = 0.0;
    for (int i = 0; i < n; ++i) {
      double m = u[i] * u[i] * op.mass[i];
      mass += m;
      if (profile.f[i] <= cut) num += m;
    }
    double ratio = num / (mass + op.quadratic_form(u));
    worst = std::max(worst, ratio);
  }
  rep.empirical_c = worst;
  return rep;
}

namespace detail {

// masked quadratic form: faces internal to the mask plus the potential part
inline double masked_energy(const Profile& profile, int m, const std::vector<double>& u,
                            const std::vector<char>& mask) {
  const int n = profile.size();
  double e = 0.0;
  const double h = profile.h;
  for (int i = 0; i + 1 < n; ++i) {
    if (!mask[i] || !mask[i + 1]) continue;
    double du = u[i + 1] - u[i];
    e += profile.eval((i + 1) * h) * du * du / h;
  }
  if (profile.periodic && mask[n - 1] && mask[0]) {
    double du = u[0] - u[n - 1];
    e += profile.eval(0.0) * du * du / h;
  }
  for (int i = 0; i < n; ++i)
    if (mask[i]) e += static_cast<double>(m) * m / (profile.f[i] * profile.f[i]) * u[i] * u[i] * profile.f[i] * h;
  return e;
}

inline std::vector<char> core_mask(const Profile& profile) {
  std::vector<char> mask(profile.size(), 0);
  for (int i = 0; i < profile.size(); ++i)
    mask[i] = profile.pieces[profile.piece_of_cell[i]].kind == PieceKind::sphere_arc;
  return mask;
}

}  // namespace detail

// The two approximate-eigenspace inequalities at a target lambda off the
// model spectrum: u0 in the span of cutoff block eigenfunctions below lambda,
// u1 orthogonal to that span (per mode).  Angular weight 2 for m = 0 and 1
// for m >= 1 stands in for the theta integration.
inline std::pair<IneqReport, IneqReport> approx_space_check(const Profile& profile, double lambda,
                                                            int n_samples, std::uint64_t seed) {
  auto model = sphere_spectrum(2, static_cast<int>(std::sqrt(lambda)) + 2);
  double dist = 1e300;
  for (const auto& lvl : model) dist = std::min(dist, std::abs(lambda - lvl.lambda));
  if (dist < 1e-6) throw std::invalid_argument("approx_space_check: lambda too close to the model spectrum");

  const int n = profile.size();
  const int m_max = mode_cutoff(profile, lambda);
  std::vector<TridiagOp> ops;
  for (int m = 0; m <= m_max; ++m)
    ops.push_back(sl_discretize(profile, m, profile.periodic ? Bc::periodic : Bc::neumann));
  auto ang = [](int m) { return m == 0 ? 2.0 : 1.0; };

  // cutoff spec: vanish at the junction radius when the profile has necks.
  // The outer radius 1.0 spreads the transition over the full available log
  // range, which is what keeps the u0 denominators positive at desk scale.
  CutoffSpec spec = profile.s_match
                        ? CutoffSpec(*profile.s_match, 1.0, CutoffKind::smoothstep)
                        : CutoffSpec(1e-12, 2e-12, CutoffKind::smoothstep);

  // E0 members grouped by mode, orthonormalized per mode in fixed order
  std::vector<std::vector<std::vector<double>>> basis(m_max + 1);
  for (int b = 0; b < profile.blocks; ++b)
    for (int m = 0; m <= m_max; ++m)
      for (int k = m; static_cast<double>(k) * (k + 1) < lambda; ++k) {
        QuasiMode qm = build_quasimode(profile, b, m, k, spec);
        std::vector<double> v = std::move(qm.values);
        for (const auto& e : basis[m]) {
          double c = ops[m].weighted_dot(v, e);
          for (int i = 0; i < n; ++i) v[i] -= c * e[i];
        }
        double nr = ops[m].weighted_norm(v);
        if (nr > 1e-8) {
          for (auto& x : v) x /= nr;
          basis[m].push_back(std::move(v));
        }
      }

  IneqReport rep0, rep1;
  rep0.inequality_id = "approx_u0";
  rep1.inequality_id = "approx_u1";
  rep0.samples = rep1.samples = n_samples;
  rep0.seed = rep1.seed = seed;
  auto mask = detail::core_mask(profile);

  for (int t = 0; t < n_samples; ++t) {
    SplitRng rng = SplitRng::for_task(seed, t);
    // u0: random combination of E0
    double num0 = 0.0, den0 = 0.0;
    for (int m = 0; m <= m_max; ++m) {
      if (basis[m].empty()) continue;
      std::vector<double> um(n, 0.0);
      for (const auto& e : basis[m]) {
        double c = rng.next_gaussian();
        for (int i = 0; i < n; ++i) um[i] += c * e[i];
      }
      double l2 = ops[m].weighted_dot(um, um);
      num0 += ang(m) * l2;
      den0 += ang(m) * (lambda * l2 - ops[m].quadratic_form(um));
    }
    if (den0 <= 0.0) {
      rep0.holds_all = false;
      rep0.empirical_c = std::numeric_limits<double>::infinity();
    } else {
      rep0.empirical_c = std::max(rep0.empirical_c, num0 / den0);
    }
    // u1: smoothed noise per mode, projected off E0, judged on the core
    double num1 = 0.0, den1 = 0.0;
    for (int m = 0; m <= m_max; ++m) {
      std::vector<double> um = smoothed_noise(n, rng, profile.periodic);
      for (const auto& e : basis[m]) {
        double c = ops[m].weighted_dot(um, e);
        for (int i = 0; i < n; ++i) um[i] -= c * e[i];
      }
      double l2x = 0.0;
      for (int i = 0; i < n; ++i)
        if (mask[i]) l2x += um[i] * um[i] * ops[m].mass[i];
      num1 += ang(m) * l2x;
      den1 += ang(m) * (detail::masked_energy(profile, m, um, mask) - lambda * l2x);
    }
    if (den1 <= 0.0) {
      rep1.holds_all = false;
      rep1.empirical_c = std::numeric_limits<double>::infinity();
    } else {
      rep1.empirical_c = std::max(rep1.empirical_c, num1 / den1);
    }
  }
  return {rep0, rep1};
}

// Poincare inequality on the flat annulus r1 < r < r0 (Dirichlet inner,
// Neumann outer) under radial metric perturbations g = b^2 dr^2 + a^2 r^2
// dtheta^2 with a, b within the stated eigenvalue bounds.  The flat sharp
// constant is the inverse of the first mixed eigenvalue (stored in extra).
inline IneqReport annulus_inequality_check(double metric_scale, double r0, double r1, int n_samples,
                                           std::uint64_t seed, int cells = 512) {
  if (!(r1 < r0) || !(r1 > 0.0))
    throw std::invalid_argument("annulus_inequality_check: need 0 < r1 < r0");
  if (!(metric_scale >= 1.0))
    throw std::invalid_argument("annulus_inequality_check: metric_scale must be >= 1");
  const int n = cells;
  const double h = (r0 - r1) / n;
  std::vector<double> r(n);
  for (int i = 0; i < n; ++i) r[i] = r1 + (i + 0.5) * h;

  // oracle: first mixed Dirichlet(inner)/Neumann(outer) eigenvalue, flat case
  TridiagOp flat = detail::build_natural(r, h, 0, false);
  flat.diag[0] += r1 / (r[0] * h * h);  // Dirichlet closure at the inner face
  double lam1 = 0.0;
  {
    double glo, ghi;
    flat.gershgorin(glo, ghi);
    double hi = 1.0;
    while (sturm_count(flat, hi) < 1) hi *= 2.0;
    EigenRequest req;
    req.a = glo - 1e-9;
    req.b = hi;
    req.tol = 1e-10;
    lam1 = eigs_in_interval(flat, req)[0];
  }

  IneqReport rep;
  rep.inequality_id = "annulus_poincare";
  rep.samples = n_samples;
  rep.seed = seed;
  rep.extra = 1.0 / lam1;

  const double gamma = 0.5 * std::log(metric_scale);
  for (int t = 0; t < n_samples; ++t) {
    SplitRng rng = SplitRng::for_task(seed, t);
    // smooth conformal-type factors a, b with eigenvalues in [1/s, s]
    double ca1 = rng.next_uniform(-1.0, 1.0), ca2 = rng.next_uniform(-1.0, 1.0);
    double cb1 = rng.next_uniform(-1.0, 1.0), cb2 = rng.next_uniform(-1.0, 1.0);
    auto factor = [&](double c1, double c2, double x) {
      double tt = (x - r1) / (r0 - r1);
      double w = 0.5 * (c1 * std::sin(3.14159265358979323846 * tt) + c2 * std::cos(2.0 * 3.14159265358979323846 * tt));
      return std::exp(gamma * w);
    };
    std::vector<double> coef(n), massw(n);
    // polynomial sample vanishing at the inner boundary
    double p0 = rng.next_gaussian(), p1 = rng.next_gaussian(), p2 = rng.next_gaussian(),
           p3 = rng.next_gaussian();
    std::vector<double> u(n);
    double l2 = 0.0;
    for (int i = 0; i < n; ++i) {
      double x = (r[i] - r1) / (r0 - r1);
      u[i] = (r[i] - r1) * (p0 + p1 * x + p2 * x * x + p3 * x * x * x);
      l2 += u[i] * u[i];
    }
    if (l2 < 1e-20) continue;  // degenerate draw excluded by the sampler
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
      double a = factor(ca1, ca2, r[i]), b = factor(cb1, cb2, r[i]);
      num += u[i] * u[i] * a * b * r[i] * h;
    }
    for (int i = 0; i + 1 < n; ++i) {
      double rm = 0.5 * (r[i] + r[i + 1]);
      double a = factor(ca1, ca2, rm), b = factor(cb1, cb2, rm);
      double du = (u[i + 1] - u[i]) / h;
      den += du * du * (a / b) * rm * h;
    }
    {
      double a = factor(ca1, ca2, r1), b = factor(cb1, cb2, r1);
      den += u[0] * u[0] * (a / b) * r1 / h;  // ghost-zero closure at the inner face
    }
    if (den <= 0.0) {
      rep.holds_all = false;
      rep.empirical_c = std::numeric_limits<double>::infinity();
    } else {
      rep.empirical_c = std::max(rep.empirical_c, num / den);
    }
  }
  return rep;
}

}  // namespace specgap
