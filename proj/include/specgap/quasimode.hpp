#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "specgap/cutoff.hpp"
#include "specgap/operators.hpp"
#include "specgap/profile.hpp"

namespace specgap {

// Associated Legendre P_k^m(cos sigma) by the standard upward recurrence
// (unnormalized; quasimodes are normalized in the weighted norm afterwards).
inline double legendre_pkm(int k, int m, double x) {
  double pmm = 1.0;
  double sx = std::sqrt(std::max(0.0, 1.0 - x * x));
  for (int i = 1; i <= m; ++i) pmm *= (2.0 * i - 1.0) * sx;
  if (k == m) return pmm;
  double pmm1 = x * (2.0 * m + 1.0) * pmm;
  if (k == m + 1) return pmm1;
  double p = 0.0;
  for (int kk = m + 2; kk <= k; ++kk) {
    p = ((2.0 * kk - 1.0) * x * pmm1 - (kk + m - 1.0) * pmm) / (kk - m);
    pmm = pmm1;
    pmm1 = p;
  }
  return p;
}

struct QuasiMode {
  std::vector<double> values;  // on the full profile grid, single mode
  double lambda_target = 0.0;
  int block_index = 0;
  int mode = 0;
  int degree = 0;
  CutoffSpec cutoff;
  double residual = -1.0;  // filled by residual()
};

// u = zeta * v on one block, zero elsewhere.  v is the sphere eigenfunction
// P_k^m of the block's model copy (lambda = k(k+1)); zeta cuts off in the
// model polar distance from the two ball centers.  For m >= 1 and k >= m the
// eigenfunction vanishes at the centers (the class M_0 variant); m = 0 gives
// the generic variant.
inline QuasiMode build_quasimode(const Profile& profile, int block_index, int m, int k,
                                 const CutoffSpec& spec) {
  const double pi = 3.14159265358979323846;
  if (m < 0 || k < m || (m == 0 && k < 0))
    throw std::invalid_argument("build_quasimode: need k >= m >= 0");
  auto [i0, i1] = profile.block_cells(block_index);
  QuasiMode qm{std::vector<double>(profile.size(), 0.0),
               static_cast<double>(k) * (k + 1), block_index, m, k, spec};
  double norm2 = 0.0;
  for (int i = i0; i < i1; ++i) {
    double sigma = profile.model_angle(i);
    double v = legendre_pkm(k, m, std::cos(sigma));
    double z = log_cutoff_value(spec, std::max(sigma, 1e-300)) *
               log_cutoff_value(spec, std::max(pi - sigma, 1e-300));
    qm.values[i] = z * v;
    norm2 += qm.values[i] * qm.values[i] * profile.f[i] * profile.h;
  }
  if (!(norm2 > 0.0)) throw std::invalid_argument("build_quasimode: cutoff annihilates the mode");
  double inv = 1.0 / std::sqrt(norm2);
  for (int i = i0; i < i1; ++i) qm.values[i] *= inv;
  return qm;
}

// ||A u - lambda u||_w / ||u||_w ; also stored on the quasimode.
inline double residual(const TridiagOp& op, QuasiMode& qm) {
  if (op.size() != static_cast<int>(qm.values.size()))
    throw std::invalid_argument("residual: operator and quasimode live on different grids");
  if (op.mode != qm.mode)
    throw std::invalid_argument("residual: operator and quasimode have different angular modes");
  std::vector<double> au = op.apply_function(qm.values);
  double num = 0.0, den = 0.0;
  for (int i = 0; i < op.size(); ++i) {
    double r = au[i] - qm.lambda_target * qm.values[i];
    num += r * r * op.mass[i];
    den += qm.values[i] * qm.values[i] * op.mass[i];
  }
  return qm.residual = std::sqrt(num / den);
}

struct DonnellyReport {
  double lambda = 0.0;
  double eps0 = 0.0;
  int count = 0;
  double max_residual = 0.0;
  double gram_min_eigenvalue = 0.0;
  bool passes = false;
};

// Finite proxy for the Donnelly criterion: a family of quasimodes at a shared
// target certifies spectrum near lambda when every residual is small and the
// family is near-orthogonal (Gram minimum eigenvalue >= 1/2).
inline DonnellyReport donnelly_report(const TridiagOp& op, std::vector<QuasiMode>& qms,
                                      double lambda, double eps0) {
  if (qms.empty()) throw std::invalid_argument("donnelly_report: empty family");
  DonnellyReport rep;
  rep.lambda = lambda;
  rep.eps0 = eps0;
  rep.count = static_cast<int>(qms.size());
  for (auto& qm : qms) {
    if (std::abs(qm.lambda_target - lambda) > 1e-12)
      throw std::invalid_argument("donnelly_report: family members target different lambdas");
    rep.max_residual = std::max(rep.max_residual, residual(op, qm));
  }
  int n = rep.count;
  Eigen::MatrixXd gram(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b)
      gram(a, b) = gram(b, a) = op.weighted_dot(qms[a].values, qms[b].values);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
  rep.gram_min_eigenvalue = es.eigenvalues()(0);
  rep.passes = rep.max_residual <= eps0 && rep.gram_min_eigenvalue >= 0.5;
  return rep;
}

struct HarmonicNeckReport {
  double dirichlet_energy = 0.0;  // of h over the enlarged neck (with 2 pi factor)
  double grad_sup = 0.0;
  double tau = 0.25;  // 1/(2n) for n = 2
  double claim_rhs = 0.0;  // (||grad h||_L2)^tau
  double ratio = 0.0;      // grad_sup / claim_rhs, reported without a pass/fail
  double residual = 0.0;   // of the glued quasimode
};

// Harmonic extension across a neck (the class M_1 construction): v is
// flattened to the constant v(p) inside model radius rho1 of the
// junction-side pole, continued through the enlarged neck by the discrete
// harmonic function with boundary values v(p) on this side and 0 on the far
// side, and zero beyond.  The gradient-smallness claim is measured as a
// ratio, never assumed.
inline HarmonicNeckReport harmonic_neck_quasimode(const Profile& profile, int block_index, int k,
                                                  double rho1, QuasiMode* out = nullptr) {
  const double pi = 3.14159265358979323846;
  if (!profile.s_match) throw std::invalid_argument("harmonic_neck_quasimode: profile has no necks");
  if (profile.periodic || block_index + 1 >= profile.blocks)
    throw std::invalid_argument("harmonic_neck_quasimode: needs a capped chain with a block to the right");
  if (!(rho1 > *profile.s_match) || !(2.0 * rho1 < pi / 2.0))
    throw std::invalid_argument("harmonic_neck_quasimode: rho1 outside (s_match, pi/4)");
  auto [i0, i1] = profile.block_cells(block_index);
  auto [j0, j1] = profile.block_cells(block_index + 1);

  const double lambda = static_cast<double>(k) * (k + 1);
  const double vp = legendre_pkm(k, 0, -1.0);  // eigenfunction value at the shared pole
  std::vector<double> u(profile.size(), 0.0);

  // v1 on the host block: v for r >= 2 rho1, constant v(p) for r <= rho1,
  // where r is the model distance to the junction-side pole
  CutoffSpec flat(rho1, 2.0 * rho1, CutoffKind::smoothstep);
  for (int i = i0; i < i1; ++i) {
    double sigma = profile.model_angle(i);
    double v = legendre_pkm(k, 0, std::cos(sigma));
    double z = log_cutoff_value(flat, std::max(pi - sigma, 1e-300));
    u[i] = vp + z * (v - vp);
  }

  // enlarged neck: host collar (r < rho1) + neck cells + far collar (r < rho1)
  int left = -1;  // last host cell outside the collar
  for (int i = i1 - 1; i >= i0; --i)
    if (pi - profile.model_angle(i) >= rho1) {
      left = i;
      break;
    }
  int right = -1;  // first far-block cell outside its collar (stays 0)
  for (int j = j0; j < j1; ++j)
    if (profile.model_angle(j) >= rho1) {
      right = j;
      break;
    }
  if (left < 0 || right < 0 || right - left < 4)
    throw std::invalid_argument("harmonic_neck_quasimode: enlarged neck too small");

  // discrete harmonic interpolation between u[left] and 0 at right: the face
  // fluxes f_face (h_i - h_{i+1}) are all equal, so h follows the cumulative
  // 1/f_face sums (the discrete log profile).
  auto face = [&](int i) { return profile.eval((i + 1) * profile.h); };
  std::vector<double> cum(right - left, 0.0);
  double total = 0.0;
  for (int i = left; i < right; ++i) {
    total += 1.0 / face(i);
    cum[i - left] = total;
  }
  for (int i = left + 1; i < right; ++i) u[i] = u[left] * (1.0 - cum[i - left - 1] / total);

  HarmonicNeckReport rep;
  const double two_pi = 6.283185307179586476925286766559;
  for (int i = left; i < right; ++i) {
    double du = (u[i + 1] - u[i]) / profile.h;
    rep.dirichlet_energy += two_pi * face(i) * du * du * profile.h;
    rep.grad_sup = std::max(rep.grad_sup, std::abs(du));
  }
  rep.claim_rhs = std::pow(std::sqrt(rep.dirichlet_energy), rep.tau);
  rep.ratio = rep.grad_sup / rep.claim_rhs;

  TridiagOp op = sl_discretize(profile, 0, Bc::neumann);
  QuasiMode qm{std::move(u), lambda, block_index, 0, k, flat};
  double nrm = op.weighted_norm(qm.values);
  for (auto& x : qm.values) x /= nrm;
  rep.residual = residual(op, qm);
  if (out) *out = std::move(qm);
  return rep;
}

}  // namespace specgap
