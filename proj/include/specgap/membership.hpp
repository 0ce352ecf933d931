#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "specgap/profile.hpp"
#include "specgap/tridiag_eigs.hpp"

namespace specgap {

// Class parameters (rho_bar, delta_bar, Lambda): maximal neck sphere radius,
// C^1 closeness to the model metric, minimal neck Dirichlet eigenvalue.
struct ClassParams {
  double rho_bar;
  double delta_bar;
  double Lambda;

  ClassParams(double rho_bar_, double delta_bar_, double Lambda_)
      : rho_bar(rho_bar_), delta_bar(delta_bar_), Lambda(Lambda_) {
    if (!(rho_bar > 0.0) || !(delta_bar >= 0.0) || !(Lambda > 0.0))
      throw std::invalid_argument("ClassParams: need rho_bar > 0, delta_bar >= 0, Lambda > 0");
  }
};

struct MembershipReport {
  double rho_measured = 0.0;
  double delta_measured = 0.0;
  double lambda1_neck = std::numeric_limits<double>::infinity();
  std::array<bool, 4> passes{false, false, false, false};
  bool in_class() const { return passes[0] && passes[1] && passes[2] && passes[3]; }
};

// Discrete membership check for the core/neck class conditions (1)-(4):
// boundary sphere radius, C^1 distance of the core metric to the round model,
// overlap annuli of the B_2rho \ B_rho form, and the neck Dirichlet
// eigenvalue bound.
inline MembershipReport class_report(const Profile& profile, const ClassParams& params,
                                     int m_max = 3) {
  bool has_core = false;
  for (const auto& p : profile.pieces) has_core |= p.kind == PieceKind::sphere_arc;
  if (!has_core || (profile.f_match && profile.junctions.empty() && profile.periodic))
    throw std::invalid_argument("class_report: profile carries no core/junction metadata");

  MembershipReport rep;
  const bool has_necks = profile.f_match.has_value();
  rep.rho_measured = has_necks ? *profile.s_match : 0.0;

  // C^1 distance of the sampled metric to the exact round metric over the
  // core: sup |f - sin sigma| + sup |centered df - cos sigma|, neighbours
  // taken within the same sphere piece.
  double dsup = 0.0, gsup = 0.0;
  const int n = profile.size();
  for (int i = 0; i < n; ++i) {
    int pi = profile.piece_of_cell[i];
    if (profile.pieces[pi].kind != PieceKind::sphere_arc) continue;
    double sigma = profile.model_angle(i);
    dsup = std::max(dsup, std::abs(profile.f[i] - std::sin(sigma)));
    if (i > 0 && i + 1 < n && profile.piece_of_cell[i - 1] == pi && profile.piece_of_cell[i + 1] == pi) {
      double df = (profile.f[i + 1] - profile.f[i - 1]) / (2.0 * profile.h);
      gsup = std::max(gsup, std::abs(df - std::cos(sigma)));
    }
  }
  rep.delta_measured = dsup + gsup;

  bool overlap_ok = true;
  if (has_necks) {
    rep.lambda1_neck = lambda1_neck(profile, m_max);
    // every junction must carry a collar of core cells with
    // s_match <= sigma <= asin(2 f_match) (the discrete overlap annulus)
    double sigma2 = std::asin(std::min(1.0, 2.0 * *profile.f_match));
    int expected = 0, found = 0;
    for (const auto& p : profile.pieces) {
      if (p.kind != PieceKind::sphere_arc) continue;
      double a0 = p.a, a1 = p.a + (p.s_end - p.s_begin);
      if (std::abs(a0 - *profile.s_match) < 1e-12) ++expected;
      if (std::abs(a1 - (3.14159265358979323846 - *profile.s_match)) < 1e-12) ++expected;
    }
    for (int i = 0; i < n; ++i) {
      if (profile.pieces[profile.piece_of_cell[i]].kind != PieceKind::sphere_arc) continue;
      double sigma = profile.model_angle(i);
      double rs = std::min(sigma, 3.14159265358979323846 - sigma);
      if (rs >= *profile.s_match - 1e-12 && rs <= sigma2 + 1e-12) ++found;
    }
    overlap_ok = expected > 0 && found >= expected;  // at least one collar cell per junction side
  }

  rep.passes[0] = rep.rho_measured <= params.rho_bar;
  rep.passes[1] = rep.delta_measured <= params.delta_bar;
  rep.passes[2] = overlap_ok;
  rep.passes[3] = rep.lambda1_neck >= params.Lambda;
  return rep;
}

}  // namespace specgap
