#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "specgap/operators.hpp"

namespace specgap {

struct EigenRequest {
  double a = 0.0, b = 0.0;   // interval mode
  int k = 0;                 // count mode when k > 0
  double tol = 1e-10;
  int max_dim_dense = 1200;
};

// Number of eigenvalues strictly below shift, by the inertia of the shifted
// LDL^T factorization.  Plain tridiagonals use the textbook recurrence with a
// tiny negative pivot guard (LAPACK convention).  Periodic operators carry a
// corner entry; the last row is eliminated with explicit fill tracking, and a
// near-breakdown pivot there would poison the trailing Schur complement, so
// the shift is perturbed internally at the 1e-15 * scale level and the
// factorization retried (counts away from eigenvalues are unaffected).
inline int sturm_count(const TridiagOp& op, double shift) {
  const int n = op.size();
  double glo, ghi;
  op.gershgorin(glo, ghi);
  const double scale = std::max(1.0, std::max(std::abs(glo), std::abs(ghi)));
  const double pivmin = 1e-30 * scale;
  auto guard = [&](double p) { return std::abs(p) < pivmin ? -pivmin : p; };

  if (!op.cyclic) {
    int neg = 0;
    double p = guard(op.diag[0] - shift);
    if (p < 0) ++neg;
    for (int i = 1; i < n; ++i) {
      p = guard(op.diag[i] - shift - op.offdiag[i - 1] * op.offdiag[i - 1] / p);
      if (p < 0) ++neg;
    }
    return neg;
  }
  if (n < 3) throw std::invalid_argument("sturm_count: cyclic operator too small");
  const double stab = 1e-12 * scale;
  for (int attempt = 0; attempt < 60; ++attempt) {
    const double sigma = shift + static_cast<double>(attempt) * attempt * (1e-15 * scale);
    int neg = 0;
    bool ok = true;
    double r = op.corner;                  // running fill of the last row
    double dn = op.diag[n - 1] - sigma;    // Schur complement of the last pivot
    double p = op.diag[0] - sigma;
    for (int i = 0; i <= n - 3 && ok; ++i) {
      if (std::abs(p) < stab) {
        ok = false;
        break;
      }
      if (p < 0) ++neg;
      const double e = op.offdiag[i];
      dn -= r * r / p;
      const double rnext = (i + 1 == n - 2 ? op.offdiag[n - 2] : 0.0) - r * e / p;
      p = op.diag[i + 1] - sigma - e * e / p;
      r = rnext;
    }
    if (!ok || std::abs(p) < stab) continue;
    if (p < 0) ++neg;  // pivot n-2
    dn -= r * r / p;
    if (guard(dn) < 0) ++neg;
    return neg;
  }
  throw std::runtime_error("sturm_count: persistent pivot breakdown");
}

// All eigenvalues in [a,b], each within req.tol, found by bisection on the
// Sturm count.  Multiple eigenvalues are emitted with their multiplicity.
inline std::vector<double> eigs_in_interval(const TridiagOp& op, const EigenRequest& req) {
  if (!(req.a < req.b)) throw std::invalid_argument("eigs_in_interval: empty interval");
  if (!(req.tol > 0.0)) throw std::invalid_argument("eigs_in_interval: tol must be positive");
  std::vector<double> out;
  struct Box {
    double lo, hi;
    int clo, chi;
  };
  std::vector<Box> stack{{req.a, req.b, sturm_count(op, req.a), sturm_count(op, req.b)}};
  while (!stack.empty()) {
    Box bx = stack.back();
    stack.pop_back();
    int cnt = bx.chi - bx.clo;
    if (cnt <= 0) continue;
    if (bx.hi - bx.lo <= req.tol) {
      double mid = 0.5 * (bx.lo + bx.hi);
      for (int j = 0; j < cnt; ++j) out.push_back(mid);
      continue;
    }
    double mid = 0.5 * (bx.lo + bx.hi);
    int cm = sturm_count(op, mid);
    stack.push_back({mid, bx.hi, cm, bx.chi});
    stack.push_back({bx.lo, mid, bx.clo, cm});
  }
  std::sort(out.begin(), out.end());
  return out;
}

// k smallest eigenvalues of a tridiagonal operator via count doubling plus
// interval bisection.
inline std::vector<double> smallest_eigs_tridiag(const TridiagOp& op, int k, double tol) {
  if (k <= 0 || k > op.size()) throw std::invalid_argument("smallest_eigs_tridiag: bad k");
  double glo, ghi;
  op.gershgorin(glo, ghi);
  double lo = glo - tol;
  double hi = std::min(ghi + tol, lo + std::max(1.0, 1e-3 * (ghi - glo)));
  while (sturm_count(op, hi) < k && hi < ghi + tol) hi = lo + 2.0 * (hi - lo);
  EigenRequest req;
  req.a = lo;
  req.b = hi;
  req.tol = tol;
  auto ev = eigs_in_interval(op, req);
  ev.resize(k);
  return ev;
}

inline std::vector<double> eigs(const TridiagOp& op, const EigenRequest& req) {
  if (req.k > 0) return smallest_eigs_tridiag(op, req.k, req.tol);
  return eigs_in_interval(op, req);
}

// Smallest Dirichlet eigenvalue of the neck region over modes 0..m_max.
inline double lambda1_neck(const Profile& profile, int m_max, double tol = 1e-9) {
  auto ops = neck_dirichlet_operator(profile, m_max);
  double best = 1e300;
  for (const auto& op : ops) best = std::min(best, smallest_eigs_tridiag(op, 1, tol)[0]);
  return best;
}

}  // namespace specgap
