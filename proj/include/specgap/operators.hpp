#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "specgap/profile.hpp"

namespace specgap {

enum class Bc { dirichlet, neumann, periodic };

// Per-mode discrete Laplacian -f^-1 (f phi')' + m^2 f^-2 phi on the profile
// grid, stored after the sqrt(mass) similarity so that diag/offdiag form a
// plain symmetric tridiagonal (plus a corner entry when periodic).  mass
// holds the discrete volumes w_i = f_i h; the operator acting on functions is
// D^-1 B D with D = diag(sqrt(w)).
struct TridiagOp {
  std::vector<double> diag;     // size n
  std::vector<double> offdiag;  // size n-1
  std::vector<double> mass;     // size n
  double corner = 0.0;          // wrap coupling between cells n-1 and 0
  bool cyclic = false;
  int mode = 0;
  Bc bc = Bc::neumann;
  double h = 0.0;

  int size() const { return static_cast<int>(diag.size()); }

  // symmetrized apply: v = B u
  void apply_sym(const std::vector<double>& u, std::vector<double>& v) const {
    int n = size();
    v.assign(n, 0.0);
    for (int i = 0; i < n; ++i) v[i] = diag[i] * u[i];
    for (int i = 0; i + 1 < n; ++i) {
      v[i] += offdiag[i] * u[i + 1];
      v[i + 1] += offdiag[i] * u[i];
    }
    if (cyclic) {
      v[0] += corner * u[n - 1];
      v[n - 1] += corner * u[0];
    }
  }

  // operator on functions: (A u)_i with A = D^-1 B D
  std::vector<double> apply_function(const std::vector<double>& u) const {
    int n = size();
    if (static_cast<int>(u.size()) != n)
      throw std::invalid_argument("apply_function: size mismatch");
    std::vector<double> du(n), v;
    for (int i = 0; i < n; ++i) du[i] = u[i] * std::sqrt(mass[i]);
    apply_sym(du, v);
    for (int i = 0; i < n; ++i) v[i] /= std::sqrt(mass[i]);
    return v;
  }

  double weighted_dot(const std::vector<double>& u, const std::vector<double>& v) const {
    double s = 0.0;
    for (int i = 0; i < size(); ++i) s += u[i] * v[i] * mass[i];
    return s;
  }
  double weighted_norm(const std::vector<double>& u) const {
    return std::sqrt(weighted_dot(u, u));
  }

  // Dirichlet energy u^T W A u = sum over faces of F (u_i - u_j)^2 / h
  // plus the potential part; evaluated through the symmetrized form.
  double quadratic_form(const std::vector<double>& u) const {
    int n = size();
    std::vector<double> du(n), v;
    for (int i = 0; i < n; ++i) du[i] = u[i] * std::sqrt(mass[i]);
    apply_sym(du, v);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += v[i] * du[i];
    return s;
  }

  void gershgorin(double& lo, double& hi) const {
    int n = size();
    lo = 1e300;
    hi = -1e300;
    for (int i = 0; i < n; ++i) {
      double r = 0.0;
      if (i > 0) r += std::abs(offdiag[i - 1]);
      if (i + 1 < n) r += std::abs(offdiag[i]);
      if (cyclic && (i == 0 || i == n - 1)) r += std::abs(corner);
      lo = std::min(lo, diag[i] - r);
      hi = std::max(hi, diag[i] + r);
    }
  }
};

namespace detail {

// Face radii: the exact profile value at the cell interface when geometry is
// available; geometric mean of the neighbours otherwise (synthetic data).
// Near poles the neighbour means misrepresent the face by O(1) relative
// error, so exact faces matter for pointwise residuals.
inline TridiagOp build_natural(const std::vector<double>& f, double h, int m, bool cyclic,
                               const std::vector<double>* faces = nullptr, double wrap_face = -1.0) {
  int n = static_cast<int>(f.size());
  TridiagOp op;
  op.mode = m;
  op.h = h;
  op.cyclic = cyclic;
  op.bc = cyclic ? Bc::periodic : Bc::neumann;
  op.diag.assign(n, 0.0);
  op.offdiag.assign(n - 1, 0.0);
  op.mass.resize(n);
  const double h2 = h * h;
  for (int i = 0; i + 1 < n; ++i) {
    double F = faces ? (*faces)[i] : std::sqrt(f[i] * f[i + 1]);
    op.diag[i] += F / (f[i] * h2);
    op.diag[i + 1] += F / (f[i + 1] * h2);
    op.offdiag[i] = -F / (h2 * std::sqrt(f[i] * f[i + 1]));
  }
  if (cyclic) {
    double F = wrap_face >= 0.0 ? wrap_face : std::sqrt(f[n - 1] * f[0]);
    op.diag[n - 1] += F / (f[n - 1] * h2);
    op.diag[0] += F / (f[0] * h2);
    op.corner = -F / (h2 * std::sqrt(f[n - 1] * f[0]));
  }
  for (int i = 0; i < n; ++i) {
    op.diag[i] += static_cast<double>(m) * m / (f[i] * f[i]);
    op.mass[i] = f[i] * h;
  }
  return op;
}

inline std::vector<double> profile_faces(const Profile& profile) {
  std::vector<double> faces(profile.size() - 1);
  for (int i = 0; i + 1 < profile.size(); ++i) faces[i] = profile.eval((i + 1) * profile.h);
  return faces;
}

}  // namespace detail

// Principal submatrix on cells [lo, hi): imposes zero values on the dropped
// cells, keeping their flux contribution in the retained diagonals.
inline TridiagOp restrict_dirichlet(const TridiagOp& op, int lo, int hi) {
  if (lo < 0 || hi > op.size() || hi - lo < 2)
    throw std::invalid_argument("restrict_dirichlet: bad range");
  TridiagOp out;
  out.mode = op.mode;
  out.h = op.h;
  out.bc = Bc::dirichlet;
  out.cyclic = false;
  out.diag.assign(op.diag.begin() + lo, op.diag.begin() + hi);
  out.offdiag.assign(op.offdiag.begin() + lo, op.offdiag.begin() + (hi - 1));
  out.mass.assign(op.mass.begin() + lo, op.mass.begin() + hi);
  return out;
}

// Discrete Laplace-Beltrami mode operator.  Axis rule at poles: the pole face
// has radius zero, so the natural scheme gives the one-sided stencil for
// m = 0 while the unbounded potential enforces the vanishing of m >= 1
// solutions.  Bc::dirichlet pins the outermost cells of a capped profile.
inline TridiagOp sl_discretize(const Profile& profile, int m, Bc bc) {
  if (m < 0) throw std::invalid_argument("sl_discretize: mode must be >= 0");
  if (bc == Bc::periodic && !profile.periodic)
    throw std::invalid_argument("sl_discretize: periodic bc on a non-periodic profile");
  if (bc != Bc::periodic && profile.periodic)
    throw std::invalid_argument("sl_discretize: periodic profile requires periodic bc");
  if (bc == Bc::periodic && (profile.has_pole(false) || profile.has_pole(true)))
    throw std::invalid_argument("sl_discretize: pole present with periodic bc");

  std::vector<double> faces = detail::profile_faces(profile);
  double wrap = bc == Bc::periodic ? profile.eval(0.0) : -1.0;
  TridiagOp op = detail::build_natural(profile.f, profile.h, m, bc == Bc::periodic, &faces, wrap);
  if (bc == Bc::dirichlet) return restrict_dirichlet(op, 1, op.size() - 1);
  return op;
}

// Restriction of the mode operators to the neck region N = {f <= 2 f_match}
// with Dirichlet conditions on its boundary, for m = 0..m_max.  On periodic
// chains the neck runs wrap through s = 0; each connected component yields
// one operator per mode.
inline std::vector<TridiagOp> neck_dirichlet_operator(const Profile& profile, int m_max) {
  if (!profile.f_match) throw std::invalid_argument("neck_dirichlet_operator: profile has no neck metadata");
  if (m_max < 0) throw std::invalid_argument("neck_dirichlet_operator: m_max must be >= 0");
  const int n = profile.size();
  const double cut = 2.0 * *profile.f_match;
  std::vector<char> in_neck(n);
  int total = 0;
  for (int i = 0; i < n; ++i) {
    in_neck[i] = profile.f[i] <= cut;
    total += in_neck[i];
  }
  if (total == 0) throw std::invalid_argument("neck_dirichlet_operator: empty neck region");
  if (total == n) throw std::invalid_argument("neck_dirichlet_operator: neck region covers the whole profile");

  // connected runs, wrapping allowed on periodic profiles
  std::vector<std::vector<int>> runs;
  {
    int start = 0;
    if (profile.periodic) {
      while (in_neck[start]) ++start;  // total < n guarantees termination
    }
    std::vector<int>* cur = nullptr;
    for (int k = 0; k < n; ++k) {
      int i = (start + k) % n;
      if (in_neck[i]) {
        if (!cur) {
          runs.emplace_back();
          cur = &runs.back();
        }
        cur->push_back(i);
      } else {
        cur = nullptr;
      }
    }
  }

  std::vector<TridiagOp> out;
  for (int m = 0; m <= m_max; ++m) {
    for (const auto& run : runs) {
      if (run.size() < 2)
        throw std::invalid_argument("neck_dirichlet_operator: neck run degenerates to a single cell");
      std::vector<double> fr(run.size()), faces(run.size() - 1);
      for (std::size_t k = 0; k < run.size(); ++k) fr[k] = profile.f[run[k]];
      for (std::size_t k = 0; k + 1 < run.size(); ++k)
        faces[k] = profile.eval(((run[k] + 1) % n) * profile.h);
      TridiagOp op = detail::build_natural(fr, profile.h, m, false, &faces);
      // Dirichlet closure at both run boundaries: flux through the faces to
      // the excluded neighbour cells
      const double h2 = profile.h * profile.h;
      bool left_open = profile.periodic || run.front() > 0;
      bool right_open = profile.periodic || run.back() + 1 < n;
      if (left_open)
        op.diag.front() += profile.eval(run.front() * profile.h) / (fr.front() * h2);
      if (right_open)
        op.diag.back() += profile.eval(((run.back() + 1) % n) * profile.h) / (fr.back() * h2);
      op.bc = Bc::dirichlet;
      out.push_back(std::move(op));
    }
  }
  return out;
}

}  // namespace specgap
