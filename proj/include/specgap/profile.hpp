#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "specgap/geometry.hpp"

namespace specgap {

enum class PieceKind { sphere_arc, neck, cylinder };

inline const char* piece_kind_name(PieceKind k) {
  switch (k) {
    case PieceKind::sphere_arc: return "sphere";
    case PieceKind::neck: return "neck";
    case PieceKind::cylinder: return "cylinder";
  }
  return "?";
}

// One analytic piece of a profile curve.
//   sphere_arc: f(s) = sin(a + (s - s_begin)),  a = polar angle at s_begin
//   neck:       f(s) = a * cosh((s - b) / a),   a = eps, b = waist position
//   cylinder:   f(s) = a
struct Piece {
  PieceKind kind;
  double s_begin, s_end;
  double a = 0.0, b = 0.0;

  double eval(double s) const {
    switch (kind) {
      case PieceKind::sphere_arc: return std::sin(a + (s - s_begin));
      case PieceKind::neck: return a * std::cosh((s - b) / a);
      case PieceKind::cylinder: return a;
    }
    return 0.0;
  }
  double eval_derivative(double s) const {
    switch (kind) {
      case PieceKind::sphere_arc: return std::cos(a + (s - s_begin));
      case PieceKind::neck: return std::sinh((s - b) / a);
      case PieceKind::cylinder: return 0.0;
    }
    return 0.0;
  }
};

struct ChainConfig {
  int blocks = 1;
  double eps = 0.1;
  double h = 1e-3;
  bool periodic = true;
  std::uint64_t seed = 0;
};

// Discretized surface-of-revolution metric ds^2 + f(s)^2 dtheta^2 sampled at
// cell centers s_i = (i+1/2)h.  Pieces keep the exact profile for the ODE
// integrator; junctions mark sphere/neck interfaces.
struct Profile {
  std::vector<double> f;       // samples at cell centers, size n
  double h = 0.0;              // uniform cell width (length = n*h)
  bool periodic = false;
  double length = 0.0;
  std::vector<Piece> pieces;
  std::vector<double> junctions;     // arclength of sphere/neck interfaces
  std::vector<int> piece_of_cell;    // index into pieces, size n

  // chain metadata (populated by assemble_chain on necked chains)
  std::optional<double> eps;
  std::optional<double> f_match;   // junction radius eps*cosh(tau*)
  std::optional<double> s_match;   // junction polar angle
  int blocks = 1;

  int size() const { return static_cast<int>(f.size()); }
  double cell_center(int i) const { return (i + 0.5) * h; }
  std::optional<double> period() const {
    return periodic ? std::optional<double>(length) : std::nullopt;
  }

  double eval(double s) const { return pieces[piece_at(s)].eval(wrap(s)); }
  double eval_derivative(double s) const { return pieces[piece_at(s)].eval_derivative(wrap(s)); }

  // analytic maximum of the radius over the pieces
  double f_max() const {
    const double half_pi = 1.57079632679489661923;
    double m = 0.0;
    for (const auto& p : pieces) {
      m = std::max(m, std::max(p.eval(p.s_begin), p.eval(p.s_end)));
      if (p.kind == PieceKind::sphere_arc) {
        double top = p.s_begin + (half_pi - p.a);  // equator crossing
        if (top >= p.s_begin && top <= p.s_end) m = std::max(m, 1.0);
      }
    }
    return m;
  }

  bool has_pole(bool right_end) const {
    if (periodic || pieces.empty()) return false;
    const Piece& p = right_end ? pieces.back() : pieces.front();
    if (p.kind != PieceKind::sphere_arc) return false;
    double fv = right_end ? p.eval(p.s_end) : p.eval(p.s_begin);
    return std::abs(fv) < 1e-9;
  }

  // cells of block b's sphere arc, [begin, end)
  std::pair<int, int> block_cells(int b) const {
    int seen = -1;
    for (std::size_t pi = 0; pi < pieces.size(); ++pi) {
      if (pieces[pi].kind != PieceKind::sphere_arc) continue;
      if (++seen == b) {
        int i0 = static_cast<int>(std::ceil(pieces[pi].s_begin / h - 0.5));
        int i1 = static_cast<int>(std::floor(pieces[pi].s_end / h - 0.5)) + 1;
        i0 = std::max(i0, 0);
        i1 = std::min(i1, size());
        return {i0, i1};
      }
    }
    throw std::invalid_argument("block_cells: no such block");
  }

  // polar angle on the model sphere of cell i (must lie in a sphere piece)
  double model_angle(int i) const {
    const Piece& p = pieces[piece_of_cell[i]];
    if (p.kind != PieceKind::sphere_arc)
      throw std::invalid_argument("model_angle: cell not on a sphere arc");
    return p.a + (cell_center(i) - p.s_begin);
  }

  void validate() const;

 private:
  double wrap(double s) const {
    if (!periodic) return s;
    s = std::fmod(s, length);
    return s < 0 ? s + length : s;
  }
  std::size_t piece_at(double s) const {
    double x = wrap(s);
    std::size_t lo = 0, hi = pieces.size();
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      if (pieces[mid].s_begin <= x + 1e-15)
        lo = mid;
      else
        hi = mid;
    }
    return lo;
  }
};

inline void Profile::validate() const {
  int n = size();
  if (n < 3) throw std::invalid_argument("profile: too few cells");
  for (int i = 0; i < n; ++i)
    if (!(f[i] > 0.0)) throw std::invalid_argument("profile: radius must be positive at cell centers");
  if (periodic) {
    double fv0 = eval(0.0), fv1 = eval(length);
    double dv0 = eval_derivative(0.0), dv1 = eval_derivative(length);
    if (std::abs(fv0 - fv1) > 1e-9 || std::abs(dv0 - dv1) > 1e-9)
      throw std::invalid_argument("profile: periodic ends do not match in C^1");
  } else {
    for (int end = 0; end < 2; ++end) {
      if (!has_pole(end)) continue;
      // slope from the pole (f = 0 at the boundary face) to the first cell
      double slope = (end ? f[n - 1] : f[0]) / (0.5 * h);
      if (std::abs(std::abs(slope) - 1.0) > 1e-3)
        throw std::invalid_argument("profile: pole slope is not +-1");
    }
  }
}

namespace detail {

inline Profile sample_pieces(std::vector<Piece> pieces, double total, double h_req, bool periodic,
                             int n_override = -1) {
  Profile p;
  p.pieces = std::move(pieces);
  p.periodic = periodic;
  int n = n_override > 0 ? n_override : std::max(3, static_cast<int>(std::llround(total / h_req)));
  p.h = total / n;
  p.length = total;
  p.f.resize(n);
  p.piece_of_cell.resize(n);
  std::size_t pi = 0;
  for (int i = 0; i < n; ++i) {
    double s = (i + 0.5) * p.h;
    while (pi + 1 < p.pieces.size() && s > p.pieces[pi].s_end + 1e-15) ++pi;
    p.f[i] = p.pieces[pi].eval(s);
    p.piece_of_cell[i] = static_cast<int>(pi);
  }
  return p;
}

}  // namespace detail

// Closed round unit sphere, poles at both ends (the model block X_alpha).
inline Profile sphere_profile(double h) {
  const double pi = 3.14159265358979323846;
  std::vector<Piece> pieces{{PieceKind::sphere_arc, 0.0, pi, 0.0, 0.0}};
  Profile p = detail::sample_pieces(std::move(pieces), pi, h, false);
  p.validate();
  return p;
}

// Flat cylinder f = radius; the constant-coefficient reference profile.
inline Profile cylinder_profile(double radius, double len, double h, bool periodic) {
  std::vector<Piece> pieces{{PieceKind::cylinder, 0.0, len, radius, 0.0}};
  Profile p = detail::sample_pieces(std::move(pieces), len, h, periodic);
  p.validate();
  return p;
}

// Alternating unit-sphere arcs and catenoid necks with C^1 junctions.
// Periodic: one waist sits at s = 0, so each period is
//   [half neck][sphere arc][neck]...[sphere arc][half neck].
// Capped: the outer blocks keep their poles; blocks=1 gives the closed sphere.
inline Profile assemble_chain(const ChainConfig& cfg) {
  const double pi = 3.14159265358979323846;
  if (cfg.blocks < 1) throw std::invalid_argument("assemble_chain: blocks must be >= 1");
  if (!(cfg.eps > 0.0 && cfg.eps < 0.5))
    throw std::invalid_argument("assemble_chain: eps outside (0,0.5)");
  if (!(cfg.h > 0.0) || cfg.h > cfg.eps / 10.0 + 1e-15)
    throw std::invalid_argument("assemble_chain: grid step must satisfy h <= eps/10");

  NeckMatch nm = neck_match(cfg.eps);
  const double arc = pi - 2.0 * nm.s_match;   // interior sphere arc length
  const double neck = 2.0 * nm.half_width;    // full neck length

  std::vector<Piece> pieces;
  std::vector<double> junctions;
  double s = 0.0;

  if (cfg.periodic) {
    pieces.push_back({PieceKind::neck, 0.0, nm.half_width, cfg.eps, 0.0});
    s = nm.half_width;
    junctions.push_back(s);
    for (int b = 0; b < cfg.blocks; ++b) {
      pieces.push_back({PieceKind::sphere_arc, s, s + arc, nm.s_match, 0.0});
      s += arc;
      junctions.push_back(s);
      if (b + 1 < cfg.blocks) {
        pieces.push_back({PieceKind::neck, s, s + neck, cfg.eps, s + nm.half_width});
        s += neck;
        junctions.push_back(s);
      }
    }
    pieces.push_back({PieceKind::neck, s, s + nm.half_width, cfg.eps, s + nm.half_width});
    s += nm.half_width;
  } else if (cfg.blocks == 1) {
    pieces.push_back({PieceKind::sphere_arc, 0.0, pi, 0.0, 0.0});
    s = pi;
  } else {
    for (int b = 0; b < cfg.blocks; ++b) {
      double a0 = (b == 0) ? 0.0 : nm.s_match;
      double a1 = (b == cfg.blocks - 1) ? pi : pi - nm.s_match;
      pieces.push_back({PieceKind::sphere_arc, s, s + (a1 - a0), a0, 0.0});
      s += a1 - a0;
      if (b + 1 < cfg.blocks) {
        junctions.push_back(s);
        pieces.push_back({PieceKind::neck, s, s + neck, cfg.eps, s + nm.half_width});
        s += neck;
        junctions.push_back(s);
      }
    }
  }

  // periodic grids use a whole number of cells per block so that the deck
  // translation is an exact grid symmetry
  int n_override = -1;
  if (cfg.periodic)
    n_override = cfg.blocks *
                 std::max(3, static_cast<int>(std::llround(s / (cfg.blocks * cfg.h))));
  Profile p = detail::sample_pieces(std::move(pieces), s, cfg.h, cfg.periodic, n_override);
  p.junctions = std::move(junctions);
  p.blocks = cfg.blocks;
  if (cfg.periodic || cfg.blocks > 1) {
    p.eps = cfg.eps;
    p.f_match = nm.f_match;
    p.s_match = nm.s_match;
  }
  p.validate();
  return p;
}

// Arclength of one period of a single-block chain, in closed form.
inline double chain_period(double eps) {
  const double pi = 3.14159265358979323846;
  NeckMatch nm = neck_match(eps);
  return (pi - 2.0 * nm.s_match) + 2.0 * nm.half_width;
}

}  // namespace specgap
