#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>
#include <vector>

#include "specgap/floquet.hpp"
#include "specgap/geometry.hpp"
#include "specgap/parallel.hpp"
#include "specgap/profile.hpp"

namespace specgap {

struct Band {
  double lo, hi;
  int mode;
};

struct Verdict {
  std::string subject;
  bool pass;
  double detail;  // distance or overlap width backing the verdict
};

using Interval = std::pair<double, double>;

struct GapReport {
  double lambda_max = 0.0;
  std::vector<Band> per_mode_bands;
  std::vector<Interval> bands;  // merged over modes
  std::vector<Interval> gaps;   // complement in [0, lambda_max]
  std::vector<SphereLevel> model_spectrum;
  std::vector<Verdict> verdicts;
  std::string method = "floquet";
  int mode_cutoff = 0;
  bool warning_possible_missed_band = false;
  double grid = 0.0, refine_tol = 0.0, rk_step = 0.0;
};

// Smallest m_max with (m_max / max f)^2 > lambda_max: the potential term
// m^2/f^2 then dominates, so modes beyond m_max carry no spectrum below
// lambda_max.
inline int mode_cutoff(const Profile& profile, double lambda_max) {
  if (!(lambda_max > 0.0)) throw std::invalid_argument("mode_cutoff: lambda_max must be positive");
  double fmax = profile.f_max();
  int m = static_cast<int>(std::floor(std::sqrt(lambda_max) * fmax)) + 1;
  while (static_cast<double>(m) * m <= lambda_max * fmax * fmax) ++m;
  return m;
}

namespace detail {

inline std::vector<Interval> merge_intervals(std::vector<Interval> ivs, double slack) {
  std::sort(ivs.begin(), ivs.end());
  std::vector<Interval> out;
  for (const auto& iv : ivs) {
    if (!out.empty() && iv.first <= out.back().second + slack)
      out.back().second = std::max(out.back().second, iv.second);
    else
      out.push_back(iv);
  }
  return out;
}

}  // namespace detail

// Floquet band structure: per mode, scan D_m on a lambda grid, refine the
// |D| = 2 edges by bisection, union bands over modes.  Complement gaps
// narrower than the merge slack are treated as closed (touching bands).
inline GapReport band_structure(const Profile& profile, double lambda_max, double grid,
                                double refine_tol, double rk_step = 2.5e-4, int workers = 1,
                                std::vector<std::tuple<double, int, double>>* sweep_out = nullptr) {
  if (!profile.periodic) throw std::invalid_argument("band_structure: profile must be periodic");
  if (!(grid > 0.0) || !(refine_tol > 0.0))
    throw std::invalid_argument("band_structure: grid and refine_tol must be positive");

  GapReport rep;
  rep.lambda_max = lambda_max;
  rep.method = "floquet";
  rep.grid = grid;
  rep.refine_tol = refine_tol;
  rep.rk_step = rk_step;
  rep.mode_cutoff = mode_cutoff(profile, lambda_max);
  for (const auto& lvl : sphere_spectrum(2, static_cast<int>(std::floor(std::sqrt(lambda_max))) + 1))
    if (lvl.lambda <= lambda_max) rep.model_spectrum.push_back(lvl);

  FloquetGrid fg(profile, rk_step);
  const double inside_tol = 1e-9;  // |D|<=2+tol counts as inside (band edges touch)
  const int npts = static_cast<int>(std::ceil(lambda_max / grid)) + 1;

  for (int m = 0; m <= rep.mode_cutoff; ++m) {
    std::vector<double> g(npts), dval(npts);
    parallel_for(npts, workers, [&](std::size_t i) {
      double lam = std::min(static_cast<double>(i) * grid, lambda_max);
      dval[i] = discriminant(fg, m, lam);
      g[i] = std::abs(dval[i]) - 2.0;
    });
    if (sweep_out)
      for (int i = 0; i < npts; ++i)
        sweep_out->emplace_back(std::min(static_cast<double>(i) * grid, lambda_max), m, dval[i]);
    auto inside = [&](int i) { return g[i] <= inside_tol; };
    auto lam_of = [&](int i) { return std::min(static_cast<double>(i) * grid, lambda_max); };
    auto refine = [&](double a, double b, bool a_inside) {
      while (b - a > refine_tol) {
        double mid = 0.5 * (a + b);
        bool mid_inside = std::abs(discriminant(fg, m, mid)) - 2.0 <= inside_tol;
        if (mid_inside == a_inside)
          a = mid;
        else
          b = mid;
      }
      return 0.5 * (a + b);
    };
    int i = 0;
    while (i < npts) {
      if (!inside(i)) {
        ++i;
        continue;
      }
      int j = i;
      while (j + 1 < npts && inside(j + 1)) ++j;
      double lo = (i == 0) ? 0.0 : refine(lam_of(i - 1), lam_of(i), false);
      double hi = (j == npts - 1) ? lambda_max : refine(lam_of(j), lam_of(j + 1), true);
      rep.per_mode_bands.push_back({lo, hi, m});
      if (hi - lo < grid) rep.warning_possible_missed_band = true;
      i = j + 1;
    }
  }

  const double slack = std::max(10.0 * refine_tol, 1e-8);
  std::vector<Interval> ivs;
  for (const auto& b : rep.per_mode_bands) ivs.push_back({b.lo, b.hi});
  rep.bands = detail::merge_intervals(std::move(ivs), slack);
  double prev = 0.0;
  for (const auto& iv : rep.bands) {
    if (iv.first > prev + slack) rep.gaps.push_back({prev, iv.first});
    prev = std::max(prev, iv.second);
  }
  if (prev < lambda_max - slack) rep.gaps.push_back({prev, lambda_max});
  return rep;
}

inline double dist_to_intervals(double x, const std::vector<Interval>& ivs) {
  double d = 1e300;
  for (const auto& iv : ivs) {
    if (x >= iv.first && x <= iv.second) return 0.0;
    d = std::min(d, std::min(std::abs(x - iv.first), std::abs(x - iv.second)));
  }
  return d;
}

// Hausdorff distance between the band union and the model points within
// [0, lambda_max].
inline double hausdorff_to_model(const GapReport& rep) {
  std::vector<double> s;
  for (const auto& lvl : rep.model_spectrum)
    if (lvl.lambda <= rep.lambda_max) s.push_back(lvl.lambda);
  if (s.empty() || rep.bands.empty()) return 1e300;
  double d = 0.0;
  auto dist_to_s = [&](double x) {
    double b = 1e300;
    for (double v : s) b = std::min(b, std::abs(x - v));
    return b;
  };
  for (const auto& iv : rep.bands) {
    d = std::max(d, dist_to_s(iv.first));
    d = std::max(d, dist_to_s(iv.second));
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      double mid = 0.5 * (s[i] + s[i + 1]);
      if (mid > iv.first && mid < iv.second) d = std::max(d, dist_to_s(mid));
    }
  }
  for (double v : s) d = std::max(d, dist_to_intervals(v, rep.bands));
  return d;
}

// Verdicts against the model spectrum with margin d.  Complement intervals
// between consecutive model eigenvalues (both below lambda_max) are judged by
// intersection with a computed gap; the trailing interval cut off by
// lambda_max is not judged since the bands above lambda_max are unknown.
// Each model eigenvalue must lie within d of the band union.
inline void compare_to_model(GapReport& rep, const std::vector<SphereLevel>& model, double d) {
  if (!(d > 0.0)) throw std::invalid_argument("compare_to_model: margin must be positive");
  rep.verdicts.clear();
  std::vector<double> s;
  for (const auto& lvl : model)
    if (lvl.lambda <= rep.lambda_max) s.push_back(lvl.lambda);
  std::sort(s.begin(), s.end());

  auto intersects_gap = [&](double lo, double hi) {
    for (const auto& g : rep.gaps)
      if (std::max(lo, g.first) < std::min(hi, g.second)) return true;
    return false;
  };
  auto add_interval_verdict = [&](double lo, double hi) {
    double a = lo + d, b = hi - d;
    Verdict v;
    v.subject = "complement(" + std::to_string(lo) + "," + std::to_string(hi) + ")";
    if (a >= b) {
      v.pass = true;  // margin swallows the interval; nothing to certify
      v.detail = 0.0;
    } else {
      v.pass = intersects_gap(a, b);
      double overlap = 0.0;
      for (const auto& g : rep.gaps)
        overlap = std::max(overlap, std::min(b, g.second) - std::max(a, g.first));
      v.detail = overlap;
    }
    rep.verdicts.push_back(v);
  };

  if (s.empty()) {
    add_interval_verdict(0.0, rep.lambda_max);
  } else {
    for (std::size_t i = 0; i + 1 < s.size(); ++i) add_interval_verdict(s[i], s[i + 1]);
    for (double v : s) {
      double dist = dist_to_intervals(v, rep.bands);
      rep.verdicts.push_back({"model(" + std::to_string(v) + ")", dist <= d, dist});
    }
  }
}

inline bool all_verdicts_pass(const GapReport& rep) {
  for (const auto& v : rep.verdicts)
    if (!v.pass) return false;
  return true;
}

}  // namespace specgap
