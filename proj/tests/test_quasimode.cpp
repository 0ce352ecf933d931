#include <Eigen/Dense>
#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "specgap/cutoff.hpp"
#include "specgap/operators.hpp"
#include "specgap/profile.hpp"
#include "specgap/quasimode.hpp"
#include "specgap/rng.hpp"

using namespace specgap;
namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("associated Legendre recurrence spot checks") {
  for (double x : {-0.7, -0.1, 0.3, 0.9}) {
    CHECK(legendre_pkm(0, 0, x) == Catch::Approx(1.0));
    CHECK(legendre_pkm(1, 0, x) == Catch::Approx(x));
    CHECK(legendre_pkm(2, 0, x) == Catch::Approx(0.5 * (3.0 * x * x - 1.0)).margin(1e-14));
    double s = std::sqrt(1.0 - x * x);
    CHECK(legendre_pkm(1, 1, x) == Catch::Approx(s).margin(1e-14));
    CHECK(legendre_pkm(2, 1, x) == Catch::Approx(3.0 * x * s).margin(1e-14));
    CHECK(legendre_pkm(2, 2, x) == Catch::Approx(3.0 * (1.0 - x * x)).margin(1e-14));
  }
}

TEST_CASE("log cutoff values") {
  CutoffSpec spec(0.01, 0.1, CutoffKind::log);
  CHECK(log_cutoff_value(spec, 0.05) ==
        Catch::Approx(std::log(5.0) / std::log(10.0)).epsilon(1e-14));
  CHECK(log_cutoff_value(spec, 0.01) == 0.0);
  CHECK(log_cutoff_value(spec, 0.1) == 1.0);
  CHECK(log_cutoff_value(spec, 1e-5) == 0.0);
  CHECK(log_cutoff_value(spec, 3.0) == 1.0);
  CHECK_THROWS_AS(log_cutoff_value(spec, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(CutoffSpec(0.1, 0.05), std::invalid_argument);

  // default outer radius is sqrt(rho)
  CHECK(CutoffSpec(0.01).r_outer == Catch::Approx(0.1));

  // monotone in r for every kind
  for (auto kind : {CutoffKind::log, CutoffKind::linear, CutoffKind::smoothstep}) {
    CutoffSpec s2(1e-3, 0.2, kind);
    double prev = -1.0;
    for (double r = 1e-4; r < 0.3; r *= 1.3) {
      double z = log_cutoff_value(s2, r);
      CHECK(z >= prev);
      CHECK(z >= 0.0);
      CHECK(z <= 1.0);
      prev = z;
    }
  }
}

TEST_CASE("flat annulus cutoff energy matches the closed-form integral") {
  // integral oracle: 2 pi / log(r_outer/rho) for the log cutoff
  for (double rho : {1e-2, 1e-4, 1e-6}) {
    CutoffSpec spec(rho, std::sqrt(rho), CutoffKind::log);
    double aim = 2.0 * kPi / std::log(spec.r_outer / spec.rho);
    double got = flat_annulus_cutoff_energy(spec, rho / 50.0);
    CHECK(got == Catch::Approx(aim).epsilon(0.02));
  }
  // decreasing to zero along the rho -> 0 schedule with r_outer = sqrt(rho)
  double e2 = flat_annulus_cutoff_energy(CutoffSpec(1e-2), 1e-4);
  double e4 = flat_annulus_cutoff_energy(CutoffSpec(1e-4), 1e-6);
  double e6 = flat_annulus_cutoff_energy(CutoffSpec(1e-6), 1e-8);
  CHECK(e4 < e2);
  CHECK(e6 < e4);
}

TEST_CASE("quasimode with trivial cutoff is an eigenfunction up to discretization") {
  Profile p = sphere_profile(1e-3);
  TridiagOp op = sl_discretize(p, 1, Bc::neumann);
  CutoffSpec trivial(1e-12, 2e-12, CutoffKind::log);  // zeta == 1 on the grid
  QuasiMode qm = build_quasimode(p, 0, 1, 1, trivial);
  CHECK(residual(op, qm) <= 10.0 * p.h * p.h);
  CHECK(qm.residual == Catch::Approx(residual(op, qm)));
}

TEST_CASE("residual of an exact discrete eigenvector is tiny") {
  Profile p = sphere_profile(0.02);
  TridiagOp op = sl_discretize(p, 1, Bc::neumann);
  int n = op.size();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) a(i, i) = op.diag[i];
  for (int i = 0; i + 1 < n; ++i) a(i, i + 1) = a(i + 1, i) = op.offdiag[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  QuasiMode qm{std::vector<double>(n), es.eigenvalues()(0), 0, 1, 1, CutoffSpec(1e-12)};
  for (int i = 0; i < n; ++i) qm.values[i] = es.eigenvectors()(i, 0) / std::sqrt(op.mass[i]);
  CHECK(residual(op, qm) <= 1e-9);
}

TEST_CASE("residual bounds the distance to the spectrum") {
  Profile p = sphere_profile(0.02);
  TridiagOp op = sl_discretize(p, 0, Bc::neumann);
  int n = op.size();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) a(i, i) = op.diag[i];
  for (int i = 0; i + 1 < n; ++i) a(i, i + 1) = a(i + 1, i) = op.offdiag[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  SplitRng rng(31);
  for (int t = 0; t < 20; ++t) {
    QuasiMode qm{std::vector<double>(n), rng.next_uniform(0.0, 15.0), 0, 0, 0, CutoffSpec(1e-12)};
    for (auto& x : qm.values) x = rng.next_gaussian();
    double r = residual(op, qm);
    double dist = 1e300;
    for (int i = 0; i < n; ++i) dist = std::min(dist, std::abs(es.eigenvalues()(i) - qm.lambda_target));
    CHECK(dist <= r + 1e-12);
  }
}

TEST_CASE("residual scaling follows the logarithmic law on the model sphere") {
  Profile p = sphere_profile(2e-5);
  TridiagOp op = sl_discretize(p, 1, Bc::neumann);
  double prev_res = 1e300;
  std::vector<double> r2l;
  for (double rho : {1e-2, 1e-3, 1e-4}) {
    CutoffSpec spec(rho, -1.0, CutoffKind::smoothstep);
    QuasiMode qm = build_quasimode(p, 0, 1, 1, spec);
    double r = residual(op, qm);
    CHECK(r < prev_res);  // decreasing in rho
    prev_res = r;
    r2l.push_back(r * r * std::abs(std::log(rho)));
  }
  double lo = *std::min_element(r2l.begin(), r2l.end());
  double hi = *std::max_element(r2l.begin(), r2l.end());
  CHECK(hi <= 3.0 * lo);
}

TEST_CASE("disjoint supports and grid translation invariance") {
  Profile p = assemble_chain({3, 0.1, 0.005, true, 0});
  TridiagOp op = sl_discretize(p, 1, Bc::periodic);
  CutoffSpec spec(0.15, 0.6, CutoffKind::smoothstep);
  QuasiMode a = build_quasimode(p, 0, 1, 1, spec);
  QuasiMode b = build_quasimode(p, 1, 1, 1, spec);
  CHECK(op.weighted_dot(a.values, b.values) == 0.0);
  CHECK(std::abs(residual(op, a) - residual(op, b)) <= 1e-9);
}

TEST_CASE("donnelly report logic") {
  Profile p = assemble_chain({4, 0.1, 0.01, false, 0});
  TridiagOp op = sl_discretize(p, 1, Bc::neumann);
  CutoffSpec spec(0.16, 0.64, CutoffKind::smoothstep);
  std::vector<QuasiMode> family;
  for (int b = 0; b < 4; ++b) family.push_back(build_quasimode(p, b, 1, 1, spec));
  DonnellyReport rep = donnelly_report(op, family, 2.0, 10.0);
  CHECK(rep.count == 4);
  CHECK(rep.gram_min_eigenvalue >= 0.5);  // disjoint supports: Gram == identity
  CHECK(rep.passes);                       // generous eps0

  DonnellyReport tight = donnelly_report(op, family, 2.0, 1e-4);
  CHECK_FALSE(tight.passes);  // same family, small eps0: residuals too large

  std::vector<QuasiMode> empty;
  CHECK_THROWS_AS(donnelly_report(op, empty, 2.0, 0.1), std::invalid_argument);
}

TEST_CASE("harmonic neck extension report") {
  Profile p = assemble_chain({3, 0.1, 0.005, false, 0});
  HarmonicNeckReport rep = harmonic_neck_quasimode(p, 0, 2, 0.5);
  CHECK(rep.dirichlet_energy > 0.0);
  CHECK(rep.grad_sup > 0.0);
  CHECK(std::isfinite(rep.ratio));
  CHECK(rep.residual > 0.0);
  CHECK(rep.tau == 0.25);

  // thinner necks cost less Dirichlet energy (the O(1/|log rho|) mechanism)
  Profile p2 = assemble_chain({3, 0.05, 0.0025, false, 0});
  HarmonicNeckReport rep2 = harmonic_neck_quasimode(p2, 0, 2, 0.5);
  CHECK(rep2.dirichlet_energy < rep.dirichlet_energy);

  CHECK_THROWS_AS(harmonic_neck_quasimode(p, 2, 2, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(harmonic_neck_quasimode(p, 0, 2, 0.01), std::invalid_argument);
}
