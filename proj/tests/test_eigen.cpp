#include <Eigen/Dense>
#include <catch2/catch_amalgamated.hpp>
#include <algorithm>
#include <cmath>

#include "specgap/floquet.hpp"
#include "specgap/profile.hpp"
#include "specgap/rng.hpp"
#include "specgap/tridiag_eigs.hpp"

using namespace specgap;
namespace {
constexpr double kPi = 3.14159265358979323846;

TridiagOp make_op(const std::vector<double>& diag, const std::vector<double>& off,
                  double corner = 0.0) {
  TridiagOp op;
  op.diag = diag;
  op.offdiag = off;
  op.mass.assign(diag.size(), 1.0);
  op.corner = corner;
  op.cyclic = corner != 0.0;
  return op;
}

std::vector<double> dense_eigs(const TridiagOp& op) {
  int n = op.size();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) a(i, i) = op.diag[i];
  for (int i = 0; i + 1 < n; ++i) a(i, i + 1) = a(i + 1, i) = op.offdiag[i];
  if (op.cyclic) {
    a(0, n - 1) += op.corner;
    a(n - 1, 0) += op.corner;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  return std::vector<double>(es.eigenvalues().data(), es.eigenvalues().data() + n);
}
}  // namespace

TEST_CASE("sturm count basics") {
  TridiagOp op = make_op({1, 2, 3}, {0, 0});
  CHECK(sturm_count(op, 2.5) == 2);
  CHECK(sturm_count(op, 0.5) == 0);
  CHECK(sturm_count(op, 3.5) == 3);
  double lo, hi;
  op.gershgorin(lo, hi);
  CHECK(sturm_count(op, lo - 1e-12) == 0);
}

TEST_CASE("sturm counts match dense counts on random tridiagonals") {
  SplitRng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    int n = rng.next_int(2, 120);
    std::vector<double> d(n), e(n - 1);
    for (auto& x : d) x = rng.next_gaussian() * 3.0;
    for (auto& x : e) x = rng.next_gaussian();
    TridiagOp op = make_op(d, e);
    auto ev = dense_eigs(op);
    for (int s = 0; s < 5; ++s) {
      double shift = rng.next_uniform(-8.0, 8.0);
      int want = static_cast<int>(std::lower_bound(ev.begin(), ev.end(), shift) - ev.begin());
      REQUIRE(sturm_count(op, shift) == want);
    }
  }
}

TEST_CASE("cyclic sturm counts match dense counts") {
  SplitRng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    int n = rng.next_int(3, 100);
    std::vector<double> d(n), e(n - 1);
    for (auto& x : d) x = rng.next_gaussian() * 3.0;
    for (auto& x : e) x = rng.next_gaussian();
    TridiagOp op = make_op(d, e, rng.next_gaussian());
    auto ev = dense_eigs(op);
    for (int s = 0; s < 5; ++s) {
      double shift = rng.next_uniform(-8.0, 8.0);
      int want = static_cast<int>(std::lower_bound(ev.begin(), ev.end(), shift) - ev.begin());
      REQUIRE(sturm_count(op, shift) == want);
    }
  }
}

TEST_CASE("sturm count is monotone with multiplicity jumps") {
  // block spectrum {0, 2, 2, 4} from the 4-cycle
  TridiagOp op = make_op({2, 2, 2, 2}, {-1, -1, -1}, -1.0);
  CHECK(sturm_count(op, -1e-9) == 0);
  CHECK(sturm_count(op, 1.0) == 1);
  CHECK(sturm_count(op, 3.0) == 3);  // jump of 2 across the double eigenvalue
  CHECK(sturm_count(op, 5.0) == 4);
  int prev = 0;
  for (double s = -1.0; s < 6.0; s += 0.1) {
    int c = sturm_count(op, s);
    CHECK(c >= prev);
    prev = c;
  }
}

TEST_CASE("eigs_in_interval against oracles") {
  Profile p = sphere_profile(1e-3);
  TridiagOp op = sl_discretize(p, 0, Bc::neumann);
  EigenRequest req;
  req.a = -0.1;
  req.b = 7.0;
  req.tol = 1e-6;
  auto ev = eigs_in_interval(op, req);
  REQUIRE(ev.size() == 3);  // Legendre oracle {0, 2, 6}
  CHECK(std::abs(ev[0]) < 5e-3);
  CHECK(std::abs(ev[1] - 2.0) < 5e-3);
  CHECK(std::abs(ev[2] - 6.0) < 5e-3);

  // empty interval between eigenvalues
  req.a = 2.5;
  req.b = 5.5;
  CHECK(eigs_in_interval(op, req).empty());

  req.a = req.b = 1.0;
  CHECK_THROWS_AS(eigs_in_interval(op, req), std::invalid_argument);
}

TEST_CASE("bisection matches dense and honors tol") {
  SplitRng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    int n = rng.next_int(3, 60);
    std::vector<double> d(n), e(n - 1);
    for (auto& x : d) x = rng.next_gaussian() * 2.0;
    for (auto& x : e) x = rng.next_gaussian();
    TridiagOp op = make_op(d, e);
    auto ev = dense_eigs(op);
    EigenRequest req;
    req.a = -10.0;
    req.b = 10.0;
    req.tol = 1e-8;
    auto mine = eigs_in_interval(op, req);
    std::vector<double> want;
    for (double v : ev)
      if (v >= req.a && v < req.b) want.push_back(v);
    REQUIRE(mine.size() == want.size());
    for (std::size_t i = 0; i < mine.size(); ++i) CHECK(std::abs(mine[i] - want[i]) <= req.tol);

    // rerun with tol/10 moves each eigenvalue by at most tol
    req.tol = 1e-9;
    auto finer = eigs_in_interval(op, req);
    REQUIRE(finer.size() == mine.size());
    for (std::size_t i = 0; i < mine.size(); ++i) CHECK(std::abs(mine[i] - finer[i]) <= 1e-8);
  }
}

TEST_CASE("flat-cylinder discriminant equals the closed form") {
  Profile p = cylinder_profile(1.0, kPi, 1e-3, true);
  FloquetGrid fg(p, 1e-3);

  CHECK(discriminant(fg, 0, 1.0) == Catch::Approx(-2.0).margin(1e-9));
  CHECK(discriminant(fg, 0, 0.0) == Catch::Approx(2.0).margin(1e-12));

  double max_err = 0.0, max_det = 0.0;
  for (int i = 0; i < 400; ++i) {
    double lam = 20.0 * i / 399.0;
    Monodromy mo = monodromy(fg, 0, lam);
    max_err = std::max(max_err, std::abs(mo.trace() - 2.0 * std::cos(kPi * std::sqrt(lam))));
    max_det = std::max(max_det, std::abs(mo.det() - 1.0));
  }
  CHECK(max_err <= 1e-6);
  CHECK(max_det <= 1e-8);

  CHECK_THROWS_AS(FloquetGrid(p, 0.1), std::invalid_argument);       // step too large
  CHECK_THROWS_AS(FloquetGrid(sphere_profile(0.01), 1e-3), std::invalid_argument);
}

TEST_CASE("monodromy is symplectic on chain profiles") {
  // tolerance conditioned on the matrix size: det = m11 m22 - m12 m21
  // cancels catastrophically for strongly evanescent modes
  Profile p = assemble_chain({1, 0.1, 0.01, true, 0});
  FloquetGrid fg(p, 5e-4);
  for (int m = 0; m <= 3; ++m)
    for (double lam : {0.5, 2.0, 7.3, 12.9}) {
      Monodromy mo = monodromy(fg, m, lam);
      double cond = std::abs(mo.m11 * mo.m22) + std::abs(mo.m12 * mo.m21);
      CHECK(std::abs(mo.det() - 1.0) <= 1e-8 * std::max(1.0, cond));
    }
}

TEST_CASE("smallest tridiag eigs") {
  Profile p = sphere_profile(2e-3);
  TridiagOp op = sl_discretize(p, 0, Bc::neumann);
  auto ev = smallest_eigs_tridiag(op, 3, 1e-8);
  REQUIRE(ev.size() == 3);
  CHECK(std::abs(ev[0]) < 1e-2);
  CHECK(std::abs(ev[1] - 2.0) < 1e-2);
  CHECK(std::abs(ev[2] - 6.0) < 1e-2);
}
