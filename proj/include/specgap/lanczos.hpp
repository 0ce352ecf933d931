#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "specgap/block_graph.hpp"
#include "specgap/rng.hpp"

namespace specgap {

struct ConvergenceFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Eigen::MatrixXd to_dense(const BlockGraphOp& op) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(op.size, op.size);
  for (const auto& e : op.entries) {
    if (e.i == e.j) {
      a(e.i, e.i) += e.value;
    } else {
      a(e.i, e.j) += e.value;
      a(e.j, e.i) += e.value;
    }
  }
  return a;
}

inline std::vector<double> dense_eigenvalues(const BlockGraphOp& op) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_dense(op), Eigen::EigenvaluesOnly);
  const auto& v = es.eigenvalues();
  return std::vector<double>(v.data(), v.data() + v.size());
}

// k smallest eigenvalues.  Small operators go through the dense solver;
// larger ones through Lanczos with full reorthogonalization.  Every returned
// pair satisfies ||A v - theta v|| <= tol * ||A||_gersh, otherwise a
// ConvergenceFailure with diagnostics is thrown.
inline std::vector<double> smallest_eigs(const BlockGraphOp& op, int k, double tol,
                                         int max_dim_dense = 500, std::uint64_t seed = 0x5eed) {
  if (k < 1 || k > op.size) throw std::invalid_argument("smallest_eigs: bad k");
  if (!(tol > 0.0)) throw std::invalid_argument("smallest_eigs: tol must be positive");
  if (op.size <= max_dim_dense) {
    auto ev = dense_eigenvalues(op);
    ev.resize(k);
    return ev;
  }

  const int n = op.size;
  const double norm_a = std::max(op.gershgorin_max(), 1e-300);
  // clustered low eigenvalues converge slowly; at m = n the recursion is exact
  const int m_cap = std::min(n, std::max(10 * k + 100, 250));

  SplitRng rng(seed);
  std::vector<std::vector<double>> basis;
  std::vector<double> alpha, beta;  // beta[j] couples v_j and v_{j+1}
  std::vector<double> v(n), w(n), prev(n, 0.0);
  for (auto& x : v) x = rng.next_gaussian();

  auto normalize = [&](std::vector<double>& x) {
    double s = 0.0;
    for (double t : x) s += t * t;
    s = std::sqrt(s);
    for (double& t : x) t /= s;
    return s;
  };
  auto reorth = [&](std::vector<double>& x) {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) {
        double d = 0.0;
        for (int i = 0; i < n; ++i) d += q[i] * x[i];
        for (int i = 0; i < n; ++i) x[i] -= d * q[i];
      }
  };
  normalize(v);

  double last_beta = 0.0;  // coupling of the current T_m to the next vector
  auto ritz_converged = [&](std::vector<double>& out) {
    int m = static_cast<int>(alpha.size());
    if (m < k) return false;
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) t(i, i) = alpha[i];
    for (int i = 0; i + 1 < m; ++i) t(i, i + 1) = t(i + 1, i) = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    // residual of the Ritz pair = |beta_m * last component of s|
    for (int j = 0; j < k; ++j)
      if (last_beta * std::abs(es.eigenvectors()(m - 1, j)) > tol * norm_a) return false;
    out.assign(es.eigenvalues().data(), es.eigenvalues().data() + k);
    return true;
  };

  std::vector<double> result;
  for (int j = 0; j < m_cap; ++j) {
    basis.push_back(v);
    op.apply(v, w);
    double a = 0.0;
    for (int i = 0; i < n; ++i) a += v[i] * w[i];
    alpha.push_back(a);
    for (int i = 0; i < n; ++i) w[i] -= a * v[i] + (j > 0 ? beta[j - 1] * prev[i] : 0.0);
    reorth(w);
    double b = normalize(w);
    last_beta = b;
    if (b < 1e-12 * norm_a) {
      // invariant subspace found; continue with a fresh direction
      for (auto& x : w) x = rng.next_gaussian();
      reorth(w);
      normalize(w);
      b = 0.0;
      last_beta = 0.0;
    }
    if (j + 1 < m_cap) beta.push_back(b);
    prev = v;
    v = w;
    if ((j + 1) % 10 == 0 || j + 1 == m_cap) {
      if (ritz_converged(result)) return result;
    }
  }
  std::ostringstream msg;
  msg << "smallest_eigs: Lanczos did not converge (size=" << n << ", k=" << k << ", steps=" << m_cap
      << ", tol=" << tol << ")";
  throw ConvergenceFailure(msg.str());
}

// First Dirichlet eigenvalue of the discrete neck (ports submatrix).
inline double neck_lambda1(const BlockGraphOp& op) {
  auto [d, a] = neck_submatrix(op);
  Eigen::Map<Eigen::MatrixXd> m(a.data(), d, d);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace specgap
