#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "quasyn/rng.hpp"

namespace quasyn::lanczos {

struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  double residual_tol_rel = 1e-10;  // relative to the Gershgorin bound on ||H||
  int max_iterations = 0;           // 0: choose from k and dimension
  std::uint64_t seed = 0x5eedULL;   // start vector; fixed for reproducibility
};

struct Result {
  Eigen::VectorXd values;    // ascending
  Eigen::MatrixXd vectors;   // orthonormal columns
  std::vector<double> residuals;
  double operator_norm;      // Gershgorin bound used for the tolerance
};

inline double gershgorin_norm(const Eigen::SparseMatrix<double>& h) {
  Eigen::VectorXd row_sum = Eigen::VectorXd::Zero(h.rows());
  for (int col = 0; col < h.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(h, col); it; ++it) {
      row_sum(it.row()) += std::abs(it.value());
    }
  }
  return row_sum.maxCoeff();
}

/// Lowest k eigenpairs of a sparse symmetric matrix by shift-invert Lanczos:
/// one sparse LDL^T factorization of (H - sigma I) with sigma below the
/// spectrum, full reorthogonalization, and explicit residual checks in the
/// original operator. Suited to modest k on matrices up to ~1e5 rows.
inline Result lowest_eigenpairs(const Eigen::SparseMatrix<double>& h, int k, double sigma,
                                const Options& opts = {}) {
  const Eigen::Index dim = h.rows();
  if (h.cols() != dim) throw std::invalid_argument("lanczos: matrix must be square");
  if (k < 1 || k > dim) throw std::invalid_argument("lanczos: bad eigenpair count");

  const double norm_bound = gershgorin_norm(h);
  const double resid_tol = opts.residual_tol_rel * norm_bound;

  Eigen::SparseMatrix<double> shifted = h;
  {
    Eigen::SparseMatrix<double> identity(dim, dim);
    identity.setIdentity();
    shifted -= sigma * identity;
  }
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(shifted);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("lanczos: factorization of the shifted operator failed");
  }

  const int max_iter = opts.max_iterations > 0
                           ? opts.max_iterations
                           : std::min<int>(static_cast<int>(dim), std::max(8 * k + 80, 160));

  rng::Xoshiro256StarStar gen(opts.seed);
  auto random_vector = [&]() {
    Eigen::VectorXd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = 2.0 * gen.uniform01() - 1.0;
    return v;
  };

  // Lanczos basis (columns) and tridiagonal coefficients.
  Eigen::MatrixXd basis(dim, max_iter + 1);
  std::vector<double> alpha, beta;  // beta[j] couples v_j and v_{j+1}
  auto reorthogonalize = [&](Eigen::VectorXd& w, int upto) {
    for (int pass = 0; pass < 2; ++pass) {
      Eigen::VectorXd proj = basis.leftCols(upto).transpose() * w;
      w.noalias() -= basis.leftCols(upto) * proj;
    }
  };

  {
    Eigen::VectorXd v0 = random_vector();
    basis.col(0) = v0 / v0.norm();
  }

  Result best;
  int m = 0;  // current basis size
  while (m < max_iter) {
    // Expand by one Lanczos step on (H - sigma)^{-1}.
    Eigen::VectorXd w = solver.solve(basis.col(m));
    const double a = basis.col(m).dot(w);
    w.noalias() -= a * basis.col(m);
    if (m > 0) w.noalias() -= beta[m - 1] * basis.col(m - 1);
    reorthogonalize(w, m + 1);
    double b = w.norm();
    alpha.push_back(a);
    if (b < 1e-13 * std::abs(a)) {
      // Invariant subspace found; continue with a fresh direction.
      Eigen::VectorXd fresh = random_vector();
      reorthogonalize(fresh, m + 1);
      const double fn = fresh.norm();
      if (fn < 1e-12) break;  // basis spans everything
      basis.col(m + 1) = fresh / fn;
      beta.push_back(0.0);
    } else {
      basis.col(m + 1) = w / b;
      beta.push_back(b);
    }
    ++m;

    const bool last_chance = m == max_iter;
    if (m < std::min<int>(2 * k + 10, static_cast<int>(dim)) && !last_chance) continue;
    if (m % 10 != 0 && !last_chance && m != static_cast<int>(dim)) continue;

    // Ritz extraction from the tridiagonal matrix.
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    // Largest theta of the inverted operator <-> smallest eigenvalues of H.
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int lhs, int rhs) { return es.eigenvalues()(lhs) > es.eigenvalues()(rhs); });

    const int take = std::min(k, m);
    Eigen::MatrixXd ritz(dim, take);
    Eigen::VectorXd vals(take);
    std::vector<double> resid(take);
    bool all_converged = take == k;
    for (int i = 0; i < take; ++i) {
      Eigen::VectorXd x = basis.leftCols(m) * es.eigenvectors().col(order[i]);
      x /= x.norm();
      const double lambda = x.dot(h.selfadjointView<Eigen::Lower>() * x);
      const double r = (h.selfadjointView<Eigen::Lower>() * x - lambda * x).norm();
      ritz.col(i) = x;
      vals(i) = lambda;
      resid[i] = r;
      if (r > resid_tol) all_converged = false;
    }
    if (all_converged || last_chance || m == static_cast<int>(dim)) {
      // Sort ascending by eigenvalue.
      std::vector<int> asc(take);
      std::iota(asc.begin(), asc.end(), 0);
      std::sort(asc.begin(), asc.end(), [&](int lhs, int rhs) { return vals(lhs) < vals(rhs); });
      best.values.resize(take);
      best.vectors.resize(dim, take);
      best.residuals.resize(take);
      for (int i = 0; i < take; ++i) {
        best.values(i) = vals(asc[i]);
        best.vectors.col(i) = ritz.col(asc[i]);
        best.residuals[i] = resid[asc[i]];
      }
      best.operator_norm = norm_bound;
      if (all_converged) return best;
      if (last_chance || m == static_cast<int>(dim)) {
        throw ConvergenceError("lanczos: residual tolerance not reached within the iteration cap");
      }
    }
  }
  throw ConvergenceError("lanczos: iteration stalled before convergence");
}

}  // namespace quasyn::lanczos
