#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "ifp/extended_matrix.hpp"
#include "ifp/shock_model.hpp"

namespace ifp::test {

inline ExtendedMatrix matrix(std::initializer_list<std::initializer_list<double>> rows) {
  ExtendedMatrix m(rows.size());
  std::size_t i = 0;
  for (const auto& r : rows) {
    std::size_t j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline ShockModel single_state(std::vector<ShockAtom> atoms) {
  return ShockModel(matrix({{1.0}}), {std::move(atoms)});
}

/// Every pair of a model with transition P carries the same atom list.
inline ShockModel uniform_atoms(const ExtendedMatrix& P, const std::vector<ShockAtom>& atoms) {
  const std::size_t n = P.dim();
  ShockModel::AtomTable t(n * n);
  for (std::size_t k = 0; k < n * n; ++k)
    if (P(k / n, k % n) > 0.0) t[k] = atoms;
  return ShockModel(P, std::move(t));
}

inline Eigen::MatrixXd to_eigen(const ExtendedMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.dim());
  Eigen::MatrixXd e(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      e(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  return e;
}

/// Largest eigenvalue modulus from a full eigendecomposition.
inline double eigen_radius(const ExtendedMatrix& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(to_eigen(m), false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// (I - K)^{-1} 1 by LU.
inline std::vector<double> neumann_solve(const ExtendedMatrix& k, double scale = 1.0, double rhs = 1.0) {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(k.dim()),
                                                      static_cast<Eigen::Index>(k.dim())) -
                            scale * to_eigen(k);
  const Eigen::VectorXd b = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(k.dim()), rhs);
  const Eigen::VectorXd x = a.partialPivLu().solve(b);
  return {x.data(), x.data() + x.size()};
}

/// Gauss-Hermite nodes and weights from the Jacobi matrix eigenproblem.
inline std::pair<std::vector<double>, std::vector<double>> golub_welsch(int n) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) j(k, k - 1) = j(k - 1, k) = std::sqrt(k / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  std::vector<double> x(n), w(n);
  for (int k = 0; k < n; ++k) {
    x[k] = es.eigenvalues()(k);
    const double v = es.eigenvectors()(0, k);
    w[k] = std::sqrt(M_PI) * v * v;
  }
  return {x, w};
}

template <class F>
double bisect(F f, double lo, double hi, double tol = 1e-14) {
  double flo = f(lo);
  for (int i = 0; i < 400 && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline ExtendedMatrix random_stochastic(std::mt19937_64& rng, std::size_t n, double sparsity = 0.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ExtendedMatrix p(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      p(i, j) = (u(rng) < sparsity && j != i) ? 0.0 : u(rng) + 0.01;
      s += p(i, j);
    }
    for (std::size_t j = 0; j < n; ++j) p(i, j) /= s;
  }
  return p;
}

/// Random model with 1..3 atoms per pair; beta in [beta_lo, beta_hi],
/// R in [r_lo, r_hi], Y in [0.5, 2].
inline ShockModel random_model(std::mt19937_64& rng, std::size_t n, double beta_lo, double beta_hi,
                               double r_lo, double r_hi) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> count(1, 3);
  const ExtendedMatrix P = random_stochastic(rng, n, 0.3);
  ShockModel::AtomTable t(n * n);
  for (std::size_t k = 0; k < n * n; ++k) {
    if (P(k / n, k % n) == 0.0) continue;
    const int c = count(rng);
    double mass = 0.0;
    for (int a = 0; a < c; ++a) {
      ShockAtom atom{u(rng) + 0.1, beta_lo + (beta_hi - beta_lo) * u(rng), r_lo + (r_hi - r_lo) * u(rng),
                     0.5 + 1.5 * u(rng)};
      mass += atom.probability;
      t[k].push_back(atom);
    }
    for (auto& a : t[k]) a.probability /= mass;
  }
  return ShockModel(P, std::move(t));
}

}  // namespace ifp::test
