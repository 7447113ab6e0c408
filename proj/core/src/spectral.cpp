#include "hpdg/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace hpdg {

namespace {

using SpCol = Eigen::SparseMatrix<double>;

Vec random_unit(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = dist(rng);
  const double nrm = v.norm();
  if (nrm > 0.0) v /= nrm;
  return v;
}

struct RitzEnds {
  double theta_min = 0.0;
  double theta_max = 0.0;
  double weight_min = 0.0;  // |last component| of the two extreme eigenvectors
  double weight_max = 0.0;
};

RitzEnds tridiag_ends(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub, int m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag.head(m), sub.head(std::max(0, m - 1)),
                            Eigen::ComputeEigenvectors);
  RitzEnds ends;
  ends.theta_min = es.eigenvalues()(0);
  ends.theta_max = es.eigenvalues()(m - 1);
  ends.weight_min = std::abs(es.eigenvectors()(m - 1, 0));
  ends.weight_max = std::abs(es.eigenvectors()(m - 1, m - 1));
  return ends;
}

// Relative eigenresidual bound of both tridiagonal ends; beta_m is the
// next off-diagonal coupling.
double ends_residual(const RitzEnds& ends, double beta_m) {
  const double floor_min = std::max(std::abs(ends.theta_min), 1e-300);
  const double floor_max = std::max(std::abs(ends.theta_max), 1e-300);
  return std::max(beta_m * ends.weight_min / floor_min, beta_m * ends.weight_max / floor_max);
}

int grow_columns(Eigen::MatrixXd& m, int needed, int cap) {
  int cols = static_cast<int>(m.cols());
  while (cols < needed) cols = std::min(cap, 2 * cols);
  if (cols != m.cols()) m.conservativeResize(Eigen::NoChange, cols);
  return cols;
}

}  // namespace

LinearOperator LinearOperator::identity(int n) {
  return {n, [](const Vec& x, Vec& y) { y = x; }};
}

LinearOperator LinearOperator::from(const SparseOperator& m) {
  const SparseOperator* ptr = &m;
  return {m.rows(), [ptr](const Vec& x, Vec& y) { ptr->apply(x, y); }};
}

LinearOperator LinearOperator::from(const DGPreconditioner& prec) {
  const DGPreconditioner* ptr = &prec;
  return {prec.dim(), [ptr](const Vec& x, Vec& y) { ptr->apply(x, y); }};
}

PCGSolution pcg(const LinearOperator& A, const LinearOperator* B, const Vec& b, double rel_tol,
                int max_iter, bool record_directions) {
  if (static_cast<int>(b.size()) != A.dim)
    throw std::invalid_argument("pcg: right-hand side size does not match the operator");
  PCGSolution sol;
  SolveReport& rep = sol.report;
  sol.x = Vec::Zero(A.dim);
  Vec r = b;
  const double r0 = r.norm();
  rep.residual_history.push_back(r0 > 0.0 ? 1.0 : 0.0);
  if (r0 == 0.0) {
    rep.converged = true;
    return sol;
  }

  Vec z = B ? B->apply(r) : r;
  double rz = r.dot(z);
  if (!(rz > 0.0)) throw std::runtime_error("pcg: preconditioner not positive definite at iteration 0");
  Vec p = z;
  Vec Ap(A.dim);
  for (int k = 0; k < max_iter; ++k) {
    if (record_directions) sol.directions.push_back(p);
    A.apply(p, Ap);
    const double pAp = p.dot(Ap);
    if (!(pAp > 0.0))
      throw std::runtime_error("pcg: nonpositive curvature at iteration " + std::to_string(k) +
                               "; operator is not positive definite");
    const double a = rz / pAp;
    sol.x += a * p;
    r -= a * Ap;
    rep.alpha.push_back(a);
    rep.iterations = k + 1;
    const double rel = r.norm() / r0;
    rep.residual_history.push_back(rel);
    if (rel <= rel_tol) {
      rep.converged = true;
      break;
    }
    z = B ? B->apply(r) : r;
    const double rz_next = r.dot(z);
    if (!(rz_next > 0.0))
      throw std::runtime_error("pcg: preconditioner not positive definite at iteration " +
                               std::to_string(k + 1));
    const double grow = rz_next / rz;
    rep.beta.push_back(grow);
    p = z + grow * p;
    rz = rz_next;
  }

  const std::vector<double> rv = ritz_values(rep);
  if (!rv.empty()) {
    rep.eig_min = rv.front();
    rep.eig_max = rv.back();
    rep.condition_number = rep.eig_max / rep.eig_min;
  }
  return sol;
}

std::vector<double> ritz_values(const SolveReport& report) {
  const int m = static_cast<int>(report.alpha.size());
  if (m == 0) return {};
  Eigen::VectorXd diag(m), sub(std::max(0, m - 1));
  for (int k = 0; k < m; ++k) {
    diag[k] = 1.0 / report.alpha[k];
    if (k > 0) diag[k] += report.beta[k - 1] / report.alpha[k - 1];
    if (k + 1 < m) sub[k] = std::sqrt(report.beta[k]) / report.alpha[k];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().data(), es.eigenvalues().data() + m};
}

EigsReport lanczos_extremes(const LinearOperator& A, int max_steps, unsigned long seed,
                            double tol) {
  EigsReport rep;
  const int n = A.dim;
  if (n == 0) {
    rep.converged = true;
    return rep;
  }
  std::mt19937_64 rng(seed);
  const int cap = std::min(max_steps, n);
  Eigen::MatrixXd Q(n, std::min(cap + 1, 32));
  Eigen::VectorXd alpha(cap), beta(cap);
  Q.col(0) = random_unit(n, rng);
  Vec qj(n), w(n);
  int m = 0;
  for (int j = 0; j < cap; ++j) {
    grow_columns(Q, j + 2, cap + 1);
    qj = Q.col(j);
    A.apply(qj, w);
    alpha[j] = w.dot(qj);
    w -= alpha[j] * qj;
    if (j > 0) w -= beta[j - 1] * Q.col(j - 1);
    for (int pass = 0; pass < 2; ++pass) {
      auto basis = Q.leftCols(j + 1);
      w.noalias() -= basis * (basis.transpose() * w);
    }
    beta[j] = w.norm();
    m = j + 1;
    const RitzEnds ends = tridiag_ends(alpha, beta, m);
    rep.lambda_min = ends.theta_min;
    rep.lambda_max = ends.theta_max;
    rep.residual = ends_residual(ends, beta[j]);
    rep.iterations = m;
    const double scale = std::max(std::abs(ends.theta_min), std::abs(ends.theta_max));
    if (rep.residual <= tol || beta[j] <= 1e-14 * std::max(scale, 1e-300)) {
      rep.converged = true;
      break;
    }
    if (j + 1 < cap) Q.col(j + 1) = w / beta[j];
  }
  if (m == n) rep.converged = true;  // exhausted the space: tridiagonal is exact
  return rep;
}

EigsReport preconditioned_extremes(const LinearOperator& A, const LinearOperator& B, int max_steps,
                                   unsigned long seed, double tol) {
  if (A.dim != B.dim)
    throw std::invalid_argument("preconditioned_extremes: operator dimensions differ");
  EigsReport rep;
  const int n = A.dim;
  if (n == 0) {
    rep.converged = true;
    return rep;
  }
  std::mt19937_64 rng(seed);
  const int cap = std::min(max_steps, n);
  const int init_cols = std::min(cap + 1, 32);
  Eigen::MatrixXd Q(n, init_cols);  // A-orthonormal Lanczos basis
  Eigen::MatrixXd Z(n, init_cols);  // Z.col(j) = A * Q.col(j)
  Eigen::VectorXd alpha(cap), beta(cap);

  Vec q = random_unit(n, rng);
  Vec z = A.apply(q);
  const double a_sq = q.dot(z);
  if (!(a_sq > 0.0))
    throw std::runtime_error("preconditioned_extremes: operator is not positive definite");
  Q.col(0) = q / std::sqrt(a_sq);
  Z.col(0) = z / std::sqrt(a_sq);

  Vec w(n), zw(n), zj(n);
  int m = 0;
  for (int j = 0; j < cap; ++j) {
    grow_columns(Q, j + 2, cap + 1);
    grow_columns(Z, j + 2, cap + 1);
    zj = Z.col(j);
    B.apply(zj, w);  // w = B A q_j
    alpha[j] = w.dot(zj);
    w -= alpha[j] * Q.col(j);
    if (j > 0) w -= beta[j - 1] * Q.col(j - 1);
    for (int pass = 0; pass < 2; ++pass) {
      auto basis = Q.leftCols(j + 1);
      auto abasis = Z.leftCols(j + 1);
      w.noalias() -= basis * (abasis.transpose() * w);
    }
    A.apply(w, zw);
    const double b_sq = std::max(w.dot(zw), 0.0);
    beta[j] = std::sqrt(b_sq);
    m = j + 1;
    const RitzEnds ends = tridiag_ends(alpha, beta, m);
    rep.lambda_min = ends.theta_min;
    rep.lambda_max = ends.theta_max;
    rep.residual = ends_residual(ends, beta[j]);
    rep.iterations = m;
    const double scale = std::max(std::abs(ends.theta_min), std::abs(ends.theta_max));
    if (rep.residual <= tol || beta[j] <= 1e-14 * std::max(scale, 1e-300)) {
      rep.converged = true;
      break;
    }
    if (j + 1 < cap) {
      Q.col(j + 1) = w / beta[j];
      Z.col(j + 1) = zw / beta[j];
    }
  }
  if (m == n) rep.converged = true;
  return rep;
}

EigsReport smallest_eigenvalue(const LinearOperator& A, const LinearOperator* inner_prec,
                               unsigned long seed, double tol, double inner_tol, int max_outer) {
  EigsReport rep;
  const int n = A.dim;
  if (n == 0) {
    rep.converged = true;
    return rep;
  }
  std::mt19937_64 rng(seed);
  Vec v = random_unit(n, rng);
  Vec av(n);
  double theta = 0.0;
  for (int outer = 0; outer < max_outer; ++outer) {
    const PCGSolution inner = pcg(A, inner_prec, v, inner_tol, 20000);
    const double ny = inner.x.norm();
    if (!(ny > 0.0)) throw std::runtime_error("smallest_eigenvalue: inverse iterate vanished");
    v = inner.x / ny;
    A.apply(v, av);
    theta = v.dot(av);
    rep.iterations = outer + 1;
    const double res = (av - theta * v).norm();
    rep.residual = res / std::max(std::abs(theta), 1e-300);
    if (res <= tol * std::abs(theta)) {
      rep.converged = true;
      break;
    }
  }
  rep.lambda_min = theta;
  rep.lambda_max = theta;
  return rep;
}

EigsReport extreme_eigs(const LinearOperator& A, const LinearOperator* inner_prec, double tol,
                        unsigned long seed) {
  const EigsReport top = lanczos_extremes(A, std::min(A.dim, 300), seed, tol);
  const EigsReport bottom = smallest_eigenvalue(A, inner_prec, seed + 1, tol);
  EigsReport rep;
  rep.lambda_min = bottom.lambda_min;
  rep.lambda_max = top.lambda_max;
  rep.converged = top.converged && bottom.converged;
  rep.residual = std::max(top.residual, bottom.residual);
  rep.iterations = top.iterations + bottom.iterations;
  return rep;
}

EigsReport extreme_eigs(const LinearOperator& A, const LinearOperator& B, double tol,
                        unsigned long seed) {
  return preconditioned_extremes(A, B, std::min(A.dim, 220), seed, tol);
}

EigsReport condition_unpreconditioned(const AssembledSystem& system, const DGPreconditioner& prec,
                                      unsigned long seed, double tol) {
  const LinearOperator a_op = LinearOperator::from(system.A);
  const LinearOperator b_op = LinearOperator::from(prec);
  return extreme_eigs(a_op, &b_op, tol, seed);
}

EigsReport condition_preconditioned(const AssembledSystem& system, const DGPreconditioner& prec,
                                    unsigned long seed, double tol) {
  const LinearOperator a_op = LinearOperator::from(system.A);
  const LinearOperator b_op = LinearOperator::from(prec);
  return preconditioned_extremes(a_op, b_op, std::min(a_op.dim, 220), seed, tol);
}

namespace {

// Smallest eigenvalue by block inverse iteration with Rayleigh-Ritz. A block
// subspace keeps the iteration converging when the bottom of the spectrum is
// a cluster (the rate is lambda_min / lambda_{block+1}, past the cluster),
// where single-vector inverse power would stall mixing the cluster.
EigsReport block_smallest(const LinearOperator& M, int block, unsigned long seed, double tol,
                          double inner_tol, int max_outer) {
  EigsReport rep;
  const int n = M.dim;
  const int b = std::min(block, n);
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd X(n, b);
  for (int j = 0; j < b; ++j) X.col(j) = random_unit(n, rng);
  Eigen::MatrixXd Y(n, b), MQ(n, b);
  for (int outer = 0; outer < max_outer; ++outer) {
    for (int j = 0; j < b; ++j) Y.col(j) = pcg(M, nullptr, X.col(j), inner_tol, 20000).x;
    const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(Y).householderQ() *
                              Eigen::MatrixXd::Identity(n, b);
    for (int j = 0; j < b; ++j) MQ.col(j) = M.apply(Q.col(j));
    const Eigen::MatrixXd H = 0.5 * (Q.transpose() * MQ + MQ.transpose() * Q);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    X = Q * es.eigenvectors();
    const double theta = es.eigenvalues()(0);
    const Vec mx = MQ * es.eigenvectors().col(0);
    const double res = (mx - theta * X.col(0)).norm();
    rep.lambda_min = rep.lambda_max = theta;
    rep.residual = res / std::max(std::abs(theta), 1e-300);
    rep.iterations = outer + 1;
    if (res <= tol * std::abs(theta)) {
      rep.converged = true;
      break;
    }
  }
  return rep;
}

}  // namespace

SingularReport singular_condition(const LinearOperator& A, const LinearOperator& B,
                                  unsigned long seed, double tol) {
  SingularReport rep;
  const int n = A.dim;
  if (n == 0) {
    rep.converged = true;
    return rep;
  }
  // Normal operator M = A B B A; its eigenvalues are the squared singular
  // values of B A, so eigenvalue tolerance tol certifies sigma to ~tol/2.
  const LinearOperator M{n, [&A, &B](const Vec& x, Vec& y) {
                           Vec t = A.apply(x);
                           Vec u = B.apply(t);
                           B.apply(u, t);
                           A.apply(t, y);
                         }};
  const EigsReport top = lanczos_extremes(M, std::min(n, 300), seed, tol);
  const EigsReport bottom = block_smallest(M, 6, seed + 1, tol, 1e-10, 60);
  rep.sigma_max = std::sqrt(std::max(top.lambda_max, 0.0));
  rep.sigma_min = std::sqrt(std::max(bottom.lambda_min, 0.0));
  rep.converged = top.converged && bottom.converged;
  rep.residual = std::max(top.residual, bottom.residual);
  rep.iterations = top.iterations + bottom.iterations;
  return rep;
}

SingularReport condition2_preconditioned(const AssembledSystem& system,
                                         const DGPreconditioner& prec, unsigned long seed,
                                         double tol) {
  const LinearOperator a_op = LinearOperator::from(system.A);
  const LinearOperator b_op = LinearOperator::from(prec);
  return singular_condition(a_op, b_op, seed, tol);
}

ConstantsReport estimate_constants(const DofMap& dofmap, const AssembledSystem& system,
                                   const DGPreconditioner& prec, unsigned long seed, double tol) {
  ConstantsReport rep;
  rep.tolerance = tol;
  const auto& A = system.A.matrix();

  // Jacobi pencil on V_B: extremes of D^-1/2 A_B D^-1/2 over the
  // element-boundary coordinate subspace.
  const auto& vb = dofmap.vb_dofs();
  const int nb = static_cast<int>(vb.size());
  const Vec diag = A.diagonal();
  Vec scale(nb);
  for (int i = 0; i < nb; ++i) {
    const double d = diag[vb[i]];
    if (!(d > 0.0))
      throw std::runtime_error("estimate_constants: non-positive operator diagonal; "
                               "operator is not positive definite");
    scale[i] = 1.0 / std::sqrt(d);
  }
  Vec full = Vec::Zero(A.rows());
  LinearOperator c_op{nb, [&](const Vec& x, Vec& y) {
                        for (int i = 0; i < nb; ++i) full[vb[i]] = scale[i] * x[i];
                        const Vec af = A * full;
                        y.resize(nb);
                        for (int i = 0; i < nb; ++i) y[i] = scale[i] * af[vb[i]];
                      }};
  const EigsReport jacobi = lanczos_extremes(c_op, std::min(nb, 400), seed, tol);
  rep.c1_jacobi = 1.0 / jacobi.lambda_max;
  rep.c2_jacobi_full_VB = 1.0 / jacobi.lambda_min;

  // The same pencil restricted to the kernel of the nodal averaging: with
  // K = Z^t A Z and the block-diagonal metric G = Z^t D Z = L L^t, the
  // restricted ratios are the spectrum of L^-1 K L^-t.
  const SpCol z_cols = dofmap.kernel_basis().matrix();
  const SpCol a_col = A;
  const SpCol k_mat = SpCol(z_cols.transpose() * a_col * z_cols);
  const SpCol g_mat = SpCol(z_cols.transpose() * SpCol(diag.asDiagonal() * z_cols));
  Eigen::SimplicialLLT<SpCol, Eigen::Lower, Eigen::NaturalOrdering<int>> g_llt(g_mat);
  if (g_llt.info() != Eigen::Success)
    throw std::runtime_error("estimate_constants: kernel metric factorization failed");
  const int nz = static_cast<int>(z_cols.cols());
  LinearOperator s_op{nz, [&](const Vec& x, Vec& y) {
                        const Vec u = g_llt.matrixU().solve(x);
                        const Vec ku = k_mat * u;
                        y = g_llt.matrixL().solve(ku);
                      }};
  const EigsReport ker = lanczos_extremes(s_op, std::min(nz, 400), seed + 1, tol);
  rep.c2_jacobi_kerQ = 1.0 / ker.lambda_min;

  // Two-level Schwarz constants on the conforming subspace.
  const LinearOperator ac_op = LinearOperator::from(prec.conforming_matrix());
  LinearOperator bc_op{ac_op.dim, [&prec](const Vec& x, Vec& y) { y = prec.apply_schwarz(x); }};
  const EigsReport schwarz =
      preconditioned_extremes(ac_op, bc_op, std::min(ac_op.dim, 220), seed + 2, tol);
  rep.c1_schwarz = 1.0 / schwarz.lambda_max;
  rep.c2_schwarz = 1.0 / schwarz.lambda_min;
  return rep;
}

}  // namespace hpdg
