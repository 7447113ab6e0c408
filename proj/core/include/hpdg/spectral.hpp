#pragma once

#include <functional>
#include <vector>

#include "hpdg/precond.hpp"

namespace hpdg {

// Matrix-free symmetric operator on R^dim.
struct LinearOperator {
  int dim = 0;
  std::function<void(const Vec&, Vec&)> apply_fn;

  void apply(const Vec& x, Vec& y) const { apply_fn(x, y); }
  Vec apply(const Vec& x) const {
    Vec y(dim);
    apply_fn(x, y);
    return y;
  }

  static LinearOperator identity(int n);
  static LinearOperator from(const SparseOperator& m);
  static LinearOperator from(const DGPreconditioner& prec);
};

// Conjugate-gradient run record. The CG coefficients define the Lanczos
// tridiagonal of the preconditioned operator, whose extreme Ritz values give
// the reported condition estimate.
struct SolveReport {
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;  // ||r_k|| / ||r_0||, k = 0..iterations
  double eig_min = 1.0;                  // extreme Ritz values of B*A
  double eig_max = 1.0;
  double condition_number = 1.0;
  std::vector<double> alpha;  // step lengths, one per iteration
  std::vector<double> beta;   // direction updates, one per iteration after the first
};

struct PCGSolution {
  Vec x;
  SolveReport report;
  std::vector<Vec> directions;  // search directions, only when recorded
};

// Preconditioned conjugate gradient with zero initial guess, stopping when
// ||r_k||_2 <= rel_tol * ||r_0||_2. B == nullptr runs plain CG. Nonpositive
// p^t A p or r^t B r (non-SPD input) throws std::runtime_error naming the
// iteration; an exhausted budget returns converged = false with partial data.
PCGSolution pcg(const LinearOperator& A, const LinearOperator* B, const Vec& b,
                double rel_tol = 1e-8, int max_iter = 10000, bool record_directions = false);

// Eigenvalues of the Lanczos tridiagonal assembled from the CG coefficients,
// ascending: Ritz estimates of the spectrum of B*A.
std::vector<double> ritz_values(const SolveReport& report);

// Extreme-eigenvalue estimate. `residual` is the largest certified
// eigenresidual bound relative to the eigenvalue magnitude; converged means
// both ends met the requested tolerance within the budget.
struct EigsReport {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  bool converged = false;
  double residual = 0.0;
  int iterations = 0;
  double condition() const { return lambda_max / lambda_min; }
};

// Both extreme eigenvalues of a symmetric operator: Lanczos with full
// reorthogonalization, certified by |beta_m s_m| <= tol |theta| per end.
EigsReport lanczos_extremes(const LinearOperator& A, int max_steps, unsigned long seed,
                            double tol = 1e-4);

// Extreme eigenvalues of B*A for symmetric A > 0, B: Lanczos in the A-inner
// product (one A- and one B-application per step, full reorthogonalization).
EigsReport preconditioned_extremes(const LinearOperator& A, const LinearOperator& B, int max_steps,
                                   unsigned long seed, double tol = 1e-4);

// Smallest eigenvalue of symmetric A > 0 by shift-free inverse iteration;
// inner solves run CG (preconditioned by *inner_prec when given) to inner_tol.
EigsReport smallest_eigenvalue(const LinearOperator& A, const LinearOperator* inner_prec,
                               unsigned long seed, double tol = 1e-4, double inner_tol = 1e-10,
                               int max_outer = 100);

// Single-operator form of extreme_eigs: lambda_max by Lanczos, lambda_min by
// inverse iteration (optionally accelerated by a preconditioner for the inner
// solves).
EigsReport extreme_eigs(const LinearOperator& A, const LinearOperator* inner_prec = nullptr,
                        double tol = 1e-4, unsigned long seed = 42);
// Operator-pair form: extremes of B*A in the A-inner product.
EigsReport extreme_eigs(const LinearOperator& A, const LinearOperator& B, double tol = 1e-4,
                        unsigned long seed = 42);

// K(A) of an assembled system: Lanczos for lambda_max, inverse iteration with
// preconditioned inner CG for lambda_min.
EigsReport condition_unpreconditioned(const AssembledSystem& system, const DGPreconditioner& prec,
                                      unsigned long seed = 42, double tol = 1e-4);
// Eigenvalue extremes of B_DG*A in the A-inner product. This is the ratio that
// governs PCG convergence and that the Ritz values from a PCG run estimate.
EigsReport condition_preconditioned(const AssembledSystem& system, const DGPreconditioner& prec,
                                    unsigned long seed = 42, double tol = 1e-4);

// Extreme singular values of B*A in the Euclidean metric. B*A is symmetric
// only in the A-inner product, so its 2-norm condition number sigma_max /
// sigma_min exceeds the eigenvalue ratio; it is what a dense cond(B*A)
// computes. Estimated through the eigenvalues of the symmetric normal
// operator (B A)^t (B A) = A B B A.
struct SingularReport {
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  bool converged = false;
  double residual = 0.0;  // worst certified relative eigenresidual on the normal operator
  int iterations = 0;
  double condition() const { return sigma_max / sigma_min; }
};
SingularReport singular_condition(const LinearOperator& A, const LinearOperator& B,
                                  unsigned long seed = 42, double tol = 1e-4);
// 2-norm condition number of the preconditioned matrix B_DG*A; the K(T_DG)
// figure reported by the experiment runner.
SingularReport condition2_preconditioned(const AssembledSystem& system,
                                         const DGPreconditioner& prec, unsigned long seed = 42,
                                         double tol = 1e-4);

// Subspace correction constants. With D_B = diag(A) on the element-boundary
// dofs and A_B the matching principal submatrix:
//   c1_jacobi         = min_{v in V_B} v^t D_B v / v^t A v,
//   c2_jacobi_full_VB = max_{v in V_B} v^t D_B v / v^t A v,
//   c2_jacobi_kerQ    = the same max restricted to the kernel of the nodal
//                       averaging (basis from DofMap::kernel_basis),
//   c1_schwarz = 1/lambda_max(B_C A_C), c2_schwarz = 1/lambda_min(B_C A_C)
// for the two-level Schwarz solver B_C on the conforming space.
struct ConstantsReport {
  double c1_jacobi = 0.0;
  double c2_jacobi_kerQ = 0.0;
  double c2_jacobi_full_VB = 0.0;
  double c1_schwarz = 0.0;
  double c2_schwarz = 0.0;
  double tolerance = 0.0;  // eigenvalue tolerance the estimates were run at
};
ConstantsReport estimate_constants(const DofMap& dofmap, const AssembledSystem& system,
                                   const DGPreconditioner& prec, unsigned long seed = 42,
                                   double tol = 1e-4);

}  // namespace hpdg
