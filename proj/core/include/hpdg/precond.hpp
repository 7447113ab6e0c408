#pragma once

#include <Eigen/Cholesky>
#include <memory>

#include "hpdg/assembly.hpp"

namespace hpdg {

// Additive preconditioner for the DG operator:
//
//   B r = D_B^{-1} r|_vb  +  E ( R0^t A0^{-1} R0 + sum_i R_i^t A_i^{-1} R_i ) E^t r
//
// pointwise Jacobi on the element-boundary dofs (zero on element-interior
// dofs) plus a two-level overlapping additive Schwarz solver on the conforming
// subspace: an exact coarse solve in the piecewise-bilinear vertex space and
// exact solves on the (2p-1)^2 conforming blocks of the 2x2-element vertex
// patches. All Schwarz pieces act on conforming coefficients; E is the 0/1
// conforming scatter.
//
// The conforming matrix A_C = E^t A E sees no jump terms, so its patch blocks
// are translation invariant on a uniform mesh; the build detects this and
// shares one Cholesky factor across identical patches.
class DGPreconditioner {
 public:
  enum class Mode { Full, JacobiOnly, SchwarzOnly };

  DGPreconditioner(const DofMap& dofmap, const AssembledSystem& system, Mode mode = Mode::Full);

  Mode mode() const { return mode_; }
  int dim() const { return static_cast<int>(inv_diag_.size()); }

  Vec apply(const Vec& r) const;
  void apply(const Vec& r, Vec& out) const;

  // --- conforming-space pieces (diagnostics, constants estimation) --------
  const SparseOperator& conforming_matrix() const { return a_conforming_; }
  // Full Schwarz sum B_C rc on conforming coefficients.
  Vec apply_schwarz(const Vec& rc) const;
  // Individual legs of the sum.
  Vec coarse_component(const Vec& rc) const;
  Vec patch_component(int patch, const Vec& rc) const;
  int num_patches() const { return static_cast<int>(patch_dofs_.size()); }
  const std::vector<int>& patch_dofs(int patch) const { return patch_dofs_[patch]; }
  int coarse_dim() const { return static_cast<int>(coarse_llt_.rows()); }

  // Jacobi leg: 1/diag(A) on element-boundary dofs, 0 elsewhere.
  const Vec& jacobi_inverse_diagonal() const { return inv_diag_; }

 private:
  const DofMap* dofmap_;
  Mode mode_;
  Vec inv_diag_;
  SparseOperator a_conforming_;
  SparseOperator coarse_embed_;  // conforming x coarse prolongation
  Eigen::LLT<Eigen::MatrixXd> coarse_llt_;
  std::vector<std::vector<int>> patch_dofs_;
  Eigen::LLT<Eigen::MatrixXd> shared_patch_llt_;     // used when blocks coincide
  std::vector<std::unique_ptr<Eigen::LLT<Eigen::MatrixXd>>> patch_llt_;  // fallback
};

}  // namespace hpdg
