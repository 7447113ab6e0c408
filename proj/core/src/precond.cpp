#include "hpdg/precond.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace hpdg {

namespace {

using SpCol = Eigen::SparseMatrix<double>;

// Dense block of a row-major sparse matrix on an index set. `scratch` is a
// global-to-local map, -1 outside the set, restored before returning.
Eigen::MatrixXd extract_block(const SparseOperator::Storage& m, const std::vector<int>& idx,
                              std::vector<int>& scratch) {
  const int k = static_cast<int>(idx.size());
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(k, k);
  for (int j = 0; j < k; ++j) scratch[idx[j]] = j;
  for (int i = 0; i < k; ++i) {
    for (SparseOperator::Storage::InnerIterator it(m, idx[i]); it; ++it) {
      const int lj = scratch[it.col()];
      if (lj >= 0) block(i, lj) = it.value();
    }
  }
  for (int j = 0; j < k; ++j) scratch[idx[j]] = -1;
  return block;
}

Eigen::LLT<Eigen::MatrixXd> factor_spd(const Eigen::MatrixXd& m, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (m.rows() > 0 && llt.info() != Eigen::Success)
    throw std::runtime_error(std::string("DGPreconditioner: ") + what +
                             " factorization failed; block is not positive definite");
  return llt;
}

}  // namespace

DGPreconditioner::DGPreconditioner(const DofMap& dofmap, const AssembledSystem& system, Mode mode)
    : dofmap_(&dofmap), mode_(mode) {
  const auto& A = system.A.matrix();
  if (A.rows() != dofmap.total_dofs())
    throw std::invalid_argument("DGPreconditioner: operator size does not match the dof map");

  // Jacobi leg: 1/diag(A) on element-boundary dofs. A loss of positivity on
  // the diagonal (under-penalized SIPG) is detected here.
  const Vec diag = A.diagonal();
  inv_diag_ = Vec::Zero(diag.size());
  for (int dof : dofmap.vb_dofs()) {
    if (!(diag[dof] > 0.0))
      throw std::runtime_error("DGPreconditioner: non-positive operator diagonal at dof " +
                               std::to_string(dof) + "; operator is not positive definite");
    inv_diag_[dof] = 1.0 / diag[dof];
  }

  // Conforming matrix A_C = E^t A E. Jumps of conforming functions vanish, so
  // only the broken-gradient part survives; symmetrize away product roundoff.
  const SpCol e_col = dofmap.conforming_embedding().matrix();
  const SpCol a_col = A;
  SpCol ac = e_col.transpose() * a_col * e_col;
  ac = 0.5 * (ac + SpCol(ac.transpose()));
  a_conforming_ = SparseOperator(SparseOperator::Storage(ac), /*symmetric=*/true);

  // Coarse solve in the bilinear vertex space.
  coarse_embed_ = dofmap.coarse_embedding();
  const SpCol r0t = coarse_embed_.matrix();
  if (r0t.cols() > 0) {
    const Eigen::MatrixXd a0 = Eigen::MatrixXd(SpCol(r0t.transpose() * ac * r0t));
    coarse_llt_ = factor_spd(a0, "coarse-space");
  }

  // Vertex-patch solves. On a uniform mesh the conforming patch blocks are
  // translations of each other; verify and share one factorization, falling
  // back to per-patch factors if the blocks ever differ.
  const auto vertices = dofmap.mesh().interior_vertices();
  patch_dofs_.reserve(vertices.size());
  for (int v : vertices) patch_dofs_.push_back(dofmap.patch_conforming_dofs(v));

  if (!patch_dofs_.empty()) {
    std::vector<int> scratch(a_conforming_.rows(), -1);
    const auto& ac_rm = a_conforming_.matrix();
    const Eigen::MatrixXd first = extract_block(ac_rm, patch_dofs_[0], scratch);
    const double scale = std::max(1.0, first.cwiseAbs().maxCoeff());
    bool shared = true;
    for (std::size_t i = 1; i < patch_dofs_.size() && shared; ++i) {
      const Eigen::MatrixXd block = extract_block(ac_rm, patch_dofs_[i], scratch);
      shared = (block - first).cwiseAbs().maxCoeff() <= 1e-12 * scale;
    }
    if (shared) {
      shared_patch_llt_ = factor_spd(first, "vertex-patch");
    } else {
      patch_llt_.reserve(patch_dofs_.size());
      for (const auto& idx : patch_dofs_) {
        patch_llt_.push_back(std::make_unique<Eigen::LLT<Eigen::MatrixXd>>(
            factor_spd(extract_block(ac_rm, idx, scratch), "vertex-patch")));
      }
    }
  }
}

Vec DGPreconditioner::apply(const Vec& r) const {
  Vec out;
  apply(r, out);
  return out;
}

void DGPreconditioner::apply(const Vec& r, Vec& out) const {
  if (r.size() != inv_diag_.size())
    throw std::invalid_argument("DGPreconditioner::apply: size mismatch");
  if (mode_ == Mode::SchwarzOnly)
    out = Vec::Zero(r.size());
  else
    out = inv_diag_.cwiseProduct(r);
  if (mode_ == Mode::JacobiOnly) return;

  const auto& e = dofmap_->conforming_embedding().matrix();
  const Vec rc = e.transpose() * r;
  out.noalias() += e * apply_schwarz(rc);
}

Vec DGPreconditioner::apply_schwarz(const Vec& rc) const {
  if (rc.size() != a_conforming_.rows())
    throw std::invalid_argument("DGPreconditioner::apply_schwarz: size mismatch");
  Vec out = Vec::Zero(rc.size());
  if (coarse_dim() > 0) {
    const auto& r0t = coarse_embed_.matrix();
    out.noalias() += r0t * coarse_llt_.solve(Vec(r0t.transpose() * rc));
  }
  const int np = num_patches();
  Vec local;
  for (int i = 0; i < np; ++i) {
    const auto& idx = patch_dofs_[i];
    local.resize(static_cast<int>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) local[static_cast<int>(j)] = rc[idx[j]];
    const auto& llt = patch_llt_.empty() ? shared_patch_llt_ : *patch_llt_[i];
    local = llt.solve(local);
    for (std::size_t j = 0; j < idx.size(); ++j) out[idx[j]] += local[static_cast<int>(j)];
  }
  return out;
}

Vec DGPreconditioner::coarse_component(const Vec& rc) const {
  Vec out = Vec::Zero(rc.size());
  if (coarse_dim() > 0) {
    const auto& r0t = coarse_embed_.matrix();
    out.noalias() += r0t * coarse_llt_.solve(Vec(r0t.transpose() * rc));
  }
  return out;
}

Vec DGPreconditioner::patch_component(int patch, const Vec& rc) const {
  if (patch < 0 || patch >= num_patches())
    throw std::out_of_range("DGPreconditioner::patch_component: patch index");
  const auto& idx = patch_dofs_[patch];
  Vec local(static_cast<int>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) local[static_cast<int>(j)] = rc[idx[j]];
  const auto& llt = patch_llt_.empty() ? shared_patch_llt_ : *patch_llt_[patch];
  local = llt.solve(local);
  Vec out = Vec::Zero(rc.size());
  for (std::size_t j = 0; j < idx.size(); ++j) out[idx[j]] = local[static_cast<int>(j)];
  return out;
}

}  // namespace hpdg
