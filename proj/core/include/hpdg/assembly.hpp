#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>

#include "hpdg/dof_map.hpp"

namespace hpdg {

enum class DGMethod { SIPG, LDG };

// Interior-penalty configuration. SIPG pins beta = 0 and drops the lifting
// Gram term; LDG keeps both. The penalty scaling must be positive (the
// analysis-backed range is alpha >= 1; smaller values can lose positivity,
// which the preconditioner setup detects and reports).
struct DGConfig {
  DGMethod method = DGMethod::SIPG;
  double alpha = 10.0;
  std::array<double, 2> beta{0.0, 0.0};

  static DGConfig sipg(double alpha);
  static DGConfig ldg(double alpha, std::array<double, 2> beta);

  double theta() const { return method == DGMethod::LDG ? 1.0 : 0.0; }
  const char* name() const { return method == DGMethod::SIPG ? "sipg" : "ldg"; }
  void validate() const;  // throws std::invalid_argument
};

// Interface penalty sigma = alpha p^2 / min(h+, h-); boundary faces use the
// single adjacent element size.
double penalty_sigma(const DGConfig& config, int p, double h_plus, double h_minus);
double penalty_sigma_boundary(const DGConfig& config, int p, double h);

// Exact 1D reference blocks for degree p, integrated with the q = p+1 Gauss
// rule (exact for the degree <= 2p+1 products that occur).
struct ReferenceBlocks1D {
  QuadratureRule gauss;
  Eigen::MatrixXd mass;         // (p+1)^2 entries, reference interval [-1, 1]
  Eigen::MatrixXd stiffness;
  Eigen::VectorXd dleft;        // phi_i'(-1)
  Eigen::VectorXd dright;       // phi_i'(+1)
  Eigen::MatrixXd values;       // gauss x (p+1) basis values
  Eigen::MatrixXd derivatives;  // gauss x (p+1) reference derivatives
};
ReferenceBlocks1D reference_blocks(int p);

// Dense lifting blocks of one face. For scalar nodal data g on the face, the
// block maps g to coefficients of an elementwise Q^p field w on the adjacent
// element:
//   r_block: integral_elem(w eta) = -avg_w * integral_F(g trace(eta)),
//            avg_w = 1/2 on interior faces, 1 on the boundary; applied
//            per vector component, with the face-normal sign folded into the
//            data for boundary faces.
//   l_block: integral_elem(w eta) = -jump_sign * integral_F(g trace(eta)),
//            the scalar jump lifting; interior faces only.
struct FaceLifting {
  struct Side {
    int element = -1;
    std::vector<int> trace_dofs;  // p+1 global dofs along the face, tangential order
    Eigen::MatrixXd r_block;      // (p+1)^2 x (p+1)
    Eigen::MatrixXd l_block;      // (p+1)^2 x (p+1); empty on boundary faces
  };
  int face = -1;
  std::vector<Side> sides;  // plus side first, minus side second when interior
};
FaceLifting local_lifting(const DofMap& dofmap, int face);

// Assembled bilinear form and diagnostics:
//   A      : full DG operator (symmetric),
//   A_grad : broken gradient form (volume terms only),
//   A_jump : unweighted interface jump form sum_F integral_F [u].[v].
// The full operator couples A_grad, the face consistency terms, the sigma
// penalty, and for LDG the lifting Gram term.
struct AssembledSystem {
  SparseOperator A;
  SparseOperator A_grad;
  SparseOperator A_jump;
  Vec rhs;
  DGConfig config;
  int p = 0;
  double h = 0.0;
  double sigma = 0.0;  // uniform interface penalty alpha p^2 / h

  // Jump-dominance scale h / (alpha p^2); < 1 in the regime of interest.
  double epsilon() const { return h / (config.alpha * p * p); }
};

// Assemble the operator and the load vector for the given right-hand side
// (f == nullptr means f == 1). Source terms are integrated with the same
// q = p+1 Gauss rule as the operator.
AssembledSystem assemble(const DofMap& dofmap, const DGConfig& config,
                         const std::function<double(double, double)>& f = nullptr);

// Gradient and penalty-jump parts of the DG energy: (|v|_grad^2, sigma |[v]|^2).
struct EnergyParts {
  double grad_sq = 0.0;
  double jump_sq = 0.0;
};
EnergyParts energy_norms(const AssembledSystem& system, const Vec& v);

}  // namespace hpdg
