#pragma once

#include <vector>

namespace hpdg {

// One-dimensional quadrature rule on [-1, 1]; nodes ascending, weights positive.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  int size() const { return static_cast<int>(nodes.size()); }
};

// Legendre polynomial L_n and its first derivative at x (recurrence evaluation).
struct LegendrePair {
  double value;
  double derivative;
};
LegendrePair legendre(int n, double x);

// Gauss-Legendre-Lobatto rule with p+1 nodes for degree p >= 1. Endpoints are
// exactly +-1, the interior nodes are the roots of L_p', found by Newton
// iteration from Chebyshev-Lobatto guesses (absolute tolerance 1e-15, at most
// 100 steps). Weights are 2 / (p (p+1) L_p(x_i)^2). Exact for degree <= 2p-1.
QuadratureRule gll_rule(int p);

// Gauss-Legendre rule with q >= 1 nodes (roots of L_q). Exact for degree <= 2q-1.
QuadratureRule gauss_rule(int q);

// Lagrange basis on an arbitrary strictly increasing node set, evaluated with
// the second barycentric formula. On the node set itself evaluation returns the
// exact Kronecker values and the derivative uses the differentiation matrix.
class LagrangeBasis1D {
 public:
  explicit LagrangeBasis1D(std::vector<double> nodes);

  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }

  // values[i] = phi_i(x), derivatives[i] = phi_i'(x); either pointer may be null.
  void eval(double x, double* values, double* derivatives) const;

  // Tabulations at many points, row-major [pts.size()][size()].
  std::vector<double> values_at(const std::vector<double>& pts) const;
  std::vector<double> derivatives_at(const std::vector<double>& pts) const;

  // Differentiation matrix at the nodes, D[i*size()+j] = phi_j'(node_i).
  const std::vector<double>& node_derivative_matrix() const { return diff_; }

 private:
  std::vector<double> nodes_;
  std::vector<double> bary_;  // barycentric weights (common scale factored out)
  std::vector<double> diff_;
};

// Squared discrete norm sum_i v_i^2 w_i of nodal values under a 1D rule,
// scaled by the map Jacobian for a physical interval.
double gll_norm_squared(const std::vector<double>& values, const QuadratureRule& rule,
                        double jacobian = 1.0);

// Tensor-product version on the reference square (or a physical element when
// jacobian = (h/2)^2): values indexed [iy * rule.size() + ix].
double gll_norm_squared_2d(const std::vector<double>& values, const QuadratureRule& rule,
                           double jacobian = 1.0);

}  // namespace hpdg
