#include "hpdg/gll.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hpdg {

namespace {

constexpr double kNewtonTol = 1e-15;
constexpr int kNewtonMaxSteps = 100;

// Make a symmetric rule exactly symmetric: pair up mirrored nodes and weights.
void symmetrize(QuadratureRule& r) {
  const int m = r.size();
  for (int k = 0; k < m / 2; ++k) {
    const double x = 0.5 * (r.nodes[k] - r.nodes[m - 1 - k]);
    r.nodes[k] = x;
    r.nodes[m - 1 - k] = -x;
    const double w = 0.5 * (r.weights[k] + r.weights[m - 1 - k]);
    r.weights[k] = w;
    r.weights[m - 1 - k] = w;
  }
  if (m % 2 == 1) r.nodes[m / 2] = 0.0;
}

}  // namespace

LegendrePair legendre(int n, double x) {
  if (n == 0) return {1.0, 0.0};
  double lm = 1.0;  // L_{k-1}
  double l = x;     // L_k
  for (int k = 1; k < n; ++k) {
    const double lp = ((2.0 * k + 1.0) * x * l - k * lm) / (k + 1.0);
    lm = l;
    l = lp;
  }
  // (1 - x^2) L_n' = n (L_{n-1} - x L_n); endpoints via L_n'(+-1) = n(n+1)/2 * (+-1)^{n+1}.
  const double one_minus_x2 = (1.0 - x) * (1.0 + x);
  double d;
  if (std::abs(one_minus_x2) < 1e-14) {
    const double sign = (x > 0.0 || n % 2 == 1) ? 1.0 : -1.0;
    d = sign * 0.5 * n * (n + 1.0);
  } else {
    d = n * (lm - x * l) / one_minus_x2;
  }
  return {l, d};
}

QuadratureRule gll_rule(int p) {
  if (p < 1) throw std::invalid_argument("gll_rule: degree must be >= 1, got " + std::to_string(p));
  const int m = p + 1;
  QuadratureRule r;
  r.nodes.assign(m, 0.0);
  r.weights.assign(m, 0.0);
  r.nodes.front() = -1.0;
  r.nodes.back() = 1.0;

  // Interior nodes: roots of L_p', Newton from Chebyshev-Lobatto guesses. The
  // Newton update uses L_p'' from the Legendre ODE:
  //   (1 - x^2) L_p'' = 2 x L_p' - p(p+1) L_p.
  for (int k = 1; k < p; ++k) {
    double x = -std::cos(M_PI * k / p);
    bool converged = false;
    for (int it = 0; it < kNewtonMaxSteps; ++it) {
      const auto [lp, dlp] = legendre(p, x);
      const double d2 = (2.0 * x * dlp - p * (p + 1.0) * lp) / ((1.0 - x) * (1.0 + x));
      const double dx = dlp / d2;
      x -= dx;
      if (std::abs(dx) <= kNewtonTol) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw std::runtime_error("gll_rule: Newton iteration stalled at p = " + std::to_string(p));
    r.nodes[k] = x;
  }
  std::sort(r.nodes.begin(), r.nodes.end());
  symmetrize(r);

  const double c = 2.0 / (p * (p + 1.0));
  for (int i = 0; i < m; ++i) {
    const double l = legendre(p, r.nodes[i]).value;
    r.weights[i] = c / (l * l);
  }
  symmetrize(r);
  return r;
}

QuadratureRule gauss_rule(int q) {
  if (q < 1) throw std::invalid_argument("gauss_rule: need at least one node, got " + std::to_string(q));
  QuadratureRule r;
  r.nodes.assign(q, 0.0);
  r.weights.assign(q, 0.0);
  for (int k = 0; k < q; ++k) {
    double x = -std::cos(M_PI * (k + 0.75) / (q + 0.5));
    bool converged = false;
    for (int it = 0; it < kNewtonMaxSteps; ++it) {
      const auto [l, dl] = legendre(q, x);
      const double dx = l / dl;
      x -= dx;
      if (std::abs(dx) <= kNewtonTol) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw std::runtime_error("gauss_rule: Newton iteration stalled at q = " + std::to_string(q));
    const double dl = legendre(q, x).derivative;
    r.nodes[k] = x;
    r.weights[k] = 2.0 / ((1.0 - x) * (1.0 + x) * dl * dl);
  }
  std::sort(r.nodes.begin(), r.nodes.end());
  symmetrize(r);
  return r;
}

LagrangeBasis1D::LagrangeBasis1D(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  const int m = size();
  if (m < 1) throw std::invalid_argument("LagrangeBasis1D: empty node set");
  for (int i = 1; i < m; ++i)
    if (!(nodes_[i] > nodes_[i - 1]))
      throw std::invalid_argument("LagrangeBasis1D: nodes must be strictly increasing");

  // Barycentric weights; differences are doubled to keep the products of
  // O(p^2) factors within double range on [-1, 1] up to high degree.
  bary_.assign(m, 1.0);
  for (int i = 0; i < m; ++i) {
    double b = 1.0;
    for (int j = 0; j < m; ++j) {
      if (j != i) b *= 2.0 * (nodes_[i] - nodes_[j]);
    }
    bary_[i] = 1.0 / b;
  }

  diff_.assign(static_cast<size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      const double d = (bary_[j] / bary_[i]) / (nodes_[i] - nodes_[j]);
      diff_[static_cast<size_t>(i) * m + j] = d;
      row_sum += d;
    }
    diff_[static_cast<size_t>(i) * m + i] = -row_sum;
  }
}

void LagrangeBasis1D::eval(double x, double* values, double* derivatives) const {
  const int m = size();
  // On a node: exact cardinal values and the differentiation-matrix row.
  for (int k = 0; k < m; ++k) {
    if (x == nodes_[k]) {
      if (values)
        for (int i = 0; i < m; ++i) values[i] = (i == k) ? 1.0 : 0.0;
      if (derivatives)
        for (int i = 0; i < m; ++i) derivatives[i] = diff_[static_cast<size_t>(k) * m + i];
      return;
    }
  }

  // Off the nodes: second barycentric form. With t_i = b_i / (x - x_i),
  //   phi_i = t_i / S,  S = sum_j t_j,
  //   phi_i' = (t_i' S - t_i S') / S^2,  t_i' = -t_i / (x - x_i).
  double S = 0.0;
  double Sp = 0.0;
  std::vector<double> t(m), tp(m);
  for (int i = 0; i < m; ++i) {
    const double di = x - nodes_[i];
    t[i] = bary_[i] / di;
    tp[i] = -t[i] / di;
    S += t[i];
    Sp += tp[i];
  }
  for (int i = 0; i < m; ++i) {
    if (values) values[i] = t[i] / S;
    if (derivatives) derivatives[i] = (tp[i] * S - t[i] * Sp) / (S * S);
  }
}

std::vector<double> LagrangeBasis1D::values_at(const std::vector<double>& pts) const {
  const int m = size();
  std::vector<double> out(pts.size() * m);
  for (size_t k = 0; k < pts.size(); ++k) eval(pts[k], out.data() + k * m, nullptr);
  return out;
}

std::vector<double> LagrangeBasis1D::derivatives_at(const std::vector<double>& pts) const {
  const int m = size();
  std::vector<double> out(pts.size() * m);
  for (size_t k = 0; k < pts.size(); ++k) eval(pts[k], nullptr, out.data() + k * m);
  return out;
}

double gll_norm_squared(const std::vector<double>& values, const QuadratureRule& rule,
                        double jacobian) {
  if (values.size() != rule.nodes.size())
    throw std::invalid_argument("gll_norm_squared: value/node count mismatch");
  double s = 0.0;
  for (size_t i = 0; i < values.size(); ++i) s += values[i] * values[i] * rule.weights[i];
  return s * jacobian;
}

double gll_norm_squared_2d(const std::vector<double>& values, const QuadratureRule& rule,
                           double jacobian) {
  const size_t m = rule.nodes.size();
  if (values.size() != m * m)
    throw std::invalid_argument("gll_norm_squared_2d: value/node count mismatch");
  double s = 0.0;
  for (size_t iy = 0; iy < m; ++iy)
    for (size_t ix = 0; ix < m; ++ix) {
      const double v = values[iy * m + ix];
      s += v * v * rule.weights[ix] * rule.weights[iy];
    }
  return s * jacobian;
}

}  // namespace hpdg
