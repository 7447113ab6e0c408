#include "hpdg/assembly.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

namespace hpdg {

DGConfig DGConfig::sipg(double alpha) {
  DGConfig c;
  c.method = DGMethod::SIPG;
  c.alpha = alpha;
  c.beta = {0.0, 0.0};
  c.validate();
  return c;
}

DGConfig DGConfig::ldg(double alpha, std::array<double, 2> beta) {
  DGConfig c;
  c.method = DGMethod::LDG;
  c.alpha = alpha;
  c.beta = beta;
  c.validate();
  return c;
}

void DGConfig::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("DGConfig: penalty scaling must be positive");
  if (method == DGMethod::SIPG && (beta[0] != 0.0 || beta[1] != 0.0))
    throw std::invalid_argument("DGConfig: sipg uses beta = 0");
}

double penalty_sigma(const DGConfig& config, int p, double h_plus, double h_minus) {
  return config.alpha * p * p / std::min(h_plus, h_minus);
}

double penalty_sigma_boundary(const DGConfig& config, int p, double h) {
  return config.alpha * p * p / h;
}

ReferenceBlocks1D reference_blocks(int p) {
  ReferenceBlocks1D rb;
  const auto gll = gll_rule(p);
  rb.gauss = gauss_rule(p + 1);
  const LagrangeBasis1D basis(gll.nodes);
  const int m = p + 1;
  const int q = rb.gauss.size();

  rb.values.resize(q, m);
  rb.derivatives.resize(q, m);
  {
    std::vector<double> v(m), d(m);
    for (int k = 0; k < q; ++k) {
      basis.eval(rb.gauss.nodes[k], v.data(), d.data());
      for (int i = 0; i < m; ++i) {
        rb.values(k, i) = v[i];
        rb.derivatives(k, i) = d[i];
      }
    }
  }

  rb.mass.setZero(m, m);
  rb.stiffness.setZero(m, m);
  for (int k = 0; k < q; ++k) {
    const double w = rb.gauss.weights[k];
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        rb.mass(i, j) += w * rb.values(k, i) * rb.values(k, j);
        rb.stiffness(i, j) += w * rb.derivatives(k, i) * rb.derivatives(k, j);
      }
  }

  rb.dleft.resize(m);
  rb.dright.resize(m);
  std::vector<double> d(m);
  basis.eval(-1.0, nullptr, d.data());
  for (int i = 0; i < m; ++i) rb.dleft[i] = d[i];
  basis.eval(1.0, nullptr, d.data());
  for (int i = 0; i < m; ++i) rb.dright[i] = d[i];
  return rb;
}

namespace {

// Local dof index of (tangential t, normal ia) for a face of the given axis.
inline int local_index(Axis axis, int p, int t, int ia) {
  return axis == Axis::X ? t * (p + 1) + ia : ia * (p + 1) + t;
}

struct SideRef {
  int element = -1;
  int ia = 0;           // local normal index of the face (0 or p)
  double jump_sign = 1; // coefficient of this side in [v].n_F
  const Eigen::VectorXd* dend = nullptr;  // endpoint derivative vector
  double dn_scale = 1;  // (2/h) times the boundary-normal sign
};

// Adjacent sides of a face in (plus, minus) order; boundary faces get one side.
std::vector<SideRef> face_sides(const Face& f, const ReferenceBlocks1D& rb, int p, double h) {
  std::vector<SideRef> sides;
  if (f.boundary()) {
    SideRef s;
    s.element = f.plus;
    s.ia = f.sign > 0 ? p : 0;
    s.jump_sign = 1.0;
    s.dend = f.sign > 0 ? &rb.dright : &rb.dleft;
    s.dn_scale = f.sign * 2.0 / h;
    sides.push_back(s);
  } else {
    SideRef sp;
    sp.element = f.plus;
    sp.ia = p;
    sp.jump_sign = 1.0;
    sp.dend = &rb.dright;
    sp.dn_scale = 2.0 / h;
    sides.push_back(sp);
    SideRef sm;
    sm.element = f.minus;
    sm.ia = 0;
    sm.jump_sign = -1.0;
    sm.dend = &rb.dleft;
    sm.dn_scale = 2.0 / h;
    sides.push_back(sm);
  }
  return sides;
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

FaceLifting local_lifting(const DofMap& dofmap, int face) {
  const auto& mesh = dofmap.mesh();
  if (face < 0 || face >= static_cast<int>(mesh.faces().size()))
    throw std::invalid_argument("local_lifting: face id out of range");
  const Face& f = mesh.faces()[face];
  const int p = dofmap.p();
  const double h = mesh.h();
  const auto rb = reference_blocks(p);

  // integral_elem(w eta) = weight * integral_F(g trace(eta)) solved by
  // M2 w = weight * T^t MF g with M2 the element mass and MF the face mass.
  const Eigen::MatrixXd m2 = (h * h / 4.0) * kron(rb.mass, rb.mass);
  const Eigen::LLT<Eigen::MatrixXd> m2llt(m2);
  const Eigen::MatrixXd mf = (h / 2.0) * rb.mass;
  const int per = dofmap.dofs_per_element();

  FaceLifting out;
  out.face = face;
  const double avg_w = f.boundary() ? 1.0 : 0.5;
  for (const auto& s : face_sides(f, rb, p, h)) {
    FaceLifting::Side side;
    side.element = s.element;
    side.trace_dofs.resize(p + 1);
    Eigen::MatrixXd tm = Eigen::MatrixXd::Zero(per, p + 1);
    for (int t = 0; t <= p; ++t) {
      const int loc = local_index(f.axis, p, t, s.ia);
      side.trace_dofs[t] = s.element * per + loc;
      for (int l = 0; l <= p; ++l) tm(loc, l) = mf(t, l);
    }
    side.r_block = m2llt.solve((-avg_w) * tm);
    if (!f.boundary()) side.l_block = m2llt.solve((-s.jump_sign) * tm);
    out.sides.push_back(std::move(side));
  }
  return out;
}

AssembledSystem assemble(const DofMap& dofmap, const DGConfig& config,
                         const std::function<double(double, double)>& f) {
  config.validate();
  const auto& mesh = dofmap.mesh();
  const int p = dofmap.p();
  const int m = p + 1;
  const int per = dofmap.dofs_per_element();
  const int ndofs = dofmap.total_dofs();
  const double h = mesh.h();
  const auto rb = reference_blocks(p);
  const bool ldg = config.method == DGMethod::LDG;

  AssembledSystem sys;
  sys.config = config;
  sys.p = p;
  sys.h = h;
  sys.sigma = penalty_sigma(config, p, h, h);

  // --- volume terms ------------------------------------------------------
  // On congruent square elements the broken stiffness block is scale free:
  // K2 = K1 x M1 + M1 x K1.
  Eigen::MatrixXd k2 = kron(rb.mass, rb.stiffness) + kron(rb.stiffness, rb.mass);
  // kron(A, B) indexes as (iy ix) with ix fast, so mass x stiffness puts the
  // stiffness factor on the x direction.

  std::vector<Triplet> grad_trip;
  grad_trip.reserve(static_cast<size_t>(mesh.num_elements()) * per * per);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const int base = e * per;
    for (int i = 0; i < per; ++i)
      for (int j = 0; j < per; ++j) grad_trip.emplace_back(base + i, base + j, k2(i, j));
  }

  // --- face terms ---------------------------------------------------------
  const Eigen::MatrixXd mf = (h / 2.0) * rb.mass;  // face mass
  std::vector<Triplet> face_trip;                  // consistency + penalty
  std::vector<Triplet> jump_trip;                  // unweighted jump form
  {
    const size_t nf = mesh.faces().size();
    face_trip.reserve(nf * static_cast<size_t>(4 * m * m + 8 * m * m * m));
    jump_trip.reserve(nf * static_cast<size_t>(4 * m * m));
  }

  for (const Face& fc : mesh.faces()) {
    const auto sides = face_sides(fc, rb, p, h);
    const double sigma = fc.boundary() ? penalty_sigma_boundary(config, p, h)
                                       : penalty_sigma(config, p, h, h);
    const double avg_w = fc.boundary() ? 1.0 : 0.5;
    const double bn = (ldg && !fc.boundary()) ? config.beta[static_cast<int>(fc.axis)] : 0.0;

    for (const auto& sv : sides) {
      for (const auto& su : sides) {
        const double pen = sigma * sv.jump_sign * su.jump_sign;
        const double pen_raw = sv.jump_sign * su.jump_sign;
        for (int l = 0; l <= p; ++l) {
          const int vtrace = sv.element * per + local_index(fc.axis, p, l, sv.ia);
          for (int t = 0; t <= p; ++t) {
            const int utrace = su.element * per + local_index(fc.axis, p, t, su.ia);
            const double w = mf(l, t);
            face_trip.emplace_back(vtrace, utrace, pen * w);
            jump_trip.emplace_back(vtrace, utrace, pen_raw * w);
          }
        }

        // Consistency: -(avg_w + bn * jump(su)) * jump(sv) * dn_u * [v], plus
        // its transpose; pushing both keeps A exactly symmetric.
        const double cw = -(avg_w + bn * su.jump_sign) * sv.jump_sign;
        for (int l = 0; l <= p; ++l) {
          const int vtrace = sv.element * per + local_index(fc.axis, p, l, sv.ia);
          for (int t = 0; t <= p; ++t) {
            const double w = cw * mf(l, t);
            for (int ia = 0; ia < m; ++ia) {
              const int udof = su.element * per + local_index(fc.axis, p, t, ia);
              const double val = w * su.dn_scale * (*su.dend)[ia];
              face_trip.emplace_back(vtrace, udof, val);
              face_trip.emplace_back(udof, vtrace, val);
            }
          }
        }
      }
    }
  }

  // --- LDG lifting Gram term ---------------------------------------------
  std::vector<Triplet> gram_trip;
  if (ldg) {
    const Eigen::MatrixXd m2 = (h * h / 4.0) * kron(rb.mass, rb.mass);
    const Eigen::LLT<Eigen::MatrixXd> m2llt(m2);

    for (int e = 0; e < mesh.num_elements(); ++e) {
      const auto efaces = mesh.element_faces(e);
      for (int axis = 0; axis < 2; ++axis) {
        // Faces of this element with the given normal axis: (-a, +a).
        const std::array<int, 2> pair{efaces[2 * axis], efaces[2 * axis + 1]};
        std::vector<int> src;  // global source dofs, one per moment column
        Eigen::MatrixXd bloc = Eigen::MatrixXd::Zero(per, 4 * m);
        int ncols = 0;

        for (int fi = 0; fi < 2; ++fi) {
          const Face& fc = mesh.faces()[pair[fi]];
          const auto sides = face_sides(fc, rb, p, h);
          // This element's own side (to place the moment rows).
          const SideRef* own = nullptr;
          for (const auto& s : sides)
            if (s.element == e) own = &s;
          if (!own) throw std::logic_error("assemble: face/element adjacency mismatch");
          const double beta_n = fc.boundary() ? 0.0 : config.beta[axis];

          for (const auto& su : sides) {
            // Combined moment weight of this source side: the average lifting
            // contributes -avg_w * jump(su); the jump lifting of beta.[u]
            // contributes -jump(own) * (beta.n) * jump(su) on interior faces.
            // Boundary faces lift the trace itself with the outward sign.
            double c;
            if (fc.boundary()) {
              c = -fc.sign;
            } else {
              c = -su.jump_sign * (0.5 + beta_n * own->jump_sign);
            }
            for (int t = 0; t <= p; ++t)
              src.push_back(su.element * per + local_index(fc.axis, p, t, su.ia));
            for (int mm = 0; mm <= p; ++mm) {
              const int row = local_index(fc.axis, p, mm, own->ia);
              for (int t = 0; t <= p; ++t) bloc(row, ncols + t) += c * mf(mm, t);
            }
            ncols += m;
          }
        }

        const Eigen::MatrixXd x = m2llt.solve(bloc.leftCols(ncols));
        Eigen::MatrixXd sloc = bloc.leftCols(ncols).transpose() * x;
        sloc = 0.5 * (sloc + sloc.transpose());  // rounding-exact symmetry
        for (int i = 0; i < ncols; ++i)
          for (int j = 0; j < ncols; ++j) gram_trip.emplace_back(src[i], src[j], sloc(i, j));
      }
    }
  }

  // --- right-hand side -----------------------------------------------------
  sys.rhs = Vec::Zero(ndofs);
  {
    const int q = rb.gauss.size();
    const double jac = h * h / 4.0;
    for (int e = 0; e < mesh.num_elements(); ++e) {
      const auto [x0, y0] = mesh.element_origin(e);
      for (int ky = 0; ky < q; ++ky) {
        const double y = y0 + 0.5 * h * (1.0 + rb.gauss.nodes[ky]);
        for (int kx = 0; kx < q; ++kx) {
          const double x = x0 + 0.5 * h * (1.0 + rb.gauss.nodes[kx]);
          const double fw = (f ? f(x, y) : 1.0) * rb.gauss.weights[kx] * rb.gauss.weights[ky] * jac;
          for (int iy = 0; iy < m; ++iy)
            for (int ix = 0; ix < m; ++ix)
              sys.rhs[e * per + iy * m + ix] += fw * rb.values(ky, iy) * rb.values(kx, ix);
        }
      }
    }
  }

  // --- combine -------------------------------------------------------------
  sys.A_grad = SparseOperator::from_triplets(ndofs, ndofs, grad_trip, true);
  sys.A_jump = SparseOperator::from_triplets(ndofs, ndofs, jump_trip, true);

  std::vector<Triplet>& all = face_trip;
  all.insert(all.end(), grad_trip.begin(), grad_trip.end());
  all.insert(all.end(), gram_trip.begin(), gram_trip.end());
  sys.A = SparseOperator::from_triplets(ndofs, ndofs, all, true);
  return sys;
}

EnergyParts energy_norms(const AssembledSystem& system, const Vec& v) {
  EnergyParts parts;
  parts.grad_sq = v.dot(system.A_grad.apply(v));
  parts.jump_sq = system.sigma * v.dot(system.A_jump.apply(v));
  return parts;
}

}  // namespace hpdg
