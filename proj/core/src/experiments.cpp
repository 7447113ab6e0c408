#include "hpdg/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace hpdg {

namespace {

constexpr double kEigTol = 1e-4;     // extreme-eigenvalue relative tolerance
constexpr double kSolveTol = 1e-10;  // convergence-study algebraic tolerance
constexpr int kMaxIter = 200000;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string csv_opt(const std::optional<double>& v) { return v ? fmt_double(*v) : std::string(); }
std::string csv_opt(const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); }

std::string json_number(double v) { return std::isfinite(v) ? fmt_double(v) : "null"; }
std::string json_opt(const std::optional<double>& v) { return v ? json_number(*v) : "null"; }
std::string json_opt(const std::optional<int>& v) { return v ? std::to_string(*v) : "null"; }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

TaskSet parse_tasks(const std::string& csv) {
  TaskSet tasks;
  tasks.condition_numbers = tasks.iterations = tasks.constants = tasks.convergence = false;
  std::vector<std::string> names;
  std::string::size_type pos = 0;
  while (pos <= csv.size()) {
    const auto comma = csv.find(',', pos);
    const auto end = comma == std::string::npos ? csv.size() : comma;
    names.push_back(trim(csv.substr(pos, end - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (names.size() == 1 && names[0] == "none") return tasks;
  for (const auto& name : names) {
    if (name == "condition-numbers")
      tasks.condition_numbers = true;
    else if (name == "iterations")
      tasks.iterations = true;
    else if (name == "constants")
      tasks.constants = true;
    else if (name == "convergence")
      tasks.convergence = true;
    else if (name == "none")
      throw std::invalid_argument("tasks: 'none' cannot be combined with other tasks");
    else
      throw std::invalid_argument("tasks: unknown task '" + name + "'");
  }
  return tasks;
}

void ExperimentSpec::validate() const {
  if (p_list.empty()) throw std::invalid_argument("experiment: empty degree list");
  if (alpha_list.empty()) throw std::invalid_argument("experiment: empty alpha list");
  for (int p : p_list)
    if (p < 2) throw std::invalid_argument("experiment: degree must be >= 2");
  if (n < 1) throw std::invalid_argument("experiment: n must be >= 1");
  if (!(rel_tol > 0.0 && rel_tol < 1.0))
    throw std::invalid_argument("experiment: rel_tol must lie in (0, 1)");
  if (!(domain_max > domain_min)) throw std::invalid_argument("experiment: empty domain");
}

RunOutcome run(const ExperimentSpec& spec, const std::function<void(const ResultRow&)>& on_row) {
  spec.validate();
  RunOutcome out;
  const CartesianMesh mesh(spec.domain_min, spec.domain_max, spec.n);
  for (int p : spec.p_list) {
    for (double alpha : spec.alpha_list) {
      const auto start = std::chrono::steady_clock::now();
      ResultRow row;
      row.method = spec.method == DGMethod::SIPG ? "sipg" : "ldg";
      row.p = p;
      row.n = spec.n;
      row.h = mesh.h();
      row.alpha = alpha;
      row.beta = spec.method == DGMethod::LDG ? spec.beta : std::array<double, 2>{0.0, 0.0};
      try {
        if (spec.tasks.any_row_task()) {
          const DGConfig config = spec.method == DGMethod::SIPG
                                      ? DGConfig::sipg(alpha)
                                      : DGConfig::ldg(alpha, spec.beta);
          const DofMap dofmap(mesh, p);
          const AssembledSystem system = assemble(dofmap, config);
          const DGPreconditioner prec(dofmap, system);
          const LinearOperator a_op = LinearOperator::from(system.A);
          const LinearOperator b_op = LinearOperator::from(prec);

          if (spec.tasks.condition_numbers) {
            const EigsReport ka = condition_unpreconditioned(system, prec, spec.seed, kEigTol);
            // 2-norm condition of the preconditioned matrix (sigma ratio);
            // larger than the eigenvalue ratio because B*A is Euclidean-nonsymmetric.
            const SingularReport kt = condition2_preconditioned(system, prec, spec.seed + 3, kEigTol);
            row.K_A = ka.condition();
            row.K_TDG = kt.condition();
          }
          if (spec.tasks.iterations) {
            const PCGSolution cg = pcg(a_op, nullptr, system.rhs, spec.rel_tol, kMaxIter);
            if (!cg.report.converged)
              throw std::runtime_error("CG did not reach the tolerance within budget");
            const PCGSolution pc = pcg(a_op, &b_op, system.rhs, spec.rel_tol, kMaxIter);
            if (!pc.report.converged)
              throw std::runtime_error("PCG did not reach the tolerance within budget");
            row.cg_iters = cg.report.iterations;
            row.pcg_iters = pc.report.iterations;
          }
          if (spec.tasks.constants) {
            const ConstantsReport c = estimate_constants(dofmap, system, prec, spec.seed + 5, kEigTol);
            row.c1_jacobi = c.c1_jacobi;
            row.c2_jacobi_kerQ = c.c2_jacobi_kerQ;
            row.c2_jacobi_full_VB = c.c2_jacobi_full_VB;
            row.c1_schwarz = c.c1_schwarz;
            row.c2_schwarz = c.c2_schwarz;
          }
        }
      } catch (const std::exception& err) {
        out.errors.push_back(row.method + " p=" + std::to_string(p) +
                             " alpha=" + fmt_double(alpha) + ": " + err.what());
        continue;
      }
      row.wall_time_seconds = elapsed_seconds(start);
      out.rows.push_back(row);
      if (on_row) on_row(out.rows.back());
    }
  }
  return out;
}

std::string csv_header() {
  return "method,p,n,h,alpha,beta,K_A,K_TDG,cg_iters,pcg_iters,c1_jacobi,c2_jacobi_kerQ,"
         "c2_jacobi_full_VB,c1_schwarz,c2_schwarz,wall_time_seconds";
}

std::string csv_row(const ResultRow& row) {
  std::string line = row.method;
  line += ',' + std::to_string(row.p);
  line += ',' + std::to_string(row.n);
  line += ',' + fmt_double(row.h);
  line += ',' + fmt_double(row.alpha);
  line += ',' + fmt_double(row.beta[0]) + ';' + fmt_double(row.beta[1]);
  line += ',' + csv_opt(row.K_A);
  line += ',' + csv_opt(row.K_TDG);
  line += ',' + csv_opt(row.cg_iters);
  line += ',' + csv_opt(row.pcg_iters);
  line += ',' + csv_opt(row.c1_jacobi);
  line += ',' + csv_opt(row.c2_jacobi_kerQ);
  line += ',' + csv_opt(row.c2_jacobi_full_VB);
  line += ',' + csv_opt(row.c1_schwarz);
  line += ',' + csv_opt(row.c2_schwarz);
  line += ',' + fmt_double(row.wall_time_seconds);
  return line;
}

std::string to_csv(const std::vector<ResultRow>& rows) {
  std::string out = csv_header() + '\n';
  for (const auto& row : rows) out += csv_row(row) + '\n';
  return out;
}

std::string json_row(const ResultRow& row) {
  std::string obj = "{";
  obj += "\"method\":\"" + row.method + "\"";
  obj += ",\"p\":" + std::to_string(row.p);
  obj += ",\"n\":" + std::to_string(row.n);
  obj += ",\"h\":" + json_number(row.h);
  obj += ",\"alpha\":" + json_number(row.alpha);
  obj += ",\"beta\":[" + json_number(row.beta[0]) + "," + json_number(row.beta[1]) + "]";
  obj += ",\"K_A\":" + json_opt(row.K_A);
  obj += ",\"K_TDG\":" + json_opt(row.K_TDG);
  obj += ",\"cg_iters\":" + json_opt(row.cg_iters);
  obj += ",\"pcg_iters\":" + json_opt(row.pcg_iters);
  obj += ",\"c1_jacobi\":" + json_opt(row.c1_jacobi);
  obj += ",\"c2_jacobi_kerQ\":" + json_opt(row.c2_jacobi_kerQ);
  obj += ",\"c2_jacobi_full_VB\":" + json_opt(row.c2_jacobi_full_VB);
  obj += ",\"c1_schwarz\":" + json_opt(row.c1_schwarz);
  obj += ",\"c2_schwarz\":" + json_opt(row.c2_schwarz);
  obj += ",\"wall_time_seconds\":" + json_number(row.wall_time_seconds);
  obj += "}";
  return obj;
}

std::string to_json(const std::vector<ResultRow>& rows) {
  std::string out = "[\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out += "  " + json_row(rows[i]);
    if (i + 1 < rows.size()) out += ',';
    out += '\n';
  }
  out += "]\n";
  return out;
}

namespace {

double manufactured_f(double x, double y) {
  const double pi = M_PI;
  return 2.0 * pi * pi * std::sin(pi * x) * std::sin(pi * y);
}

// Broken-H1 error of a DG coefficient vector against u = sin(pi x) sin(pi y),
// integrated elementwise with a Gauss rule two orders past the space degree.
double broken_h1_error(const DofMap& dofmap, const Vec& u) {
  const double pi = M_PI;
  const int p = dofmap.p();
  const int m = p + 1;
  const CartesianMesh& mesh = dofmap.mesh();
  const double h = mesh.h();
  const QuadratureRule quad = gauss_rule(p + 2);
  const LagrangeBasis1D basis(dofmap.gll().nodes);
  const std::vector<double> vals = basis.values_at(quad.nodes);
  const std::vector<double> ders = basis.derivatives_at(quad.nodes);
  const int nq = quad.size();

  double err_sq = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto origin = mesh.element_origin(e);
    for (int qy = 0; qy < nq; ++qy) {
      const double y = origin[1] + 0.5 * h * (quad.nodes[qy] + 1.0);
      for (int qx = 0; qx < nq; ++qx) {
        const double x = origin[0] + 0.5 * h * (quad.nodes[qx] + 1.0);
        double ddx = 0.0, ddy = 0.0;
        for (int iy = 0; iy < m; ++iy) {
          for (int ix = 0; ix < m; ++ix) {
            const double c = u[dofmap.global_dof(e, ix, iy)];
            ddx += c * ders[qx * m + ix] * vals[qy * m + iy];
            ddy += c * vals[qx * m + ix] * ders[qy * m + iy];
          }
        }
        ddx *= 2.0 / h;
        ddy *= 2.0 / h;
        const double ex = ddx - pi * std::cos(pi * x) * std::sin(pi * y);
        const double ey = ddy - pi * std::sin(pi * x) * std::cos(pi * y);
        err_sq += quad.weights[qx] * quad.weights[qy] * 0.25 * h * h * (ex * ex + ey * ey);
      }
    }
  }
  return std::sqrt(err_sq);
}

}  // namespace

std::vector<ConvergenceRow> convergence_study(const DGConfig& config, int p,
                                              const std::vector<int>& n_list, double domain_min,
                                              double domain_max) {
  config.validate();
  std::vector<ConvergenceRow> rows;
  for (int n : n_list) {
    const CartesianMesh mesh(domain_min, domain_max, n);
    const DofMap dofmap(mesh, p);
    const AssembledSystem system = assemble(dofmap, config, manufactured_f);
    const DGPreconditioner prec(dofmap, system);
    const LinearOperator a_op = LinearOperator::from(system.A);
    const LinearOperator b_op = LinearOperator::from(prec);
    const PCGSolution sol = pcg(a_op, &b_op, system.rhs, kSolveTol, kMaxIter);
    if (!sol.report.converged)
      throw std::runtime_error("convergence_study: solve stalled at n = " + std::to_string(n));

    ConvergenceRow row;
    row.method = config.name();
    row.p = p;
    row.n = n;
    row.h = mesh.h();
    row.broken_h1_error = broken_h1_error(dofmap, sol.x);
    if (!rows.empty() && n > rows.back().n && rows.back().broken_h1_error > 0.0 &&
        row.broken_h1_error > 0.0) {
      row.rate = std::log(rows.back().broken_h1_error / row.broken_h1_error) /
                 std::log(double(n) / rows.back().n);
    }
    rows.push_back(row);
  }
  return rows;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::string out = "method,p,n,h,broken_h1_error,rate\n";
  for (const auto& row : rows) {
    out += row.method + ',' + std::to_string(row.p) + ',' + std::to_string(row.n) + ',' +
           fmt_double(row.h) + ',' + fmt_double(row.broken_h1_error) + ',' + csv_opt(row.rate) +
           '\n';
  }
  return out;
}

std::string convergence_json(const std::vector<ConvergenceRow>& rows) {
  std::string out = "[\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    out += "  {\"method\":\"" + row.method + "\",\"p\":" + std::to_string(row.p) +
           ",\"n\":" + std::to_string(row.n) + ",\"h\":" + json_number(row.h) +
           ",\"broken_h1_error\":" + json_number(row.broken_h1_error) +
           ",\"rate\":" + json_opt(row.rate) + "}";
    if (i + 1 < rows.size()) out += ',';
    out += '\n';
  }
  out += "]\n";
  return out;
}

}  // namespace hpdg
