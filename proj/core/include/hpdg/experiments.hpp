#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hpdg/spectral.hpp"

namespace hpdg {

// Row-level tasks of an experiment sweep; convergence is a separate study
// over a mesh sequence and is orchestrated by the caller.
struct TaskSet {
  bool condition_numbers = true;
  bool iterations = true;
  bool constants = true;
  bool convergence = false;

  bool any_row_task() const { return condition_numbers || iterations || constants; }
};

// Parse a comma-separated subset of
//   condition-numbers, iterations, constants, convergence
// or the single word "none" (empty set). Unknown names throw.
TaskSet parse_tasks(const std::string& csv);

struct ExperimentSpec {
  DGMethod method = DGMethod::SIPG;
  std::vector<int> p_list{2};
  int n = 32;
  std::vector<double> alpha_list{10.0};
  std::array<double, 2> beta{1.0, 1.0};  // LDG only; SIPG pins beta = 0
  TaskSet tasks;
  double rel_tol = 1e-8;
  unsigned long seed = 42;
  double domain_min = -1.0;
  double domain_max = 1.0;

  void validate() const;  // nonempty lists, rel_tol in (0,1), n >= 1
};

// One sweep case. Fields a task did not compute stay empty.
struct ResultRow {
  std::string method;
  int p = 0;
  int n = 0;
  double h = 0.0;
  double alpha = 0.0;
  std::array<double, 2> beta{0.0, 0.0};
  std::optional<double> K_A;
  std::optional<double> K_TDG;
  std::optional<int> cg_iters;
  std::optional<int> pcg_iters;
  std::optional<double> c1_jacobi;
  std::optional<double> c2_jacobi_kerQ;
  std::optional<double> c2_jacobi_full_VB;
  std::optional<double> c1_schwarz;
  std::optional<double> c2_schwarz;
  double wall_time_seconds = 0.0;
};

struct RunOutcome {
  std::vector<ResultRow> rows;
  std::vector<std::string> errors;  // one entry per failed (p, alpha) case
};

// Execute the sweep in (p, alpha) order. Each finished row is passed to
// on_row (when set) before the next case starts, so partial output survives
// an interrupted run. A failing case lands in errors; the sweep continues.
RunOutcome run(const ExperimentSpec& spec,
               const std::function<void(const ResultRow&)>& on_row = {});

// Report serialization: floats carry 6 significant digits; absent fields are
// empty CSV cells / JSON nulls; beta prints as "bx;by" in CSV.
std::string csv_header();
std::string csv_row(const ResultRow& row);
std::string to_csv(const std::vector<ResultRow>& rows);
std::string json_row(const ResultRow& row);
std::string to_json(const std::vector<ResultRow>& rows);

struct ConvergenceRow {
  std::string method;
  int p = 0;
  int n = 0;
  double h = 0.0;
  double broken_h1_error = 0.0;
  std::optional<double> rate;  // observed vs the previous (coarser) row
};

// Manufactured Dirichlet problem u = sin(pi x) sin(pi y), f = 2 pi^2 u on the
// square: solve per n (PCG to 1e-10 so algebraic error is negligible) and
// report broken-H1 errors with observed rates log(e_prev/e_cur)/log(n/n_prev).
std::vector<ConvergenceRow> convergence_study(const DGConfig& config, int p,
                                              const std::vector<int>& n_list,
                                              double domain_min = -1.0, double domain_max = 1.0);
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);
std::string convergence_json(const std::vector<ConvergenceRow>& rows);

}  // namespace hpdg
