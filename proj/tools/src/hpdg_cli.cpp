// Experiment runner: sweeps (degree, alpha) cases of the DG Poisson solver,
// reporting condition numbers, CG/PCG iteration counts, subspace-correction
// constants, and mesh-refinement convergence rates as CSV or JSON.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "hpdg/experiments.hpp"

namespace {

std::vector<int> expand_degrees(const std::vector<std::string>& args) {
  std::vector<int> out;
  for (const auto& token : args) {
    const auto colon = token.find(':');
    try {
      if (colon == std::string::npos) {
        out.push_back(std::stoi(token));
      } else {
        const int a = std::stoi(token.substr(0, colon));
        const int b = std::stoi(token.substr(colon + 1));
        if (b < a) throw std::invalid_argument("descending range");
        for (int p = a; p <= b; ++p) out.push_back(p);
      }
    } catch (const std::exception&) {
      throw CLI::ValidationError("--p", "expected an integer or range a:b, got '" + token + "'");
    }
  }
  return out;
}

std::array<double, 2> parse_beta(const std::string& arg) {
  const auto comma = arg.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument("missing comma");
    return {std::stod(arg.substr(0, comma)), std::stod(arg.substr(comma + 1))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("--beta", "expected bx,by, got '" + arg + "'");
  }
}

std::string case_suffix(int p, double alpha) {
  char buf[48];
  std::snprintf(buf, sizeof buf, ".p%d.alpha%.6g", p, alpha);
  return buf;
}

// Streams rows as they finish so an interrupted sweep still leaves output.
class RowEmitter {
 public:
  RowEmitter(std::ostream& os, bool json) : os_(os), json_(json) {
    if (json_)
      os_ << "[\n";
    else
      os_ << hpdg::csv_header() << '\n';
    os_.flush();
  }

  void operator()(const hpdg::ResultRow& row) {
    if (json_) {
      if (!first_) os_ << ",\n";
      os_ << "  " << hpdg::json_row(row);
    } else {
      os_ << hpdg::csv_row(row) << '\n';
    }
    first_ = false;
    os_.flush();
  }

  void finish() {
    if (json_) os_ << (first_ ? "]\n" : "\n]\n");
    os_.flush();
  }

 private:
  std::ostream& os_;
  bool json_;
  bool first_ = true;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "hp-DG Poisson experiments: condition numbers, solver iteration counts,\n"
      "preconditioner constants, and convergence rates on the square"};

  std::string method = "sipg";
  std::vector<std::string> p_args;
  int n = 32;
  std::vector<double> alphas;
  std::string beta_arg = "1,1";
  std::string tasks_arg = "condition-numbers,iterations,constants";
  double tol = 1e-8;
  std::string format = "csv";
  std::string out_path;
  unsigned long seed = 42;
  std::string export_path;

  app.add_option("--method", method, "DG variant")
      ->check(CLI::IsMember({"sipg", "ldg"}))
      ->capture_default_str();
  app.add_option("--p", p_args,
                 "polynomial degree(s): repeatable, each an integer or a range a:b (default 2)");
  app.add_option("--n", n, "elements per direction")->capture_default_str();
  app.add_option("--alpha", alphas, "penalty scaling(s), repeatable (default 10)");
  app.add_option("--beta", beta_arg, "LDG flux vector bx,by")->capture_default_str();
  app.add_option("--tasks", tasks_arg,
                 "comma-separated subset of condition-numbers,iterations,constants,convergence; "
                 "'none' emits geometry-only rows. The convergence task solves a manufactured "
                 "problem on n = 4,8,16 (first --alpha) and writes a second report next to the "
                 "main one (rates.csv -> rates.convergence.csv)")
      ->capture_default_str();
  app.add_option("--tol", tol, "CG/PCG relative residual tolerance")->capture_default_str();
  app.add_option("--format", format, "report format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", out_path, "report path (default stdout)");
  app.add_option("--seed", seed, "RNG seed for eigenvalue start vectors")->capture_default_str();
  app.add_option("--export-matrix", export_path,
                 "write the assembled operator in Matrix Market form to this path (plus the load "
                 "vector to <path>.rhs.mtx); sweeps with several cases append .p<P>.alpha<A>");

  try {
    app.parse(argc, argv);

    hpdg::ExperimentSpec spec;
    spec.method = method == "sipg" ? hpdg::DGMethod::SIPG : hpdg::DGMethod::LDG;
    if (!p_args.empty()) spec.p_list = expand_degrees(p_args);
    spec.n = n;
    if (!alphas.empty()) spec.alpha_list = alphas;
    spec.beta = parse_beta(beta_arg);
    spec.tasks = hpdg::parse_tasks(tasks_arg);
    spec.rel_tol = tol;
    spec.seed = seed;
    spec.validate();

    const bool json = format == "json";
    const std::string ext = json ? ".json" : ".csv";

    std::ofstream file;
    if (!out_path.empty()) {
      file.open(out_path, std::ios::trunc);
      if (!file) throw CLI::ValidationError("--out", "cannot open '" + out_path + "'");
    }
    std::ostream& os = out_path.empty() ? std::cout : file;

    if (!export_path.empty()) {
      const bool single = spec.p_list.size() == 1 && spec.alpha_list.size() == 1;
      const hpdg::CartesianMesh mesh(spec.domain_min, spec.domain_max, spec.n);
      for (int p : spec.p_list) {
        const hpdg::DofMap dofmap(mesh, p);
        for (double alpha : spec.alpha_list) {
          const hpdg::DGConfig config = spec.method == hpdg::DGMethod::SIPG
                                            ? hpdg::DGConfig::sipg(alpha)
                                            : hpdg::DGConfig::ldg(alpha, spec.beta);
          const hpdg::AssembledSystem system = hpdg::assemble(dofmap, config);
          const std::string base = single ? export_path : export_path + case_suffix(p, alpha);
          hpdg::write_matrix_market(system.A, base);
          hpdg::write_matrix_market_vector(system.rhs, base + ".rhs.mtx");
        }
      }
    }

    RowEmitter emit(os, json);
    const hpdg::RunOutcome outcome = hpdg::run(spec, std::ref(emit));
    emit.finish();

    if (spec.tasks.convergence) {
      std::ofstream conv_file;
      std::ostream* conv_os = &std::cout;
      if (!out_path.empty()) {
        // rates.csv -> rates.convergence.csv; extension-less paths just append
        std::string stem = out_path;
        if (stem.size() > ext.size() && stem.ends_with(ext))
          stem.resize(stem.size() - ext.size());
        const std::string conv_path = stem + ".convergence" + ext;
        conv_file.open(conv_path, std::ios::trunc);
        if (!conv_file) throw CLI::ValidationError("--out", "cannot open '" + conv_path + "'");
        conv_os = &conv_file;
      } else {
        std::cout << '\n';
      }
      std::vector<hpdg::ConvergenceRow> conv_rows;
      for (int p : spec.p_list) {
        const double alpha = spec.alpha_list.front();
        const hpdg::DGConfig config = spec.method == hpdg::DGMethod::SIPG
                                          ? hpdg::DGConfig::sipg(alpha)
                                          : hpdg::DGConfig::ldg(alpha, spec.beta);
        const auto rows = hpdg::convergence_study(config, p, {4, 8, 16}, spec.domain_min,
                                                  spec.domain_max);
        conv_rows.insert(conv_rows.end(), rows.begin(), rows.end());
      }
      *conv_os << (json ? hpdg::convergence_json(conv_rows) : hpdg::convergence_csv(conv_rows));
      conv_os->flush();
    }

    for (const auto& err : outcome.errors) std::cerr << "error: " << err << '\n';
    return outcome.errors.empty() ? 0 : 1;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
