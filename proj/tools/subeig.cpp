// Convergence-comparison runner: one eigenpair, several correction equations,
// identical starting vector, CSV history per outer iteration.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "subeig/experiment.hpp"

using namespace subeig;

int main(int argc, char** argv) {
  CLI::App app{"Subspace eigensolver with selectable correction equations"};

  std::string matrix_path;
  std::string gen;
  std::string mode = "SR";
  std::string methods = "davidson,jd,jdm,iigd,iigdm,n1,n2,bordered";
  std::string out_path;
  std::string plot_path;
  double perturb = -1.0;
  bool no_timing = false;
  bool enforce_orth = false;
  experiment::ExperimentSpec spec;

  auto* src = app.add_option_group("source");
  src->add_option("--matrix", matrix_path, "Matrix Market file")->check(CLI::ExistingFile);
  src->add_option("--gen", gen, "generated model name:n[:param...], e.g. laplace2d:225");
  src->require_option(1);
  app.add_flag("--symmetrize", spec.symmetrize, "replace A by (A + A*)/2");
  app.add_option("--mode", mode, "LR, LM, SR or SM")->check(CLI::IsMember({"LR", "LM", "SR", "SM"}));
  app.add_option("--tol", spec.tol, "relative residual tolerance")->default_val(1e-10);
  app.add_option("--perturb", perturb, "perturbation size (default 5e-2 Hermitian, 1e-2 otherwise)");
  app.add_option("--seed", spec.seed, "seed for the perturbation and random models")->default_val(0);
  app.add_option("--method", methods,
                 "comma list of davidson,jd,jdm,iigd,iigdm,n1,n2,n1+diag,n2+diag,general:a,b,bordered")
      ->capture_default_str();
  app.add_option("--max-outer", spec.max_outer, "subspace dimension that triggers a restart")->default_val(30);
  app.add_option("--max-restarts", spec.max_restarts, "restart cycles before giving up")->default_val(20);
  app.add_option("--out", out_path, "CSV history output");
  app.add_option("--plot", plot_path, "gnuplot script output (needs --out)")->needs("--out");
  app.add_flag("--allow-nonhermitian-newton", spec.allow_nonhermitian_newton,
               "run n1/n2 on non-Hermitian matrices");
  app.add_flag("--enforce-orth", enforce_orth, "project every correction against the Ritz vector");
  app.add_flag("--no-timing", no_timing, "write wall_ms = 0 so repeated runs give identical CSVs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!matrix_path.empty()) spec.source = matrix_path;
    else spec.source = matio::parse_model_spec(gen);
    spec.mode = driver::parse_mode(mode);
    if (perturb >= 0.0) spec.perturb_eps = perturb;
    spec.strategies = experiment::parse_method_list(methods);
    for (auto& s : spec.strategies) s.enforce_orth = enforce_orth;
    spec.record_timing = !no_timing;

    if (spec.allow_nonhermitian_newton) {
      std::cerr << "note: n1/n2 are Newton updates of the Rayleigh quotient of a Hermitian matrix; "
                   "on non-Hermitian input they are applied unchanged and carry no convergence "
                   "guarantee\n";
    }

    const Matrix a = experiment::load_matrix(spec);
    const auto report = experiment::run_experiment(spec, a);

    std::printf("n = %zu, %s, perturbation %g, reference eigenvalue %.12g%+.12gi\n", report.n,
                report.hermitian ? "Hermitian" : "non-Hermitian", report.perturb_eps,
                report.reference.real(), report.reference.imag());
    std::printf("%-16s %-5s %6s %8s %24s %12s %12s\n", "method", "conv", "iters", "restarts",
                "eigenvalue (real part)", "residual", "error");
    for (const auto& run : report.runs) {
      const auto& r = run.result;
      const double resid = r.history.records.empty() ? r.history.initial.resid_norm
                                                     : r.history.records.back().resid_norm;
      std::printf("%-16s %-5s %6zu %8zu %24.16g %12.3e %12.3e\n", run.strategy.label().c_str(),
                  r.converged ? "yes" : "no", r.iterations, r.restarts, r.eigenvalue.real(), resid,
                  run.eigenvalue_error);
    }

    if (!out_path.empty()) experiment::write_csv(report, out_path, spec.record_timing);
    if (!plot_path.empty()) experiment::write_plot_script(report, out_path, plot_path);
    return report.all_converged() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
