#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "subeig/corrections.hpp"
#include "subeig/driver.hpp"
#include "subeig/matio.hpp"

namespace subeig::experiment {

struct ExperimentSpec {
  std::variant<std::string, matio::ModelSpec> source;  // .mtx path or generator
  bool symmetrize = false;
  driver::SelectionMode mode = driver::SelectionMode::SR;
  double tol = 1e-10;
  std::optional<double> perturb_eps;  // unset: 5e-2 for Hermitian A, 1e-2 otherwise
  std::uint64_t seed = 0;
  std::vector<corrections::StrategyConfig> strategies;
  std::size_t max_outer = 30;  // clamped to n for small matrices
  std::size_t max_restarts = 20;
  bool allow_nonhermitian_newton = false;
  bool record_timing = true;   // false writes wall_ms = 0 for byte-stable output
};

struct InitialGuess {
  Vector x0;
  Scalar reference;     // eigenvalue whose eigenvector was perturbed
};

/// Reference eigenvector for `mode`, perturbed by eps * u with u uniform[0,1)
/// from SplitMix64(seed), then normalized.
InitialGuess make_initial(const Matrix& a, driver::SelectionMode mode, double eps, std::uint64_t seed);

struct StrategyRun {
  corrections::StrategyConfig strategy;
  driver::EigResult result;
  double eigenvalue_error = 0.0;  // |lambda - reference|
};

struct RunReport {
  std::size_t n = 0;
  bool hermitian = false;
  double perturb_eps = 0.0;
  Scalar reference;
  std::uint64_t x0_hash = 0;
  std::vector<StrategyRun> runs;

  bool all_converged() const;
};

Matrix load_matrix(const ExperimentSpec& spec);

/// Runs every strategy from the same initial vector.
RunReport run_experiment(const ExperimentSpec& spec);
RunReport run_experiment(const ExperimentSpec& spec, const Matrix& a);

/// FNV-1a over the raw bytes of the entries.
std::uint64_t hash_vector(const Vector& v);

void emit_csv(const RunReport& report, std::ostream& out, bool record_timing = true);
void write_csv(const RunReport& report, const std::string& path, bool record_timing = true);

/// gnuplot script plotting resid_norm against outer_iter on a log axis.
void emit_plot_script(const RunReport& report, const std::string& csv_path, std::ostream& out);
void write_plot_script(const RunReport& report, const std::string& csv_path, const std::string& path);

/// Splits a comma-separated method list. "general:a,b" consumes the token
/// that follows its first comma.
std::vector<corrections::StrategyConfig> parse_method_list(std::string_view list);

} // namespace subeig::experiment
