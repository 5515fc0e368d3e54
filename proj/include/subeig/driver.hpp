#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "subeig/corrections.hpp"
#include "subeig/dense.hpp"

namespace subeig::driver {

/// Which Ritz value to track: largest/smallest real part or magnitude.
///
/// Values within 1e-12 (relative to the largest magnitude present) on the
/// primary key are tied; ties go to the smaller imaginary part, then the
/// lower index.
enum class SelectionMode { LR, LM, SR, SM };

std::string to_string(SelectionMode mode);
SelectionMode parse_mode(std::string_view text);

/// Index of the value preferred by `mode`.
std::size_t select_index(std::span<const Scalar> values, SelectionMode mode);

struct SolverConfig {
  SelectionMode mode = SelectionMode::SR;
  double tol = 1e-10;
  std::size_t max_outer = 30;    // largest subspace dimension before a restart
  std::size_t max_restarts = 20;
  corrections::StrategyConfig strategy{};
  double reorth_eta = 1.0 / std::sqrt(2.0);

  void validate(std::size_t n) const;
};

/// The triple (V, W = A V, H = V* A V) and the current Ritz pair.
struct SubspaceState {
  Matrix v;
  Matrix w;
  Matrix h;
  Scalar ritz_value;
  Vector ritz_coeff;
  Vector ritz_vector;
  Vector residual;

  std::size_t dim() const noexcept { return v.cols(); }
};

struct IterationRecord {
  std::size_t outer = 0;        // expansions executed so far (0 = initial state)
  std::size_t subspace_dim = 0;
  Scalar lambda;
  double resid_norm = 0.0;
  corrections::StrategyKind kind = corrections::StrategyKind::jd;
  double wall_ms = 0.0;
  bool fallback = false;  // the strategy failed and t = -r was used
  bool skipped = false;   // t was linearly dependent on V; a restart followed
};

struct ConvergenceHistory {
  IterationRecord initial;
  std::vector<IterationRecord> records;  // one per executed expansion
};

struct EigResult {
  bool converged = false;
  Scalar eigenvalue;
  Vector eigenvector;
  std::size_t iterations = 0;
  std::size_t restarts = 0;
  ConvergenceHistory history;
};

/// Subspace of dimension one spanned by x0.
SubspaceState init(const Matrix& a, const Vector& x0);

/// Orthonormalizes t against the columns of V: one Gram-Schmidt pass, and a
/// second one when the remainder is shorter than eta ||t||.
/// Throws LinearlyDependent when t has no usable component outside range(V).
Vector dgks(const Matrix& v, const Vector& t, double eta);

/// Ritz pair of H preferred by `mode`, with unit coefficient vector.
std::pair<Scalar, Vector> select_ritz(const Matrix& h, SelectionMode mode);

struct ExpandOutcome {
  bool fallback = false;
  bool skipped = false;
};

/// One outer iteration: correction vector, orthonormalization, projected
/// matrix update and Ritz extraction. On LinearlyDependent the state is left
/// untouched and outcome.skipped is set.
ExpandOutcome expand(SubspaceState& state, const Matrix& a, const SolverConfig& cfg);

/// Expands with a caller-supplied vector instead of a correction equation.
void expand_with(SubspaceState& state, const Matrix& a, const Vector& t, const SolverConfig& cfg);

/// Collapses to the current Ritz vector, reusing W y for A x.
SubspaceState restart(const SubspaceState& state);

/// max(|lambda|, ||A||_F / sqrt(n))
double residual_scale(const Matrix& a, Scalar lambda);

enum class Event { initialized, expanded, restarted };
using Observer = std::function<void(const SubspaceState&, Event)>;

EigResult run(const Matrix& a, const Vector& x0, const SolverConfig& cfg,
              const Observer& observer = {});

/// (A - lambda I)^{-1} x, normalized.
Vector rqi_direction(const Matrix& a, Scalar lambda, const Vector& x);

} // namespace subeig::driver
