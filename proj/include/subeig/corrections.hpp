#pragma once

#include <string>
#include <string_view>

#include "subeig/dense.hpp"

namespace subeig::corrections {

/// Everything a correction equation sees at one outer iteration.
///
/// x is the current unit Ritz vector, lambda its Ritz value (the Rayleigh
/// quotient of x) and r = A x - lambda x.
struct CorrectionInput {
  const Matrix& a;
  Vector x;
  Scalar lambda;
  Vector r;

  /// Builds the bundle from a unit vector, computing lambda = x*Ax and r.
  static CorrectionInput from_vector(const Matrix& a, Vector x);

  /// Throws InvalidArgument when ||x|| deviates from 1 by more than 1e-12 or
  /// r disagrees with A x - lambda x by more than 1e-12 ||A||_F.
  void validate() const;
};

enum class StrategyKind { davidson, jd, jdm, iigd, iigdm, n1, n2, generalized, bordered };

std::string to_string(StrategyKind kind);

struct StrategyConfig {
  StrategyKind kind = StrategyKind::jd;
  Scalar alpha{1.0};  // generalized only; must be nonzero
  Scalar beta{1.0};   // generalized only
  /// Replace the leading A - lambda I by diag(A) - lambda I (n1 / n2).
  /// Davidson always uses diag(A).
  bool diag_precond = false;
  /// Require t orthogonal to x. The operator strategies (n1, n2, generalized)
  /// then solve within the orthogonal complement of x; the others project.
  bool enforce_orth = false;
  /// Lift the Hermitian precondition of n1 / n2. The Newton operators are only
  /// derived for A = A*; with this set they are applied unchanged anyway.
  bool allow_nonhermitian = false;

  void validate() const;
  /// Short label, e.g. "jd", "n2+diag", "general:2:0".
  std::string label() const;
};

/// Parses one method token: davidson, jd, jdm, iigd, iigdm, n1, n2, bordered,
/// n1+diag, n2+diag or general:a,b (also general:a:b).
StrategyConfig parse_strategy(std::string_view token);

// ------------------------------------------------ Rayleigh-quotient calculus

/// x*Ax / x*x.
Scalar rayleigh_quotient(const Matrix& a, const Vector& x);

/// (2 / x*x) (A x - Q(x) x). Requires a Hermitian-flagged A.
Vector grad_rq(const Matrix& a, const Vector& x);

/// 2 (A - lambda I) - 4 (A x x* + x x* A* - 2 lambda x x*) for unit x and
/// lambda = Q(x). Requires a Hermitian-flagged A.
Matrix hess_rq(const Matrix& a, const Vector& x);

// ------------------------------------------------------- operator builders
// Dense forms of the correction-equation operators, shared by the solvers
// and the identity checks in the tests.

/// (I - x x*)(A - lambda I)(I - x x*)
Matrix jd_operator(const CorrectionInput& in);
/// (I - x x*)(A - lambda I)
Matrix jdm_operator(const CorrectionInput& in);
/// M - lambda I - 2 (r x* + x r*), M = A or diag(A); three-term form
/// M - lambda I - 2 (A x x* + x x* A* - 2 lambda x x*) when lambda is complex
/// and the Hermitian requirement was lifted.
Matrix n1_operator(const CorrectionInput& in, const StrategyConfig& cfg);
/// (I - 2 x x*)(M - lambda I)(I - 2 x x*), M = A or diag(A)
Matrix n2_operator(const CorrectionInput& in, const StrategyConfig& cfg);
/// (I - alpha x x*)(A - lambda I)(I - beta x x*)
Matrix generalized_operator(const CorrectionInput& in, Scalar alpha, Scalar beta);
/// [[A - lambda I, -x], [-x*, 0]]
Matrix bordered_matrix(const CorrectionInput& in);

// --------------------------------------------------------------- strategies

/// t_i = -r_i / (a_ii - lambda).
Vector solve_davidson(const CorrectionInput& in);

/// Min-norm least-squares solution of the projected Jacobi-Davidson equation.
Vector solve_jd(const CorrectionInput& in, bool enforce_orth = false);

/// Min-norm solution of (I - x x*)(A - lambda I) t = -r, projected against x.
Vector solve_jdm(const CorrectionInput& in);

/// (A - lambda I) t = -r + tau x with tau chosen so that t is orthogonal to x.
/// Two shifted solves.
Vector solve_iigd(const CorrectionInput& in);

/// One shifted solve (A - lambda I) s = x, then t = s / (x*s) - x.
Vector solve_iigdm(const CorrectionInput& in);

/// Newton equation for the Rayleigh quotient in its rank-2 form.
Vector solve_n1(const CorrectionInput& in, const StrategyConfig& cfg);

/// Newton equation conjugated by the Householder reflector I - 2 x x*.
Vector solve_n2(const CorrectionInput& in, const StrategyConfig& cfg);

/// (I - alpha x x*)(A - lambda I)(I - beta x x*) t = -r by min-norm least
/// squares; alpha must be nonzero. With enforce_orth the solve is restricted
/// to t orthogonal to x.
Vector solve_generalized(const CorrectionInput& in, Scalar alpha, Scalar beta,
                         bool enforce_orth = false);

struct BorderedSolution {
  Vector t;
  Scalar eta;
};

/// One (n+1)-dimensional LU solve of the bordered Newton system.
BorderedSolution solve_bordered(const CorrectionInput& in);

/// Dispatches on cfg.kind and applies cfg.enforce_orth uniformly.
Vector solve(const CorrectionInput& in, const StrategyConfig& cfg);

/// (A - lambda I)^{-1} b by LU, falling back to the pseudo-inverse only when
/// the shift is exactly singular.
Vector shifted_solve(const Matrix& a, Scalar lambda, const Vector& b);

/// t - x (x*t)
Vector project_out(const Vector& t, const Vector& x);

} // namespace subeig::corrections
