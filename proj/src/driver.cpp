#include "subeig/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "subeig/eig.hpp"

namespace subeig::driver {

namespace {

bool finite(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](const Scalar& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

// V* t, one entry per column.
Vector project(const Matrix& v, const Vector& t) {
  return adjoint_matvec(v, t);
}

void subtract_span(const Matrix& v, const Vector& c, Vector& t) {
  for (std::size_t j = 0; j < v.cols(); ++j) {
    const auto col = v.column(j);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] -= c[j] * col[i];
  }
}

void refresh_ritz(SubspaceState& s, SelectionMode mode) {
  auto [lambda, y] = select_ritz(s.h, mode);
  s.ritz_value = lambda;
  s.ritz_coeff = std::move(y);
  s.ritz_vector = matvec(s.v, s.ritz_coeff);
  s.residual = matvec(s.w, s.ritz_coeff) - lambda * s.ritz_vector;
}

} // namespace

std::string to_string(SelectionMode mode) {
  switch (mode) {
    case SelectionMode::LR: return "LR";
    case SelectionMode::LM: return "LM";
    case SelectionMode::SR: return "SR";
    case SelectionMode::SM: return "SM";
  }
  return "?";
}

SelectionMode parse_mode(std::string_view text) {
  if (text == "LR") return SelectionMode::LR;
  if (text == "LM") return SelectionMode::LM;
  if (text == "SR") return SelectionMode::SR;
  if (text == "SM") return SelectionMode::SM;
  throw InvalidArgument("unknown selection mode '" + std::string(text) + "' (LR, LM, SR or SM)");
}

std::size_t select_index(std::span<const Scalar> values, SelectionMode mode) {
  if (values.empty()) throw InvalidArgument("select_index: no values");
  double largest = 0.0;
  for (const auto& z : values) largest = std::max(largest, std::abs(z));
  const double tie = 1e-12 * largest;

  // Smaller key wins.
  auto key = [mode](const Scalar& z) {
    switch (mode) {
      case SelectionMode::LR: return -z.real();
      case SelectionMode::LM: return -std::abs(z);
      case SelectionMode::SR: return z.real();
      case SelectionMode::SM: return std::abs(z);
    }
    return 0.0;
  };

  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double ki = key(values[i]);
    const double kb = key(values[best]);
    if (ki < kb - tie) {
      best = i;
    } else if (ki <= kb + tie && values[i].imag() < values[best].imag() - tie) {
      best = i;
    }
  }
  return best;
}

void SolverConfig::validate(std::size_t n) const {
  if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
  if (max_outer < 2 || max_outer > n) {
    throw InvalidArgument("max_outer must lie in [2, n] (n = " + std::to_string(n) + ")");
  }
  if (!(reorth_eta > 0.0 && reorth_eta < 1.0)) throw InvalidArgument("reorth_eta must lie in (0, 1)");
  strategy.validate();
}

SubspaceState init(const Matrix& a, const Vector& x0) {
  if (!a.square() || a.rows() != x0.size()) throw DimensionMismatch("init: A and x0 disagree in size");
  if (norm2(x0) == 0.0) throw InvalidArgument("init: x0 is the zero vector");

  SubspaceState s;
  Vector x = normalized(x0);
  Vector w = matvec(a, x);
  Scalar lambda = inner(x, w);
  if (a.is_hermitian()) lambda = lambda.real();

  s.v = Matrix(a.rows(), 0);
  s.v.append_column(x.span());
  s.w = Matrix(a.rows(), 0);
  s.w.append_column(w.span());
  s.h = Matrix(1, 1, lambda);
  if (a.is_hermitian()) s.h.mark_hermitian();

  s.ritz_value = lambda;
  s.ritz_coeff = Vector{Scalar{1.0}};
  s.residual = w - lambda * x;
  s.ritz_vector = std::move(x);
  return s;
}

Vector dgks(const Matrix& v, const Vector& t, double eta) {
  if (v.rows() != t.size()) throw DimensionMismatch("dgks: V and t disagree in size");
  const double tn = norm2(t);
  if (tn == 0.0 || !std::isfinite(tn)) throw LinearlyDependent("dgks: t is zero or not finite");

  Vector u = t;
  subtract_span(v, project(v, u), u);
  double un = norm2(u);
  if (un < eta * tn) {
    subtract_span(v, project(v, u), u);
    un = norm2(u);
  }
  if (un < 1e-13 * tn) throw LinearlyDependent("dgks: t lies numerically in range(V)");
  u *= Scalar{1.0 / un};

  if (v.cols() > 0 && norm_inf(project(v, u)) > 1e-12) {
    subtract_span(v, project(v, u), u);
    u *= Scalar{1.0 / norm2(u)};
    if (norm_inf(project(v, u)) > 1e-12) throw LinearlyDependent("dgks: orthogonality lost");
  }
  return u;
}

std::pair<Scalar, Vector> select_ritz(const Matrix& h, SelectionMode mode) {
  const EigDecomposition eig = small_eig(h);
  const std::size_t k = select_index(eig.values, mode);
  Vector y = eig.vectors.column_vector(k);
  return {eig.values[k], normalized(y)};
}

void expand_with(SubspaceState& s, const Matrix& a, const Vector& t, const SolverConfig& cfg) {
  const Vector v = dgks(s.v, t, cfg.reorth_eta);
  const Vector w = matvec(a, v);
  const std::size_t j = s.dim();

  s.v.append_column(v.span());
  s.w.append_column(w.span());

  const bool hermitian = a.is_hermitian();
  Matrix h = s.h;
  h.grow_square();
  const Vector col = project(s.v, w);  // V_{j+1}* w
  for (std::size_t i = 0; i < j; ++i) {
    h(i, j) = col[i];
    h(j, i) = hermitian ? std::conj(col[i]) : inner(v.span(), s.w.column(i));
  }
  h(j, j) = hermitian ? Scalar{col[j].real()} : col[j];
  if (hermitian) h.mark_hermitian();
  s.h = std::move(h);

  refresh_ritz(s, cfg.mode);
}

ExpandOutcome expand(SubspaceState& s, const Matrix& a, const SolverConfig& cfg) {
  ExpandOutcome out;
  Vector t;
  try {
    const corrections::CorrectionInput in{a, s.ritz_vector, s.ritz_value, s.residual};
    t = corrections::solve(in, cfg.strategy);
    if (!finite(t)) throw Breakdown("correction is not finite");
  } catch (const Breakdown&) {
    out.fallback = true;
  } catch (const SingularDiagonal&) {
    out.fallback = true;
  } catch (const SingularMatrix&) {
    out.fallback = true;
  }
  if (out.fallback) t = -s.residual;

  // A correction that lies in range(V) depends only on (x, lambda, r), which a
  // restart leaves unchanged; retrying it would repeat forever. Use -r instead.
  try {
    expand_with(s, a, t, cfg);
    return out;
  } catch (const LinearlyDependent&) {
    if (out.fallback) {
      out.skipped = true;
      return out;
    }
  }
  out.fallback = true;
  try {
    expand_with(s, a, -s.residual, cfg);
  } catch (const LinearlyDependent&) {
    out.skipped = true;
  }
  return out;
}

SubspaceState restart(const SubspaceState& s) {
  SubspaceState r;
  const std::size_t n = s.v.rows();
  r.v = Matrix(n, 0);
  r.v.append_column(s.ritz_vector.span());
  const Vector wy = matvec(s.w, s.ritz_coeff);
  r.w = Matrix(n, 0);
  r.w.append_column(wy.span());
  r.h = Matrix(1, 1, s.ritz_value);
  if (s.h.is_hermitian()) r.h.mark_hermitian();
  r.ritz_value = s.ritz_value;
  r.ritz_coeff = Vector{Scalar{1.0}};
  r.ritz_vector = s.ritz_vector;
  r.residual = s.residual;
  return r;
}

double residual_scale(const Matrix& a, Scalar lambda) {
  const double n = static_cast<double>(std::max<std::size_t>(a.rows(), 1));
  return std::max(std::abs(lambda), frobenius_norm(a) / std::sqrt(n));
}

EigResult run(const Matrix& a, const Vector& x0, const SolverConfig& cfg, const Observer& observer) {
  cfg.validate(a.rows());
  using clock = std::chrono::steady_clock;

  EigResult result;
  SubspaceState s = init(a, x0);
  if (observer) observer(s, Event::initialized);

  auto converged = [&] { return norm2(s.residual) <= cfg.tol * residual_scale(a, s.ritz_value); };

  IterationRecord& first = result.history.initial;
  first.subspace_dim = 1;
  first.lambda = s.ritz_value;
  first.resid_norm = norm2(s.residual);
  first.kind = cfg.strategy.kind;

  bool force_restart = false;
  bool done = converged();
  while (!done) {
    if (force_restart || s.dim() >= cfg.max_outer) {
      if (result.restarts == cfg.max_restarts) break;
      s = restart(s);
      ++result.restarts;
      force_restart = false;
      if (observer) observer(s, Event::restarted);
    }

    const auto start = clock::now();
    const ExpandOutcome outcome = expand(s, a, cfg);
    const std::chrono::duration<double, std::milli> elapsed = clock::now() - start;
    ++result.iterations;

    IterationRecord rec;
    rec.outer = result.iterations;
    rec.subspace_dim = s.dim();
    rec.lambda = s.ritz_value;
    rec.resid_norm = norm2(s.residual);
    rec.kind = cfg.strategy.kind;
    rec.wall_ms = elapsed.count();
    rec.fallback = outcome.fallback;
    rec.skipped = outcome.skipped;
    result.history.records.push_back(rec);
    if (observer) observer(s, Event::expanded);

    if (outcome.skipped) force_restart = true;
    done = converged();
  }

  result.converged = done;
  result.eigenvalue = s.ritz_value;
  result.eigenvector = s.ritz_vector;
  return result;
}

Vector rqi_direction(const Matrix& a, Scalar lambda, const Vector& x) {
  if (!a.square() || a.rows() != x.size()) throw DimensionMismatch("rqi_direction: size mismatch");
  return normalized(corrections::shifted_solve(a, lambda, x));
}

} // namespace subeig::driver
