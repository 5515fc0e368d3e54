#include "subeig/experiment.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>

#include "subeig/eig.hpp"
#include "subeig/random.hpp"

namespace subeig::experiment {

namespace {

using corrections::StrategyKind;

bool is_newton(const corrections::StrategyConfig& s) {
  return s.kind == StrategyKind::n1 || s.kind == StrategyKind::n2;
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  return out;
}

} // namespace

InitialGuess make_initial(const Matrix& a, driver::SelectionMode mode, double eps, std::uint64_t seed) {
  if (!a.square() || a.rows() == 0) throw DimensionMismatch("make_initial: A must be square and nonempty");
  if (!(eps >= 0.0)) throw InvalidArgument("make_initial: eps must be nonnegative");

  const EigDecomposition eig = small_eig(a);
  const std::size_t k = driver::select_index(eig.values, mode);
  Vector x = normalized(eig.vectors.column_vector(k));
  if (eps > 0.0) {
    SplitMix64 rng(seed);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += eps * rng.uniform01();
    x = normalized(x);
  }
  return {std::move(x), eig.values[k]};
}

bool RunReport::all_converged() const {
  for (const auto& r : runs) {
    if (!r.result.converged) return false;
  }
  return !runs.empty();
}

std::uint64_t hash_vector(const Vector& v) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto* bytes = reinterpret_cast<const unsigned char*>(v.data());
  for (std::size_t i = 0; i < v.size() * sizeof(Scalar); ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

Matrix load_matrix(const ExperimentSpec& spec) {
  Matrix a;
  if (const auto* path = std::get_if<std::string>(&spec.source)) {
    try {
      a = matio::read_matrix_market(*path).matrix;
    } catch (const matio::MtxError& e) {
      throw Error(*path + ":" + std::to_string(e.line()) + ": " + e.what());
    }
  } else {
    a = matio::gen_model(std::get<matio::ModelSpec>(spec.source), spec.seed);
  }
  if (!a.square()) throw DimensionMismatch("the eigenproblem needs a square matrix");
  if (spec.symmetrize) a = matio::symmetrize(a);
  return a;
}

RunReport run_experiment(const ExperimentSpec& spec) {
  return run_experiment(spec, load_matrix(spec));
}

RunReport run_experiment(const ExperimentSpec& spec, const Matrix& a) {
  if (spec.strategies.empty()) throw InvalidArgument("no strategies requested");
  const std::size_t n = a.rows();
  if (n < 2) throw InvalidArgument("the matrix must be at least 2 x 2");

  RunReport report;
  report.n = n;
  report.hermitian = a.is_hermitian();
  report.perturb_eps = spec.perturb_eps.value_or(report.hermitian ? 5e-2 : 1e-2);

  for (const auto& s : spec.strategies) {
    if (is_newton(s) && !report.hermitian && !spec.allow_nonhermitian_newton) {
      throw NotHermitian("method '" + s.label() +
                         "' requires a Hermitian matrix; pass --symmetrize or "
                         "--allow-nonhermitian-newton");
    }
  }

  const InitialGuess start = make_initial(a, spec.mode, report.perturb_eps, spec.seed);
  report.reference = start.reference;
  report.x0_hash = hash_vector(start.x0);

  driver::SolverConfig cfg;
  cfg.mode = spec.mode;
  cfg.tol = spec.tol;
  cfg.max_outer = std::min(spec.max_outer, n);
  cfg.max_restarts = spec.max_restarts;

  for (const auto& s : spec.strategies) {
    cfg.strategy = s;
    if (is_newton(s)) cfg.strategy.allow_nonhermitian = spec.allow_nonhermitian_newton;
    const Vector x0 = start.x0;
    if (hash_vector(x0) != report.x0_hash) throw Error("initial vector changed between strategies");

    StrategyRun run{cfg.strategy, driver::run(a, x0, cfg), 0.0};
    run.eigenvalue_error = std::abs(run.result.eigenvalue - start.reference);
    report.runs.push_back(std::move(run));
  }
  return report;
}

void emit_csv(const RunReport& report, std::ostream& out, bool record_timing) {
  out << "strategy,outer_iter,subspace_dim,lambda_re,lambda_im,resid_norm,wall_ms\n";
  auto row = [&](const std::string& label, const driver::IterationRecord& r) {
    out << label << ',' << r.outer << ',' << r.subspace_dim << ',' << g17(r.lambda.real()) << ','
        << g17(r.lambda.imag()) << ',' << g17(r.resid_norm) << ','
        << g17(record_timing ? r.wall_ms : 0.0) << '\n';
  };
  for (const auto& run : report.runs) {
    const std::string label = run.strategy.label();
    row(label, run.result.history.initial);
    for (const auto& r : run.result.history.records) row(label, r);
  }
}

void write_csv(const RunReport& report, const std::string& path, bool record_timing) {
  auto out = open_out(path);
  emit_csv(report, out, record_timing);
  if (!out) throw Error("write to '" + path + "' failed");
}

void emit_plot_script(const RunReport& report, const std::string& csv_path, std::ostream& out) {
  out << "set datafile separator \",\"\n"
      << "set logscale y\n"
      << "set format y \"10^{%L}\"\n"
      << "set xlabel \"outer iteration\"\n"
      << "set ylabel \"residual norm\"\n"
      << "set key top right\n"
      << "csv = \"" << csv_path << "\"\n"
      << "plot";
  for (std::size_t i = 0; i < report.runs.size(); ++i) {
    const std::string label = report.runs[i].strategy.label();
    out << (i == 0 ? " " : ", \\\n     ") << "csv every ::1 using 2:(strcol(1) eq \"" << label
        << "\" ? $6 : 1/0) with linespoints title \"" << label << "\"";
  }
  out << '\n';
}

void write_plot_script(const RunReport& report, const std::string& csv_path, const std::string& path) {
  auto out = open_out(path);
  emit_plot_script(report, csv_path, out);
  if (!out) throw Error("write to '" + path + "' failed");
}

std::vector<corrections::StrategyConfig> parse_method_list(std::string_view list) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const std::size_t comma = list.find(',', pos);
    const std::size_t end = comma == std::string_view::npos ? list.size() : comma;
    tokens.push_back(list.substr(pos, end - pos));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }

  std::vector<corrections::StrategyConfig> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::string token(tokens[i]);
    if (token.empty()) throw InvalidArgument("empty entry in method list '" + std::string(list) + "'");
    if (token.starts_with("general:") && token.find(':', 8) == std::string::npos) {
      if (i + 1 == tokens.size()) throw InvalidArgument("general needs two parameters: general:a,b");
      token += ',';
      token += tokens[++i];
    }
    out.push_back(corrections::parse_strategy(token));
  }
  if (out.empty()) throw InvalidArgument("empty method list");
  return out;
}

} // namespace subeig::experiment
