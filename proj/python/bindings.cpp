#include <optional>
#include <string>

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "subeig/corrections.hpp"
#include "subeig/driver.hpp"
#include "subeig/eig.hpp"
#include "subeig/experiment.hpp"
#include "subeig/matio.hpp"

namespace py = pybind11;
using namespace subeig;

namespace {

using CArray = py::array_t<Scalar, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const CArray& arr, std::optional<bool> hermitian) {
  if (arr.ndim() != 2) throw py::value_error("expected a 2-d array");
  const auto r = arr.unchecked<2>();
  Matrix m(r.shape(0), r.shape(1));
  for (py::ssize_t j = 0; j < r.shape(1); ++j) {
    for (py::ssize_t i = 0; i < r.shape(0); ++i) m(i, j) = r(i, j);
  }
  if (!hermitian.has_value()) m.detect_hermitian();
  else if (*hermitian) m.mark_hermitian();
  return m;
}

Vector to_vector(const CArray& arr) {
  if (arr.ndim() != 1) throw py::value_error("expected a 1-d array");
  return Vector(std::vector<Scalar>(arr.data(), arr.data() + arr.size()));
}

py::array_t<Scalar> from_matrix(const Matrix& m) {
  py::array_t<Scalar> out({m.rows(), m.cols()});
  auto w = out.mutable_unchecked<2>();
  for (std::size_t j = 0; j < m.cols(); ++j) {
    for (std::size_t i = 0; i < m.rows(); ++i) w(i, j) = m(i, j);
  }
  return out;
}

py::array_t<Scalar> from_vector(const Vector& v) {
  py::array_t<Scalar> out(std::vector<py::ssize_t>{static_cast<py::ssize_t>(v.size())});
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::dict record_dict(const driver::IterationRecord& r) {
  py::dict d;
  d["outer"] = r.outer;
  d["subspace_dim"] = r.subspace_dim;
  d["lambda"] = r.lambda;
  d["resid_norm"] = r.resid_norm;
  d["wall_ms"] = r.wall_ms;
  d["fallback"] = r.fallback;
  d["skipped"] = r.skipped;
  return d;
}

} // namespace

PYBIND11_MODULE(_subeig, m) {
  m.doc() = "Dense subspace eigensolver with interchangeable correction equations";

  py::register_exception<Error>(m, "SubeigError", PyExc_ValueError);

  m.def(
      "small_eig",
      [](const CArray& a, std::optional<bool> hermitian) {
        const auto eig = small_eig(to_matrix(a, hermitian));
        return py::make_tuple(from_vector(Vector(eig.values)), from_matrix(eig.vectors));
      },
      py::arg("a"), py::arg("hermitian") = py::none(),
      "Eigenvalues and unit eigenvectors of a small dense matrix. hermitian=None detects symmetry.");

  m.def(
      "gen_model",
      [](const std::string& spec, std::uint64_t seed) {
        return from_matrix(matio::gen_model(matio::parse_model_spec(spec), seed));
      },
      py::arg("spec"), py::arg("seed") = 0);

  m.def(
      "read_mtx", [](const std::string& path) { return from_matrix(matio::read_matrix_market(path).matrix); },
      py::arg("path"));
  m.def(
      "parse_mtx", [](const std::string& text) { return from_matrix(matio::parse_matrix_market(text).matrix); },
      py::arg("text"));
  m.def(
      "symmetrize", [](const CArray& a) { return from_matrix(matio::symmetrize(to_matrix(a, false))); },
      py::arg("a"));

  m.def(
      "rayleigh_quotient",
      [](const CArray& a, const CArray& x) { return corrections::rayleigh_quotient(to_matrix(a, false), to_vector(x)); },
      py::arg("a"), py::arg("x"));

  m.def(
      "correction",
      [](const CArray& a, const CArray& x, const std::string& method, bool enforce_orth, bool allow_nonhermitian) {
        const Matrix mat = to_matrix(a, std::nullopt);
        auto cfg = corrections::parse_strategy(method);
        cfg.enforce_orth = enforce_orth;
        cfg.allow_nonhermitian = allow_nonhermitian;
        const auto in = corrections::CorrectionInput::from_vector(mat, to_vector(x));
        return from_vector(corrections::solve(in, cfg));
      },
      py::arg("a"), py::arg("x"), py::arg("method") = "jd", py::arg("enforce_orth") = false,
      py::arg("allow_nonhermitian") = false,
      "Correction vector t for the unit Ritz vector x / |x| of a.");

  m.def(
      "make_initial",
      [](const CArray& a, const std::string& mode, double eps, std::uint64_t seed) {
        const auto g = experiment::make_initial(to_matrix(a, std::nullopt), driver::parse_mode(mode), eps, seed);
        return py::make_tuple(from_vector(g.x0), g.reference);
      },
      py::arg("a"), py::arg("mode") = "SR", py::arg("eps") = 0.0, py::arg("seed") = 0);

  m.def(
      "run",
      [](const CArray& a, const CArray& x0, const std::string& method, const std::string& mode, double tol,
         std::size_t max_outer, std::size_t max_restarts, bool allow_nonhermitian) {
        const Matrix mat = to_matrix(a, std::nullopt);
        driver::SolverConfig cfg;
        cfg.strategy = corrections::parse_strategy(method);
        cfg.strategy.allow_nonhermitian = allow_nonhermitian;
        cfg.mode = driver::parse_mode(mode);
        cfg.tol = tol;
        cfg.max_outer = std::min(max_outer, mat.rows());
        cfg.max_restarts = max_restarts;

        const Vector start = to_vector(x0);
        driver::EigResult res;
        {
          py::gil_scoped_release release;
          res = driver::run(mat, start, cfg);
        }
        py::list history;
        history.append(record_dict(res.history.initial));
        for (const auto& r : res.history.records) history.append(record_dict(r));

        py::dict out;
        out["converged"] = res.converged;
        out["eigenvalue"] = res.eigenvalue;
        out["eigenvector"] = from_vector(res.eigenvector);
        out["iterations"] = res.iterations;
        out["restarts"] = res.restarts;
        out["history"] = history;
        return out;
      },
      py::arg("a"), py::arg("x0"), py::arg("method") = "jd", py::arg("mode") = "SR", py::arg("tol") = 1e-10,
      py::arg("max_outer") = 30, py::arg("max_restarts") = 20, py::arg("allow_nonhermitian") = false);
}
