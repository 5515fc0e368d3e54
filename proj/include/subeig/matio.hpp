#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "subeig/dense.hpp"

namespace subeig::matio {

enum class MtxFormat { coordinate, array };
enum class MtxField { real, complex, integer, pattern };
enum class MtxSymmetry { general, symmetric, skew_symmetric, hermitian };

struct MtxHeader {
  MtxFormat format = MtxFormat::coordinate;
  MtxField field = MtxField::real;
  MtxSymmetry symmetry = MtxSymmetry::general;
};

/// Parse failure with the 1-based line it was detected on.
class MtxError : public Error {
public:
  enum class Kind {
    malformed_banner,  // first line is not a valid %%MatrixMarket banner
    unsupported,       // valid banner, combination we do not read
    malformed_size,
    too_large,         // dense expansion beyond 2000 rows or columns
    malformed_entry,
    index_out_of_range,
    duplicate_entry,
    truncated,         // fewer entries than the size line announced
  };

  MtxError(Kind kind, std::size_t line, const std::string& detail);

  Kind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }

private:
  Kind kind_;
  std::size_t line_;
};

struct ParsedMatrix {
  Matrix matrix;
  MtxHeader header;
};

/// Reads a Matrix Market file into a dense matrix. Symmetric, skew-symmetric
/// and Hermitian storage is mirrored to the full matrix and the Hermitian
/// flag is set where the storage implies it.
ParsedMatrix parse_matrix_market(std::istream& in);
ParsedMatrix parse_matrix_market(std::string_view text);
ParsedMatrix read_matrix_market(const std::string& path);

/// Serializes as `coordinate complex general` (or `real` when every entry is
/// real) with 17 significant digits. Used to round-trip test the parser.
void write_matrix_market(std::ostream& out, const Matrix& a);

/// (A + A*) / 2, entry by entry; the result carries the Hermitian flag.
Matrix symmetrize(const Matrix& a);

enum class ModelName { laplace1d, laplace2d, convdiff2d, random, tridiag };

struct ModelSpec {
  ModelName name = ModelName::laplace1d;
  std::size_t n = 0;
  std::vector<double> params;
};

/// Parses "name:n[:p0[:p1...]]", e.g. "convdiff2d:225:1.0".
ModelSpec parse_model_spec(std::string_view text);
std::string to_string(ModelName name);

/// Deterministic desk-scale test matrices.
///
///   laplace1d   tridiag(-1, 2, -1)
///   laplace2d   5-point Laplacian on a sqrt(n) x sqrt(n) grid
///   convdiff2d  laplace2d plus params[0] times a first-order upwind
///               x-derivative (nonsymmetric unless params[0] == 0)
///   random      i.i.d. uniform[-1, 1] entries from SplitMix64(seed)
///   tridiag     tridiag(params[0], params[1], params[2])
Matrix gen_model(const ModelSpec& spec, std::uint64_t seed = 0);

} // namespace subeig::matio
