#include "subeig/matio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "subeig/random.hpp"

namespace subeig::matio {

namespace {

constexpr std::size_t kMaxDense = 2000;

const char* kind_name(MtxError::Kind kind) {
  switch (kind) {
    case MtxError::Kind::malformed_banner: return "malformed banner";
    case MtxError::Kind::unsupported: return "unsupported format";
    case MtxError::Kind::malformed_size: return "malformed size line";
    case MtxError::Kind::too_large: return "matrix too large for dense storage";
    case MtxError::Kind::malformed_entry: return "malformed entry";
    case MtxError::Kind::index_out_of_range: return "index out of range";
    case MtxError::Kind::duplicate_entry: return "duplicate entry";
    case MtxError::Kind::truncated: return "truncated body";
  }
  return "error";
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool blank_or_comment(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '%';
}

MtxHeader parse_banner(const std::string& line) {
  std::istringstream is(line);
  std::string tag, object, format, field, symmetry, extra;
  is >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket" || symmetry.empty() || (is >> extra)) {
    throw MtxError(MtxError::Kind::malformed_banner, 1, line);
  }
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);

  MtxHeader h;
  if (object != "matrix") throw MtxError(MtxError::Kind::unsupported, 1, "object " + object);

  if (format == "coordinate") h.format = MtxFormat::coordinate;
  else if (format == "array") h.format = MtxFormat::array;
  else throw MtxError(MtxError::Kind::malformed_banner, 1, "format " + format);

  if (field == "real") h.field = MtxField::real;
  else if (field == "complex") h.field = MtxField::complex;
  else if (field == "integer") h.field = MtxField::integer;
  else if (field == "pattern") h.field = MtxField::pattern;
  else throw MtxError(MtxError::Kind::malformed_banner, 1, "field " + field);

  if (symmetry == "general") h.symmetry = MtxSymmetry::general;
  else if (symmetry == "symmetric") h.symmetry = MtxSymmetry::symmetric;
  else if (symmetry == "skew-symmetric") h.symmetry = MtxSymmetry::skew_symmetric;
  else if (symmetry == "hermitian") h.symmetry = MtxSymmetry::hermitian;
  else throw MtxError(MtxError::Kind::malformed_banner, 1, "symmetry " + symmetry);

  if (h.field == MtxField::pattern) {
    throw MtxError(MtxError::Kind::unsupported, 1, "pattern matrices carry no values");
  }
  if (h.symmetry == MtxSymmetry::hermitian && h.field != MtxField::complex) {
    throw MtxError(MtxError::Kind::unsupported, 1, "hermitian symmetry requires a complex field");
  }
  if (h.format == MtxFormat::array && h.field == MtxField::pattern) {
    throw MtxError(MtxError::Kind::unsupported, 1, "array pattern");
  }
  return h;
}

struct Reader {
  std::istream& in;
  std::size_t line_no = 1;  // the banner was line 1
  std::string line;

  // Next non-comment, non-blank line; false at end of input.
  bool next() {
    while (std::getline(in, line)) {
      ++line_no;
      if (!blank_or_comment(line)) return true;
    }
    return false;
  }
};

bool read_double(std::istringstream& is, double& v) {
  std::string tok;
  if (!(is >> tok)) return false;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  return ec == std::errc() && ptr == last;
}

Scalar read_value(std::istringstream& is, const MtxHeader& h, std::size_t line_no) {
  double re = 0.0;
  double im = 0.0;
  if (!read_double(is, re)) throw MtxError(MtxError::Kind::malformed_entry, line_no, "value");
  if (h.field == MtxField::complex && !read_double(is, im)) {
    throw MtxError(MtxError::Kind::malformed_entry, line_no, "imaginary part");
  }
  std::string extra;
  if (is >> extra) throw MtxError(MtxError::Kind::malformed_entry, line_no, "trailing token " + extra);
  return {re, im};
}

// Writes a stored entry and its mirror image.
void place(Matrix& a, const MtxHeader& h, std::size_t i, std::size_t j, Scalar v) {
  a(i, j) = v;
  if (i == j) return;
  switch (h.symmetry) {
    case MtxSymmetry::general: break;
    case MtxSymmetry::symmetric: a(j, i) = v; break;
    case MtxSymmetry::skew_symmetric: a(j, i) = -v; break;
    case MtxSymmetry::hermitian: a(j, i) = std::conj(v); break;
  }
}

} // namespace

MtxError::MtxError(Kind kind, std::size_t line, const std::string& detail)
    : Error("matrix market line " + std::to_string(line) + ": " + kind_name(kind) +
            (detail.empty() ? "" : " (" + detail + ")")),
      kind_(kind),
      line_(line) {}

ParsedMatrix parse_matrix_market(std::istream& in) {
  std::string banner;
  if (!std::getline(in, banner)) throw MtxError(MtxError::Kind::malformed_banner, 1, "empty input");
  if (!banner.empty() && banner.back() == '\r') banner.pop_back();
  const MtxHeader h = parse_banner(banner);

  Reader r{in, 1, {}};
  if (!r.next()) throw MtxError(MtxError::Kind::truncated, r.line_no, "missing size line");

  std::istringstream size_line(r.line);
  long long rows = -1, cols = -1, nnz = -1;
  std::string extra;
  size_line >> rows >> cols;
  if (h.format == MtxFormat::coordinate) size_line >> nnz;
  if (!size_line || rows <= 0 || cols <= 0 || (h.format == MtxFormat::coordinate && nnz < 0) ||
      (size_line >> extra)) {
    throw MtxError(MtxError::Kind::malformed_size, r.line_no, r.line);
  }
  if (h.symmetry != MtxSymmetry::general && rows != cols) {
    throw MtxError(MtxError::Kind::malformed_size, r.line_no, "symmetric storage needs a square matrix");
  }
  if (rows > static_cast<long long>(kMaxDense) || cols > static_cast<long long>(kMaxDense)) {
    throw MtxError(MtxError::Kind::too_large, r.line_no, r.line);
  }
  const auto m = static_cast<std::size_t>(rows);
  const auto n = static_cast<std::size_t>(cols);
  Matrix a(m, n);

  if (h.format == MtxFormat::coordinate) {
    std::unordered_set<std::size_t> seen;
    for (long long e = 0; e < nnz; ++e) {
      if (!r.next()) throw MtxError(MtxError::Kind::truncated, r.line_no, "expected " + std::to_string(nnz) + " entries");
      std::istringstream is(r.line);
      long long i = 0, j = 0;
      if (!(is >> i >> j)) throw MtxError(MtxError::Kind::malformed_entry, r.line_no, r.line);
      if (i < 1 || j < 1 || i > rows || j > cols) {
        throw MtxError(MtxError::Kind::index_out_of_range, r.line_no, r.line);
      }
      auto ui = static_cast<std::size_t>(i - 1);
      auto uj = static_cast<std::size_t>(j - 1);
      if (h.symmetry != MtxSymmetry::general && ui < uj) {
        // Symmetric storage keeps the lower triangle; accept the upper one by transposing.
        std::swap(ui, uj);
      }
      if (h.symmetry == MtxSymmetry::skew_symmetric && ui == uj) {
        throw MtxError(MtxError::Kind::malformed_entry, r.line_no, "diagonal entry in skew-symmetric storage");
      }
      if (!seen.insert(uj * m + ui).second) {
        throw MtxError(MtxError::Kind::duplicate_entry, r.line_no, r.line);
      }
      Scalar v = read_value(is, h, r.line_no);
      if (h.symmetry == MtxSymmetry::hermitian && ui == uj && v.imag() != 0.0) {
        throw MtxError(MtxError::Kind::malformed_entry, r.line_no, "non-real hermitian diagonal");
      }
      if (h.symmetry != MtxSymmetry::general && static_cast<long long>(ui) + 1 != i) {
        // The entry was given above the diagonal: store its mirror consistently.
        if (h.symmetry == MtxSymmetry::skew_symmetric) v = -v;
        if (h.symmetry == MtxSymmetry::hermitian) v = std::conj(v);
      }
      place(a, h, ui, uj, v);
    }
  } else {
    // Column-major body; symmetric kinds store the lower triangle only.
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t first = 0;
      if (h.symmetry == MtxSymmetry::symmetric || h.symmetry == MtxSymmetry::hermitian) first = j;
      if (h.symmetry == MtxSymmetry::skew_symmetric) first = j + 1;
      for (std::size_t i = first; i < m; ++i) {
        if (!r.next()) throw MtxError(MtxError::Kind::truncated, r.line_no, "array body ended early");
        std::istringstream is(r.line);
        place(a, h, i, j, read_value(is, h, r.line_no));
      }
    }
  }
  if (r.next()) throw MtxError(MtxError::Kind::malformed_entry, r.line_no, "data after the last entry");

  if (h.symmetry == MtxSymmetry::symmetric || h.symmetry == MtxSymmetry::hermitian) {
    a.detect_hermitian();
  }
  return {std::move(a), h};
}

ParsedMatrix parse_matrix_market(std::string_view text) {
  std::istringstream is{std::string(text)};
  return parse_matrix_market(is);
}

ParsedMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open matrix file " + path);
  try {
    return parse_matrix_market(in);
  } catch (const MtxError& e) {
    throw MtxError(e.kind(), e.line(), path);
  }
}

void write_matrix_market(std::ostream& out, const Matrix& a) {
  const bool real = std::all_of(a.data(), a.data() + a.rows() * a.cols(),
                                [](Scalar v) { return v.imag() == 0.0; });
  std::size_t nnz = 0;
  for (std::size_t k = 0; k < a.rows() * a.cols(); ++k) nnz += a.data()[k] != Scalar{0.0};

  out << "%%MatrixMarket matrix coordinate " << (real ? "real" : "complex") << " general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << nnz << '\n';
  char buf[64];
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
      const Scalar v = a(i, j);
      if (v == Scalar{0.0}) continue;
      out << i + 1 << ' ' << j + 1;
      std::snprintf(buf, sizeof buf, " %.17g", v.real());
      out << buf;
      if (!real) {
        std::snprintf(buf, sizeof buf, " %.17g", v.imag());
        out << buf;
      }
      out << '\n';
    }
  }
}

Matrix symmetrize(const Matrix& a) {
  if (!a.square()) throw DimensionMismatch("symmetrize: matrix is not square");
  const std::size_t n = a.rows();
  Matrix s(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    s(j, j) = a(j, j).real();
    for (std::size_t i = j + 1; i < n; ++i) {
      const Scalar v = 0.5 * (a(i, j) + std::conj(a(j, i)));
      s(i, j) = v;
      s(j, i) = std::conj(v);
    }
  }
  s.mark_hermitian();
  return s;
}

// ---------------------------------------------------------------- models ---

std::string to_string(ModelName name) {
  switch (name) {
    case ModelName::laplace1d: return "laplace1d";
    case ModelName::laplace2d: return "laplace2d";
    case ModelName::convdiff2d: return "convdiff2d";
    case ModelName::random: return "random";
    case ModelName::tridiag: return "tridiag";
  }
  return "unknown";
}

ModelSpec parse_model_spec(std::string_view text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (parts.size() < 2) throw InvalidArgument("model spec must look like name:n[:params]");

  ModelSpec spec;
  const std::string& name = parts[0];
  if (name == "laplace1d") spec.name = ModelName::laplace1d;
  else if (name == "laplace2d") spec.name = ModelName::laplace2d;
  else if (name == "convdiff2d") spec.name = ModelName::convdiff2d;
  else if (name == "random") spec.name = ModelName::random;
  else if (name == "tridiag") spec.name = ModelName::tridiag;
  else throw InvalidArgument("unknown model '" + name + "'");

  std::size_t n = 0;
  auto [p, ec] = std::from_chars(parts[1].data(), parts[1].data() + parts[1].size(), n);
  if (ec != std::errc() || p != parts[1].data() + parts[1].size()) {
    throw InvalidArgument("model size '" + parts[1] + "' is not an integer");
  }
  spec.n = n;
  for (std::size_t k = 2; k < parts.size(); ++k) {
    double v = 0.0;
    auto [q, ec2] = std::from_chars(parts[k].data(), parts[k].data() + parts[k].size(), v);
    if (ec2 != std::errc() || q != parts[k].data() + parts[k].size()) {
      throw InvalidArgument("model parameter '" + parts[k] + "' is not a number");
    }
    spec.params.push_back(v);
  }
  return spec;
}

namespace {

std::size_t grid_side(std::size_t n) {
  auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  if (side * side != n) {
    throw InvalidArgument("2d models need a perfect-square n, got " + std::to_string(n));
  }
  return side;
}

// Kronecker sum T_x (x) I + I (x) T_y on a side x side grid; x is the fast index.
Matrix grid_operator(std::size_t side, double convection) {
  const std::size_t n = side * side;
  Matrix a(n, n);
  for (std::size_t y = 0; y < side; ++y) {
    for (std::size_t x = 0; x < side; ++x) {
      const std::size_t k = y * side + x;
      a(k, k) = 4.0 + convection;
      if (x > 0) a(k, k - 1) = -1.0 - convection;
      if (x + 1 < side) a(k, k + 1) = -1.0;
      if (y > 0) a(k, k - side) = -1.0;
      if (y + 1 < side) a(k, k + side) = -1.0;
    }
  }
  return a;
}

Matrix tridiagonal(std::size_t n, double sub, double diag, double super) {
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = diag;
    if (i > 0) a(i, i - 1) = sub;
    if (i + 1 < n) a(i, i + 1) = super;
  }
  return a;
}

} // namespace

Matrix gen_model(const ModelSpec& spec, std::uint64_t seed) {
  if (spec.n < 2 || spec.n > kMaxDense) {
    throw InvalidArgument("model size must lie in [2, 2000], got " + std::to_string(spec.n));
  }
  auto param = [&](std::size_t k, double fallback) {
    return k < spec.params.size() ? spec.params[k] : fallback;
  };

  Matrix a;
  switch (spec.name) {
    case ModelName::laplace1d:
      a = tridiagonal(spec.n, -1.0, 2.0, -1.0);
      break;
    case ModelName::laplace2d:
      a = grid_operator(grid_side(spec.n), 0.0);
      break;
    case ModelName::convdiff2d:
      a = grid_operator(grid_side(spec.n), param(0, 1.0));
      break;
    case ModelName::random: {
      a = Matrix(spec.n, spec.n);
      SplitMix64 rng(seed);
      Scalar* d = a.data_mut();
      for (std::size_t k = 0; k < spec.n * spec.n; ++k) d[k] = rng.uniform(-1.0, 1.0);
      break;
    }
    case ModelName::tridiag:
      if (spec.params.size() != 3) throw InvalidArgument("tridiag needs three parameters: sub, diag, super");
      a = tridiagonal(spec.n, spec.params[0], spec.params[1], spec.params[2]);
      break;
  }
  a.detect_hermitian();
  return a;
}

} // namespace subeig::matio
