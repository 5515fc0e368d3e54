#pragma once

#include <vector>

#include "subeig/dense.hpp"

namespace subeig {

/// Full eigendecomposition of a small dense matrix.
///
/// Column k of `vectors` has unit norm and pairs with values[k]; its largest
/// entry is rotated to be real and positive.
struct EigDecomposition {
  std::vector<Scalar> values;
  Matrix vectors;
  bool converged = false;
};

/// The QR iteration ran 30 n sweeps without a deflation. The partial result
/// holds whatever diagonal had been reached, with converged == false.
class NonConvergence : public Error {
public:
  NonConvergence(EigDecomposition partial, const std::string& what)
      : Error(what), partial_(std::move(partial)) {}

  const EigDecomposition& partial() const noexcept { return partial_; }

private:
  EigDecomposition partial_;
};

/// Eigenvalues and eigenvectors of a square matrix (n <= 2000).
///
/// Hermitian-flagged input goes through cyclic Jacobi rotations and returns a
/// real spectrum. Anything else is reduced to Hessenberg form and triangularized
/// by single-shift (Wilkinson) QR with deflation; eigenvectors then come from
/// inverse iteration on the triangular factor.
EigDecomposition small_eig(const Matrix& h);

} // namespace subeig
