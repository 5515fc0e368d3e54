#pragma once

// Elementary complex Householder reflectors H = I - tau v v*, v = [1; tail].
// Shared by the least-squares solver and the Hessenberg reduction.

#include <cmath>
#include <span>

#include "subeig/dense.hpp"

namespace subeig::detail {

struct Reflector {
  Scalar tau{0.0};
  double beta = 0.0;
};

/// Builds H with H* [alpha; x] = [beta; 0], beta real. On return alpha holds
/// beta and x holds the tail of v.
inline Reflector make_reflector(Scalar& alpha, std::span<Scalar> x) {
  const double xnorm = norm2(x);
  if (xnorm == 0.0 && alpha.imag() == 0.0) {
    return {Scalar{0.0}, alpha.real()};
  }
  const double mag = std::hypot(std::hypot(alpha.real(), alpha.imag()), xnorm);
  const double beta = alpha.real() >= 0.0 ? -mag : mag;
  const Scalar tau = (beta - alpha) / beta;
  const Scalar scale = 1.0 / (alpha - beta);
  for (auto& xi : x) xi *= scale;
  alpha = beta;
  return {tau, beta};
}

/// c <- (I - t v v*) c with v = [1; tail], t = tau or conj(tau).
inline void apply_reflector(Scalar t, std::span<const Scalar> tail, std::span<Scalar> c) {
  if (t == Scalar{0.0}) return;
  Scalar w = c[0];
  for (std::size_t i = 0; i < tail.size(); ++i) w += std::conj(tail[i]) * c[i + 1];
  const Scalar tw = t * w;
  c[0] -= tw;
  for (std::size_t i = 0; i < tail.size(); ++i) c[i + 1] -= tw * tail[i];
}

} // namespace subeig::detail
