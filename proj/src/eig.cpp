#include "subeig/eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "householder.hpp"
#include "subeig/random.hpp"

namespace subeig {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void fix_phase(std::span<Scalar> v) {
  std::size_t big = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[big])) big = i;
  }
  const double mag = std::abs(v[big]);
  if (mag == 0.0) return;
  const Scalar rot = std::conj(v[big]) / mag;
  for (auto& x : v) x *= rot;
  v[big] = std::abs(v[big]);
}

void normalize_in_place(std::span<Scalar> v) {
  const double nrm = norm2(v);
  if (nrm == 0.0) return;
  for (auto& x : v) x /= nrm;
}

// ------------------------------------------------------ Hermitian: Jacobi ---

EigDecomposition jacobi(const Matrix& h) {
  const std::size_t n = h.rows();
  std::vector<Scalar> a(h.data(), h.data() + n * n);
  std::vector<Scalar> v(n * n, Scalar{0.0});
  for (std::size_t i = 0; i < n; ++i) {
    v[i * n + i] = 1.0;
    a[i * n + i] = a[i * n + i].real();
  }
  auto at = [&](std::size_t i, std::size_t j) -> Scalar& { return a[j * n + i]; };

  const double fro = frobenius_norm(h);
  const int max_sweeps = 100;
  bool converged = n <= 1 || fro == 0.0;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    double off = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < j; ++i) off += std::norm(at(i, j));
    }
    if (std::sqrt(2.0 * off) <= kEps * fro) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Scalar apq = at(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double app = at(p, p).real();
        const double aqq = at(q, q).real();
        // Phase e^{-i phi} makes the pivot real; then a real symmetric Schur
        // rotation (c, s) annihilates it.
        const Scalar phase = std::conj(apq) / mag;
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Scalar sp = s * phase;
        const Scalar cp = c * phase;

        Scalar* colp = &a[p * n];
        Scalar* colq = &a[q * n];
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const Scalar akp = colp[k];
          const Scalar akq = colq[k];
          colp[k] = c * akp - sp * akq;
          colq[k] = s * akp + cp * akq;
          a[k * n + p] = std::conj(colp[k]);
          a[k * n + q] = std::conj(colq[k]);
        }
        at(p, p) = app - t * mag;
        at(q, q) = aqq + t * mag;
        at(p, q) = 0.0;
        at(q, p) = 0.0;

        Scalar* vp = &v[p * n];
        Scalar* vq = &v[q * n];
        for (std::size_t k = 0; k < n; ++k) {
          const Scalar vkp = vp[k];
          const Scalar vkq = vq[k];
          vp[k] = c * vkp - sp * vkq;
          vq[k] = s * vkp + cp * vkq;
        }
      }
    }
  }

  EigDecomposition out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  Scalar* vec = out.vectors.data_mut();
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = at(k, k).real();
    std::span<Scalar> col(vec + k * n, n);
    std::copy_n(&v[k * n], n, col.begin());
    normalize_in_place(col);
    fix_phase(col);
  }
  out.converged = converged;
  if (!converged) {
    throw NonConvergence(std::move(out), "small_eig: Jacobi sweeps did not converge");
  }
  return out;
}

// ------------------------------------------------- General: Hessenberg QR ---

struct Schur {
  std::vector<Scalar> t;  // column-major n x n, upper triangular on success
  std::vector<Scalar> z;  // unitary Schur vectors
};

void hessenberg(std::size_t n, Schur& s) {
  auto& t = s.t;
  auto& z = s.z;
  std::vector<Scalar> tail;
  std::vector<Scalar> w(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    Scalar* colk = &t[k * n];
    std::span<Scalar> below(colk + k + 2, n - k - 2);
    const detail::Reflector h = detail::make_reflector(colk[k + 1], below);
    if (h.tau == Scalar{0.0}) continue;
    tail.assign(below.begin(), below.end());
    std::fill(below.begin(), below.end(), Scalar{0.0});

    const Scalar tc = std::conj(h.tau);
    for (std::size_t j = k + 1; j < n; ++j) {
      detail::apply_reflector(tc, tail, std::span<Scalar>(&t[j * n + k + 1], n - k - 1));
    }
    // Right application M <- M (I - tau v v*) on columns k+1..n-1.
    auto apply_right = [&](std::vector<Scalar>& m) {
      std::fill(w.begin(), w.end(), Scalar{0.0});
      axpy(1.0, std::span<const Scalar>(&m[(k + 1) * n], n), w);
      for (std::size_t l = 0; l < tail.size(); ++l) {
        axpy(tail[l], std::span<const Scalar>(&m[(k + 2 + l) * n], n), w);
      }
      axpy(-h.tau, w, std::span<Scalar>(&m[(k + 1) * n], n));
      for (std::size_t l = 0; l < tail.size(); ++l) {
        axpy(-h.tau * std::conj(tail[l]), w, std::span<Scalar>(&m[(k + 2 + l) * n], n));
      }
    };
    apply_right(t);
    apply_right(z);
  }
}

struct Givens {
  double c;
  Scalar s;
};

// G* [a; b] = [r; 0] with G* = [[c, s], [-conj(s), c]].
Givens make_givens(Scalar a, Scalar b) {
  const double ma = std::abs(a);
  const double mb = std::abs(b);
  if (mb == 0.0) return {1.0, Scalar{0.0}};
  if (ma == 0.0) return {0.0, Scalar{1.0}};
  const double rho = std::hypot(ma, mb);
  return {ma / rho, (a / ma) * std::conj(b) / rho};
}

Scalar wilkinson_shift(Scalar a, Scalar b, Scalar c, Scalar d) {
  const Scalar half = 0.5 * (a - d);
  const Scalar disc = std::sqrt(half * half + b * c);
  const Scalar mid = 0.5 * (a + d);
  const Scalar e1 = mid + disc;
  const Scalar e2 = mid - disc;
  return std::abs(e1 - d) <= std::abs(e2 - d) ? e1 : e2;
}

// Returns false when 30 n sweeps pass without a deflation.
bool schur_qr(std::size_t n, Schur& s) {
  auto& t = s.t;
  auto& z = s.z;
  auto at = [&](std::size_t i, std::size_t j) -> Scalar& { return t[j * n + i]; };
  auto abs1 = [](Scalar v) { return std::abs(v.real()) + std::abs(v.imag()); };

  std::vector<Givens> rot(n);
  const std::size_t budget = 30 * n;
  std::size_t since_deflation = 0;
  std::size_t hi = n - 1;
  while (hi > 0) {
    std::size_t lo = hi;
    while (lo > 0) {
      const double sub = abs1(at(lo, lo - 1));
      double diag = abs1(at(lo - 1, lo - 1)) + abs1(at(lo, lo));
      if (diag == 0.0) diag = 1.0;
      if (sub <= kEps * diag) {
        at(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      --hi;
      since_deflation = 0;
      continue;
    }
    if (++since_deflation > budget) return false;

    Scalar shift;
    if (since_deflation % 11 == 0) {
      // Exceptional shift to break cycles.
      shift = at(hi, hi) + 0.75 * std::abs(at(hi, hi - 1).real());
    } else {
      shift = wilkinson_shift(at(hi - 1, hi - 1), at(hi - 1, hi), at(hi, hi - 1), at(hi, hi));
    }

    for (std::size_t k = lo; k <= hi; ++k) at(k, k) -= shift;
    for (std::size_t k = lo; k < hi; ++k) {
      const Givens g = make_givens(at(k, k), at(k + 1, k));
      rot[k] = g;
      for (std::size_t j = k; j < n; ++j) {
        const Scalar x = at(k, j);
        const Scalar y = at(k + 1, j);
        at(k, j) = g.c * x + g.s * y;
        at(k + 1, j) = -std::conj(g.s) * x + g.c * y;
      }
      at(k + 1, k) = 0.0;
    }
    for (std::size_t k = lo; k < hi; ++k) {
      const Givens g = rot[k];
      const Scalar sc = std::conj(g.s);
      Scalar* ck = &t[k * n];
      Scalar* ck1 = &t[(k + 1) * n];
      for (std::size_t i = 0; i <= k + 1; ++i) {
        const Scalar x = ck[i];
        const Scalar y = ck1[i];
        ck[i] = g.c * x + sc * y;
        ck1[i] = -g.s * x + g.c * y;
      }
      Scalar* zk = &z[k * n];
      Scalar* zk1 = &z[(k + 1) * n];
      for (std::size_t i = 0; i < n; ++i) {
        const Scalar x = zk[i];
        const Scalar y = zk1[i];
        zk[i] = g.c * x + sc * y;
        zk1[i] = -g.s * x + g.c * y;
      }
    }
    for (std::size_t k = lo; k <= hi; ++k) at(k, k) += shift;
  }
  return true;
}

// Eigenvector of the upper triangular T for the eigenvalue T(k, k), by inverse
// iteration restricted to the leading (k+1) block. Zero pivots are replaced by
// a perturbation of size eps ||T||_F.
std::vector<Scalar> triangular_eigenvector(std::size_t n, const std::vector<Scalar>& t,
                                           std::size_t k, double norm_t) {
  auto at = [&](std::size_t i, std::size_t j) { return t[j * n + i]; };
  const double delta = norm_t > 0.0 ? kEps * norm_t : 1.0;
  constexpr double big = 1e150;

  SplitMix64 rng(0x5EEDULL + k);
  std::vector<Scalar> b(k + 1);
  for (auto& bi : b) bi = Scalar(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));

  std::vector<Scalar> zv(k + 1);
  Scalar mu = at(k, k);
  for (int attempt = 0; attempt < 3; ++attempt) {
    for (std::size_t i = k + 1; i-- > 0;) {
      Scalar s = b[i];
      for (std::size_t j = i + 1; j <= k; ++j) s -= at(i, j) * zv[j];
      Scalar d = at(i, i) - mu;
      if (std::abs(d) < delta) d = delta;
      zv[i] = s / d;
      if (std::abs(zv[i]) > big) {
        for (std::size_t j = i; j <= k; ++j) zv[j] /= big;
        for (std::size_t j = 0; j < i; ++j) b[j] /= big;
      }
    }
    normalize_in_place(zv);
    double res = 0.0;
    for (std::size_t i = 0; i <= k; ++i) {
      Scalar s = (at(i, i) - at(k, k)) * zv[i];
      for (std::size_t j = i + 1; j <= k; ++j) s += at(i, j) * zv[j];
      res += std::norm(s);
    }
    const bool finite = std::all_of(zv.begin(), zv.end(),
                                    [](Scalar v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
    if (finite && std::sqrt(res) <= 1e-12 * std::max(norm_t, 1e-300)) break;
    // Breakdown: restart from the current iterate with a perturbed shift.
    b = finite ? zv : std::vector<Scalar>(k + 1, Scalar{1.0});
    mu = at(k, k) + Scalar(delta, delta) * static_cast<double>(attempt + 1);
  }
  return zv;
}

EigDecomposition general(const Matrix& h) {
  const std::size_t n = h.rows();
  Schur s;
  s.t.assign(h.data(), h.data() + n * n);
  s.z.assign(n * n, Scalar{0.0});
  for (std::size_t i = 0; i < n; ++i) s.z[i * n + i] = 1.0;

  hessenberg(n, s);
  const bool ok = n <= 1 || schur_qr(n, s);

  EigDecomposition out;
  out.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.values[k] = s.t[k * n + k];
  out.vectors = Matrix(n, n);
  Scalar* vec = out.vectors.data_mut();

  if (!ok) {
    std::copy(s.z.begin(), s.z.end(), vec);
    out.converged = false;
    std::ostringstream os;
    os << "small_eig: QR iteration exceeded " << 30 * n << " sweeps without deflation";
    throw NonConvergence(std::move(out), os.str());
  }

  const double norm_t = norm2(std::span<const Scalar>(s.t));
  for (std::size_t k = 0; k < n; ++k) {
    const std::vector<Scalar> zk = triangular_eigenvector(n, s.t, k, norm_t);
    std::span<Scalar> col(vec + k * n, n);
    for (std::size_t j = 0; j <= k; ++j) axpy(zk[j], std::span<const Scalar>(&s.z[j * n], n), col);
    normalize_in_place(col);
    fix_phase(col);
  }
  out.converged = true;
  return out;
}

} // namespace

EigDecomposition small_eig(const Matrix& h) {
  if (!h.square()) throw DimensionMismatch("small_eig: matrix is not square");
  if (h.rows() == 0) throw InvalidArgument("small_eig: empty matrix");
  if (h.rows() > 2000) throw InvalidArgument("small_eig: dimension exceeds 2000");
  return h.is_hermitian() ? jacobi(h) : general(h);
}

} // namespace subeig
