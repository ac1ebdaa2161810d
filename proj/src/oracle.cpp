#include "fejcal/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace fejcal {

namespace {

constexpr int kMaxAttempts = 8;
constexpr double kJacobiOffTol = 1e-12;   // relative to Frobenius norm
constexpr int kMaxJacobiSweeps = 64;
constexpr double kEigenResidualTol = 1e-8;

// Columns of a d x d matrix as vectors, for Gram-Schmidt bookkeeping.
ComplexVec column(const DenseMatrix& m, std::size_t j) {
  ComplexVec v = ComplexVec::zeros(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) v[i] = m.at(i, j);
  return v;
}

// Modified Gram-Schmidt with a second orthogonalization pass. Returns false
// on rank deficiency.
bool orthonormalize(DenseMatrix& m) {
  const std::size_t d = m.dim();
  for (std::size_t j = 0; j < d; ++j) {
    ComplexVec v = column(m, j);
    const double initial = v.norm();
    if (initial == 0.0) return false;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < j; ++i) {
        const ComplexVec qi = column(m, i);
        const cplx proj = inner(v, qi);
        for (std::size_t r = 0; r < d; ++r) v[r] -= proj * qi[r];
      }
    }
    const double n = v.norm();
    if (n < 1e-10 * initial) return false;
    for (std::size_t r = 0; r < d; ++r) m.at(r, j) = v[r] / n;
  }
  return true;
}

double off_diagonal_frobenius(const DenseMatrix& h) {
  KahanSum s;
  for (std::size_t i = 0; i < h.dim(); ++i)
    for (std::size_t j = 0; j < h.dim(); ++j)
      if (i != j) s.add(std::norm(h.at(i, j)));
  return std::sqrt(s.real());
}

double frobenius(const DenseMatrix& h) {
  KahanSum s;
  for (const cplx& v : h.data()) s.add(std::norm(v));
  return std::sqrt(s.real());
}

// One cyclic Jacobi diagonalization of a Hermitian matrix. Rotations are
// accumulated into `vectors` (columns end up as eigenvectors).
void jacobi_hermitian(DenseMatrix& h, DenseMatrix& vectors) {
  const std::size_t d = h.dim();
  const double target = kJacobiOffTol * std::max(frobenius(h), 1e-300);

  for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
    if (off_diagonal_frobenius(h) <= target) return;
    for (std::size_t p = 0; p + 1 < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const cplx g = h.at(p, q);
        const double ag = std::abs(g);
        if (ag == 0.0) continue;

        // Unitary 2x2 zeroing H_pq: with omega = g/|g|, solve
        // |g| (1 - t^2) + (H_qq - H_pp) t = 0 for the smaller root t.
        const double app = h.at(p, p).real();
        const double aqq = h.at(q, q).real();
        const double theta = (app - aqq) / (2.0 * ag);
        const double t = (theta >= 0.0)
                             ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                             : 1.0 / (theta - std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const cplx omega = g / ag;
        const cplx sigma = t * c * std::conj(omega);      // G_qp
        const cplx sigma_bar = t * c * omega;             // -G_pq = conj(G_qp)

        // Columns: A <- A G
        for (std::size_t i = 0; i < d; ++i) {
          const cplx hp = h.at(i, p);
          const cplx hq = h.at(i, q);
          h.at(i, p) = c * hp + sigma * hq;
          h.at(i, q) = -sigma_bar * hp + c * hq;
        }
        // Rows: A <- G^* A
        for (std::size_t j = 0; j < d; ++j) {
          const cplx hp = h.at(p, j);
          const cplx hq = h.at(q, j);
          h.at(p, j) = c * hp + sigma_bar * hq;
          h.at(q, j) = -sigma * hp + c * hq;
        }
        // Pivot is zero by construction; keep the matrix exactly Hermitian.
        h.at(p, q) = cplx{0.0, 0.0};
        h.at(q, p) = cplx{0.0, 0.0};
        h.at(p, p) = cplx{h.at(p, p).real(), 0.0};
        h.at(q, q) = cplx{h.at(q, q).real(), 0.0};

        for (std::size_t i = 0; i < d; ++i) {
          const cplx vp = vectors.at(i, p);
          const cplx vq = vectors.at(i, q);
          vectors.at(i, p) = c * vp + sigma * vq;
          vectors.at(i, q) = -sigma_bar * vp + c * vq;
        }
      }
    }
  }
}

}  // namespace

ConstructedUnitary construct(std::span<const double> thetas, std::uint64_t seed) {
  if (thetas.empty()) throw std::invalid_argument("construct: empty phase list");
  const std::size_t d = thetas.size();

  Rng rng(seed);
  DenseMatrix v(d);
  bool ok = false;
  for (int attempt = 0; attempt < kMaxAttempts && !ok; ++attempt) {
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) v.at(i, j) = rng.complex_normal();
    ok = orthonormalize(v);
  }
  if (!ok)
    throw std::runtime_error("construct: random matrix rank deficient after 8 draws");

  SpectralForm spectral;
  spectral.eigenphases.reserve(d);
  for (double t : thetas) spectral.eigenphases.push_back(wrap_angle(t));
  spectral.eigenvectors = std::move(v);

  ConstructedUnitary out;
  out.dense = spectral.to_dense();
  out.spectral = std::move(spectral);
  return out;
}

SpectralForm recover_spectral(const DenseMatrix& unitary, std::uint64_t seed) {
  const std::size_t d = unitary.dim();
  if (d == 0) throw std::invalid_argument("recover_spectral: empty matrix");

  Rng rng(seed);
  std::string failure;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const double c = rng.uniform(0.0, kTwoPi);
    const cplx phase = std::polar(1.0, -c);

    // H = (e^{-ic} U + e^{ic} U^*)/2, Hermitian by construction.
    DenseMatrix h(d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        h.at(i, j) = 0.5 * (phase * unitary.at(i, j) +
                            std::conj(phase * unitary.at(j, i)));

    DenseMatrix vectors = DenseMatrix::identity(d);
    jacobi_hermitian(h, vectors);

    SpectralForm form;
    form.eigenphases.resize(d);
    bool ok = true;
    double worst_residual = 0.0;
    std::size_t worst_column = 0;
    for (std::size_t j = 0; j < d && ok; ++j) {
      const ComplexVec vj = column(vectors, j);
      const ComplexVec uvj = unitary.mul(vj);
      const cplx rayleigh = inner(uvj, vj);
      const double theta = wrap_angle(std::atan2(rayleigh.imag(), rayleigh.real()));
      form.eigenphases[j] = theta;

      const cplx lambda = std::polar(1.0, theta);
      KahanSum res2;
      for (std::size_t i = 0; i < d; ++i) res2.add(std::norm(uvj[i] - lambda * vj[i]));
      const double residual = std::sqrt(res2.real());
      if (residual > worst_residual) {
        worst_residual = residual;
        worst_column = j;
      }
      if (residual > kEigenResidualTol) ok = false;
    }
    if (ok) {
      form.eigenvectors = std::move(vectors);
      return form;
    }
    failure = "worst column " + std::to_string(worst_column) + " residual " +
              std::to_string(worst_residual);
  }
  throw std::runtime_error(
      "recover_spectral: eigenvector residual stayed above 1e-8 after 8 phase draws (" +
      failure + ")");
}

ComplexVec exact_f_of_U(const CircleFunction& f, const SpectralForm& s,
                        const ComplexVec& v) {
  if (v.dim() != s.dim())
    throw std::invalid_argument("exact_f_of_U: dimension mismatch");
  ComplexVec w = s.eigenvectors.mul_adjoint(v);
  for (std::size_t j = 0; j < w.dim(); ++j)
    w[j] *= f(std::polar(1.0, s.eigenphases[j]));
  return s.eigenvectors.mul(w);
}

cplx exact_functional(const CircleFunction& f, const SpectralForm& s,
                      const ComplexVec& x, const ComplexVec& y) {
  if (x.dim() != s.dim() || y.dim() != s.dim())
    throw std::invalid_argument("exact_functional: dimension mismatch");
  const ComplexVec a = s.eigenvectors.mul_adjoint(x);
  const ComplexVec b = s.eigenvectors.mul_adjoint(y);
  KahanSum sum;
  for (std::size_t j = 0; j < s.dim(); ++j)
    sum.add(f(std::polar(1.0, s.eigenphases[j])) * a[j] * std::conj(b[j]));
  return sum.value();
}

}  // namespace fejcal
