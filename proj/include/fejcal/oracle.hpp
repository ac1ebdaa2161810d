// oracle.hpp — exact spectral ground truth: unitaries with a known
// eigen-decomposition, recovery of a SpectralForm from a dense unitary, and
// exact evaluation of f(U).

#pragma once

#include <cstdint>
#include <span>

#include "fejcal/core.hpp"
#include "fejcal/funcexpr.hpp"

namespace fejcal {

struct ConstructedUnitary {
  SpectralForm spectral;
  DenseMatrix dense;  // V diag(e^{i theta}) V^*
};

/// Builds U = V diag(e^{i theta_j}) V^* with V the orthonormalization
/// (modified Gram-Schmidt, two passes) of a seeded random complex matrix.
/// Deterministic for a fixed seed; retries up to 8 fresh matrices if the
/// random draw is rank deficient.
ConstructedUnitary construct(std::span<const double> thetas, std::uint64_t seed);

/// Recovers the spectral form of a dense unitary: diagonalizes the Hermitian
/// matrix (e^{-ic}U + e^{ic}U^*)/2 for a seeded random phase c with a cyclic
/// Jacobi sweep, then reads eigenphases off Rayleigh quotients arg(v^* U v).
/// A per-column residual ||U v_j - e^{i theta_j} v_j|| > 1e-8 signals an
/// eigenvalue collision under that c; retries with a new phase, throws
/// std::runtime_error after 8 attempts.
SpectralForm recover_spectral(const DenseMatrix& unitary, std::uint64_t seed);

/// Exact f(U) v = V diag(f(e^{i theta_j})) V^* v.
ComplexVec exact_f_of_U(const CircleFunction& f, const SpectralForm& s,
                        const ComplexVec& v);

/// Exact <f(U)x, y> = sum_j f(e^{i theta_j}) (V^*x)_j conj((V^*y)_j):
/// the atomic spectral measure of (x, y) integrated against f.
cplx exact_functional(const CircleFunction& f, const SpectralForm& s,
                      const ComplexVec& x, const ComplexVec& y);

}  // namespace fejcal
