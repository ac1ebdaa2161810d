// core.hpp — complex vectors, dense matrices, and the unitary operator
// abstraction the rest of the library is built on.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <variant>
#include <vector>

namespace fejcal {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Wraps an angle into [0, 2*pi).
double wrap_angle(double theta) noexcept;

// Neumaier-compensated accumulator. All order-N and grid sums in the
// library go through this so results do not depend on how a caller
// might batch the terms.
class KahanSum {
 public:
  void add(cplx term) noexcept {
    re_.add(term.real());
    im_.add(term.imag());
  }
  void add(double term) noexcept { re_.add(term); }
  cplx value() const noexcept { return {re_.value(), im_.value()}; }
  double real() const noexcept { return re_.value(); }

 private:
  struct Channel {
    double sum = 0.0;
    double comp = 0.0;
    void add(double v) noexcept {
      const double t = sum + v;
      if (std::abs(sum) >= std::abs(v))
        comp += (sum - t) + v;
      else
        comp += (v - t) + sum;
      sum = t;
    }
    double value() const noexcept { return sum + comp; }
  };
  Channel re_, im_;
};

/// Vector in C^d. Entries are validated finite on construction; dim >= 1.
class ComplexVec {
 public:
  ComplexVec() = default;  // empty placeholder, not a valid vector
  explicit ComplexVec(std::vector<cplx> entries);

  static ComplexVec zeros(std::size_t dim);
  static ComplexVec basis(std::size_t dim, std::size_t index);

  std::size_t dim() const noexcept { return entries_.size(); }
  const cplx& operator[](std::size_t i) const noexcept { return entries_[i]; }
  cplx& operator[](std::size_t i) noexcept { return entries_[i]; }
  std::span<const cplx> entries() const noexcept { return entries_; }

  double norm() const noexcept;

 private:
  std::vector<cplx> entries_;
};

/// <x,y> = sum_j x_j * conj(y_j): linear in the first slot, conjugate-linear
/// in the second. Throws std::invalid_argument on dimension mismatch.
cplx inner(const ComplexVec& x, const ComplexVec& y);

/// Square complex matrix, row-major storage.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t dim);  // zero-filled
  DenseMatrix(std::size_t dim, std::vector<cplx> row_major);

  static DenseMatrix identity(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  cplx& at(std::size_t i, std::size_t j) noexcept { return a_[i * dim_ + j]; }
  const cplx& at(std::size_t i, std::size_t j) const noexcept {
    return a_[i * dim_ + j];
  }
  std::span<const cplx> data() const noexcept { return a_; }

  ComplexVec mul(const ComplexVec& v) const;
  ComplexVec mul_adjoint(const ComplexVec& v) const;

  /// max_ij |(A^* A - I)_ij|, the exact unitarity defect.
  double unitarity_residual() const;

 private:
  std::size_t dim_ = 0;
  std::vector<cplx> a_;
};

/// Unitary operator on C^d in one of three forms: dense matrix, diagonal
/// phase matrix diag(e^{i theta_j}), or matrix-free apply callbacks.
/// U^{-1} is always realized as U^*, never by inversion.
class UnitaryOperator {
 public:
  using ApplyFn = std::function<ComplexVec(const ComplexVec&)>;

  static UnitaryOperator dense(DenseMatrix m);
  static UnitaryOperator diagonal(std::vector<double> phases);
  static UnitaryOperator matrix_free(std::size_t dim, ApplyFn forward,
                                     ApplyFn adjoint);

  std::size_t dim() const noexcept;

  /// U v for power_sign = +1; U^* v for power_sign = -1.
  /// Throws on dimension mismatch or non-finite output.
  ComplexVec apply(const ComplexVec& v, int power_sign) const;

  bool is_dense() const noexcept;
  bool is_diagonal() const noexcept;
  bool is_matrix_free() const noexcept;
  const DenseMatrix& dense_matrix() const;        // valid only for dense form
  std::span<const double> phases() const;         // valid only for diagonal form

 private:
  struct DenseForm {
    DenseMatrix m;
  };
  struct DiagonalForm {
    std::vector<double> phases;  // wrapped into [0, 2*pi)
    std::vector<cplx> eig;       // e^{i theta_j}
  };
  struct MatrixFreeForm {
    std::size_t dim;
    ApplyFn forward;
    ApplyFn adjoint;
  };

  explicit UnitaryOperator(std::variant<DenseForm, DiagonalForm, MatrixFreeForm> f)
      : form_(std::move(f)) {}

  std::variant<DenseForm, DiagonalForm, MatrixFreeForm> form_;
};

struct UnitarityReport {
  double max_residual = 0.0;
  bool pass = false;
};

/// Dense operators get the exact residual ||U*U - I||_max; diagonal and
/// matrix-free operators get randomized round-trip and norm-preservation
/// residuals over `samples` seeded probe vectors. pass iff residual <= 1e-8.
UnitarityReport verify_unitary(const UnitaryOperator& u, int samples,
                               std::uint64_t seed);

/// Eigen-decomposition of a unitary: U = V diag(e^{i theta_j}) V^*.
struct SpectralForm {
  std::vector<double> eigenphases;  // in [0, 2*pi)
  DenseMatrix eigenvectors;         // orthonormal columns

  std::size_t dim() const noexcept { return eigenphases.size(); }
  DenseMatrix to_dense() const;
  /// max_ij |(V^* V - I)_ij|
  double orthonormality_residual() const;
};

// Deterministic random source. Uniform doubles come from the top 53 bits of
// mt19937_64 and normals from Box-Muller, so streams are reproducible
// bit-for-bit across platforms for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform();                        // [0, 1)
  double uniform(double lo, double hi);    // [lo, hi)
  double normal();
  cplx complex_normal();
  ComplexVec unit_vector(std::size_t dim);

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Equispaced angular grid t_j = 2*pi*j/size on [0, 2*pi).
struct CircleGrid {
  int size = 0;
  std::vector<double> nodes;

  static CircleGrid uniform(int m);
  double node(int j) const noexcept { return nodes[static_cast<std::size_t>(j)]; }
};

}  // namespace fejcal
