#include "fejcal/core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fejcal {

namespace {

constexpr double kDenseUnitarityTol = 1e-10;
constexpr double kSampledUnitarityTol = 1e-8;

bool is_finite(cplx v) noexcept {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}

void check_finite(const std::vector<cplx>& entries, const char* what) {
  for (const cplx& v : entries)
    if (!is_finite(v)) throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

}  // namespace

double wrap_angle(double theta) noexcept {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

ComplexVec::ComplexVec(std::vector<cplx> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw std::invalid_argument("ComplexVec: dim must be >= 1");
  check_finite(entries_, "ComplexVec");
}

ComplexVec ComplexVec::zeros(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("ComplexVec: dim must be >= 1");
  return ComplexVec(std::vector<cplx>(dim, cplx{0.0, 0.0}));
}

ComplexVec ComplexVec::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw std::invalid_argument("ComplexVec::basis: index out of range");
  ComplexVec v = zeros(dim);
  v[index] = cplx{1.0, 0.0};
  return v;
}

double ComplexVec::norm() const noexcept {
  KahanSum s;
  for (const cplx& v : entries_) s.add(std::norm(v));
  return std::sqrt(s.real());
}

cplx inner(const ComplexVec& x, const ComplexVec& y) {
  if (x.dim() != y.dim())
    throw std::invalid_argument("inner: dimension mismatch");
  KahanSum s;
  for (std::size_t j = 0; j < x.dim(); ++j) s.add(x[j] * std::conj(y[j]));
  return s.value();
}

DenseMatrix::DenseMatrix(std::size_t dim)
    : dim_(dim), a_(dim * dim, cplx{0.0, 0.0}) {
  if (dim == 0) throw std::invalid_argument("DenseMatrix: dim must be >= 1");
}

DenseMatrix::DenseMatrix(std::size_t dim, std::vector<cplx> row_major)
    : dim_(dim), a_(std::move(row_major)) {
  if (dim == 0) throw std::invalid_argument("DenseMatrix: dim must be >= 1");
  if (a_.size() != dim * dim)
    throw std::invalid_argument("DenseMatrix: entry count does not match dim");
  check_finite(a_, "DenseMatrix");
}

DenseMatrix DenseMatrix::identity(std::size_t dim) {
  DenseMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = cplx{1.0, 0.0};
  return m;
}

ComplexVec DenseMatrix::mul(const ComplexVec& v) const {
  if (v.dim() != dim_) throw std::invalid_argument("DenseMatrix::mul: dimension mismatch");
  ComplexVec out = ComplexVec::zeros(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    KahanSum s;
    const cplx* row = &a_[i * dim_];
    for (std::size_t j = 0; j < dim_; ++j) s.add(row[j] * v[j]);
    out[i] = s.value();
  }
  return out;
}

ComplexVec DenseMatrix::mul_adjoint(const ComplexVec& v) const {
  if (v.dim() != dim_)
    throw std::invalid_argument("DenseMatrix::mul_adjoint: dimension mismatch");
  ComplexVec out = ComplexVec::zeros(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    KahanSum s;
    for (std::size_t j = 0; j < dim_; ++j) s.add(std::conj(a_[j * dim_ + i]) * v[j]);
    out[i] = s.value();
  }
  return out;
}

double DenseMatrix::unitarity_residual() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      KahanSum s;
      for (std::size_t k = 0; k < dim_; ++k)
        s.add(std::conj(a_[k * dim_ + i]) * a_[k * dim_ + j]);
      cplx e = s.value();
      if (i == j) e -= 1.0;
      worst = std::max(worst, std::abs(e));
    }
  }
  return worst;
}

UnitaryOperator UnitaryOperator::dense(DenseMatrix m) {
  if (m.dim() == 0) throw std::invalid_argument("UnitaryOperator: empty matrix");
  return UnitaryOperator(DenseForm{std::move(m)});
}

UnitaryOperator UnitaryOperator::diagonal(std::vector<double> phases) {
  if (phases.empty()) throw std::invalid_argument("UnitaryOperator: empty phase list");
  DiagonalForm f;
  f.phases.reserve(phases.size());
  f.eig.reserve(phases.size());
  for (double t : phases) {
    if (!std::isfinite(t))
      throw std::invalid_argument("UnitaryOperator: non-finite phase");
    const double w = wrap_angle(t);
    f.phases.push_back(w);
    f.eig.push_back(std::polar(1.0, w));
  }
  return UnitaryOperator(std::move(f));
}

UnitaryOperator UnitaryOperator::matrix_free(std::size_t dim, ApplyFn forward,
                                             ApplyFn adjoint) {
  if (dim == 0) throw std::invalid_argument("UnitaryOperator: dim must be >= 1");
  if (!forward || !adjoint)
    throw std::invalid_argument("UnitaryOperator: missing apply callback");
  return UnitaryOperator(MatrixFreeForm{dim, std::move(forward), std::move(adjoint)});
}

std::size_t UnitaryOperator::dim() const noexcept {
  if (const auto* d = std::get_if<DenseForm>(&form_)) return d->m.dim();
  if (const auto* d = std::get_if<DiagonalForm>(&form_)) return d->phases.size();
  return std::get<MatrixFreeForm>(form_).dim;
}

ComplexVec UnitaryOperator::apply(const ComplexVec& v, int power_sign) const {
  if (power_sign != 1 && power_sign != -1)
    throw std::invalid_argument("UnitaryOperator::apply: power_sign must be +1 or -1");
  if (v.dim() != dim())
    throw std::invalid_argument("UnitaryOperator::apply: dimension mismatch");

  ComplexVec out;
  if (const auto* d = std::get_if<DenseForm>(&form_)) {
    out = (power_sign > 0) ? d->m.mul(v) : d->m.mul_adjoint(v);
  } else if (const auto* d = std::get_if<DiagonalForm>(&form_)) {
    out = ComplexVec::zeros(v.dim());
    for (std::size_t j = 0; j < v.dim(); ++j)
      out[j] = (power_sign > 0) ? d->eig[j] * v[j] : std::conj(d->eig[j]) * v[j];
  } else {
    const auto& mf = std::get<MatrixFreeForm>(form_);
    out = (power_sign > 0) ? mf.forward(v) : mf.adjoint(v);
    if (out.dim() != dim())
      throw std::invalid_argument("UnitaryOperator::apply: callback changed dimension");
  }

  for (std::size_t j = 0; j < out.dim(); ++j)
    if (!is_finite(out[j]))
      throw std::invalid_argument("UnitaryOperator::apply: non-finite output");
  return out;
}

bool UnitaryOperator::is_dense() const noexcept {
  return std::holds_alternative<DenseForm>(form_);
}
bool UnitaryOperator::is_diagonal() const noexcept {
  return std::holds_alternative<DiagonalForm>(form_);
}
bool UnitaryOperator::is_matrix_free() const noexcept {
  return std::holds_alternative<MatrixFreeForm>(form_);
}

const DenseMatrix& UnitaryOperator::dense_matrix() const {
  if (!is_dense()) throw std::invalid_argument("UnitaryOperator: not in dense form");
  return std::get<DenseForm>(form_).m;
}

std::span<const double> UnitaryOperator::phases() const {
  if (!is_diagonal())
    throw std::invalid_argument("UnitaryOperator: not in diagonal form");
  return std::get<DiagonalForm>(form_).phases;
}

UnitarityReport verify_unitary(const UnitaryOperator& u, int samples,
                               std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("verify_unitary: samples must be >= 1");

  UnitarityReport report;
  if (u.is_dense()) {
    report.max_residual = u.dense_matrix().unitarity_residual();
    report.pass = report.max_residual <= kDenseUnitarityTol;
    return report;
  }

  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const ComplexVec v = rng.unit_vector(u.dim());
    const ComplexVec uv = u.apply(v, +1);
    const ComplexVec round_trip = u.apply(uv, -1);

    KahanSum diff2;
    for (std::size_t j = 0; j < v.dim(); ++j) diff2.add(std::norm(round_trip[j] - v[j]));
    worst = std::max(worst, std::sqrt(diff2.real()));
    worst = std::max(worst, std::abs(uv.norm() - 1.0));
    worst = std::max(worst, std::abs(u.apply(v, -1).norm() - 1.0));
  }
  report.max_residual = worst;
  report.pass = worst <= kSampledUnitarityTol;
  return report;
}

DenseMatrix SpectralForm::to_dense() const {
  const std::size_t d = dim();
  if (eigenvectors.dim() != d)
    throw std::invalid_argument("SpectralForm: phase/eigenvector dimension mismatch");
  DenseMatrix out(d);
  std::vector<cplx> eig(d);
  for (std::size_t j = 0; j < d; ++j) eig[j] = std::polar(1.0, eigenphases[j]);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      KahanSum s;
      for (std::size_t j = 0; j < d; ++j)
        s.add(eigenvectors.at(a, j) * eig[j] * std::conj(eigenvectors.at(b, j)));
      out.at(a, b) = s.value();
    }
  }
  return out;
}

double SpectralForm::orthonormality_residual() const {
  return eigenvectors.unitarity_residual();
}

double Rng::uniform() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = kTwoPi * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

cplx Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re, im};
}

ComplexVec Rng::unit_vector(std::size_t dim) {
  ComplexVec v = ComplexVec::zeros(dim);
  for (std::size_t j = 0; j < dim; ++j) v[j] = complex_normal();
  const double n = v.norm();
  if (n == 0.0) return unit_vector(dim);  // astronomically unlikely
  for (std::size_t j = 0; j < dim; ++j) v[j] /= n;
  return v;
}

CircleGrid CircleGrid::uniform(int m) {
  if (m < 1) throw std::invalid_argument("CircleGrid: size must be >= 1");
  CircleGrid g;
  g.size = m;
  g.nodes.resize(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j)
    g.nodes[static_cast<std::size_t>(j)] = kTwoPi * static_cast<double>(j) / m;
  return g;
}

}  // namespace fejcal
