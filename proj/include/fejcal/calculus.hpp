// calculus.hpp — the functional F^N_{x,y}(f), the operator approximant
// (sigma_N f)(U) v, the smoothed spectral density, and the adjoint/product
// residuals of the induced *-homomorphism.

#pragma once

#include <optional>
#include <vector>

#include "fejcal/fejer.hpp"
#include "fejcal/moments.hpp"

namespace fejcal {

enum class FunctionalPath { coefficient, quadrature };

struct FunctionalResult {
  int order = 0;
  cplx value{0.0, 0.0};
  double error_bound = 0.0;  // sup_error(f, N) * ||x|| * ||y||
  FunctionalPath path = FunctionalPath::coefficient;
};

/// p(e^{it}) = sum_{|k| <= degree} c_k e^{ikt}.
struct TrigPolynomial {
  int degree = 0;
  std::vector<cplx> coeffs;  // coeffs[k + degree]

  cplx at(int k) const noexcept { return coeffs[static_cast<std::size_t>(k + degree)]; }
  cplx eval(cplx z) const;
};

/// Grid samples of d_N(t) = (1/2pi) sum_k w_k m_k e^{-ikt}, the Fejér
/// smoothing of the spectral measure of (x, y); total_mass is its trapezoid
/// integral over [0, 2pi) and equals m_0 = <x,y> up to rounding.
struct DensityEstimate {
  int order = 0;
  CircleGrid grid;
  std::vector<cplx> values;
  cplx total_mass{0.0, 0.0};
};

// All operations accept grid_size = 0 to mean default_grid_size(N); an
// explicit value must be >= 2N+2.

/// F^N_{x,y}(f) = sum_k w_k \hat f(k) m_k  (coefficient path).
FunctionalResult functional_coeff(const CircleFunction& f, const UnitaryOperator& u,
                                  const ComplexVec& x, const ComplexVec& y,
                                  int order, int grid_size = 0);

/// F^N_{x,y}(f) = (1/(N+1)) (1/M) sum_j <T_N(t_j)x, T_N(t_j)y> f(e^{it_j})
/// (quadrature path).
FunctionalResult functional_quad(const CircleFunction& f, const UnitaryOperator& u,
                                 const ComplexVec& x, const ComplexVec& y,
                                 int order, int grid_size = 0);

/// (sigma_N f)(U) v = sum_k w_k \hat f(k) U^k v.
ComplexVec fejer_apply(const CircleFunction& f, const UnitaryOperator& u,
                       const ComplexVec& v, int order, int grid_size = 0);

/// Exact p(U) v = sum_k c_k U^k v, no Fejér damping.
ComplexVec apply_trig_poly(const TrigPolynomial& p, const UnitaryOperator& u,
                           const ComplexVec& v);

DensityEstimate density(const UnitaryOperator& u, const ComplexVec& x,
                        const ComplexVec& y, int order, const CircleGrid& grid);

/// | F^N_{x,y}(conj f) - conj(F^N_{y,x}(f)) |; an exact finite-N identity,
/// nonzero only through rounding.
double adjoint_residual(const CircleFunction& f, const UnitaryOperator& u,
                        const ComplexVec& x, const ComplexVec& y, int order,
                        int grid_size = 0);

/// | F^N_{x,y}(f g) - <(sigma_N g)(U) x, (sigma_N conj(f))(U) y> |.
/// Not zero at finite N; decays as N grows.
double product_residual(const CircleFunction& f, const CircleFunction& g,
                        const UnitaryOperator& u, const ComplexVec& x,
                        const ComplexVec& y, int order, int grid_size = 0);

struct SweepRow {
  int order = 0;
  cplx value{0.0, 0.0};
  double error_bound = 0.0;
  std::optional<double> oracle_gap;  // absent without a spectral ground truth
};

/// Coefficient-path functional across orders; oracle_gap = |value - exact|
/// when the caller supplies the exact spectral value <f(U)x, y>.
std::vector<SweepRow> convergence_sweep(const CircleFunction& f,
                                        const UnitaryOperator& u,
                                        const ComplexVec& x, const ComplexVec& y,
                                        const std::vector<int>& orders,
                                        std::optional<cplx> exact_value = {});

/// The degree-N polynomial sigma_N f with coefficients w_k \hat f(k).
TrigPolynomial fejer_polynomial(const FourierTable& coeffs,
                                const FejerWeights& weights);

}  // namespace fejcal
