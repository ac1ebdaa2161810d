// fejer.hpp — Fejér kernel and weights, Fourier coefficients of circle
// functions on equispaced grids, Fejér (Cesàro) means, and the uniform-error
// surrogate used for convergence bounds.

#pragma once

#include <vector>

#include "fejcal/core.hpp"
#include "fejcal/funcexpr.hpp"

namespace fejcal {

/// Triangular weights w_k = 1 - |k|/(N+1), k = -N..N.
struct FejerWeights {
  int order = 0;
  std::vector<double> w;  // w[k + order]

  double at(int k) const noexcept { return w[static_cast<std::size_t>(k + order)]; }
};

FejerWeights fejer_weights(int order);

/// K_N(tau) = sum_k w_k e^{ik tau}, evaluated by the closed form
/// (1/(N+1)) (sin((N+1)tau/2)/sin(tau/2))^2 with a direct-sum fallback near
/// the removable singularity at tau in 2*pi*Z. Real and >= 0; K_N(0) = N+1.
double fejer_kernel(int order, double tau);

/// Coefficients c[k] ~ \hat f(k) for |k| <= order.
struct FourierTable {
  int order = 0;
  std::vector<cplx> c;  // c[k + order]

  cplx at(int k) const noexcept { return c[static_cast<std::size_t>(k + order)]; }
};

/// Smallest alias-free grid is 2N+2; the default adds headroom so smooth
/// non-polynomial functions are resolved to near machine precision.
int default_grid_size(int order);       // max(2N+2, 256)
int default_fine_grid_size(int order);  // max(4N, 1024)

/// \hat f(k) = (1/M) sum_j f(e^{it_j}) e^{-ik t_j} over the M-node equispaced
/// grid. Exact (to rounding) for trigonometric polynomials of degree
/// <= M - N - 1. Requires M >= 2N+2.
FourierTable fourier_coeffs(const CircleFunction& f, int order, int grid_size);
FourierTable fourier_coeffs(const CircleFunction& f, int order);

/// Fejér mean sigma_N f(t_j) = sum_k w_k \hat f(k) e^{ik t_j} on the grid
/// nodes; coefficients are taken on the same grid. Requires grid.size >= 2N+2.
std::vector<cplx> fejer_mean(const CircleFunction& f, int order,
                             const CircleGrid& grid);

/// max_j |sigma_N f(t_j) - f(e^{it_j})| over a fine grid: the computable
/// surrogate for ||sigma_N f - f||_inf. Requires fine_grid.size >= max(4N, 1024).
double sup_error(const CircleFunction& f, int order, const CircleGrid& fine_grid);
double sup_error(const CircleFunction& f, int order);

/// max_j |f(e^{it_j})| over the grid.
double max_abs_on_grid(const CircleFunction& f, const CircleGrid& grid);

/// e^{i 2 pi l / M} for l = 0..M-1, built with mirror symmetry so that
/// roots[M-l] is exactly conj(roots[l]).
std::vector<cplx> unit_roots(int grid_size);

}  // namespace fejcal
