#include "fejcal/fejer.hpp"

#include <cmath>
#include <stdexcept>

namespace fejcal {

namespace {

constexpr double kKernelSingularityTol = 1e-8;

// Index helper: e^{-i k t_j} = roots[(-k*j) mod M].
std::size_t root_index(long long k, long long j, long long m) {
  long long r = (k * j) % m;
  if (r < 0) r += m;
  return static_cast<std::size_t>(r);
}

}  // namespace

FejerWeights fejer_weights(int order) {
  if (order < 0) throw std::invalid_argument("fejer_weights: order must be >= 0");
  FejerWeights fw;
  fw.order = order;
  fw.w.resize(static_cast<std::size_t>(2 * order + 1));
  for (int k = -order; k <= order; ++k)
    fw.w[static_cast<std::size_t>(k + order)] =
        1.0 - static_cast<double>(std::abs(k)) / (order + 1);
  return fw;
}

double fejer_kernel(int order, double tau) {
  if (order < 0) throw std::invalid_argument("fejer_kernel: order must be >= 0");
  const double half = 0.5 * tau;
  const double s = std::sin(half);
  if (std::abs(s) < kKernelSingularityTol) {
    // Removable singularity at tau in 2*pi*Z: fall back to the direct sum,
    // which gives exactly N+1 at the singular points.
    double acc = 1.0;
    for (int k = 1; k <= order; ++k)
      acc += 2.0 * (1.0 - static_cast<double>(k) / (order + 1)) * std::cos(k * tau);
    return acc;
  }
  const double ratio = std::sin((order + 1) * half) / s;
  return ratio * ratio / (order + 1);
}

int default_grid_size(int order) { return std::max(2 * order + 2, 256); }

int default_fine_grid_size(int order) { return std::max(4 * order, 1024); }

std::vector<cplx> unit_roots(int grid_size) {
  if (grid_size < 1) throw std::invalid_argument("unit_roots: grid_size must be >= 1");
  const std::size_t m = static_cast<std::size_t>(grid_size);
  std::vector<cplx> roots(m);
  roots[0] = cplx{1.0, 0.0};
  for (std::size_t l = 1; l <= m / 2; ++l) {
    const double t = kTwoPi * static_cast<double>(l) / grid_size;
    roots[l] = {std::cos(t), std::sin(t)};
    roots[m - l] = std::conj(roots[l]);  // exact mirror symmetry
  }
  return roots;
}

FourierTable fourier_coeffs(const CircleFunction& f, int order, int grid_size) {
  if (order < 0) throw std::invalid_argument("fourier_coeffs: order must be >= 0");
  if (grid_size < 2 * order + 2)
    throw std::invalid_argument("fourier_coeffs: grid must have at least 2N+2 nodes");

  const int m = grid_size;
  const std::vector<cplx> roots = unit_roots(m);
  std::vector<cplx> samples(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) samples[static_cast<std::size_t>(j)] = f(roots[static_cast<std::size_t>(j)]);

  FourierTable table;
  table.order = order;
  table.c.resize(static_cast<std::size_t>(2 * order + 1));
  for (int k = -order; k <= order; ++k) {
    KahanSum s;
    for (int j = 0; j < m; ++j)
      s.add(samples[static_cast<std::size_t>(j)] * roots[root_index(-k, j, m)]);
    table.c[static_cast<std::size_t>(k + order)] = s.value() / static_cast<double>(m);
  }
  return table;
}

FourierTable fourier_coeffs(const CircleFunction& f, int order) {
  return fourier_coeffs(f, order, default_grid_size(order));
}

std::vector<cplx> fejer_mean(const CircleFunction& f, int order,
                             const CircleGrid& grid) {
  if (grid.size < 2 * order + 2)
    throw std::invalid_argument("fejer_mean: grid must have at least 2N+2 nodes");
  const FourierTable table = fourier_coeffs(f, order, grid.size);
  const FejerWeights weights = fejer_weights(order);
  const std::vector<cplx> roots = unit_roots(grid.size);

  std::vector<cplx> out(static_cast<std::size_t>(grid.size));
  for (int j = 0; j < grid.size; ++j) {
    KahanSum s;
    for (int k = -order; k <= order; ++k)
      s.add(weights.at(k) * table.at(k) * roots[root_index(k, j, grid.size)]);
    out[static_cast<std::size_t>(j)] = s.value();
  }
  return out;
}

double sup_error(const CircleFunction& f, int order, const CircleGrid& fine_grid) {
  if (fine_grid.size < std::max(4 * order, 1024))
    throw std::invalid_argument("sup_error: grid must have at least max(4N, 1024) nodes");
  const std::vector<cplx> smoothed = fejer_mean(f, order, fine_grid);
  const std::vector<cplx> roots = unit_roots(fine_grid.size);
  double worst = 0.0;
  for (int j = 0; j < fine_grid.size; ++j)
    worst = std::max(worst, std::abs(smoothed[static_cast<std::size_t>(j)] -
                                     f(roots[static_cast<std::size_t>(j)])));
  return worst;
}

double sup_error(const CircleFunction& f, int order) {
  return sup_error(f, order, CircleGrid::uniform(default_fine_grid_size(order)));
}

double max_abs_on_grid(const CircleFunction& f, const CircleGrid& grid) {
  double worst = 0.0;
  for (double t : grid.nodes) worst = std::max(worst, std::abs(f(std::polar(1.0, t))));
  return worst;
}

}  // namespace fejcal
