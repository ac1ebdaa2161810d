#include "fejcal/calculus.hpp"

#include <cmath>
#include <stdexcept>

namespace fejcal {

namespace {

cplx ipow(cplx b, int n) {
  // n >= 0
  cplx r{1.0, 0.0};
  while (n > 0) {
    if (n & 1) r *= b;
    b *= b;
    n >>= 1;
  }
  return r;
}

int resolve_grid(int order, int grid_size) {
  if (grid_size == 0) return default_grid_size(order);
  if (grid_size < 2 * order + 2)
    throw std::invalid_argument("grid must have at least 2N+2 nodes");
  return grid_size;
}

void check_dims(const UnitaryOperator& u, const ComplexVec& x, const ComplexVec& y) {
  if (x.dim() != u.dim() || y.dim() != u.dim())
    throw std::invalid_argument("dimension mismatch between operator and vectors");
}

double functional_error_bound(const CircleFunction& f, int order, double nx,
                              double ny) {
  return sup_error(f, order) * nx * ny;
}

}  // namespace

cplx TrigPolynomial::eval(cplx z) const {
  KahanSum s;
  for (int k = -degree; k <= degree; ++k) {
    const cplx zk = (k >= 0) ? ipow(z, k) : ipow(std::conj(z), -k);
    s.add(at(k) * zk);
  }
  return s.value();
}

FunctionalResult functional_coeff(const CircleFunction& f, const UnitaryOperator& u,
                                  const ComplexVec& x, const ComplexVec& y,
                                  int order, int grid_size) {
  if (order < 0) throw std::invalid_argument("functional_coeff: order must be >= 0");
  check_dims(u, x, y);
  const int m = resolve_grid(order, grid_size);

  const FourierTable coeffs = fourier_coeffs(f, order, m);
  const FejerWeights weights = fejer_weights(order);
  const MomentTable moments = moment_table(u, x, y, order);

  KahanSum s;
  for (int k = -order; k <= order; ++k)
    s.add(weights.at(k) * coeffs.at(k) * moments.at(k));

  FunctionalResult result;
  result.order = order;
  result.value = s.value();
  result.error_bound = functional_error_bound(f, order, x.norm(), y.norm());
  result.path = FunctionalPath::coefficient;
  return result;
}

FunctionalResult functional_quad(const CircleFunction& f, const UnitaryOperator& u,
                                 const ComplexVec& x, const ComplexVec& y,
                                 int order, int grid_size) {
  if (order < 0) throw std::invalid_argument("functional_quad: order must be >= 0");
  check_dims(u, x, y);
  const int m = resolve_grid(order, grid_size);

  const PowerOrbit orbit_x = power_orbit(u, x, order);
  const PowerOrbit orbit_y = power_orbit(u, y, order);
  const std::vector<cplx> roots = unit_roots(m);

  KahanSum s;
  for (int j = 0; j < m; ++j) {
    const double t = kTwoPi * static_cast<double>(j) / m;
    const ComplexVec tx = synthesize_T(orbit_x, t);
    const ComplexVec ty = synthesize_T(orbit_y, t);
    s.add(inner(tx, ty) * f(roots[static_cast<std::size_t>(j)]));
  }

  FunctionalResult result;
  result.order = order;
  result.value = s.value() / (static_cast<double>(order + 1) * m);
  result.error_bound = functional_error_bound(f, order, x.norm(), y.norm());
  result.path = FunctionalPath::quadrature;
  return result;
}

ComplexVec fejer_apply(const CircleFunction& f, const UnitaryOperator& u,
                       const ComplexVec& v, int order, int grid_size) {
  if (order < 0) throw std::invalid_argument("fejer_apply: order must be >= 0");
  if (v.dim() != u.dim())
    throw std::invalid_argument("fejer_apply: dimension mismatch");
  const int m = resolve_grid(order, grid_size);

  const FourierTable coeffs = fourier_coeffs(f, order, m);
  const FejerWeights weights = fejer_weights(order);
  const PowerOrbit orbit = power_orbit(u, v, order);

  const std::size_t d = v.dim();
  std::vector<KahanSum> acc(d);
  for (int k = -order; k <= order; ++k) {
    const cplx c = weights.at(k) * coeffs.at(k);
    const ComplexVec& uk = orbit.at(k);
    for (std::size_t j = 0; j < d; ++j) acc[j].add(c * uk[j]);
  }
  ComplexVec out = ComplexVec::zeros(d);
  for (std::size_t j = 0; j < d; ++j) out[j] = acc[j].value();
  return out;
}

ComplexVec apply_trig_poly(const TrigPolynomial& p, const UnitaryOperator& u,
                           const ComplexVec& v) {
  if (p.degree < 0) throw std::invalid_argument("apply_trig_poly: bad degree");
  if (p.coeffs.size() != static_cast<std::size_t>(2 * p.degree + 1))
    throw std::invalid_argument("apply_trig_poly: coefficient count mismatch");
  if (v.dim() != u.dim())
    throw std::invalid_argument("apply_trig_poly: dimension mismatch");

  const PowerOrbit orbit = power_orbit(u, v, p.degree);
  const std::size_t d = v.dim();
  std::vector<KahanSum> acc(d);
  for (int k = -p.degree; k <= p.degree; ++k) {
    const cplx c = p.at(k);
    const ComplexVec& uk = orbit.at(k);
    for (std::size_t j = 0; j < d; ++j) acc[j].add(c * uk[j]);
  }
  ComplexVec out = ComplexVec::zeros(d);
  for (std::size_t j = 0; j < d; ++j) out[j] = acc[j].value();
  return out;
}

DensityEstimate density(const UnitaryOperator& u, const ComplexVec& x,
                        const ComplexVec& y, int order, const CircleGrid& grid) {
  if (order < 0) throw std::invalid_argument("density: order must be >= 0");
  check_dims(u, x, y);
  if (grid.size < 2 * order + 2)
    throw std::invalid_argument("density: grid must have at least 2N+2 nodes");

  const MomentTable moments = moment_table(u, x, y, order);
  const FejerWeights weights = fejer_weights(order);
  const std::vector<cplx> roots = unit_roots(grid.size);
  const long long m = grid.size;

  DensityEstimate est;
  est.order = order;
  est.grid = grid;
  est.values.resize(static_cast<std::size_t>(grid.size));

  for (int j = 0; j < grid.size; ++j) {
    KahanSum s;
    for (int k = -order; k <= order; ++k) {
      // e^{-ik t_j} = roots[(-k*j) mod M]
      long long r = (-static_cast<long long>(k) * j) % m;
      if (r < 0) r += m;
      s.add(weights.at(k) * moments.at(k) * roots[static_cast<std::size_t>(r)]);
    }
    est.values[static_cast<std::size_t>(j)] = s.value() / kTwoPi;
  }

  KahanSum mass;
  for (const cplx& v : est.values) mass.add(v);
  est.total_mass = mass.value() * (kTwoPi / grid.size);
  return est;
}

double adjoint_residual(const CircleFunction& f, const UnitaryOperator& u,
                        const ComplexVec& x, const ComplexVec& y, int order,
                        int grid_size) {
  const cplx lhs = functional_coeff(f.conjugated(), u, x, y, order, grid_size).value;
  const cplx rhs = std::conj(functional_coeff(f, u, y, x, order, grid_size).value);
  return std::abs(lhs - rhs);
}

double product_residual(const CircleFunction& f, const CircleFunction& g,
                        const UnitaryOperator& u, const ComplexVec& x,
                        const ComplexVec& y, int order, int grid_size) {
  const cplx combined =
      functional_coeff(f.product(g), u, x, y, order, grid_size).value;
  const ComplexVec gx = fejer_apply(g, u, x, order, grid_size);
  const ComplexVec fy = fejer_apply(f.conjugated(), u, y, order, grid_size);
  return std::abs(combined - inner(gx, fy));
}

std::vector<SweepRow> convergence_sweep(const CircleFunction& f,
                                        const UnitaryOperator& u,
                                        const ComplexVec& x, const ComplexVec& y,
                                        const std::vector<int>& orders,
                                        std::optional<cplx> exact_value) {
  if (orders.empty())
    throw std::invalid_argument("convergence_sweep: empty order list");
  for (std::size_t i = 1; i < orders.size(); ++i)
    if (orders[i] <= orders[i - 1])
      throw std::invalid_argument("convergence_sweep: orders must be increasing");

  std::vector<SweepRow> rows;
  rows.reserve(orders.size());
  for (int n : orders) {
    const FunctionalResult r = functional_coeff(f, u, x, y, n);
    SweepRow row;
    row.order = n;
    row.value = r.value;
    row.error_bound = r.error_bound;
    if (exact_value) row.oracle_gap = std::abs(r.value - *exact_value);
    rows.push_back(row);
  }
  return rows;
}

TrigPolynomial fejer_polynomial(const FourierTable& coeffs,
                                const FejerWeights& weights) {
  if (coeffs.order != weights.order)
    throw std::invalid_argument("fejer_polynomial: order mismatch");
  TrigPolynomial p;
  p.degree = coeffs.order;
  p.coeffs.resize(static_cast<std::size_t>(2 * p.degree + 1));
  for (int k = -p.degree; k <= p.degree; ++k)
    p.coeffs[static_cast<std::size_t>(k + p.degree)] = weights.at(k) * coeffs.at(k);
  return p;
}

}  // namespace fejcal
