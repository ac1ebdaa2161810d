#include "fejcal/moments.hpp"

#include <cmath>
#include <stdexcept>

namespace fejcal {

namespace {

// Tracks relative norm deviation along an orbit; throws past kDriftFail.
struct DriftMonitor {
  double base_norm;
  double max_drift = 0.0;

  explicit DriftMonitor(double base) : base_norm(base) {}

  void observe(const ComplexVec& v) {
    if (base_norm == 0.0) return;
    const double drift = std::abs(v.norm() - base_norm) / base_norm;
    max_drift = std::max(max_drift, drift);
    if (drift > kDriftFail)
      throw std::runtime_error(
          "power orbit: norm drift exceeded 1e-6 of the base vector");
  }
};

}  // namespace

PowerOrbit power_orbit(const UnitaryOperator& u, const ComplexVec& v, int order) {
  if (order < 0) throw std::invalid_argument("power_orbit: order must be >= 0");
  if (v.dim() != u.dim())
    throw std::invalid_argument("power_orbit: dimension mismatch");

  PowerOrbit orbit;
  orbit.order = order;
  orbit.base_norm = v.norm();
  orbit.vecs.resize(static_cast<std::size_t>(2 * order + 1));
  orbit.vecs[static_cast<std::size_t>(order)] = v;

  DriftMonitor drift(orbit.base_norm);
  for (int k = 0; k < order; ++k) {
    const std::size_t fwd = static_cast<std::size_t>(order + k);
    const std::size_t bwd = static_cast<std::size_t>(order - k);
    orbit.vecs[fwd + 1] = u.apply(orbit.vecs[fwd], +1);
    orbit.vecs[bwd - 1] = u.apply(orbit.vecs[bwd], -1);
    drift.observe(orbit.vecs[fwd + 1]);
    drift.observe(orbit.vecs[bwd - 1]);
  }
  orbit.max_drift = drift.max_drift;
  orbit.drift_warning = drift.max_drift > kDriftWarn;
  return orbit;
}

MomentTable moment_table(const UnitaryOperator& u, const ComplexVec& x,
                         const ComplexVec& y, int order, std::string x_id,
                         std::string y_id) {
  if (order < 0) throw std::invalid_argument("moment_table: order must be >= 0");
  if (x.dim() != u.dim() || y.dim() != u.dim())
    throw std::invalid_argument("moment_table: dimension mismatch");

  MomentTable table;
  table.order = order;
  table.x_id = std::move(x_id);
  table.y_id = std::move(y_id);
  table.m.resize(static_cast<std::size_t>(2 * order + 1));
  table.m[static_cast<std::size_t>(order)] = inner(x, y);

  DriftMonitor drift(x.norm());
  ComplexVec up = x;
  ComplexVec un = x;
  for (int k = 1; k <= order; ++k) {
    up = u.apply(up, +1);
    un = u.apply(un, -1);
    drift.observe(up);
    drift.observe(un);
    table.m[static_cast<std::size_t>(order + k)] = inner(up, y);
    table.m[static_cast<std::size_t>(order - k)] = inner(un, y);
  }
  return table;
}

MomentTable moment_table(const PowerOrbit& orbit_x, const ComplexVec& y,
                         std::string x_id, std::string y_id) {
  MomentTable table;
  table.order = orbit_x.order;
  table.x_id = std::move(x_id);
  table.y_id = std::move(y_id);
  table.m.resize(static_cast<std::size_t>(2 * orbit_x.order + 1));
  for (int k = -orbit_x.order; k <= orbit_x.order; ++k)
    table.m[static_cast<std::size_t>(k + orbit_x.order)] = inner(orbit_x.at(k), y);
  return table;
}

ComplexVec synthesize_T(const PowerOrbit& orbit, double t) {
  const std::size_t d = orbit.at(0).dim();
  std::vector<KahanSum> acc(d);
  for (int n = 0; n <= orbit.order; ++n) {
    const cplx phase = std::polar(1.0, -t * n);
    const ComplexVec& un = orbit.at(n);
    for (std::size_t j = 0; j < d; ++j) acc[j].add(phase * un[j]);
  }
  ComplexVec out = ComplexVec::zeros(d);
  for (std::size_t j = 0; j < d; ++j) out[j] = acc[j].value();
  return out;
}

}  // namespace fejcal
