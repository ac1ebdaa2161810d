// moments.hpp — operator trigonometric moments m_k = <U^k x, y> and the
// synthesized family T_N(t) v = sum_{n=0}^N e^{-itn} U^n v.

#pragma once

#include <string>
#include <vector>

#include "fejcal/core.hpp"

namespace fejcal {

// Orbit norm drift thresholds, relative to the base vector norm.
inline constexpr double kDriftWarn = 1e-9;
inline constexpr double kDriftFail = 1e-6;

/// The cached powers u_k = U^k v for k = -N..N (negative powers via U^*).
struct PowerOrbit {
  int order = 0;
  std::vector<ComplexVec> vecs;  // vecs[k + order]
  double base_norm = 0.0;
  double max_drift = 0.0;  // max_k |  ||u_k|| - ||v||  | / ||v||
  bool drift_warning = false;

  const ComplexVec& at(int k) const {
    return vecs[static_cast<std::size_t>(k + order)];
  }
};

/// m_k = <U^k x, y> for |k| <= N.
struct MomentTable {
  int order = 0;
  std::vector<cplx> m;  // m[k + order]
  std::string x_id = "x";
  std::string y_id = "y";

  cplx at(int k) const noexcept { return m[static_cast<std::size_t>(k + order)]; }
};

/// Builds the orbit by iterated application (2N operator applies, never a
/// matrix power). Norm drift beyond kDriftFail relative aborts with
/// std::runtime_error; beyond kDriftWarn sets drift_warning.
PowerOrbit power_orbit(const UnitaryOperator& u, const ComplexVec& v, int order);

/// Streaming moment computation retaining only the two running vectors.
MomentTable moment_table(const UnitaryOperator& u, const ComplexVec& x,
                         const ComplexVec& y, int order, std::string x_id = "x",
                         std::string y_id = "y");

/// Same values read off a pre-built orbit of x.
MomentTable moment_table(const PowerOrbit& orbit_x, const ComplexVec& y,
                         std::string x_id = "x", std::string y_id = "y");

/// T_N(t) v = sum_{n=0}^N e^{-itn} u_n from the orbit's nonnegative side.
ComplexVec synthesize_T(const PowerOrbit& orbit, double t);

}  // namespace fejcal
