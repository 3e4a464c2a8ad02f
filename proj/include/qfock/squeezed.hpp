#pragma once

// Two-mode squeezed vacuum in the doubled q-Fock space,
//   |O(xi)> = sum_n P_n^(1/2) |n, n~>,  P_n = tanh^(2n)(xi) / cosh^2(xi).
// The pair law carries no q; the deformation enters only through D(n) in the
// moments.

#include <cmath>
#include <stdexcept>
#include <utility>

#include "qfock/deformation.hpp"
#include "qfock/paired_state.hpp"
#include "qfock/series.hpp"

namespace qfock {

struct SqueezedSpec {
  double xi = 0.0;
  DeformationScheme scheme = DeformationScheme::undeformed();
  double tail_tol = 1e-12;

  void validate() const {
    if (!std::isfinite(xi)) throw std::invalid_argument("squeezing parameter must be finite");
    check_tail_tol(tail_tol);
  }
};

inline GeometricLaw squeezed_law(double xi) {
  const double t = std::tanh(xi);
  const double c = std::cosh(xi);
  return {t * t, 1.0 / (c * c)};
}

inline ProbabilityTable squeezed_probabilities(const SqueezedSpec& spec) {
  spec.validate();
  return truncate_by_mass(squeezed_law(spec.xi), spec.tail_tol);
}

inline PairedDiagonalState squeezed_state(const SqueezedSpec& spec) {
  const auto table = squeezed_probabilities(spec);
  return PairedDiagonalState::from_probabilities(table.p, table.tail_bound);
}

/// (1 + m) log2(1 + m) - m log2 m, the entropy of a geometric law with mean m.
inline double geometric_entropy_bits(double mean) {
  if (mean <= 0.0) return 0.0;
  return ((1.0 + mean) * std::log1p(mean) - mean * std::log(mean)) / std::log(2.0);
}

inline double entanglement_entropy_closed(double xi) {
  const double s = std::sinh(xi);
  return geometric_entropy_bits(s * s);
}

/// Moments and truncated state from direct summation. Throws DivergenceError.
inline SeriesResult squeezed_series(const SqueezedSpec& spec) {
  spec.validate();
  return geometric_series(spec.scheme, squeezed_law(spec.xi), spec.tail_tol);
}

inline double nbar_series(const SqueezedSpec& spec) { return squeezed_series(spec).nbar(); }

struct SplitWeights {
  double c1;
  double c2;
};

/// C1 = q/(q - 1/q), C2 = (1/q)/(1/q - q); singular at q = 1.
inline SplitWeights squeezed_weights(double q) {
  const double qi = 1.0 / q;
  return {q / (q - qi), qi / (qi - q)};
}

inline void require_squeezed_convergence(double q, double xi) {
  if (!(q > 0.0)) throw std::invalid_argument("q must be positive");
  const double t = std::tanh(xi);
  const double growth = std::max(q, 1.0 / q) * t * t;
  if (growth >= 1.0) throw DivergenceError(growth, "closed form requires max(q, 1/q) tanh^2(xi) < 1");
}

/// Biedenharn-Macfarlane mean photon number,
///   nbar = tanh^2/cosh^2 * [C1 / (1 - q tanh^2) + C2 / (1 - tanh^2 / q)].
/// At q = 1 the weights are singular and the undeformed value sinh^2 is returned.
inline double nbar_closed_bm(double q, double xi) {
  require_squeezed_convergence(q, xi);
  if (std::abs(q - 1.0) < kUnitQThreshold) {
    const double s = std::sinh(xi);
    return s * s;
  }
  const auto law = squeezed_law(xi);
  const auto [c1, c2] = squeezed_weights(q);
  return law.ratio * law.head * (c1 / (1.0 - q * law.ratio) + c2 / (1.0 - law.ratio / q));
}

struct ClosedVariances {
  double var1;
  double var2;
  double product;
};

/// var1 = nbar (1 + tanh)^2 / (4 tanh^2), var2 = nbar (1 - tanh)^2 / (4 tanh^2),
/// product = (nbar / (4 sinh^2))^2. At xi = 0 the ratio is 0/0; the vacuum
/// values (1/4, 1/4, 1/16) are returned.
inline ClosedVariances squeezed_variances_closed(double q, double xi) {
  const double t = std::tanh(xi);
  if (t == 0.0) return {0.25, 0.25, 0.0625};
  const double nbar = nbar_closed_bm(q, xi);
  const double s = std::sinh(xi);
  const double p = nbar / (4.0 * s * s);
  return {0.25 * nbar * (1.0 + t) * (1.0 + t) / (t * t), 0.25 * nbar * (1.0 - t) * (1.0 - t) / (t * t), p * p};
}

}  // namespace qfock
