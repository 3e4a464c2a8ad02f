#pragma once

// Thermal vacuum of the free Hamiltonian H = omega N at inverse temperature
// beta, parameterized by the single dimensionless theta = beta * omega
// (hbar = k = 1):
//   |O(beta)> = sum_n P_n^(1/2) |n, n~>,  P_n = (1 - e^-theta) e^(-n theta),
// i.e. Z = Tr e^(-beta H) = 1 / (1 - e^-theta).
//
// Second moments follow from the pair law with ratio r = e^-theta for any
// scheme with D(0) = 0:
//   <a a+> = e^theta nbar,  <a a~> = <a+ a~+> = e^(theta/2) nbar.
// The positive exponents are what the defining sums produce.

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qfock/deformation.hpp"
#include "qfock/paired_state.hpp"
#include "qfock/series.hpp"
#include "qfock/squeezed.hpp"

namespace qfock {

struct ThermalSpec {
  double theta = 1.0;
  DeformationScheme scheme = DeformationScheme::undeformed();
  double tail_tol = 1e-12;

  void validate() const {
    if (!(theta > 0.0)) throw std::invalid_argument("theta = beta*omega must be positive");
    check_tail_tol(tail_tol);
  }
};

inline GeometricLaw thermal_law(double theta) { return {std::exp(-theta), -std::expm1(-theta)}; }

inline ProbabilityTable thermal_probabilities(const ThermalSpec& spec) {
  spec.validate();
  return truncate_by_mass(thermal_law(spec.theta), spec.tail_tol);
}

inline PairedDiagonalState thermal_state(const ThermalSpec& spec) {
  const auto table = thermal_probabilities(spec);
  return PairedDiagonalState::from_probabilities(table.p, table.tail_bound);
}

inline SeriesResult thermal_series(const ThermalSpec& spec) {
  spec.validate();
  return geometric_series(spec.scheme, thermal_law(spec.theta), spec.tail_tol);
}

inline double thermal_nbar_series(const ThermalSpec& spec) { return thermal_series(spec).nbar(); }

/// Bose-Einstein occupation 1 / (e^theta - 1).
inline double bose_occupation(double theta) { return 1.0 / std::expm1(theta); }

/// nbar split into two Bose-Einstein branches at shifted exponents theta +- lambda.
struct ThermalSplit {
  double c1;
  double c2;
  double exponent_plus;   // theta + lambda, i.e. beta (omega + lambda / beta)
  double exponent_minus;  // theta - lambda
  double nbar;
};

/// C1 = (q - 1)/(q - 1/q) = q/(q + 1), C2 = (1 - 1/q)/(q - 1/q) = 1/(q + 1).
inline SplitWeights thermal_weights(double q) { return {q / (q + 1.0), 1.0 / (q + 1.0)}; }

inline ThermalSplit thermal_split(double q, double theta) {
  if (!(q > 0.0)) throw std::invalid_argument("q must be positive");
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
  const double lambda = std::log(q);
  if (!(theta > std::abs(lambda)))
    throw DivergenceError(std::max(q, 1.0 / q) * std::exp(-theta), "closed form requires theta > |ln q|");
  const auto [c1, c2] = thermal_weights(q);
  ThermalSplit split{c1, c2, theta + lambda, theta - lambda, 0.0};
  if (std::abs(q - 1.0) < kUnitQThreshold) split.nbar = bose_occupation(theta);
  else split.nbar = c1 / std::expm1(split.exponent_plus) + c2 / std::expm1(split.exponent_minus);
  return split;
}

inline double thermal_nbar_closed_bm(double q, double theta) { return thermal_split(q, theta).nbar; }

namespace detail {
inline bool thermal_degenerate(double theta, double nbar) {
  return nbar == 0.0 || !std::isfinite(std::exp(theta) * nbar);
}
}  // namespace detail

/// Vacuum moments (0, D(1) = 1, 0, 0) are returned when e^theta * nbar is 0 * inf.
inline MomentSet thermal_moments_closed(double theta, double nbar) {
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
  if (!(nbar >= 0.0)) throw std::invalid_argument("nbar must be nonnegative");
  if (detail::thermal_degenerate(theta, nbar)) return {0.0, 1.0, 0.0, 0.0};
  const double cross = std::exp(0.5 * theta) * nbar;
  return {nbar, std::exp(theta) * nbar, cross, cross};
}

/// var1 = (e^(theta/2) + 1)^2 nbar / 4, var2 = (e^(theta/2) - 1)^2 nbar / 4,
/// product = (e^theta - 1)^2 nbar^2 / 16.
inline ClosedVariances thermal_variances_closed(double theta, double nbar) {
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
  if (!(nbar >= 0.0)) throw std::invalid_argument("nbar must be nonnegative");
  if (detail::thermal_degenerate(theta, nbar)) return {0.25, 0.25, 0.0625};
  const double hm1 = std::expm1(0.5 * theta);  // e^(theta/2) - 1
  const double hp1 = hm1 + 2.0;
  const double e = std::expm1(theta);
  return {0.25 * hp1 * hp1 * nbar, 0.25 * hm1 * hm1 * nbar, e * e * nbar * nbar / 16.0};
}

inline double thermal_entropy_bits(double theta) {
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
  return geometric_entropy_bits(bose_occupation(theta));
}

}  // namespace qfock
