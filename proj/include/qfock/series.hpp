#pragma once

// Geometric pair laws P_n = head * ratio^n and their tail-controlled
// truncation. Both vacua (squeezed: ratio = tanh^2 xi, thermal:
// ratio = exp(-theta)) are of this form.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "qfock/deformation.hpp"
#include "qfock/paired_state.hpp"

namespace qfock {

/// The D-weighted series sum(D(n) P_n) does not converge.
class DivergenceError : public std::domain_error {
 public:
  DivergenceError(double ratio, const std::string& what)
      : std::domain_error(what + " (growth ratio " + std::to_string(ratio) + ")"), ratio_(ratio) {}
  double ratio() const noexcept { return ratio_; }

 private:
  double ratio_;
};

struct GeometricLaw {
  double ratio;  // in [0, 1)
  double head;   // P_0 = 1 - ratio, evaluated in the family's own closed form

  double probability(std::size_t n) const { return head * std::pow(ratio, static_cast<double>(n)); }
};

struct ProbabilityTable {
  std::vector<double> p;
  double tail_bound = 0.0;  // ratio^(cutoff + 1), the discarded mass

  std::size_t cutoff() const { return p.size() - 1; }
};

inline void check_tail_tol(double tail_tol) {
  if (!(tail_tol > 0.0 && tail_tol < 1.0)) throw std::invalid_argument("tail tolerance must lie in (0, 1)");
}

/// Smallest N with ratio^(N+1) <= tail_tol.
inline std::size_t mass_cutoff(double ratio, double tail_tol) {
  check_tail_tol(tail_tol);
  std::size_t n = 0;
  double tail = ratio;
  while (tail > tail_tol) {
    tail *= ratio;
    ++n;
  }
  return n;
}

inline ProbabilityTable truncate(const GeometricLaw& law, std::size_t cutoff) {
  ProbabilityTable table;
  table.p.resize(cutoff + 1);
  for (std::size_t n = 0; n <= cutoff; ++n) table.p[n] = law.probability(n);
  table.tail_bound = std::pow(law.ratio, static_cast<double>(cutoff + 1));
  return table;
}

inline ProbabilityTable truncate_by_mass(const GeometricLaw& law, double tail_tol) {
  return truncate(law, mass_cutoff(law.ratio, tail_tol));
}

/// Relative size below which the remaining D-weighted tail is dropped.
inline constexpr double kSeriesRelTol = 1e-17;
/// A custom scheme whose term ratio stays >= 1 this many terms in a row is divergent.
inline constexpr int kDivergenceRun = 32;
inline constexpr std::size_t kMaxSeriesTerms = 200000;

/// Growth rate of D(n+1)/D(n) as n -> infinity for the built-in schemes.
inline double asymptotic_growth(const DeformationScheme& scheme) {
  if (scheme.kind() == SchemeKind::biedenharn_macfarlane && std::abs(scheme.q() - 1.0) >= kUnitQThreshold)
    return std::max(scheme.q(), 1.0 / scheme.q());
  return 1.0;
}

/// Cutoff at which sum_{n > N} D(n+1) P_n is negligible relative to the sum.
inline std::size_t weighted_cutoff(const DeformationScheme& scheme, const GeometricLaw& law) {
  if (scheme.kind() != SchemeKind::custom) {
    const double growth = asymptotic_growth(scheme) * law.ratio;
    if (growth >= 1.0) throw DivergenceError(growth, "D-weighted series diverges for scheme " + scheme.descriptor());
  }
  if (law.ratio == 0.0) return 0;

  CompensatedSum sum;
  double term = scheme.eval(1) * law.probability(0);
  sum.add(term);
  int run = 0;
  for (std::size_t n = 0; n < kMaxSeriesTerms; ++n) {
    const double next = scheme.eval(static_cast<unsigned>(n + 2)) * law.probability(n + 1);
    if (!std::isfinite(next)) throw DivergenceError(std::numeric_limits<double>::infinity(), "D-weighted series overflowed");
    if (next == 0.0) return n + 1;
    const double rho = next / term;
    run = rho >= 1.0 ? run + 1 : 0;
    if (scheme.kind() == SchemeKind::custom && run >= kDivergenceRun)
      throw DivergenceError(rho, "D-weighted series terms kept growing for " + std::to_string(kDivergenceRun) + " terms");
    sum.add(next);
    if (rho < 1.0 && next / (1.0 - rho) <= kSeriesRelTol * std::abs(sum.value())) return n + 1;
    term = next;
  }
  throw DivergenceError(1.0, "D-weighted series did not converge within " + std::to_string(kMaxSeriesTerms) + " terms");
}

struct SeriesResult {
  PairedDiagonalState state;
  MomentSet moments;

  double nbar() const { return moments.adag_a; }
};

/// Builds the pair state with a cutoff long enough for both the mass tail and
/// the D-weighted moment sums, then evaluates the moments directly.
inline SeriesResult geometric_series(const DeformationScheme& scheme, const GeometricLaw& law, double tail_tol) {
  const std::size_t cutoff = std::max(mass_cutoff(law.ratio, tail_tol), weighted_cutoff(scheme, law) + 1);
  const auto table = truncate(law, cutoff);
  auto state = PairedDiagonalState::from_probabilities(table.p, table.tail_bound);
  const auto m = moments(state, scheme);
  return {std::move(state), m};
}

}  // namespace qfock
