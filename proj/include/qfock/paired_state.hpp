#pragma once

// States of the doubled Fock space that live in the correlated pair basis
// |n, n~>:  |psi> = sum_n c_n |n, n~>,  c_n = sqrt(P_n) >= 0.
//
// Second moments. With a|n> = sqrt(D(n))|n-1> on each mode and product-basis
// orthogonality <m~ n|F|n' m~'> = <n|F|n'> delta(m,m'):
//   <a+a>   = sum D(n)   P_n
//   <a a+>  = sum D(n+1) P_n
//   <a a~>  = <a+ a~+> = sum D(n) c_{n-1} c_n      (a a~|n,n~> = D(n)|n-1,n~-1>)
// Tilde-mode moments equal the physical ones because the state is symmetric
// under exchanging the modes.
//
// First moments vanish: a, a+, a~ and a~+ each change n - n~ by one, so they
// map the pair subspace into its orthogonal complement and <U_i> = 0. The
// quadrature variances are then the plain second moments
//   U1 = (a + a+ + a~ + a~+) / 2^(3/2),  U2 = (a - a+ + a~ - a~+) / (2^(3/2) i)
//   <U1^2> = (<a+a> + <a a+>)/4 + <a a~>/2
//   <U2^2> = (<a+a> + <a a+>)/4 - <a a~>/2
// since only the pair-preserving products a a+, a+a, a a~, a+ a~+ (and their
// tilde images) survive.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qfock/deformation.hpp"

namespace qfock {

/// Tolerance on normalization beyond the declared tail bound.
inline constexpr double kNormSlack = 1e-12;

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) comp_ += (sum_ - t) + x;
    else comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double total(std::span<const double> values) {
  CompensatedSum s;
  for (double v : values) s.add(v);
  return s.value();
}

class PairedDiagonalState {
 public:
  /// c_n = sqrt(P_n). Throws std::invalid_argument on negative entries, excess
  /// mass, or a mass deficit larger than `tail_bound`.
  static PairedDiagonalState from_probabilities(std::span<const double> probabilities, double tail_bound) {
    if (probabilities.empty()) throw std::invalid_argument("probability sequence is empty");
    if (!(tail_bound >= 0.0)) throw std::invalid_argument("tail bound must be nonnegative");
    std::vector<double> coeffs;
    coeffs.reserve(probabilities.size());
    for (std::size_t n = 0; n < probabilities.size(); ++n) {
      const double p = probabilities[n];
      if (!(p >= 0.0) || !std::isfinite(p))
        throw std::invalid_argument("probability P_" + std::to_string(n) + " = " + std::to_string(p) + " is not a nonnegative number");
      coeffs.push_back(std::sqrt(p));
    }
    const double mass = total(probabilities);
    if (mass > 1.0 + kNormSlack) throw std::invalid_argument("probabilities sum to " + std::to_string(mass) + " > 1");
    if (1.0 - mass > tail_bound + kNormSlack)
      throw std::invalid_argument("mass deficit " + std::to_string(1.0 - mass) + " exceeds tail bound " + std::to_string(tail_bound));
    return PairedDiagonalState(std::move(coeffs), tail_bound);
  }

  const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  std::size_t cutoff() const noexcept { return coeffs_.size() - 1; }
  double tail_bound() const noexcept { return tail_bound_; }

  double probability(std::size_t n) const { return coeffs_[n] * coeffs_[n]; }

  std::vector<double> probabilities() const {
    std::vector<double> p(coeffs_.size());
    for (std::size_t n = 0; n < p.size(); ++n) p[n] = probability(n);
    return p;
  }

  double norm_squared() const { return total(probabilities()); }

  /// Two-mode amplitude matrix psi(n, m) = <n, m~|psi> (diagonal for pair states).
  Eigen::MatrixXd amplitude_matrix() const {
    const auto d = static_cast<Eigen::Index>(coeffs_.size());
    Eigen::MatrixXd psi = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index n = 0; n < d; ++n) psi(n, n) = coeffs_[static_cast<std::size_t>(n)];
    return psi;
  }

  /// Flattened state vector over |n> (x) |m~>, index n * dim + m.
  Eigen::VectorXd state_vector() const {
    const auto d = static_cast<Eigen::Index>(coeffs_.size());
    Eigen::VectorXd v = Eigen::VectorXd::Zero(d * d);
    for (Eigen::Index n = 0; n < d; ++n) v(n * d + n) = coeffs_[static_cast<std::size_t>(n)];
    return v;
  }

 private:
  PairedDiagonalState(std::vector<double> coeffs, double tail_bound) : coeffs_(std::move(coeffs)), tail_bound_(tail_bound) {}

  std::vector<double> coeffs_;
  double tail_bound_;
};

struct MomentSet {
  double adag_a = 0.0;          // <a+a>
  double a_adag = 0.0;          // <a a+>
  double a_atilde = 0.0;        // <a a~>
  double adag_atildedag = 0.0;  // <a+ a~+>
};

inline MomentSet moments(const PairedDiagonalState& state, const DeformationScheme& scheme) {
  const auto& c = state.coeffs();
  CompensatedSum adag_a, a_adag, cross;
  double d_next = scheme.eval(0);
  for (std::size_t n = 0; n < c.size(); ++n) {
    const double d_n = d_next;
    d_next = scheme.eval(static_cast<unsigned>(n + 1));
    const double p = c[n] * c[n];
    adag_a.add(d_n * p);
    a_adag.add(d_next * p);
    if (n > 0) cross.add(d_n * c[n - 1] * c[n]);
  }
  return {adag_a.value(), a_adag.value(), cross.value(), cross.value()};
}

struct QuadratureVariances {
  double var1 = 0.0;
  double var2 = 0.0;
  double product() const { return var1 * var2; }
};

inline QuadratureVariances quadrature_variances(const MomentSet& m) {
  const double diag = 0.25 * (m.adag_a + m.a_adag);
  const double cross = 0.5 * m.a_atilde;
  return {diag + cross, diag - cross};
}

inline double shannon_entropy_bits(std::span<const double> probabilities) {
  CompensatedSum h;
  for (std::size_t n = 0; n < probabilities.size(); ++n) {
    const double p = probabilities[n];
    if (!(p >= 0.0)) throw std::invalid_argument("probability P_" + std::to_string(n) + " is negative");
    if (p > 0.0) h.add(-p * std::log2(p));
  }
  const double mass = total(probabilities);
  if (std::abs(mass - 1.0) > 1e-9) throw std::invalid_argument("probabilities sum to " + std::to_string(mass) + ", not 1");
  return h.value();
}

/// Partial trace over the idle mode: rho = psi psi^T for amplitude matrix psi(n, m~).
inline Eigen::MatrixXd reduced_density_matrix(const Eigen::MatrixXd& amplitudes) { return amplitudes * amplitudes.transpose(); }

inline double von_neumann_entropy_bits(const Eigen::MatrixXd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(rho, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigen decomposition of reduced density matrix failed");
  CompensatedSum h;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double lambda = solver.eigenvalues()(i);
    if (lambda > 0.0) h.add(-lambda * std::log2(lambda));
  }
  return h.value();
}

inline double reduced_entropy_bits(const PairedDiagonalState& state) {
  return von_neumann_entropy_bits(reduced_density_matrix(state.amplitude_matrix()));
}

}  // namespace qfock
