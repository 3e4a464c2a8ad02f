#pragma once

// Truncated number-basis matrices for a single q-deformed mode and a checker
// for the generalized q-Heisenberg-Weyl relations.
//
// The ladder sums are cut at N_max = dim - 1, so a a+ loses its last diagonal
// entry. Relations are checked on the interior block (indices < dim - 1);
// a+a = D(N) holds on the full space.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qfock/deformation.hpp"

namespace qfock {

class TruncatedOperator {
 public:
  explicit TruncatedOperator(Eigen::MatrixXd entries) : m_(std::move(entries)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0) throw std::invalid_argument("operator matrix must be square and non-empty");
    if (!m_.allFinite()) throw std::domain_error("operator matrix has non-finite entries");
  }

  static TruncatedOperator zero(std::size_t dim) { return TruncatedOperator(Eigen::MatrixXd::Zero(checked(dim), checked(dim))); }

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  const Eigen::MatrixXd& entries() const noexcept { return m_; }
  double operator()(std::size_t row, std::size_t col) const { return m_(row, col); }

  TruncatedOperator transpose() const { return TruncatedOperator(m_.transpose()); }

  friend TruncatedOperator operator*(const TruncatedOperator& a, const TruncatedOperator& b) {
    same_dim(a, b);
    return TruncatedOperator(a.m_ * b.m_);
  }
  friend TruncatedOperator operator+(const TruncatedOperator& a, const TruncatedOperator& b) {
    same_dim(a, b);
    return TruncatedOperator(a.m_ + b.m_);
  }
  friend TruncatedOperator operator-(const TruncatedOperator& a, const TruncatedOperator& b) {
    same_dim(a, b);
    return TruncatedOperator(a.m_ - b.m_);
  }
  friend TruncatedOperator operator*(double s, const TruncatedOperator& a) { return TruncatedOperator(s * a.m_); }

  static Eigen::Index checked(std::size_t dim) {
    if (dim == 0) throw std::invalid_argument("dimension must be at least 1");
    return static_cast<Eigen::Index>(dim);
  }

  static void same_dim(const TruncatedOperator& a, const TruncatedOperator& b) {
    if (a.dim() != b.dim())
      throw std::invalid_argument("dimension mismatch: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }

 private:
  Eigen::MatrixXd m_;
};

/// |m><n|
inline TruncatedOperator projector(std::size_t m, std::size_t n, std::size_t dim) {
  if (m >= dim || n >= dim)
    throw std::out_of_range("projector index (" + std::to_string(m) + "," + std::to_string(n) + ") out of range for dim " +
                            std::to_string(dim));
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(TruncatedOperator::checked(dim), TruncatedOperator::checked(dim));
  p(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) = 1.0;
  return TruncatedOperator(std::move(p));
}

inline TruncatedOperator annihilation_matrix(const DeformationScheme& scheme, std::size_t dim) {
  const auto d = TruncatedOperator::checked(dim);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index n = 0; n + 1 < d; ++n) {
    const double value = scheme.eval(static_cast<unsigned>(n + 1));
    if (value < 0.0)
      throw std::domain_error("D_q(" + std::to_string(n + 1) + ") = " + std::to_string(value) +
                              " is negative; ladder matrix element undefined");
    a(n, n + 1) = std::sqrt(value);
  }
  return TruncatedOperator(std::move(a));
}

inline TruncatedOperator creation_matrix(const DeformationScheme& scheme, std::size_t dim) {
  return annihilation_matrix(scheme, dim).transpose();
}

inline TruncatedOperator number_matrix(std::size_t dim) {
  const auto d = TruncatedOperator::checked(dim);
  return TruncatedOperator(Eigen::VectorXd::LinSpaced(d, 0.0, static_cast<double>(d - 1)).asDiagonal().toDenseMatrix());
}

inline TruncatedOperator identity_matrix(std::size_t dim) {
  const auto d = TruncatedOperator::checked(dim);
  return TruncatedOperator(Eigen::MatrixXd::Identity(d, d));
}

/// diag(D(shift), D(1 + shift), ..., D(dim - 1 + shift)); shift = 0 gives D(N),
/// shift = 1 gives D(N+1).
inline TruncatedOperator deformation_diagonal(const DeformationScheme& scheme, std::size_t dim, unsigned shift = 0) {
  const auto d = TruncatedOperator::checked(dim);
  Eigen::VectorXd diag(d);
  for (Eigen::Index n = 0; n < d; ++n) diag(n) = scheme.eval(static_cast<unsigned>(n) + shift);
  return TruncatedOperator(diag.asDiagonal().toDenseMatrix());
}

inline TruncatedOperator commutator(const TruncatedOperator& a, const TruncatedOperator& b) { return a * b - b * a; }

/// Kronecker product, physical mode first: (A (x) B)(i*db + k, j*db + l) = A(i,j) B(k,l).
inline TruncatedOperator kron(const TruncatedOperator& a, const TruncatedOperator& b) {
  const auto da = static_cast<Eigen::Index>(a.dim());
  const auto db = static_cast<Eigen::Index>(b.dim());
  Eigen::MatrixXd out(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < da; ++j) out.block(i * db, j * db, db, db) = a.entries()(i, j) * b.entries();
  return TruncatedOperator(std::move(out));
}

struct RelationResidual {
  std::string relation;  // e.g. "a+a = D(N)"
  std::string label;     // short key, e.g. "adag_a"
  double abs_residual = 0.0;
  double rel_residual = 0.0;
  bool passed = false;
};

struct AlgebraReport {
  std::string scheme;
  double q = 1.0;
  std::size_t dim = 0;
  double tol = 0.0;
  std::vector<RelationResidual> relations;

  bool all_passed() const {
    return std::all_of(relations.begin(), relations.end(), [](const RelationResidual& r) { return r.passed; });
  }

  const RelationResidual* find(std::string_view label) const {
    for (const auto& r : relations)
      if (r.label == label) return &r;
    return nullptr;
  }
};

namespace detail {

/// Residual of sum(sign_k * T_k) over the leading `block` x `block` corner.
/// The relative measure divides each entry by max(1, sum |T_k(i,j)|).
inline RelationResidual residual(std::string relation, std::string label, std::initializer_list<std::pair<double, const Eigen::MatrixXd*>> terms,
                                 Eigen::Index block, double tol) {
  RelationResidual r{std::move(relation), std::move(label)};
  for (Eigen::Index i = 0; i < block; ++i) {
    for (Eigen::Index j = 0; j < block; ++j) {
      double sum = 0.0, scale = 0.0;
      for (const auto& [sign, m] : terms) {
        sum += sign * (*m)(i, j);
        scale += std::abs(sign * (*m)(i, j));
      }
      r.abs_residual = std::max(r.abs_residual, std::abs(sum));
      r.rel_residual = std::max(r.rel_residual, std::abs(sum) / std::max(1.0, scale));
    }
  }
  r.passed = r.rel_residual < tol;
  return r;
}

}  // namespace detail

/// Checks a+a = D(N), a a+ = D(N+1), [a,a+] = D(N+1) - D(N), [N,a+] = a+,
/// [N,a] = -a and, for Biedenharn-Macfarlane, a a+ - q a+a = q^-N.
inline AlgebraReport verify_algebra(const DeformationScheme& scheme, std::size_t dim, double tol) {
  if (dim < 2) throw std::invalid_argument("verify_algebra needs dim >= 2");
  const auto a = annihilation_matrix(scheme, dim);
  const auto ad = creation_matrix(scheme, dim);
  const auto num = number_matrix(dim);
  const auto dn = deformation_diagonal(scheme, dim, 0);
  const auto dn1 = deformation_diagonal(scheme, dim, 1);

  const Eigen::MatrixXd ada = ad.entries() * a.entries();
  const Eigen::MatrixXd aad = a.entries() * ad.entries();
  const Eigen::MatrixXd na = num.entries() * a.entries();
  const Eigen::MatrixXd an = a.entries() * num.entries();
  const Eigen::MatrixXd nad = num.entries() * ad.entries();
  const Eigen::MatrixXd adn = ad.entries() * num.entries();

  const auto inner = static_cast<Eigen::Index>(dim - 1);
  AlgebraReport report{scheme.descriptor(), scheme.q(), dim, tol, {}};
  report.relations.push_back(detail::residual("a+a = D(N)", "adag_a", {{1.0, &ada}, {-1.0, &dn.entries()}}, inner, tol));
  report.relations.push_back(detail::residual("a a+ = D(N+1)", "a_adag", {{1.0, &aad}, {-1.0, &dn1.entries()}}, inner, tol));
  report.relations.push_back(detail::residual("[a,a+] = D(N+1) - D(N)", "commutator",
                                              {{1.0, &aad}, {-1.0, &ada}, {-1.0, &dn1.entries()}, {1.0, &dn.entries()}}, inner, tol));
  report.relations.push_back(
      detail::residual("[N,a+] = a+", "number_raising", {{1.0, &nad}, {-1.0, &adn}, {-1.0, &ad.entries()}}, inner, tol));
  report.relations.push_back(
      detail::residual("[N,a] = -a", "number_lowering", {{1.0, &na}, {-1.0, &an}, {1.0, &a.entries()}}, inner, tol));

  if (scheme.kind() == SchemeKind::biedenharn_macfarlane) {
    const auto d = static_cast<Eigen::Index>(dim);
    Eigen::VectorXd qpow(d);
    for (Eigen::Index n = 0; n < d; ++n) qpow(n) = std::pow(scheme.q(), -static_cast<double>(n));
    const Eigen::MatrixXd q_minus_n = qpow.asDiagonal().toDenseMatrix();
    report.relations.push_back(detail::residual("a a+ - q a+a = q^-N", "bm_relation",
                                                {{1.0, &aad}, {-scheme.q(), &ada}, {-1.0, &q_minus_n}}, inner, tol));
  }
  return report;
}

}  // namespace qfock
