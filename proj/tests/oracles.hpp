#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library's evaluation paths: deformation values use the literal
// power ratio in long double, sums run far past any library cutoff, and the
// tensor-product route builds full two-mode matrices.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

/// (q^n - q^-n) / (q - q^-1) in long double; n when q == 1.
inline long double bm(long double q, unsigned n) {
  if (q == 1.0L) return static_cast<long double>(n);
  return (std::pow(q, static_cast<long double>(n)) - std::pow(q, -static_cast<long double>(n))) / (q - 1.0L / q);
}

/// Moments of the geometric pair law P_n = (1 - x) x^n for Biedenharn-Macfarlane D,
/// summed until terms drop below 1e-30 of the running sum.
struct Moments {
  long double adag_a = 0, a_adag = 0, cross = 0;
};

inline Moments geometric_bm_moments(long double q, long double x) {
  Moments m;
  if (x == 0.0L) {
    m.a_adag = 1.0L;
    return m;
  }
  const long double head = 1.0L - x;
  for (unsigned n = 0; n < 20000; ++n) {
    const long double p = head * std::pow(x, static_cast<long double>(n));
    const long double p_prev = n > 0 ? head * std::pow(x, static_cast<long double>(n - 1)) : 0.0L;
    const long double t_a = bm(q, n) * p;
    const long double t_b = bm(q, n + 1) * p;
    const long double t_c = n > 0 ? bm(q, n) * std::sqrt(p_prev * p) : 0.0L;
    m.adag_a += t_a;
    m.a_adag += t_b;
    m.cross += t_c;
    if (n > 10 && t_b < 1e-30L * m.a_adag) break;
  }
  return m;
}

/// Shannon entropy in bits of P_n = (1 - x) x^n, summed term by term.
inline long double geometric_entropy_bits(long double x) {
  long double h = 0;
  for (unsigned n = 0; n < 100000; ++n) {
    const long double p = (1.0L - x) * std::pow(x, static_cast<long double>(n));
    if (p <= 0) break;
    h -= p * std::log2(p);
    if (p < 1e-40L) break;
  }
  return h;
}

/// Full two-mode operators on C^dim (x) C^dim for a ladder with entries sqrt(d[n+1]).
struct TwoMode {
  Eigen::MatrixXd a, ad, at, atd;  // a (x) 1, a+ (x) 1, 1 (x) a~, 1 (x) a~+
};

inline TwoMode two_mode(const std::vector<double>& d) {
  const auto dim = static_cast<Eigen::Index>(d.size());
  Eigen::MatrixXd single = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index n = 0; n + 1 < dim; ++n) single(n, n + 1) = std::sqrt(d[static_cast<std::size_t>(n + 1)]);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim, dim);
  auto kron = [&](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    Eigen::MatrixXd out(dim * dim, dim * dim);
    for (Eigen::Index i = 0; i < dim; ++i)
      for (Eigen::Index j = 0; j < dim; ++j) out.block(i * dim, j * dim, dim, dim) = x(i, j) * y;
    return out;
  };
  TwoMode t;
  t.a = kron(single, id);
  t.ad = t.a.transpose();
  t.at = kron(id, single);
  t.atd = t.at.transpose();
  return t;
}

}  // namespace oracle
