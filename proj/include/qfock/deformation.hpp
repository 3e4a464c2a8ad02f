#pragma once

// Deformation functions D_q(n): the eigenvalue of a+a on the number state |n>.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qfock/expression.hpp"

namespace qfock {

enum class SchemeKind { undeformed, biedenharn_macfarlane, custom };

/// Below this distance from q = 1 the Biedenharn-Macfarlane ratio is
/// replaced by its limit D(n) = n.
inline constexpr double kUnitQThreshold = 1e-8;

/// Probe tolerance for D(0) = 0 and D(1) = 1.
inline constexpr double kProbeTolerance = 1e-12;

class DeformationScheme {
 public:
  static DeformationScheme undeformed() { return DeformationScheme(SchemeKind::undeformed, 1.0, std::nullopt); }

  static DeformationScheme biedenharn_macfarlane(double q) {
    return DeformationScheme(SchemeKind::biedenharn_macfarlane, q, std::nullopt);
  }

  /// Throws std::invalid_argument if the expression does not evaluate to
  /// D(0) = 0 and D(1) = 1 at this q.
  static DeformationScheme custom(ExpressionTree expr, double q) {
    return DeformationScheme(SchemeKind::custom, q, std::move(expr));
  }

  static DeformationScheme custom(std::string_view source, double q) { return custom(parse_deformation(source), q); }

  SchemeKind kind() const noexcept { return kind_; }
  double q() const noexcept { return q_; }
  const std::optional<ExpressionTree>& expression() const noexcept { return expr_; }

  /// "undeformed", "bm", or "expr:<source>".
  std::string descriptor() const {
    switch (kind_) {
      case SchemeKind::undeformed: return "undeformed";
      case SchemeKind::biedenharn_macfarlane: return "bm";
      case SchemeKind::custom: return "expr:" + expr_->source();
    }
    return {};
  }

  double eval(unsigned n) const {
    switch (kind_) {
      case SchemeKind::undeformed: return static_cast<double>(n);
      case SchemeKind::biedenharn_macfarlane: {
        if (std::abs(q_ - 1.0) < kUnitQThreshold) return static_cast<double>(n);
        // sinh(n lambda) / sinh(lambda) == (q^n - q^-n) / (q - q^-1), lambda = ln q
        const double lambda = std::log(q_);
        const double v = std::sinh(n * lambda) / std::sinh(lambda);
        if (!std::isfinite(v)) throw std::range_error("D_q(" + std::to_string(n) + ") overflows at q=" + std::to_string(q_));
        return v;
      }
      case SchemeKind::custom: return expr_->evaluate(q_, static_cast<double>(n));
    }
    return 0.0;
  }

 private:
  DeformationScheme(SchemeKind kind, double q, std::optional<ExpressionTree> expr)
      : kind_(kind), q_(q), expr_(std::move(expr)) {
    if (!(q_ > 0.0) || !std::isfinite(q_)) throw std::invalid_argument("deformation parameter q must be a finite positive number");
    if (kind_ == SchemeKind::custom) probe();
  }

  void probe() const {
    double d0 = 0.0, d1 = 0.0;
    try {
      d0 = eval(0);
      d1 = eval(1);
    } catch (const EvalError& e) {
      throw std::invalid_argument("deformation '" + expr_->source() + "' cannot be evaluated at q=" +
                                  std::to_string(q_) + ": " + e.what());
    }
    if (std::abs(d0) > kProbeTolerance)
      throw std::invalid_argument("deformation '" + expr_->source() + "' violates D(0)=0 (got " + std::to_string(d0) + ")");
    if (std::abs(d1 - 1.0) > kProbeTolerance)
      throw std::invalid_argument("deformation '" + expr_->source() + "' violates D(1)=1 (got " + std::to_string(d1) + ")");
  }

  SchemeKind kind_;
  double q_;
  std::optional<ExpressionTree> expr_;
};

inline double eval_d(const DeformationScheme& scheme, unsigned n) { return scheme.eval(n); }

/// D(1) D(2) ... D(n); 1 for n = 0. Throws std::range_error on overflow.
inline double d_factorial(const DeformationScheme& scheme, unsigned n) {
  double product = 1.0;
  for (unsigned k = 1; k <= n; ++k) {
    product *= scheme.eval(k);
    if (!std::isfinite(product)) throw std::range_error("D_q factorial overflows at n=" + std::to_string(k));
  }
  return product;
}

/// Parses "undeformed", "bm" or "expr:<text>" into a scheme at the given q.
inline DeformationScheme make_scheme(std::string_view descriptor, double q) {
  if (descriptor == "undeformed") return DeformationScheme::undeformed();
  if (descriptor == "bm" || descriptor == "biedenharn-macfarlane") return DeformationScheme::biedenharn_macfarlane(q);
  if (descriptor.substr(0, 5) == "expr:") return DeformationScheme::custom(descriptor.substr(5), q);
  throw std::invalid_argument("unknown scheme '" + std::string(descriptor) + "' (expected undeformed, bm or expr:<text>)");
}

}  // namespace qfock
