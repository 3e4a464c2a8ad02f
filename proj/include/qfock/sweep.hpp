#pragma once

// Parameter sweeps over (q, xi) or (q, theta) grids. Rows are independent;
// failures inside a row become status flags instead of aborting the batch.

#include <atomic>
#include <charconv>
#include <cmath>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "json.hpp"
#include "qfock/deformation.hpp"
#include "qfock/paired_state.hpp"
#include "qfock/series.hpp"
#include "qfock/squeezed.hpp"
#include "qfock/thermal.hpp"

namespace qfock {

enum class Family { squeezed, thermal };

inline const char* family_name(Family f) { return f == Family::squeezed ? "squeezed" : "thermal"; }

inline Family parse_family(std::string_view name) {
  if (name == "squeezed") return Family::squeezed;
  if (name == "thermal") return Family::thermal;
  throw std::invalid_argument("unknown family '" + std::string(name) + "' (expected squeezed or thermal)");
}

struct SweepSpec {
  Family family = Family::squeezed;
  std::string scheme = "undeformed";
  std::vector<double> q_values;
  std::vector<double> params;  // xi for squeezed, theta for thermal
  double tail_tol = 1e-12;
  unsigned jobs = 1;

  void validate() const {
    if (q_values.empty()) throw std::invalid_argument("q value list is empty");
    if (params.empty()) throw std::invalid_argument(std::string(family == Family::squeezed ? "xi" : "theta") + " value list is empty");
    check_tail_tol(tail_tol);
    if (scheme.substr(0, 5) == "expr:") parse_deformation(std::string_view(scheme).substr(5));
    else if (scheme != "undeformed" && scheme != "bm" && scheme != "biedenharn-macfarlane")
      throw std::invalid_argument("unknown scheme '" + scheme + "' (expected undeformed, bm or expr:<text>)");
  }
};

/// Largest tolerated |nbar_series - nbar_closed| before a row is flagged.
inline constexpr double kRowAgreementTol = 1e-8;

struct ResultRow {
  double q = 0.0;
  double param = 0.0;
  std::optional<double> nbar_series;
  std::optional<double> nbar_closed;
  std::optional<double> var1;
  std::optional<double> var2;
  std::optional<double> product;
  std::optional<double> entropy_closed;
  std::optional<double> entropy_series;
  std::optional<std::size_t> cutoff;
  std::optional<double> tail_bound;
  // Thermal closed form only: the shifted Boltzmann exponents theta +- ln q.
  std::optional<double> exponent_plus;
  std::optional<double> exponent_minus;
  std::vector<std::string> flags;

  std::string status() const {
    if (flags.empty()) return "ok";
    std::string s;
    for (const auto& f : flags) s += (s.empty() ? "" : "|") + f;
    return s;
  }

  bool has_flag(std::string_view flag) const {
    for (const auto& f : flags)
      if (f == flag) return true;
    return false;
  }
};

namespace detail {

inline ResultRow compute_row(const SweepSpec& spec, double q, double param) {
  ResultRow row;
  row.q = q;
  row.param = param;

  const bool squeezed = spec.family == Family::squeezed;
  if (!std::isfinite(param) || (!squeezed && !(param > 0.0))) {
    row.flags.push_back("invalid-param");
    return row;
  }

  std::optional<DeformationScheme> scheme;
  try {
    scheme = make_scheme(spec.scheme, q);
  } catch (const std::exception&) {
    row.flags.push_back("scheme-invalid");
    return row;
  }

  const GeometricLaw law = squeezed ? squeezed_law(param) : thermal_law(param);
  row.entropy_closed = squeezed ? entanglement_entropy_closed(param) : thermal_entropy_bits(param);

  std::optional<PairedDiagonalState> state;
  try {
    auto series = geometric_series(*scheme, law, spec.tail_tol);
    row.nbar_series = series.nbar();
    const auto v = quadrature_variances(series.moments);
    row.var1 = v.var1;
    row.var2 = v.var2;
    row.product = v.product();
    state = std::move(series.state);
  } catch (const DivergenceError&) {
    row.flags.push_back("divergent");
  } catch (const EvalError&) {
    row.flags.push_back("eval-error");
  } catch (const std::range_error&) {
    // convergent, but D_q(n) leaves double range before the tail is negligible
    row.flags.push_back("overflow");
  }
  if (!state) {
    const auto table = truncate_by_mass(law, spec.tail_tol);
    state = PairedDiagonalState::from_probabilities(table.p, table.tail_bound);
  }
  row.cutoff = state->cutoff();
  row.tail_bound = state->tail_bound();
  row.entropy_series = shannon_entropy_bits(state->probabilities());

  if (scheme->kind() == SchemeKind::custom) {
    row.flags.push_back("closed-form-skipped");
  } else {
    const double q_eff = scheme->kind() == SchemeKind::undeformed ? 1.0 : q;
    try {
      if (squeezed) {
        row.nbar_closed = nbar_closed_bm(q_eff, param);
      } else {
        const auto split = thermal_split(q_eff, param);
        row.nbar_closed = split.nbar;
        row.exponent_plus = split.exponent_plus;
        row.exponent_minus = split.exponent_minus;
      }
    } catch (const DivergenceError&) {
      row.flags.push_back("closed-form-skipped");
    }
  }
  if (row.nbar_series && row.nbar_closed && !(std::abs(*row.nbar_series - *row.nbar_closed) < kRowAgreementTol))
    row.flags.push_back("closed-mismatch");
  return row;
}

}  // namespace detail

/// One row per (q, param), q-major. Rows may be computed on `spec.jobs`
/// threads; the output order does not depend on it.
inline std::vector<ResultRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::size_t n_params = spec.params.size();
  std::vector<ResultRow> rows(spec.q_values.size() * n_params);
  auto compute = [&](std::size_t i) { rows[i] = detail::compute_row(spec, spec.q_values[i / n_params], spec.params[i % n_params]); };

  const unsigned jobs = std::max(1u, std::min<unsigned>(spec.jobs, static_cast<unsigned>(rows.size())));
  if (jobs == 1) {
    for (std::size_t i = 0; i < rows.size(); ++i) compute(i);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < jobs; ++w)
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) compute(i);
      });
  }
  return rows;
}

/// Shortest representation that parses back to the same double.
inline std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline constexpr std::string_view kCsvHeader =
    "q,param,nbar_series,nbar_closed,var1,var2,product,entropy_closed,entropy_series,cutoff,tail_bound,status";

inline void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << format_number(r.q) << ',' << format_number(r.param) << ',' << opt(r.nbar_series) << ',' << opt(r.nbar_closed) << ','
        << opt(r.var1) << ',' << opt(r.var2) << ',' << opt(r.product) << ',' << opt(r.entropy_closed) << ','
        << opt(r.entropy_series) << ',' << (r.cutoff ? std::to_string(*r.cutoff) : std::string()) << ',' << opt(r.tail_bound)
        << ',' << r.status() << '\n';
  }
}

inline nlohmann::json row_to_json(const ResultRow& r) {
  auto opt = [](const auto& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  return {{"q", r.q},
          {"param", r.param},
          {"nbar_series", opt(r.nbar_series)},
          {"nbar_closed", opt(r.nbar_closed)},
          {"var1", opt(r.var1)},
          {"var2", opt(r.var2)},
          {"product", opt(r.product)},
          {"entropy_closed", opt(r.entropy_closed)},
          {"entropy_series", opt(r.entropy_series)},
          {"cutoff", opt(r.cutoff)},
          {"tail_bound", opt(r.tail_bound)},
          {"exponent_plus", opt(r.exponent_plus)},
          {"exponent_minus", opt(r.exponent_minus)},
          {"status", r.status()},
          {"flags", r.flags}};
}

inline ResultRow row_from_json(const nlohmann::json& j) {
  auto opt = [&](const char* key, auto& field) {
    using T = typename std::remove_reference_t<decltype(field)>::value_type;
    if (j.contains(key) && !j.at(key).is_null()) field = j.at(key).get<T>();
  };
  ResultRow r;
  r.q = j.at("q").get<double>();
  r.param = j.at("param").get<double>();
  opt("nbar_series", r.nbar_series);
  opt("nbar_closed", r.nbar_closed);
  opt("var1", r.var1);
  opt("var2", r.var2);
  opt("product", r.product);
  opt("entropy_closed", r.entropy_closed);
  opt("entropy_series", r.entropy_series);
  opt("cutoff", r.cutoff);
  opt("tail_bound", r.tail_bound);
  opt("exponent_plus", r.exponent_plus);
  opt("exponent_minus", r.exponent_minus);
  if (j.contains("flags")) r.flags = j.at("flags").get<std::vector<std::string>>();
  return r;
}

inline nlohmann::json sweep_to_json(const SweepSpec& spec, const std::vector<ResultRow>& rows) {
  nlohmann::json out = {{"family", family_name(spec.family)}, {"scheme", spec.scheme}, {"tail_tol", spec.tail_tol}};
  out["rows"] = nlohmann::json::array();
  for (const auto& r : rows) out["rows"].push_back(row_to_json(r));
  return out;
}

inline std::vector<ResultRow> rows_from_json(const nlohmann::json& doc) {
  std::vector<ResultRow> rows;
  for (const auto& j : doc.at("rows")) rows.push_back(row_from_json(j));
  return rows;
}

inline nlohmann::json state_to_json(const PairedDiagonalState& state) {
  return {{"coeffs", state.coeffs()}, {"tail_bound", state.tail_bound()}};
}

inline nlohmann::json operator_to_json(const DeformationScheme& scheme, std::string_view name, const Eigen::MatrixXd& m) {
  nlohmann::json entries = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    entries.push_back(std::move(row));
  }
  return {{"scheme", scheme.descriptor()}, {"q", scheme.q()}, {"dim", m.rows()}, {"operator", name}, {"entries", std::move(entries)}};
}

}  // namespace qfock
