#pragma once

// Command-line front end. `run_cli` is the whole program minus process
// plumbing so the test suites can drive it in-process.
//
// Exit codes: 0 success, 1 usage/parse error, 2 verification failure, 3 I/O error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qfock/qfock.hpp"

namespace qfock::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitVerify = 2;
inline constexpr int kExitIo = 3;

namespace detail {

/// Each item may be a constant expression such as "ln(10/3)".
inline std::vector<double> parse_values(const std::vector<std::string>& items, const std::string& flag) {
  std::vector<double> out;
  for (const auto& item : items) {
    try {
      out.push_back(evaluate_constant(item));
    } catch (const std::exception& e) {
      throw std::invalid_argument(flag + " value '" + item + "': " + e.what());
    }
  }
  return out;
}

inline void report_parse_error(std::ostream& err, const std::string& source, const ParseError& e, std::size_t offset = 0) {
  err << "error: " << e.what() << '\n';
  err << "  " << source << '\n';
  err << "  " << std::string(e.position() + offset, ' ') << "^\n";
}

inline std::vector<double> json_values(const nlohmann::json& v) {
  if (v.is_array()) return v.get<std::vector<double>>();
  return {v.get<double>()};
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"q-deformed doubled Fock space: squeezed and thermal vacua", "qfock"};
  app.require_subcommand(1);

  std::string scheme = "undeformed";
  std::vector<std::string> q_items;
  std::vector<std::string> xi_items, theta_items;
  double tail_tol = 1e-12;
  std::string format = "csv";
  std::string out_path;
  std::string config_path;
  unsigned jobs = 1;
  std::string family_text;

  auto* sweep = app.add_subcommand("sweep", "Tabulate nbar, quadrature variances and entropy over a parameter grid");
  sweep->add_option("family", family_text, "squeezed or thermal")->required()->check(CLI::IsMember({"squeezed", "thermal"}));
  auto* sweep_scheme = sweep->add_option("--scheme", scheme, "undeformed | bm | expr:<text>");
  auto* sweep_q = sweep->add_option("--q", q_items, "comma-separated q values")->delimiter(',');
  auto* sweep_xi = sweep->add_option("--xi", xi_items, "comma-separated squeezing parameters")->delimiter(',');
  auto* sweep_theta = sweep->add_option("--theta", theta_items, "comma-separated beta*omega values")->delimiter(',');
  auto* sweep_tail = sweep->add_option("--tail-tol", tail_tol, "discarded probability mass bound");
  auto* sweep_format = sweep->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  auto* sweep_out = sweep->add_option("--out", out_path, "output file (default stdout)");
  auto* sweep_jobs = sweep->add_option("--jobs", jobs, "worker threads");
  sweep->add_option("--config", config_path, "JSON file with sweep settings; flags override it");

  std::vector<std::size_t> dims{16, 64};
  double tol = 1e-10;
  auto* verify = app.add_subcommand("verify", "Check the deformed oscillator algebra on truncated matrices");
  verify->add_option("--scheme", scheme, "undeformed | bm | expr:<text>");
  verify->add_option("--q", q_items, "comma-separated q values")->delimiter(',');
  verify->add_option("--dims", dims, "comma-separated matrix dimensions")->delimiter(',');
  verify->add_option("--tol", tol, "residual tolerance (scale-relative)");

  std::size_t dim = 4;
  std::string op_name;
  auto* ops = app.add_subcommand("ops", "Dump a truncated operator matrix as JSON");
  ops->add_option("--scheme", scheme, "undeformed | bm | expr:<text>");
  ops->add_option("--q", q_items, "q value");
  ops->add_option("--dim", dim, "matrix dimension (1..512)");
  ops->add_option("--operator", op_name, "annihilation | creation | number | identity | dq | dq_shifted")->required();

  std::string expr_text;
  std::vector<unsigned> n_values;
  auto* parse = app.add_subcommand("parse", "Parse a deformation expression and optionally evaluate it");
  parse->add_option("expression", expr_text, "expression in q and n")->required();
  auto* parse_q = parse->add_option("--q", q_items, "q value to evaluate at (checks D(0)=0, D(1)=1)");
  parse->add_option("--n", n_values, "n values to evaluate")->delimiter(',');

  auto* state = app.add_subcommand("state", "Dump the truncated pair coefficients of a vacuum as JSON");
  state->add_option("family", family_text, "squeezed or thermal")->required()->check(CLI::IsMember({"squeezed", "thermal"}));
  state->add_option("--xi", xi_items, "squeezing parameter");
  state->add_option("--theta", theta_items, "beta*omega");
  state->add_option("--tail-tol", tail_tol, "discarded probability mass bound");

  std::vector<const char*> argv{"qfock"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sweep) {
      SweepSpec spec;
      std::optional<nlohmann::json> config;
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
          err << "error: cannot read config file " << config_path << '\n';
          return kExitIo;
        }
        config = nlohmann::json::parse(in);
      }
      auto from_config = [&](const char* key) -> const nlohmann::json* {
        return config && config->contains(key) ? &config->at(key) : nullptr;
      };

      spec.family = parse_family(family_text);
      spec.scheme = scheme;
      if (!sweep_scheme->count())
        if (auto* v = from_config("scheme")) spec.scheme = v->get<std::string>();
      spec.tail_tol = tail_tol;
      if (!sweep_tail->count())
        if (auto* v = from_config("tail_tol")) spec.tail_tol = v->get<double>();
      if (!sweep_format->count())
        if (auto* v = from_config("format")) format = v->get<std::string>();
      if (!sweep_out->count())
        if (auto* v = from_config("out")) out_path = v->get<std::string>();
      spec.jobs = jobs;
      if (!sweep_jobs->count())
        if (auto* v = from_config("jobs")) spec.jobs = v->get<unsigned>();

      if (sweep_q->count()) spec.q_values = detail::parse_values(q_items, "--q");
      else if (auto* v = from_config("q")) spec.q_values = detail::json_values(*v);
      else spec.q_values = {1.0};

      const bool squeezed = spec.family == Family::squeezed;
      auto* param_opt = squeezed ? sweep_xi : sweep_theta;
      const auto& param_items = squeezed ? xi_items : theta_items;
      const char* param_key = squeezed ? "xi" : "theta";
      if ((squeezed ? sweep_theta : sweep_xi)->count()) {
        err << "error: " << (squeezed ? "--theta" : "--xi") << " does not apply to the " << family_text << " family\n";
        return kExitUsage;
      }
      if (param_opt->count()) spec.params = detail::parse_values(param_items, std::string("--") + param_key);
      else if (auto* v = from_config(param_key)) spec.params = detail::json_values(*v);
      else if (auto* v2 = from_config("params")) spec.params = detail::json_values(*v2);
      if (format != "csv" && format != "json") {
        err << "error: unknown format '" << format << "'\n";
        return kExitUsage;
      }

      try {
        spec.validate();
      } catch (const ParseError& e) {
        detail::report_parse_error(err, spec.scheme, e, 5);
        return kExitUsage;
      }
      const auto rows = run_sweep(spec);

      std::ostringstream buffer;
      if (format == "csv") write_csv(buffer, rows);
      else buffer << sweep_to_json(spec, rows).dump(2) << '\n';

      if (out_path.empty()) {
        out << buffer.str();
      } else {
        std::ofstream file(out_path, std::ios::binary);
        if (!file || !(file << buffer.str()) || !file.flush()) {
          err << "error: cannot write " << out_path << '\n';
          return kExitIo;
        }
      }
      return kExitOk;
    }

    if (*verify) {
      const auto qs = q_items.empty() ? std::vector<double>{1.0} : detail::parse_values(q_items, "--q");
      bool ok = true;
      for (double q : qs) {
        const auto s = make_scheme(scheme, q);
        for (std::size_t d : dims) {
          const auto report = verify_algebra(s, d, tol);
          out << "scheme=" << report.scheme << " q=" << format_number(report.q) << " dim=" << report.dim
              << " tol=" << format_number(tol) << '\n';
          for (const auto& r : report.relations) {
            out << "  " << (r.passed ? "PASS " : "FAIL ") << r.label << "  " << r.relation << "  abs=" << format_number(r.abs_residual)
                << " rel=" << format_number(r.rel_residual) << '\n';
          }
          ok = ok && report.all_passed();
        }
      }
      return ok ? kExitOk : kExitVerify;
    }

    if (*ops) {
      if (dim < 1 || dim > 512) {
        err << "error: --dim must be in 1..512\n";
        return kExitUsage;
      }
      const double q = q_items.empty() ? 1.0 : detail::parse_values(q_items, "--q").at(0);
      const auto s = make_scheme(scheme, q);
      Eigen::MatrixXd m;
      if (op_name == "annihilation") m = annihilation_matrix(s, dim).entries();
      else if (op_name == "creation") m = creation_matrix(s, dim).entries();
      else if (op_name == "number") m = number_matrix(dim).entries();
      else if (op_name == "identity") m = identity_matrix(dim).entries();
      else if (op_name == "dq") m = deformation_diagonal(s, dim, 0).entries();
      else if (op_name == "dq_shifted") m = deformation_diagonal(s, dim, 1).entries();
      else {
        err << "error: unknown operator '" << op_name << "'\n";
        return kExitUsage;
      }
      out << operator_to_json(s, op_name, m).dump() << '\n';
      return kExitOk;
    }

    if (*parse) {
      ExpressionTree tree = [&] {
        try {
          return parse_deformation(expr_text);
        } catch (const ParseError& e) {
          detail::report_parse_error(err, expr_text, e);
          throw;
        }
      }();
      out << tree.to_sexpr() << '\n';
      if (parse_q->count()) {
        const double q = detail::parse_values(q_items, "--q").at(0);
        const auto s = DeformationScheme::custom(tree, q);
        if (n_values.empty()) n_values = {0, 1, 2, 3};
        for (unsigned n : n_values) out << "D(" << n << ") = " << format_number(s.eval(n)) << '\n';
      }
      return kExitOk;
    }

    if (*state) {
      const auto family = parse_family(family_text);
      const auto& items = family == Family::squeezed ? xi_items : theta_items;
      if (items.size() != 1) {
        err << "error: give exactly one " << (family == Family::squeezed ? "--xi" : "--theta") << " value\n";
        return kExitUsage;
      }
      const double param = detail::parse_values(items, "parameter").at(0);
      const auto st = family == Family::squeezed ? squeezed_state({param, DeformationScheme::undeformed(), tail_tol})
                                                 : thermal_state({param, DeformationScheme::undeformed(), tail_tol});
      out << state_to_json(st).dump() << '\n';
      return kExitOk;
    }
  } catch (const ParseError& e) {
    if (!*parse) err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: config: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace qfock::cli
