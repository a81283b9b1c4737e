// proxgn: solve penalized nonlinear least-squares problems with the
// proximal Gauss-Newton method, compute local convergence certificates,
// and audit runs against the certified error bounds.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "proxgn/problem_io.hpp"
#include "proxgn/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace proxgn;

namespace {

constexpr int kSchemaVersion = 1;

enum class LogLevel { quiet = 0, info = 1, debug = 2 };

LogLevel log_level() {
  const char* env = std::getenv("PROXGN_LOG");
  if (env == nullptr) return LogLevel::info;
  const std::string value(env);
  if (value == "quiet") return LogLevel::quiet;
  if (value == "debug") return LogLevel::debug;
  return LogLevel::info;
}

void log(LogLevel level, const std::string& message) {
  if (static_cast<int>(level) <= static_cast<int>(log_level())) {
    std::cerr << "proxgn: " << message << "\n";
  }
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

void write_atomic(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  const fs::path temp = path.string() + ".tmp";
  {
    std::ofstream stream(temp, std::ios::binary | std::ios::trunc);
    if (!stream) throw ConfigError("cannot write to '" + temp.string() + "'");
    stream << content;
  }
  fs::rename(temp, path);
}

struct Options {
  std::string problem_name;
  std::string problem_file;
  std::string x0 = "auto";
  std::string model = "lipschitz";
  double tol_step = 1e-14;
  double tol_stationarity = 1e-11;
  double tol_prox = 1e-12;
  int max_iterations = 200;
  double radius_scale = 1.0;
  unsigned long long seed = 0;
  std::string out_dir = "proxgn-out";
};

void add_common_options(CLI::App* cmd, Options& opts, bool with_x0) {
  cmd->add_option("--problem", opts.problem_name, "catalog problem name");
  cmd->add_option("--problem-file", opts.problem_file, "problem JSON file");
  if (with_x0) {
    cmd->add_option("--x0", opts.x0,
                    "start point as comma-separated values, or 'auto'");
  }
  cmd->add_option("--model", opts.model, "majorant model: lipschitz | smale");
  cmd->add_option("--tol-step", opts.tol_step, "step-norm stopping tolerance");
  cmd->add_option("--tol-stationarity", opts.tol_stationarity,
                  "stationarity stopping tolerance");
  cmd->add_option("--tol-prox", opts.tol_prox, "inner prox tolerance");
  cmd->add_option("--max-iter", opts.max_iterations, "iteration budget");
  cmd->add_option("--radius-scale", opts.radius_scale,
                  "scale factor applied to the certified radius");
  cmd->add_option("--seed", opts.seed, "seed for start-point directions");
  cmd->add_option("--out", opts.out_dir, "output directory");
}

Problem load_problem(const Options& opts) {
  if (opts.problem_name.empty() == opts.problem_file.empty()) {
    throw ConfigError("exactly one of --problem and --problem-file is required");
  }
  if (!opts.problem_name.empty()) return catalog_problem(opts.problem_name);
  return load_problem_file(opts.problem_file);
}

MajorantModel::Kind parse_model_kind(const std::string& name) {
  if (name == "lipschitz") return MajorantModel::Kind::lipschitz;
  if (name == "smale") return MajorantModel::Kind::smale;
  throw ConfigError("--model must be 'lipschitz' or 'smale', got '" + name +
                    "'");
}

MajorantModel build_model(MajorantModel::Kind kind, double parameter) {
  return kind == MajorantModel::Kind::lipschitz
             ? MajorantModel::lipschitz(parameter)
             : MajorantModel::smale(parameter);
}

SolverConfig solver_config(const Options& opts) {
  SolverConfig cfg;
  cfg.max_iterations = opts.max_iterations;
  cfg.step_tolerance = opts.tol_step;
  cfg.stationarity_tolerance = opts.tol_stationarity;
  cfg.prox_tolerance = opts.tol_prox;
  return cfg;
}

Vector unit_direction(unsigned long long seed, int dim, int index) {
  std::mt19937_64 rng(seed * 1000003ull + static_cast<unsigned long long>(index));
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(dim);
  do {
    for (int i = 0; i < dim; ++i) v(i) = normal(rng);
  } while (v.norm() == 0.0);
  return v / v.norm();
}

Vector parse_x0(const std::string& text, int dim) {
  Vector x0(dim);
  std::string remaining = text;
  for (int i = 0; i < dim; ++i) {
    const size_t comma = remaining.find(',');
    const std::string token =
        comma == std::string::npos ? remaining : remaining.substr(0, comma);
    try {
      size_t used = 0;
      x0(i) = std::stod(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw ConfigError("--x0 entry '" + token + "' is not a number");
    }
    if (comma == std::string::npos) {
      if (i + 1 != dim) {
        throw ConfigError("--x0 needs " + std::to_string(dim) + " entries");
      }
      remaining.clear();
    } else {
      remaining = remaining.substr(comma + 1);
    }
  }
  if (!remaining.empty()) {
    throw ConfigError("--x0 has more than " + std::to_string(dim) + " entries");
  }
  return x0;
}

std::string method_name(RadiusMethod method) {
  switch (method) {
    case RadiusMethod::generic_bisection:
      return "GenericBisection";
    case RadiusMethod::lipschitz_closed_form:
      return "LipschitzClosedForm";
    case RadiusMethod::smale_quartic:
      return "SmaleQuartic";
  }
  return "unknown";
}

json certificate_to_json(const Problem& problem, const std::string& model_name,
                         const ModelConstants& mc,
                         const RadiusCertificate& cert) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["problem"] = problem.name;
  j["model"] = model_name;
  j["parameter"] = mc.parameter;
  j["parameter_is_estimate"] = mc.parameter_is_estimate;
  j["c"] = mc.constants.c;
  j["beta"] = mc.constants.beta;
  j["kappa"] = mc.constants.kappa;
  j["delta"] = mc.constants.delta;
  j["h"] = cert.h_value;
  j["h_ok"] = cert.h_ok;
  j["nu"] = cert.nu;
  j["rho"] = cert.rho;
  j["r"] = cert.r;
  j["method"] = method_name(cert.method);
  j["cross_check_delta"] = cert.cross_check_delta;
  return j;
}

std::string trace_to_csv(const RunReport& report) {
  std::string csv =
      "index,sigma,step_norm,residual_norm,smallest_singular,"
      "stationarity_residual\n";
  for (const IterationRecord& row : report.trace) {
    csv += std::to_string(row.index);
    csv += ',';
    csv += row.sigma ? format_double(*row.sigma) : "nan";
    csv += ',';
    csv += format_double(row.step_norm);
    csv += ',';
    csv += format_double(row.residual_norm);
    csv += ',';
    csv += format_double(row.smallest_singular);
    csv += ',';
    csv += format_double(row.stationarity_residual);
    csv += '\n';
  }
  return csv;
}

double min_or_zero(const std::vector<double>& values) {
  double result = 0.0;
  bool first = true;
  for (double v : values) {
    result = first ? v : std::min(result, v);
    first = false;
  }
  return result;
}

json verification_to_json(const VerificationReport& verification) {
  json j;
  j["sigma0"] = verification.sigma0;
  j["radius"] = verification.radius;
  j["final_sigma"] = verification.final_sigma;
  j["frozen_coefficients_valid"] = verification.frozen_coefficients_valid;
  j["monotone_decrease_ok"] = verification.monotone_decrease_ok;
  j["stayed_in_ball_ok"] = verification.stayed_in_ball_ok;
  j["min_recursion_slack"] = min_or_zero(verification.recursion_slacks);
  j["min_per_step_recursion_slack"] =
      min_or_zero(verification.per_step_recursion_slacks);
  j["min_linearization_slack"] = min_or_zero(verification.linearization_slacks);
  j["recursion_slacks"] = verification.recursion_slacks;
  j["per_step_recursion_slacks"] = verification.per_step_recursion_slacks;
  j["linearization_slacks"] = verification.linearization_slacks;
  j["quadratic_ratio_estimates"] = verification.quadratic_ratio_estimates;
  return j;
}

int run_solve(const Options& opts) {
  const Problem problem = load_problem(opts);
  const SolverConfig cfg = solver_config(opts);

  json report_json;
  report_json["schema_version"] = kSchemaVersion;
  report_json["command"] = "solve";
  report_json["problem"] = problem.name;
  report_json["seed"] = opts.seed;

  // The certificate is computed up front when ground truth is present:
  // 'auto' start placement needs the certified radius.
  std::optional<ModelConstants> mc;
  std::optional<MajorantModel> model;
  std::optional<RadiusCertificate> cert;
  const MajorantModel::Kind kind = parse_model_kind(opts.model);
  if (problem.known_minimizer.has_value()) {
    try {
      mc = local_constants(problem, kind);
      model = build_model(kind, mc->parameter);
      cert = certificate(*model, mc->constants);
      report_json["model"] = opts.model;
      report_json["certificate"] =
          certificate_to_json(problem, opts.model, *mc, *cert);
    } catch (const Error& error) {
      report_json["certificate_error"] = error.what();
      log(LogLevel::info, std::string("certificate unavailable: ") +
                              error.what());
    }
  }

  Vector x0;
  if (opts.x0 == "auto") {
    if (!cert.has_value()) {
      throw ConfigError(
          "--x0 auto needs a problem with ground truth and a valid "
          "certificate; pass an explicit --x0");
    }
    const Vector direction =
        unit_direction(opts.seed, problem.map.input_dim(), 0);
    x0 = *problem.known_minimizer +
         0.5 * cert->r * opts.radius_scale * direction;
    log(LogLevel::debug, "auto start point at half the certified radius");
  } else {
    x0 = parse_x0(opts.x0, problem.map.input_dim());
  }
  report_json["x0"] = vector_to_json(x0);

  const RunReport report = solve(problem, x0, cfg);
  report_json["status"] = to_string(report.status);
  report_json["iterations"] = report.iterations();
  report_json["final_point"] = vector_to_json(report.final_point);
  if (!report.trace.empty()) {
    report_json["final_stationarity"] =
        report.trace.back().stationarity_residual;
    report_json["final_residual_norm"] = report.trace.back().residual_norm;
  }
  if (!report.message.empty()) report_json["message"] = report.message;

  if (cert.has_value() && problem.known_minimizer.has_value()) {
    const VerificationReport verification = verify_run(
        problem, report, *model, mc->constants, *problem.known_minimizer);
    report_json["verification"] = verification_to_json(verification);
  }

  const fs::path out(opts.out_dir);
  write_atomic(out / "report.json", report_json.dump(2) + "\n");
  write_atomic(out / "trace.csv", trace_to_csv(report));
  log(LogLevel::info, "status " + to_string(report.status) + " after " +
                          std::to_string(report.iterations()) +
                          " iterations; report in " + out.string());
  std::cout << to_string(report.status) << " iterations="
            << report.iterations() << " final=[";
  for (Eigen::Index i = 0; i < report.final_point.size(); ++i) {
    std::cout << (i ? "," : "") << format_double(report.final_point(i));
  }
  std::cout << "]\n";
  return report.status == SolveStatus::converged ? 0 : 2;
}

int run_certify(const Options& opts) {
  const Problem problem = load_problem(opts);
  const MajorantModel::Kind kind = parse_model_kind(opts.model);

  ModelConstants mc;
  try {
    mc = local_constants(problem, kind);
  } catch (const MissingGroundTruth& error) {
    std::cerr << "proxgn: " << error.what() << "\n";
    return 2;
  } catch (const DegenerateModel& error) {
    std::cerr << "proxgn: " << error.what() << "\n";
    return 3;
  }

  RadiusCertificate cert;
  try {
    cert = certificate(build_model(kind, mc.parameter), mc.constants);
  } catch (const H3Violated& error) {
    std::cerr << "proxgn: no certificate, h = " << format_double(error.h)
              << " (needs h < 1)\n";
    return 3;
  }

  const json j = certificate_to_json(problem, opts.model, mc, cert);
  write_atomic(fs::path(opts.out_dir) / "certificate.json", j.dump(2) + "\n");
  std::cout << "r=" << format_double(cert.r) << " rho=" << format_double(cert.rho)
            << " nu=" << format_double(cert.nu) << " h="
            << format_double(cert.h_value) << "\n";
  return 0;
}

int run_verify(const Options& opts) {
  const Problem problem = load_problem(opts);
  const MajorantModel::Kind kind = parse_model_kind(opts.model);

  ModelConstants mc;
  try {
    mc = local_constants(problem, kind);
  } catch (const MissingGroundTruth& error) {
    std::cerr << "proxgn: " << error.what() << "\n";
    return 2;
  } catch (const DegenerateModel& error) {
    std::cerr << "proxgn: " << error.what() << "\n";
    return 3;
  }
  const MajorantModel model = build_model(kind, mc.parameter);

  RadiusCertificate cert;
  try {
    cert = certificate(model, mc.constants);
  } catch (const H3Violated& error) {
    std::cerr << "proxgn: no certificate, h = " << format_double(error.h)
              << " (needs h < 1)\n";
    return 3;
  }

  const SolverConfig cfg = solver_config(opts);
  const Vector& x_star = *problem.known_minimizer;
  const int dim = problem.map.input_dim();

  json runs = json::array();
  bool all_ok = true;
  double min_recursion_slack = 0.0;
  const double grid[] = {0.25, 0.5, 0.9};
  for (int scale_index = 0; scale_index < 3; ++scale_index) {
    for (int direction_index = 0; direction_index < 8; ++direction_index) {
      const Vector direction =
          unit_direction(opts.seed, dim, scale_index * 8 + direction_index);
      const double sigma0 =
          grid[scale_index] * cert.r * opts.radius_scale;
      const Vector x0 = x_star + sigma0 * direction;

      const RunReport report = solve(problem, x0, cfg);
      const VerificationReport verification =
          verify_run(problem, report, model, mc.constants, x_star);
      const double slack_tol = 1e-8 * std::max(1.0, verification.sigma0);
      const bool converged_to_reference =
          report.status == SolveStatus::converged &&
          verification.final_sigma <= 1e-10;
      const bool run_ok =
          converged_to_reference && verification.all_checks_ok(slack_tol);
      all_ok = all_ok && run_ok;
      min_recursion_slack = std::min(
          min_recursion_slack, min_or_zero(verification.recursion_slacks));

      json run;
      run["x0"] = vector_to_json(x0);
      run["status"] = to_string(report.status);
      run["iterations"] = report.iterations();
      run["converged_to_reference"] = converged_to_reference;
      run["all_ok"] = run_ok;
      run["verification"] = verification_to_json(verification);
      runs.push_back(std::move(run));
      log(LogLevel::debug, "run " + std::to_string(runs.size()) + " " +
                               (run_ok ? "ok" : "FAILED"));
    }
  }

  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "verify";
  j["problem"] = problem.name;
  j["model"] = opts.model;
  j["seed"] = opts.seed;
  j["radius_scale"] = opts.radius_scale;
  j["certificate"] = certificate_to_json(problem, opts.model, mc, cert);
  j["runs"] = std::move(runs);
  j["aggregate"] = {{"all_ok", all_ok},
                    {"min_recursion_slack", min_recursion_slack}};
  write_atomic(fs::path(opts.out_dir) / "verification.json", j.dump(2) + "\n");

  std::cout << (all_ok ? "all checks passed" : "CHECKS FAILED")
            << " (24 runs, min recursion slack "
            << format_double(min_recursion_slack) << ")\n";
  return all_ok ? 0 : 2;
}

int run_catalog() {
  for (const Problem& problem : catalog()) {
    std::string penalty = "zero";
    if (problem.penalty.kind() == ProxSpec::Kind::weighted_l1) {
      penalty = "weighted_l1";
    } else if (problem.penalty.kind() == ProxSpec::Kind::box) {
      penalty = "box";
    }
    std::cout << problem.name << "  F: R^" << problem.map.input_dim()
              << " -> R^" << problem.map.output_dim() << "  penalty: " << penalty
              << "  L: " << format_double(*problem.known_lipschitz)
              << "  gamma: " << format_double(*problem.known_gamma) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "proximal Gauss-Newton solver with local convergence certificates"};
  app.require_subcommand(1);

  Options solve_opts, certify_opts, verify_opts;
  CLI::App* solve_cmd =
      app.add_subcommand("solve", "run the solver on one problem");
  add_common_options(solve_cmd, solve_opts, true);
  CLI::App* certify_cmd = app.add_subcommand(
      "certify", "compute the local convergence certificate");
  add_common_options(certify_cmd, certify_opts, false);
  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "audit solver runs from a grid of start points");
  add_common_options(verify_cmd, verify_opts, false);
  CLI::App* catalog_cmd =
      app.add_subcommand("catalog", "list the built-in problems");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    return app.exit(error) == 0 ? 0 : 1;
  }

  try {
    if (solve_cmd->parsed()) return run_solve(solve_opts);
    if (certify_cmd->parsed()) return run_certify(certify_opts);
    if (verify_cmd->parsed()) return run_verify(verify_opts);
    if (catalog_cmd->parsed()) return run_catalog();
  } catch (const ConfigError& error) {
    std::cerr << "proxgn: " << error.what() << "\n";
    return 1;
  } catch (const Error& error) {
    std::cerr << "proxgn: " << error.what() << "\n";
    return 2;
  } catch (const std::exception& error) {
    std::cerr << "proxgn: unexpected error: " << error.what() << "\n";
    return 2;
  }
  return 1;
}
