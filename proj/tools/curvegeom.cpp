// Command-line front end: curve analysis, strip generation, CWF checks,
// width sweeps. Machine-readable JSON/CSV output, deterministic formatting.

#include <clocale>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "curvegeom/curvegeom.hpp"

namespace cg = curvegeom;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

void emit_error(const std::string& code, const std::string& message) {
  json j{{"code", code}, {"message", message}};
  std::cerr << "error: " << j.dump() << "\n";
}

int exit_code_for(const cg::Error& e) {
  switch (e.code()) {
    case cg::ErrorCode::InvalidArgument:
    case cg::ErrorCode::OutsideWindow:
    case cg::ErrorCode::InsufficientRows:
    case cg::ErrorCode::LengthMismatch:
      return kExitValidation;
    case cg::ErrorCode::IoFailure:
      return kExitIo;
    default:
      return kExitNumerical;
  }
}

struct InputOpts {
  int n = 0;
  double alpha = 0.0;
  std::string edge = "plus";
  std::string curve_file;
  int m = 2048;
  double tol = 1e-6;
  bool verbose = false;
};

void add_input_opts(CLI::App* cmd, InputOpts& in, bool with_grid = true) {
  cmd->add_option("--n", in.n, "half-twist count of the strip family");
  cmd->add_option("--alpha", in.alpha, "strip half-width");
  cmd->add_option("--edge", in.edge, "strip edge: plus|minus")
      ->check(CLI::IsMember({"plus", "minus"}));
  cmd->add_option("--curve", in.curve_file, "Fourier curve JSON file");
  if (with_grid) cmd->add_option("--m", in.m, "grid size (power of two in [64, 16384])");
  cmd->add_option("--tol", in.tol, "convergence tolerance");
  cmd->add_flag("-v,--verbose", in.verbose, "progress notes on stderr");
}

bool power_of_two_in_range(int m) { return m >= 64 && m <= (1 << 14) && (m & (m - 1)) == 0; }

// Exactly one input source: strip parameters or a curve file.
void validate_input(const InputOpts& in, bool with_grid = true) {
  const bool strip = in.n > 0 || in.alpha != 0.0;
  const bool file = !in.curve_file.empty();
  if (strip == file)
    throw cg::Error(cg::ErrorCode::InvalidArgument,
                    "give either --n/--alpha or --curve, not both");
  if (strip && (in.n < 1 || !(in.alpha > 0.0)))
    throw cg::Error(cg::ErrorCode::InvalidArgument, "need --n >= 1 and --alpha > 0");
  if (with_grid && !power_of_two_in_range(in.m))
    throw cg::Error(cg::ErrorCode::InvalidArgument,
                    "--m must be a power of two in [64, 16384], got " + std::to_string(in.m));
  if (!(in.tol > 0.0)) throw cg::Error(cg::ErrorCode::InvalidArgument, "--tol must be positive");
}

cg::CurveSpec make_spec(const InputOpts& in) {
  if (!in.curve_file.empty()) return cg::load_curve_file(in.curve_file);
  if (in.alpha > 1.0)
    std::cerr << "warning: alpha > R, the strip surface self-intersects "
                 "(its boundary curve is still a valid closed curve)\n";
  return cg::strip_boundary({in.n, in.alpha, 1.0},
                            in.edge == "minus" ? cg::Edge::minus : cg::Edge::plus);
}

void write_or_print(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << "\n";
  } else {
    cg::write_file_atomic(path, content);
  }
}

int cmd_info(const InputOpts& in, const std::string& output, const std::string& export_path) {
  validate_input(in);
  const cg::CurveSpec spec = make_spec(in);
  const auto samples = cg::sample_curve(spec, in.m);
  const auto rep = cg::detect_inflexions(*samples, 1e-3);

  if (!export_path.empty()) {
    std::string csv = "t,x,y,z,kappa,tau\n";
    for (int k = 0; k < samples->m; ++k) {
      for (double v : {samples->t[k], samples->r[k].x(), samples->r[k].y(), samples->r[k].z(),
                       samples->kappa[k], samples->tau[k]}) {
        csv += cg::fmt_double(v);
        csv += ',';
      }
      csv.back() = '\n';
    }
    cg::write_file_atomic(export_path, csv);
  }

  json j;
  j["label"] = spec.label;
  j["period"] = cg::detail::jnum(spec.period);
  j["m"] = in.m;
  j["length"] = cg::detail::jnum(samples->length);
  double kmin = samples->kappa[0], kmax = kmin, tmin = samples->tau[0], tmax = tmin;
  for (int k = 0; k < samples->m; ++k) {
    kmin = std::min(kmin, samples->kappa[k]);
    kmax = std::max(kmax, samples->kappa[k]);
    tmin = std::min(tmin, samples->tau[k]);
    tmax = std::max(tmax, samples->tau[k]);
  }
  j["kappa"] = {{"min", cg::detail::jnum(kmin)}, {"max", cg::detail::jnum(kmax)}};
  j["tau"] = {{"min", cg::detail::jnum(tmin)}, {"max", cg::detail::jnum(tmax)}};
  j["inflexions"] = json::array();
  for (const auto& p : rep.points)
    j["inflexions"].push_back({{"t", cg::detail::jnum(p.t_star)},
                               {"kappa", cg::detail::jnum(p.kappa_min)}});
  if (in.curve_file.empty()) {
    j["n"] = in.n;
    j["alpha"] = cg::detail::jnum(in.alpha);
    j["alpha_c"] = cg::detail::jnum(cg::strip_critical_alpha(in.n));
  }
  write_or_print(output, j.dump(2) + "\n");
  return kExitOk;
}

int run_summary(const InputOpts& in, const std::string& frame_kind, double epsilon,
                const std::string& output, bool quiet) {
  validate_input(in);
  const cg::CurveSpec spec = make_spec(in);
  const auto samples = cg::sample_curve(spec, in.m);
  const double eps = epsilon > 0.0 ? epsilon : 1e-3 * samples->length;
  if (in.verbose)
    std::cerr << "summary: " << spec.label << ", m = " << in.m << ", L = " << samples->length
              << ", epsilon = " << eps << ", frame = " << frame_kind << "\n";
  cg::FrameField frame = (frame_kind == "parallel") ? cg::closed_parallel_frame(samples)
                                                    : cg::frenet_frame(samples);
  const cg::GeometrySummary s =
      cg::summarize(samples, frame, eps, {in.tol, cg::kPhaseMaxGrid});
  if (in.verbose)
    std::cerr << "summary: converged = " << (s.converged ? "yes" : "no")
              << ", grids up to m = " << s.lk.m_used << "\n";
  if (!quiet) write_or_print(output, cg::to_json(s).dump(2) + "\n");
  const bool ok = s.converged && std::abs(s.cwf_residual) <= in.tol &&
                  std::abs(s.cwf_g_residual) <= in.tol;
  if (!ok) {
    emit_error("NotConverged", "summary residuals exceed tolerance or grids not converged");
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_sweep(CLI::App* cmd, const InputOpts& in, const cg::SweepConfig& cfg_in,
              const std::string& output, const std::string& format) {
  cg::SweepConfig cfg = cfg_in;
  if (in.n < 1) throw cg::Error(cg::ErrorCode::InvalidArgument, "sweep needs --n >= 1");
  cfg.n = in.n;
  cfg.tol = in.tol;
  const cg::SweepConfig defaults = cg::default_sweep_config(cfg.n);
  if (!cmd->count("--alpha-min")) cfg.alpha_min = defaults.alpha_min;
  if (!cmd->count("--alpha-max")) cfg.alpha_max = defaults.alpha_max;
  if (cfg.steps < 2) throw cg::Error(cg::ErrorCode::InvalidArgument, "--steps must be >= 2");
  if (!power_of_two_in_range(cfg.m_initial))
    throw cg::Error(cg::ErrorCode::InvalidArgument,
                    "--m-initial must be a power of two in [64, 16384]");

  const auto rows = cg::run_sweep(cfg);
  if (format == "json")
    write_or_print(output, cg::sweep_rows_json(rows).dump(2) + "\n");
  else
    write_or_print(output, cg::sweep_rows_csv(rows));

  int ok = 0;
  for (const auto& r : rows) ok += r.converged ? 1 : 0;
  if (rows.empty() || ok * 10 < int(rows.size()) * 9) {
    emit_error("NotConverged", std::to_string(rows.size() - ok) + " of " +
                                   std::to_string(rows.size()) + " rows failed to converge");
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_ALL, "C");
#ifdef _OPENMP
  if (const char* env = std::getenv("CURVEGEOM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
#endif

  CLI::App app{"Gauge-invariant geometry of closed space curves"};
  app.require_subcommand(1);

  InputOpts in_info, in_summary, in_check;
  std::string out_info, out_summary, out_sweep, export_info;
  std::string frame_summary = "frenet", frame_check = "frenet";
  double eps_summary = 0.0, eps_check = 0.0;

  CLI::App* c_info = app.add_subcommand("info", "curve report: length, curvature, inflexions");
  add_input_opts(c_info, in_info);
  c_info->add_option("--output", out_info, "write the JSON report here (atomic)");
  c_info->add_option("--export", export_info,
                     "also write sampled coordinates as CSV (t,x,y,z,kappa,tau)");

  CLI::App* c_summary =
      app.add_subcommand("summary", "twist/writhe/linking summary with CWF residuals");
  add_input_opts(c_summary, in_summary);
  c_summary->add_option("--epsilon", eps_summary, "ribbon offset (default 1e-3 * length)");
  c_summary->add_option("--frame", frame_summary, "frame: frenet|parallel")
      ->check(CLI::IsMember({"frenet", "parallel"}));
  c_summary->add_option("--output", out_summary, "write the JSON summary here (atomic)");

  CLI::App* c_check = app.add_subcommand("check", "summary, exit code only (for CI)");
  add_input_opts(c_check, in_check);
  c_check->add_option("--epsilon", eps_check, "ribbon offset (default 1e-3 * length)");
  c_check->add_option("--frame", frame_check, "frame: frenet|parallel")
      ->check(CLI::IsMember({"frenet", "parallel"}));

  InputOpts in_sweep;
  cg::SweepConfig sweep_cfg;
  std::string sweep_format = "csv";
  CLI::App* c_sweep = app.add_subcommand("sweep", "width sweep over the strip family");
  c_sweep->add_option("--n", in_sweep.n, "half-twist count");
  c_sweep->add_option("--alpha-min", sweep_cfg.alpha_min, "smallest half-width");
  c_sweep->add_option("--alpha-max", sweep_cfg.alpha_max, "largest half-width");
  c_sweep->add_option("--steps", sweep_cfg.steps, "number of widths");
  c_sweep->add_option("--exclude", sweep_cfg.exclude_radius,
                      "relative half-width of the skipped band at alpha_c");
  c_sweep->add_option("--m-initial", sweep_cfg.m_initial, "starting grid size");
  c_sweep->add_option("--tol", in_sweep.tol, "per-quantity convergence tolerance");
  c_sweep->add_option("--output", out_sweep, "output file (atomic); stdout if omitted");
  c_sweep->add_option("--format", sweep_format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("InvalidArgument", e.what());
    return kExitValidation;
  }

  try {
    if (c_info->parsed()) return cmd_info(in_info, out_info, export_info);
    if (c_summary->parsed())
      return run_summary(in_summary, frame_summary, eps_summary, out_summary, false);
    if (c_check->parsed()) return run_summary(in_check, frame_check, eps_check, "", true);
    if (c_sweep->parsed()) return cmd_sweep(c_sweep, in_sweep, sweep_cfg, out_sweep, sweep_format);
  } catch (const cg::Error& e) {
    emit_error(cg::error_code_name(e.code()), e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    emit_error("Internal", e.what());
    return kExitNumerical;
  }
  return kExitOk;
}
