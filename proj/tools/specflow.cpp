// specflow: spectral flow, eta invariants, and curvature-integral predictions
// for one-parameter families of twisted Dirac operators on flat models.
//
// Subcommands: flow | eta | predict | mehler | verify | sweep
// Exit codes: 0 all gates pass, 1 gate failure, 2 usage/config error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "specflow/dirac.hpp"
#include "specflow/harness.hpp"
#include "specflow/mehler.hpp"

namespace fs = std::filesystem;
using namespace specflow;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
  return out;
}

int run_flow(const ExperimentConfig& cfg, const fs::path& out_dir) {
  const double r = cfg.r_list.empty() ? 1.0 : cfg.r_list.front();
  const FlowTrajectory traj = run_tracking(cfg, cfg.cutoff, r);
  const SpectralFlowResult res = spectral_flow(traj);
  std::cout << "sf = " << res.sf << " (" << res.convention << ")\n";
  for (const auto& w : res.warnings) std::cout << "note: " << w << "\n";
  if (!out_dir.empty()) {
    auto f = open_out(out_dir, "crossings.csv");
    write_crossings_csv(f, res);
    auto t = open_out(out_dir, "trajectory.csv");
    traj.write_csv(t);
    auto svg = open_out(out_dir, "trajectories.svg");
    write_svg_trajectories(svg, traj);
  }
  return 0;
}

int run_eta_cmd(const ExperimentConfig& cfg, const fs::path& out_dir) {
  const double r = cfg.r_list.empty() ? 1.0 : cfg.r_list.front();
  const EtaResult res = run_eta(cfg, cfg.cutoff, r, 1.0);
  std::cout << "eta = " << format_double(res.eta) << "\n"
            << "dim_ker = " << res.dim_ker << "\n"
            << "reduced_eta = " << format_double(res.reduced_eta) << "\n"
            << "t0 = " << format_double(res.t0) << " small = " << format_double(res.small_time_part)
            << " large = " << format_double(res.large_time_part) << "\n"
            << "window = " << format_double(res.lambda_window) << " (" << res.window_count
            << " eigenvalues), tail = " << format_double(res.tail_correction)
            << ", tail_estimate = " << format_double(res.tail_estimate) << "\n";

  // large-time diagnostic: Tr exp(-(t0/2) D^2) controls the tail of the
  // time integral together with dim ker
  const double R = sup_norm_F1(cfg.gauge, r);
  if (R > 0.0) {
    const DiracMatrix d = assemble(cfg.model, cfg.gauge, cfg.k, cfg.cutoff, 1.0, r);
    EighOptions eo;
    const SpectrumSnapshot snap = eigh(d, eo);
    EtaOptions opts;
    opts.lambda_window = cfg.eff_lambda();
    opts.tail = cfg.tail_model();
    const auto lt = large_time_check(snap.eigenvalues, R, cfg.model.dim(), opts);
    std::cout << "large-time: trace = " << format_double(lt.trace_value)
              << ", trace/R^{n/2} = " << format_double(lt.bound_ratio) << ", bound "
              << (lt.bound_holds ? "holds" : "VIOLATED") << "\n";
  } else {
    std::cout << "large-time: flat family (R = 0), diagnostic skipped\n";
  }
  if (!out_dir.empty()) {
    auto f = open_out(out_dir, "eta.csv");
    f << "eta,dim_ker,reduced_eta,t0,small_time_part,large_time_part,lambda_window,tail_correction\n";
    f << format_double(res.eta) << "," << res.dim_ker << "," << format_double(res.reduced_eta)
      << "," << format_double(res.t0) << "," << format_double(res.small_time_part) << ","
      << format_double(res.large_time_part) << "," << format_double(res.lambda_window) << ","
      << format_double(res.tail_correction) << "\n";
  }
  return 0;
}

int run_predict(const ExperimentConfig& cfg, const fs::path& out_dir) {
  const double r = cfg.r_list.empty() ? 1.0 : cfg.r_list.front();
  const PredictionResult res = predict_flow(cfg.gauge, r, 4);
  std::cout << "predictor = " << format_double(res.predictor) << "\n"
            << "leading_term = " << format_double(res.leading_term) << "\n";
  if (!res.leading_consistent)
    std::cout << "note: leading term differs from the predictor beyond the subleading budget\n";
  if (!out_dir.empty()) {
    auto f = open_out(out_dir, "predict.csv");
    f << "s_node,integrand,predictor,leading_term\n";
    for (const auto& [s, v] : res.integrand_samples)
      f << format_double(s) << "," << format_double(v) << "," << format_double(res.predictor)
        << "," << format_double(res.leading_term) << "\n";
  }
  return 0;
}

int run_mehler(const ExperimentConfig& cfg, const fs::path& out_dir) {
  MehlerInput in;
  in.n = 2;
  in.omega = CMatrix(2, 2);
  in.omega(0, 1) = cfg.mehler_theta;
  in.omega(1, 0) = -cfg.mehler_theta;
  in.u = cfg.mehler_u;
  in.X = cfg.mehler_x;
  const double kernel = mehler_kernel(in);

  OracleSpec spec;
  spec.grid = cfg.oracle_grid;
  spec.box = cfg.oracle_box;
  const OracleResult oracle = oscillator_oracle(in.omega, in.u, in.X, spec);
  const double delta = std::abs(kernel - oracle.value);
  std::cout << "mehler_kernel = " << format_double(kernel) << "\n"
            << "oracle        = " << format_double(oracle.value)
            << " (error estimate " << format_double(oracle.error_estimate) << ")\n"
            << "delta         = " << format_double(delta) << "\n";
  if (!out_dir.empty()) {
    auto f = open_out(out_dir, "mehler.csv");
    f << "theta,u,x1,x2,kernel,oracle,delta\n";
    f << format_double(cfg.mehler_theta) << "," << format_double(cfg.mehler_u) << ","
      << format_double(cfg.mehler_x[0]) << "," << format_double(cfg.mehler_x[1]) << ","
      << format_double(kernel) << "," << format_double(oracle.value) << "," << format_double(delta)
      << "\n";
  }
  return delta <= 1e-5 ? 0 : 1;
}

int run_verify(const ExperimentConfig& cfg, const fs::path& out_dir, const std::string& echo) {
  const IdentityReport rep = verify_flow_eta_identity(cfg);
  std::cout << "convention: " << rep.convention << "\n";
  for (const auto& row : rep.rows)
    std::cout << "N=" << row.cutoff << " sf=" << row.sf
              << " V=" << format_double(row.predictor_integral)
              << " eta_bar(D0)=" << format_double(row.eta_bar_0)
              << " eta_bar(D1)=" << format_double(row.eta_bar_1)
              << " residual(+)=" << format_double(row.residual_plus)
              << " residual(-)=" << format_double(row.residual_minus) << "\n";
  std::cout << "residual = " << format_double(rep.residual)
            << (rep.residual_nonincreasing ? " (nonincreasing)" : " (NOT nonincreasing)") << "\n"
            << (rep.pass ? "identity holds within tolerance\n" : "identity gate FAILED\n");
  if (!out_dir.empty()) {
    auto m = open_out(out_dir, "manifest.txt");
    write_manifest(m, cfg, echo, nullptr, &rep);
  }
  return rep.pass ? 0 : 1;
}

int run_sweep(const ExperimentConfig& cfg, const fs::path& out_dir, const std::string& echo) {
  const ScalingReport rep = sweep(cfg);
  write_report_csv(std::cout, rep);
  std::cout << "flow-bound " << (rep.pass_flow_bound ? "pass" : "FAIL") << ": " << rep.t1_note << "\n";
  std::cout << "eta-bound " << (rep.pass_eta_bound ? "pass" : "FAIL") << ": " << rep.t2_note << "\n";
  if (!out_dir.empty()) {
    auto f = open_out(out_dir, "report.csv");
    write_report_csv(f, rep);
    auto m = open_out(out_dir, "manifest.txt");
    write_manifest(m, cfg, echo, &rep, nullptr);
    std::vector<std::pair<double, double>> err_pts, eta_pts;
    for (const auto& row : rep.rows) {
      if (row.R > 0.0 && row.error > 0.0) err_pts.push_back({row.R, row.error});
      if (row.R > 0.0 && std::abs(row.eta_bar_1) > 0.0)
        eta_pts.push_back({row.R, std::abs(row.eta_bar_1)});
    }
    auto svg1 = open_out(out_dir, "error_vs_R.svg");
    write_svg_loglog(svg1, "|sf - predictor| vs R", err_pts);
    auto svg2 = open_out(out_dir, "eta_vs_R.svg");
    write_svg_loglog(svg2, "|eta_bar(D1)| vs R", eta_pts);
  }
  return (rep.pass_flow_bound && rep.pass_eta_bound) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral flow / eta / curvature-integral experiments on flat Dirac families"};
  app.require_subcommand(1);
  app.fallthrough();  // --config/--out may follow the subcommand name

  std::string config_path, out_dir_flag;
  app.add_option("--config", config_path, "experiment config file");
  app.add_option("--out", out_dir_flag, "output directory");

  auto* sub_flow = app.add_subcommand("flow", "track a family and count zero crossings");
  auto* sub_eta = app.add_subcommand("eta", "eta invariant of D_1");
  auto* sub_predict = app.add_subcommand("predict", "curvature-integral spectral flow predictor");
  auto* sub_mehler = app.add_subcommand("mehler", "Mehler kernel vs PDE oracle");
  auto* sub_verify = app.add_subcommand("verify", "flow-eta identity with N refinement");
  auto* sub_sweep = app.add_subcommand("sweep", "r sweep with scaling fits");

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg;
    std::string echo;
    if (!config_path.empty()) {
      echo = slurp(config_path);
      cfg = parse_config(echo, config_path);
    } else if (!sub_mehler->parsed()) {
      std::cerr << "error: --config is required for this subcommand\n";
      return 2;
    }
    const fs::path out_dir = !out_dir_flag.empty() ? fs::path(out_dir_flag)
                             : !cfg.out_dir.empty() ? fs::path(cfg.out_dir)
                                                    : fs::path();

    if (sub_flow->parsed()) return run_flow(cfg, out_dir);
    if (sub_eta->parsed()) return run_eta_cmd(cfg, out_dir);
    if (sub_predict->parsed()) return run_predict(cfg, out_dir);
    if (sub_mehler->parsed()) return run_mehler(cfg, out_dir);
    if (sub_verify->parsed()) return run_verify(cfg, out_dir, echo);
    if (sub_sweep->parsed()) return run_sweep(cfg, out_dir, echo);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
