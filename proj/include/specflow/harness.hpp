#pragma once

#include <optional>
#include <string>
#include <vector>

#include "specflow/chern_weil.hpp"
#include "specflow/eta.hpp"
#include "specflow/gauge.hpp"
#include "specflow/spectral_flow.hpp"
#include "specflow/tracking.hpp"

namespace specflow {

// Thrown for malformed configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  ManifoldModel model;
  int k = 1;
  GaugeField gauge;
  std::vector<double> r_list;
  int cutoff = 0;                    // Fourier truncation N
  std::vector<int> cutoff_list;      // refinement trend for verify (defaults to {cutoff})
  int s_points = 33;
  double ds_min = 1.0 / 8192.0;
  double lambda_window = 0.0;        // 0: N/2
  double overlap_min = 0.7;
  double margin = 0.35;
  double tol_identity = 1e-6;
  double row_budget_sec = 600.0;
  std::string out_dir;

  // mehler subcommand parameters
  double mehler_theta = 1.0;
  double mehler_u = 0.5;
  std::array<double, 3> mehler_x{0.3, 0.0, 0.0};
  int oracle_grid = 128;
  double oracle_box = 8.0;

  double eff_lambda() const { return lambda_window > 0.0 ? lambda_window : 0.5 * cutoff; }
  TailModel tail_model() const {
    return model.kind == ModelKind::Circle ? TailModel::UnitLattice : TailModel::SymmetricCancel;
  }
};

ExperimentConfig load_config(const std::string& path);
// Parse from text (exposed for tests); `source` names the input in errors.
ExperimentConfig parse_config(const std::string& text, const std::string& source);

// ---- flow-eta identity -----------------------------------------------------

struct IdentityRow {
  int cutoff = 0;
  long long sf = 0;
  double predictor_integral = 0.0;  // int_0^1 of the closed-form variation
  double eta_bar_0 = 0.0, eta_bar_1 = 0.0;
  double residual_plus = 0.0;   // sf - (+V + eta1 - eta0)
  double residual_minus = 0.0;  // sf - (-V + eta1 - eta0)
};

struct IdentityReport {
  std::vector<IdentityRow> rows;  // one per cutoff, ascending
  std::string convention;         // "plus", "minus", or "indeterminate"
  double residual = 0.0;          // recorded-convention residual at the largest cutoff
  bool residual_nonincreasing = true;
  bool pass = false;
  double tol = 0.0;
};

IdentityReport verify_flow_eta_identity(const ExperimentConfig& cfg);

// ---- scaling sweep ----------------------------------------------------------

struct SweepRow {
  double r = 0.0, R = 0.0;
  long long sf = 0;
  double predictor = 0.0;
  double error = 0.0;
  double eta_bar_1 = 0.0;
  double runtime_sec = 0.0;  // reported in the manifest, not the CSV
  bool flat = false;
  bool skipped = false;
  std::string note;
};

struct ScalingReport {
  std::vector<SweepRow> rows;
  int n_dim = 1;
  double margin = 0.35;

  bool fit_valid = false;
  double error_exponent = 0.0;
  double error_fit_residual = 0.0;
  double max_error_ratio = 0.0;  // max error / R^{n/2} over R > 0 rows

  bool eta_fit_valid = false;
  double eta_exponent = 0.0;       // slope of log|eta_bar| vs log R
  double eta_fit_residual = 0.0;
  double eta_quot_max = 0.0, eta_quot_min = 0.0;
  bool eta_all_zero = false;

  bool pass_flow_bound = false;
  bool pass_eta_bound = false;
  std::string t1_note, t2_note;
};

ScalingReport sweep(const ExperimentConfig& cfg);

// Least-squares slope of log y against log x; returns false with fewer than
// four usable points. `residual` is the max absolute log-misfit.
bool loglog_fit(const std::vector<double>& x, const std::vector<double>& y, double* slope,
                double* residual);

// ---- output writers ----------------------------------------------------------

std::string format_double(double v);  // %.17g
void write_report_csv(std::ostream& os, const ScalingReport& rep);
void write_manifest(std::ostream& os, const ExperimentConfig& cfg, const std::string& config_echo,
                    const ScalingReport* rep, const IdentityReport* idrep);
void write_svg_loglog(std::ostream& os, const std::string& title,
                      const std::vector<std::pair<double, double>>& points);
void write_svg_trajectories(std::ostream& os, const FlowTrajectory& traj);

// Single-instance helpers shared by the CLI subcommands.
FlowTrajectory run_tracking(const ExperimentConfig& cfg, int cutoff, double r);
EtaResult run_eta(const ExperimentConfig& cfg, int cutoff, double r, double s);

extern const char* kToolVersion;

}  // namespace specflow
