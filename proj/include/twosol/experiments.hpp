#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "twosol/dynamics.hpp"
#include "twosol/errors.hpp"
#include "twosol/grid.hpp"
#include "twosol/soliton.hpp"

namespace twosol {

struct GridSpec {
  double xmin = -60.0;
  double xmax = 60.0;
  std::size_t n = 6001;

  Grid1D make() const { return Grid1D(xmin, xmax, n); }
};

/// One experiment run. Loaded from JSON; unknown keys are rejected.
struct RunConfig {
  std::string experiment = "shoot";
  ModelParams params{3.0, 1.0};
  GridSpec grid;
  double dt = 1e-3;         ///< magnitude; backward runs negate it
  double t_final = 100.0;   ///< s_f, the time of the final data
  std::optional<double> z_f;
  std::optional<std::array<double, 2>> z_f_bracket;
  std::string out_dir;      ///< empty: nothing is written
  int dump_every = 0;       ///< snapshot every n-th decomposition, 0 for none

  double s_min = 30.0;      ///< earliest time of the backward run; also s0 of the bisection
  double cadence = 0.5;     ///< decomposition spacing in s
  double vf_factor = 1.0;   ///< v_f = vf_factor * sqrt(F(z_f))
  std::string mode = "pde"; ///< bisection oracle, "pde" or "ode"
  double zf_tol = 1e-3;     ///< bisection stops once the bracket is this narrow
  double window = 60.0;     ///< attraction_demo: length of the PDE window

  /// Throws ConfigError on values no module accepts.
  void validate() const;
};

RunConfig config_from_json(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const RunConfig& cfg);

/// Force-law table matching a run: gamma and p from the config.
ForceLaw force_law_for(const RunConfig& cfg);

struct ShootingRow {
  double s = 0.0;
  double lambda = 1.0;
  double gamma = 0.0;
  double z = 0.0;
  double v = 0.0;
  double xi_h1 = 0.0;
  double z_minus_2logs = 0.0;  ///< z - 2 log s
  double zeta_minus_s = 0.0;   ///< zeta_inf(z) - s
};

struct ShootingVerdicts {
  double xi_s_max = 0.0;     ///< max ||xi||_{H1} s over the window
  double xi_s_median = 0.0;
  bool xi_ok = false;        ///< max < 10 x median
  double slope = 0.0;        ///< least-squares dz / d log s over the window
  bool slope_ok = false;     ///< 2 +- 0.3
  double max_z_minus_2logs = 0.0;
  double max_v_s = 0.0;
  double max_lambda_s = 0.0;  ///< max |lambda - 1| s
  /// |zeta - s| <= s / sqrt(log s) at every logged time
  bool boot_ok = false;
  double worst_boot_ratio = 0.0;
  std::size_t rows_used = 0;
};

/// Verdicts from logged rows alone, over s in [s_lo, s_hi]. The final-time
/// row is excluded from the xi statistics since xi vanishes there by construction.
ShootingVerdicts compute_verdicts(const std::vector<ShootingRow>& rows, double s_lo, double s_hi);

struct ShootingReport {
  double z_f = 0.0;
  double v_f = 0.0;
  std::vector<ShootingRow> rows;  ///< decreasing s, as produced
  ShootingVerdicts verdicts;
  /// max |z_pde - z_ode| / z_ode over the logged rows, ODE from the same final data
  double ode_rel_gap = 0.0;
  std::string status = "ok";
  double failure_time = 0.0;
  bool failed = false;
  double mass_drift = 0.0;
  double energy_drift = 0.0;
};

/// Backward PDE run from P(.; z_f, v_f) at s = t_final down to s_min,
/// decomposing every `cadence` in s. Uses cfg.z_f, or zeta_inf^{-1}(t_final)
/// when unset. Failures are reported, not thrown.
ShootingReport shoot_backward(const RunConfig& cfg, const ForceLaw& law);

struct BisectionResult {
  double z_f = 0.0;
  double residual = 0.0;   ///< zeta_inf(z(s0)) - s0 at the returned z_f
  bool criterion_met = false;  ///< |residual| <= s0 / sqrt(log s0)
  int iterations = 0;
  std::array<double, 2> bracket{};
  double ode_prediction = 0.0;  ///< zeta_inf^{-1}(t_final)
  std::vector<std::array<double, 2>> history;  ///< (z_f, residual) per evaluation
};

/// zeta_inf(z(s0)) - s0 for final data at z_f, from the effective ODE or
/// from the PDE pipeline, with s0 = cfg.s_min.
double shooting_residual(const RunConfig& cfg, const ForceLaw& law, double z_f, bool pde);

/// Bisection on z_f. Bracket from cfg.z_f_bracket, else prediction +- 0.5.
/// ODE mode bisects to the machine bracket; PDE mode to cfg.zf_tol.
/// Throws BracketError when the endpoints do not change sign.
BisectionResult bisect_zf(const RunConfig& cfg, const ForceLaw& law);

class BracketError : public Error {
 public:
  BracketError(const std::string& what, double lo_value, double hi_value)
      : Error(what), lo_(lo_value), hi_(hi_value) {}
  double lo_value() const noexcept { return lo_; }
  double hi_value() const noexcept { return hi_; }

 private:
  double lo_, hi_;
};

struct AttractionReport {
  double gamma = 0.0;
  double z_f = 0.0;
  double v_f = 0.0;
  // effective ODE, backward from t_final
  Trajectory ode;
  std::optional<double> ode_crossing_s;  ///< first s < t_final with v = 0
  std::optional<double> control_crossing_s;  ///< same launch, gamma = 0
  // PDE window [t_final - window, t_final]
  std::vector<ShootingRow> pde_rows;
  /// least-squares slope of z - 2 log t against t (forward sense)
  double pde_trend = 0.0;
  bool pde_decreasing = false;
  bool blowup = false;
  std::string status = "ok";
  double failure_time = 0.0;
};

/// Gamma > 2: launch with v_f = sqrt|F(z_f)| and follow backward. z_f defaults to 11.
AttractionReport attraction_demo(const RunConfig& cfg);

/// Output writers create the parent directory when missing. CSVs use 17
/// significant digits so verdicts recompute exactly from the file.
void write_trajectory_csv(const std::filesystem::path& file, const std::vector<ShootingRow>& rows);
std::vector<ShootingRow> read_trajectory_csv(const std::filesystem::path& file);
void write_snapshot_csv(const std::filesystem::path& file, const WaveField& u);
/// Inverse of write_snapshot_csv; the nodes must be uniform.
WaveField read_snapshot_csv(const std::filesystem::path& file);
std::string report_json(const ShootingReport& r, const RunConfig& cfg);
std::string report_json(const BisectionResult& b);
std::string report_json(const AttractionReport& a);

/// Runs the experiment named in cfg and writes its outputs to cfg.out_dir.
/// Returns the process exit code: 0 ok, 3 numerical failure, 4 verdict failure.
int run_experiment(const RunConfig& cfg);

}  // namespace twosol
