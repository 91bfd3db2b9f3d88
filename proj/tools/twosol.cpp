// Command-line front end. Exit codes: 0 ok, 2 bad arguments or config,
// 3 numerical failure, 4 a verdict failed.

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <thread>

#include "twosol/dynamics.hpp"
#include "twosol/eigen.hpp"
#include "twosol/evolver.hpp"
#include "twosol/experiments.hpp"
#include "twosol/interaction.hpp"
#include "twosol/modulation.hpp"
#include "twosol/validation.hpp"

using namespace twosol;
namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

// CSV to <out>/<name>, or to stdout when no directory was given.
class Sink {
 public:
  Sink(const std::string& out_dir, const std::string& name) {
    if (out_dir.empty()) return;
    fs::create_directories(out_dir);
    file_.open(fs::path(out_dir) / name);
    if (!file_) throw Error("cannot write " + (fs::path(out_dir) / name).string());
  }
  std::ostream& operator()() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void emit_json(const std::string& out_dir, const std::string& name, const json& j) {
  Sink s(out_dir, name);
  s() << j.dump(2) << '\n';
}

struct Common {
  double p = 3.0;
  double gamma = 1.0;
  double zmin = 8.0;
  double zmax = 20.0;
  std::string out;
};

void add_model(CLI::App* sub, Common& c) {
  sub->add_option("--p", c.p, "nonlinearity exponent")->capture_default_str();
  sub->add_option("--gamma", c.gamma, "delta strength")->capture_default_str();
  sub->add_option("--out", c.out, "output directory (stdout when omitted)");
}

int cmd_profile(const Common& c) {
  ModelParams{c.p, 0.0}.validate();
  const Grid1D g = Grid1D::standard();
  Sink s(c.out, "profile.csv");
  s() << "x,q,q_prime,lambda_q\n";
  s().precision(17);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.x(i);
    s() << x << ',' << q_profile(x, c.p) << ',' << q_prime(x, c.p) << ',' << lambda_q(x, c.p) << '\n';
  }
  const auto r = ode_residual(c.p, g);
  const json j{{"p", c.p},
               {"c_p", cp_constant(c.p)},
               {"ode_residual", r.analytic},
               {"ode_residual_fd", r.fd},
               {"pohozaev_residual", pohozaev_residual(c.p, g)},
               {"ip_over_2cp", ip_integral(c.p) / (2.0 * cp_constant(c.p))}};
  if (c.out.empty()) std::cerr << j.dump(2) << '\n';
  else emit_json(c.out, "profile.json", j);
  return 0;
}

int cmd_force(const Common& c, double step) {
  ForceLawConfig fc;
  fc.p = c.p;
  fc.gamma = c.gamma;
  fc.z_min = c.zmin;
  fc.z0 = c.zmin;
  fc.z_max = c.zmax;
  fc.step = step;
  const ForceLaw law(fc);
  Sink s(c.out, "force.csv");
  s() << "z,h,rho,htilde,f,big_f,zeta\n";
  s().precision(17);
  for (const auto& nd : law.table()) {
    double zeta = nan_v;
    if (law.big_f(nd.z) > 0.0) zeta = law.zeta(nd.z);
    s() << nd.z << ',' << nd.h << ',' << nd.rho << ',' << nd.htilde << ',' << nd.f << ',' << law.big_f(nd.z) << ','
        << zeta << '\n';
  }
  return 0;
}

int cmd_eigen(const Common& c, double step) {
  ModelParams{c.p, c.gamma}.validate();
  if (!(step > 0.0) || c.zmax < c.zmin) throw ConfigError("need zmin <= zmax and step > 0");
  const RefinedModeSolver modes(Grid1D::standard(), c.p);
  const NuBracket b = nu_bracket(c.p, c.gamma);
  Sink s(c.out, "nu.csv");
  s() << "z,nu,tau,rho,lower,upper,consistency\n";
  s().precision(17);
  for (double z = c.zmin; z <= c.zmax + 1e-9; z += step) {
    const auto r = nu_report(modes, c.gamma, z);
    s() << r.z << ',' << r.nu << ',' << r.tau << ',' << r.rho << ',' << b.lower << ',' << b.upper << ','
        << r.consistency << '\n';
  }
  return 0;
}

struct OdeArgs {
  std::optional<double> zf;
  double vf_factor = 1.0;
  double s_final = 100.0;
  double s_end = 1e4;
  double dt = 0.05;
};

int cmd_ode(const Common& c, const OdeArgs& a) {
  ForceLawConfig fc;
  fc.p = c.p;
  fc.gamma = c.gamma;
  fc.z_max = std::max(fc.z_max, c.zmax);
  const ForceLaw law(fc);
  const bool escape = law.big_f(fc.z0) > 0.0;
  const double zf = a.zf ? *a.zf : escape ? law.zeta_inf_inverse(a.s_final) : 11.0;
  const double vf = a.vf_factor * std::sqrt(std::abs(law.big_f(zf)));
  const auto tr = integrate_ode(law, zf, vf, a.s_final, a.s_end, a.dt);
  Sink s(c.out, "ode.csv");
  s() << "s,z,v,energy\n";
  s().precision(17);
  for (std::size_t i = 0; i < tr.s.size(); ++i)
    s() << tr.s[i] << ',' << tr.z[i] << ',' << tr.v[i] << ',' << law.energy(tr.z[i], tr.v[i]) << '\n';
  std::cerr << "z_f " << zf << ", v_f " << vf << ", status " << tr.status << ", energy drift " << tr.energy_drift
            << '\n';
  return tr.truncated ? 3 : 0;
}

// Forward run of the cut-off two-soliton data at separation cfg.z_f (16 when unset), v = 0.
int cmd_evolve(const RunConfig& cfg) {
  const Grid1D g = cfg.grid.make();
  EvolverConfig ec;
  ec.dt = cfg.dt;
  ec.params = cfg.params;
  const double z = cfg.z_f.value_or(16.0);
  const WaveField u0 = approx_two_soliton(g, z, 0.0, cfg.params.p);
  std::size_t k = 0;
  const std::size_t every = cfg.dump_every > 0 ? static_cast<std::size_t>(cfg.dump_every) : 0;
  Observer obs;
  if (every > 0 && !cfg.out_dir.empty())
    obs = [&](double, const WaveField& u) {
      char name[32];
      std::snprintf(name, sizeof name, "%04zu.csv", k++);
      write_snapshot_csv(fs::path(cfg.out_dir) / "snapshots" / name, u);
      return true;
    };
  const auto r = evolve(u0, 0.0, cfg.t_final, ec, obs, every);
  const json j{{"z", z},
               {"t", r.t},
               {"mass_drift", r.mass_drift},
               {"energy_drift", r.energy_drift},
               {"boundary_max", r.boundary_max},
               {"boundary_ok", r.boundary_ok},
               {"blowup", r.blowup},
               {"blowup_time", r.blowup_time}};
  if (!cfg.out_dir.empty()) {
    Sink s(cfg.out_dir, "conservation.csv");
    s() << "t,mass,energy\n";
    s().precision(17);
    for (const auto& rec : r.log) s() << rec.t << ',' << rec.mass << ',' << rec.energy << '\n';
    write_snapshot_csv(fs::path(cfg.out_dir) / "final.csv", r.u);
  }
  emit_json(cfg.out_dir, "evolve.json", j);
  return r.blowup ? 3 : 0;
}

struct ModArgs {
  std::string snapshot;
  SolitonState guess;
  std::string mode = "full";
};

int cmd_modulate(const Common& c, const ModArgs& a) {
  const WaveField u = read_snapshot_csv(a.snapshot);
  if (a.mode != "full" && a.mode != "three") throw ConfigError("mode must be full or three");
  Modulator mod({c.p, c.gamma});
  const auto r = mod.decompose(u, a.guess, a.mode == "full" ? ModulationMode::Full : ModulationMode::ThreePlusLaw);
  const json j{{"lambda", r.state.lambda}, {"gamma", r.state.gamma_phase}, {"z", r.state.z}, {"v", r.state.v},
               {"residuals", r.residuals},  {"iterations", r.iterations}, {"xi_h1", norms(r.xi).h1}};
  emit_json(c.out, "modulation.json", j);
  return 0;
}

int cmd_experiment(const std::string& name, const std::string& config, const std::string& out) {
  RunConfig cfg = load_config(config);
  cfg.experiment = name;
  if (!out.empty()) cfg.out_dir = out;
  cfg.validate();
  const int code = run_experiment(cfg);
  if (!cfg.out_dir.empty()) std::cerr << "outputs in " << cfg.out_dir << '\n';
  std::cerr << name << ": exit " << code << '\n';
  return code;
}

int cmd_validate(bool quick, unsigned jobs, const std::string& out) {
  auto checks = quick_checks();
  if (!quick) {
    auto more = acceptance_checks();
    checks.insert(checks.end(), more.begin(), more.end());
  }
  const auto results = run_checks(checks, jobs, out);
  bool all = true;
  double total = 0.0;
  for (const auto& r : results) {
    std::cout << format_result(r) << '\n';
    all = all && r.pass;
    total += r.seconds;
  }
  std::cout << (all ? "all checks passed" : "some checks FAILED") << " (" << total << " s of check time)\n";
  return all ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-soliton dynamics with a point interaction: solvers and experiments"};
  app.require_subcommand(1);
  bool seedless = true;
  app.add_flag("--seedless", seedless, "deterministic mode; the only mode, accepted for scripts");

  Common c;
  double step = 0.2;
  auto* profile = app.add_subcommand("profile", "ground state profile and its identities");
  add_model(profile, c);

  auto* force = app.add_subcommand("force", "tabulated modified force law");
  add_model(force, c);
  force->add_option("--zmin", c.zmin, "first separation")->capture_default_str();
  force->add_option("--zmax", c.zmax, "last separation");
  force->add_option("--step", step, "table spacing")->capture_default_str();

  double eig_step = 1.0;
  auto* eigen = app.add_subcommand("eigen", "perturbed translational eigenvalue nu_z over a separation sweep");
  add_model(eigen, c);
  eigen->add_option("--zmin", c.zmin)->capture_default_str();
  eigen->add_option("--zmax", c.zmax)->capture_default_str();
  eigen->add_option("--step", eig_step, "sweep spacing")->capture_default_str();

  OdeArgs oa;
  auto* ode = app.add_subcommand("ode", "effective separation dynamics");
  add_model(ode, c);
  ode->add_option("--zf", oa.zf, "separation at s-final (default: the zero-energy clock, or 11 when F < 0)");
  ode->add_option("--vf-factor", oa.vf_factor, "v_f = factor sqrt|F(z_f)|")->capture_default_str();
  ode->add_option("--s-final", oa.s_final)->capture_default_str();
  ode->add_option("--s-end", oa.s_end, "end time, below s-final to run backward")->capture_default_str();
  ode->add_option("--dt", oa.dt)->capture_default_str();

  std::string config;
  auto* evolve_cmd = app.add_subcommand("evolve", "forward PDE run of two-soliton data");
  evolve_cmd->add_option("--config", config, "JSON run configuration")->required();
  evolve_cmd->add_option("--out", c.out);

  ModArgs ma;
  auto* modulate = app.add_subcommand("modulate", "decompose a snapshot CSV");
  add_model(modulate, c);
  modulate->add_option("--snapshot", ma.snapshot, "CSV with x,re_u,im_u,abs_u_sq")->required();
  modulate->add_option("--lambda", ma.guess.lambda)->capture_default_str();
  modulate->add_option("--phase", ma.guess.gamma_phase)->capture_default_str();
  modulate->add_option("--z", ma.guess.z)->capture_default_str();
  modulate->add_option("--v", ma.guess.v)->capture_default_str();
  modulate->add_option("--mode", ma.mode, "full or three")->capture_default_str();

  std::vector<CLI::App*> experiments;
  for (const char* name : {"shoot", "bisect", "attract"}) {
    auto* sub = app.add_subcommand(name, std::string(name) + " experiment from a JSON config");
    sub->add_option("--config", config, "JSON run configuration")->required();
    sub->add_option("--out", c.out, "overrides out_dir");
    experiments.push_back(sub);
  }

  bool quick = false;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* validate = app.add_subcommand("validate", "run the property suite");
  validate->add_flag("--quick", quick, "closed-form and plumbing checks only");
  validate->add_option("--jobs", jobs, "worker threads")->capture_default_str();
  validate->add_option("--out", c.out, "per-check result files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*profile) return cmd_profile(c);
    if (*force) return cmd_force(c, step);
    if (*eigen) return cmd_eigen(c, eig_step);
    if (*ode) return cmd_ode(c, oa);
    if (*evolve_cmd) {
      RunConfig cfg = load_config(config);
      if (cfg.experiment != "evolve") throw ConfigError("evolve needs \"experiment\": \"evolve\" in the config");
      if (!c.out.empty()) cfg.out_dir = c.out;
      return cmd_evolve(cfg);
    }
    if (*modulate) return cmd_modulate(c, ma);
    for (auto* sub : experiments)
      if (*sub) return cmd_experiment(sub->get_name(), config, c.out);
    if (*validate) return cmd_validate(quick, jobs, c.out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidParameter& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
