#include "twosol/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>
#include <json.hpp>

#include "twosol/evolver.hpp"
#include "twosol/modulation.hpp"

namespace twosol {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

void RunConfig::validate() const {
  static const char* known[] = {"shoot", "bisect", "attract", "evolve"};
  if (std::find(std::begin(known), std::end(known), experiment) == std::end(known))
    throw ConfigError("unknown experiment '" + experiment + "'");
  try {
    params.validate();
    (void)grid.make();
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  }
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(cadence > 0.0)) throw ConfigError("cadence must be positive");
  const double ratio = cadence / dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) throw ConfigError("cadence must be a multiple of dt");
  if (experiment == "evolve") {
    // forward run from t = 0; only the step count matters
    const double steps = t_final / dt;
    if (!(t_final > 0.0) || std::abs(steps - std::round(steps)) > 1e-9 * steps)
      throw ConfigError("t_final must be a positive multiple of dt");
  } else if (!(t_final > s_min) || !(s_min > std::exp(1.0))) {
    throw ConfigError("need e < s_min < t_final");
  }
  if (mode != "pde" && mode != "ode") throw ConfigError("mode must be 'pde' or 'ode'");
  if (dump_every < 0) throw ConfigError("dump_every must be >= 0");
  if (z_f_bracket && !((*z_f_bracket)[0] < (*z_f_bracket)[1])) throw ConfigError("z_f_bracket must be increasing");
  if (!(zf_tol > 0.0) || !(window > 0.0) || !(vf_factor > 0.0)) throw ConfigError("zf_tol, window, vf_factor must be positive");
  if (experiment == "shoot" && !(params.gamma < 1.5))
    throw ConfigError("shoot needs gamma < 3/2 (escape regime)");
  if (experiment == "attract" && !(params.gamma > 2.0)) throw ConfigError("attract needs gamma > 2");
  if (experiment == "attract" && window > t_final) throw ConfigError("window longer than t_final");
}

RunConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  try {
    for (const auto& [key, val] : j.items()) {
      if (key == "experiment") c.experiment = val.get<std::string>();
      else if (key == "p") c.params.p = val.get<double>();
      else if (key == "gamma") c.params.gamma = val.get<double>();
      else if (key == "grid") {
        for (const auto& [gk, gv] : val.items()) {
          if (gk == "xmin") c.grid.xmin = gv.get<double>();
          else if (gk == "xmax") c.grid.xmax = gv.get<double>();
          else if (gk == "n") c.grid.n = gv.get<std::size_t>();
          else throw ConfigError("unknown grid key '" + gk + "'");
        }
      } else if (key == "dt") c.dt = val.get<double>();
      else if (key == "t_final") c.t_final = val.get<double>();
      else if (key == "z_f") c.z_f = val.get<double>();
      else if (key == "z_f_bracket") c.z_f_bracket = val.get<std::array<double, 2>>();
      else if (key == "out_dir") c.out_dir = val.get<std::string>();
      else if (key == "dump_every") c.dump_every = val.get<int>();
      else if (key == "s_min") c.s_min = val.get<double>();
      else if (key == "cadence") c.cadence = val.get<double>();
      else if (key == "vf_factor") c.vf_factor = val.get<double>();
      else if (key == "mode") c.mode = val.get<std::string>();
      else if (key == "zf_tol") c.zf_tol = val.get<double>();
      else if (key == "window") c.window = val.get<double>();
      else if (key == "regime") continue;  // written by config_to_json, derived from gamma
      else throw ConfigError("unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

std::string config_to_json(const RunConfig& c) {
  json j;
  j["experiment"] = c.experiment;
  j["p"] = c.params.p;
  j["gamma"] = c.params.gamma;
  j["regime"] = to_string(regime(c.params.gamma));
  j["grid"] = {{"xmin", c.grid.xmin}, {"xmax", c.grid.xmax}, {"n", c.grid.n}};
  j["dt"] = c.dt;
  j["t_final"] = c.t_final;
  if (c.z_f) j["z_f"] = *c.z_f;
  if (c.z_f_bracket) j["z_f_bracket"] = *c.z_f_bracket;
  j["out_dir"] = c.out_dir;
  j["dump_every"] = c.dump_every;
  j["s_min"] = c.s_min;
  j["cadence"] = c.cadence;
  j["vf_factor"] = c.vf_factor;
  j["mode"] = c.mode;
  j["zf_tol"] = c.zf_tol;
  j["window"] = c.window;
  return j.dump(2);
}

ForceLaw force_law_for(const RunConfig& cfg) {
  ForceLawConfig fc;
  fc.p = cfg.params.p;
  fc.gamma = cfg.params.gamma;
  return ForceLaw(fc);
}

ShootingVerdicts compute_verdicts(const std::vector<ShootingRow>& rows, double s_lo, double s_hi) {
  ShootingVerdicts v;
  std::vector<double> xs;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double n = 0;
  v.boot_ok = true;
  const double s_top = rows.empty() ? 0.0 : std::max_element(rows.begin(), rows.end(), [](auto& a, auto& b) {
                                               return a.s < b.s;
                                             })->s;
  for (const auto& r : rows) {
    if (r.s < s_lo - 1e-9 || r.s > s_hi + 1e-9) continue;
    const double ls = std::log(r.s);
    sx += ls;
    sy += r.z;
    sxx += ls * ls;
    sxy += ls * r.z;
    n += 1;
    if (r.s < s_top) xs.push_back(r.xi_h1 * r.s);
    v.max_z_minus_2logs = std::max(v.max_z_minus_2logs, std::abs(r.z_minus_2logs));
    v.max_v_s = std::max(v.max_v_s, std::abs(r.v) * r.s);
    v.max_lambda_s = std::max(v.max_lambda_s, std::abs(r.lambda - 1.0) * r.s);
    const double ratio = std::abs(r.zeta_minus_s) / (r.s / std::sqrt(ls));
    v.worst_boot_ratio = std::max(v.worst_boot_ratio, ratio);
    if (ratio > 1.0) v.boot_ok = false;
  }
  v.rows_used = static_cast<std::size_t>(n);
  if (n >= 2) {
    const double den = n * sxx - sx * sx;
    v.slope = den > 0 ? (n * sxy - sx * sy) / den : 0.0;
  }
  v.slope_ok = n >= 3 && std::abs(v.slope - 2.0) <= 0.3;
  if (!xs.empty()) {
    v.xi_s_max = *std::max_element(xs.begin(), xs.end());
    std::vector<double> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    v.xi_s_median = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
    v.xi_ok = v.xi_s_max < 10.0 * v.xi_s_median;
  }
  return v;
}

namespace {

struct BackwardRun {
  std::vector<ShootingRow> rows;
  bool failed = false;
  std::string status = "ok";
  double failure_time = 0.0;
  double mass_drift = 0.0;
  double energy_drift = 0.0;
  bool collapsed = false;  // separation fell below the floor before s_stop
};

using SnapshotSink = std::function<void(std::size_t, const WaveField&)>;

ShootingRow make_row(double s, const ModulationResult& r, const ForceLaw* law) {
  ShootingRow row;
  row.s = s;
  row.lambda = r.state.lambda;
  row.gamma = r.state.gamma_phase;
  row.z = r.state.z;
  row.v = r.state.v;
  row.xi_h1 = norms(r.xi).h1;
  row.z_minus_2logs = r.state.z - 2.0 * std::log(s);
  row.zeta_minus_s = law ? law->zeta_inf(r.state.z) - s : 0.0;
  return row;
}

// Backward PDE run from P(.; z_f, v_f) at s = s_f, decomposing every cadence
// until s <= s_stop. law may be null (no zeta column, used for gamma > 2).
BackwardRun run_backward(const RunConfig& cfg, const ForceLaw* law, double z_f, double v_f, double s_stop,
                         const SnapshotSink& sink = {}, double z_floor = 8.0) {
  const Grid1D grid = cfg.grid.make();
  const ModelParams& mp = cfg.params;
  WaveField u = approx_two_soliton(grid, z_f, v_f, mp.p);
  Modulator mod(mp);
  EvolverConfig ec;
  ec.dt = -cfg.dt;
  ec.params = mp;

  BackwardRun out;
  const double m0 = discrete_mass(u), e0 = discrete_energy(u, mp);
  double t = cfg.t_final, s = cfg.t_final;
  SolitonState st{1.0, 0.0, z_f, v_f};
  std::size_t index = 0;
  try {
    auto first = mod.decompose(u, st);
    st = first.state;
    out.rows.push_back(make_row(s, first, law));
    if (sink) sink(index, u);
  } catch (const DecompositionError& e) {
    out.failed = true;
    out.status = std::string("decomposition failed: ") + e.what();
    out.failure_time = s;
    return out;
  }
  while (s > s_stop + 1e-9) {
    if (st.z < z_floor) {
      out.collapsed = true;
      out.status = "separation below " + std::to_string(z_floor) + " at s = " + std::to_string(s);
      return out;
    }
    const auto r = evolve(u, t, t - cfg.cadence, ec);
    out.mass_drift = std::max(out.mass_drift, std::abs(discrete_mass(r.u) - m0) / m0);
    out.energy_drift = std::max(out.energy_drift, std::abs(discrete_energy(r.u, mp) - e0) / std::abs(e0));
    if (r.blowup) {
      out.failed = true;
      out.status = "blowup";
      out.failure_time = r.blowup_time;
      return out;
    }
    u = r.u;
    t -= cfg.cadence;
    SolitonState guess = st;
    guess.z -= 2.0 * st.v * cfg.cadence;
    guess.gamma_phase -= cfg.cadence / (st.lambda * st.lambda);
    try {
      const auto res = mod.decompose(u, guess);
      const double lam0 = st.lambda, lam1 = res.state.lambda;
      s -= 0.5 * cfg.cadence * (1.0 / (lam0 * lam0) + 1.0 / (lam1 * lam1));
      st = res.state;
      out.rows.push_back(make_row(s, res, law));
      ++index;
      if (sink) sink(index, u);
    } catch (const Error& e) {
      out.failed = true;
      out.status = std::string("decomposition failed: ") + e.what();
      out.failure_time = t;
      return out;
    }
  }
  return out;
}

double vf_for(const RunConfig& cfg, const ForceLaw& law, double z_f) {
  return cfg.vf_factor * law.classical_velocity(z_f);
}

// z at s from a trajectory stored with decreasing s
std::optional<double> z_at(const std::vector<double>& s, const std::vector<double>& z, double at) {
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double a = s[i], b = s[i + 1];
    if ((a - at) * (b - at) <= 0.0 && a != b) {
      const double w = (at - a) / (b - a);
      return z[i] + w * (z[i + 1] - z[i]);
    }
  }
  return std::nullopt;
}

}  // namespace

ShootingReport shoot_backward(const RunConfig& cfg, const ForceLaw& law) {
  ShootingReport rep;
  rep.z_f = cfg.z_f ? *cfg.z_f : law.zeta_inf_inverse(cfg.t_final);
  rep.v_f = vf_for(cfg, law, rep.z_f);

  SnapshotSink sink;
  if (!cfg.out_dir.empty() && cfg.dump_every > 0) {
    const fs::path dir = fs::path(cfg.out_dir) / "snapshots";
    sink = [dir, every = static_cast<std::size_t>(cfg.dump_every)](std::size_t k, const WaveField& u) {
      if (k % every) return;
      char name[32];
      std::snprintf(name, sizeof name, "%04zu.csv", k / every);
      write_snapshot_csv(dir / name, u);
    };
  }
  auto run = run_backward(cfg, &law, rep.z_f, rep.v_f, cfg.s_min, sink);
  rep.rows = std::move(run.rows);
  rep.failed = run.failed;
  rep.status = run.status;
  rep.failure_time = run.failure_time;
  if (run.collapsed) {
    rep.failed = true;
    rep.failure_time = rep.rows.back().s;
  }
  rep.mass_drift = run.mass_drift;
  rep.energy_drift = run.energy_drift;
  rep.verdicts = compute_verdicts(rep.rows, cfg.s_min, cfg.t_final);

  const auto ode = integrate_ode(law, rep.z_f, rep.v_f, cfg.t_final, cfg.s_min, 0.05);
  for (const auto& r : rep.rows) {
    if (const auto zo = z_at(ode.s, ode.z, r.s)) rep.ode_rel_gap = std::max(rep.ode_rel_gap, std::abs(r.z - *zo) / *zo);
  }
  return rep;
}

double shooting_residual(const RunConfig& cfg, const ForceLaw& law, double z_f, bool pde) {
  const double v_f = vf_for(cfg, law, z_f);
  const double s0 = cfg.s_min;
  if (!pde) {
    const auto tr = integrate_ode(law, z_f, v_f, cfg.t_final, s0, 0.01);
    // a trajectory that leaves the table early collapsed before s0
    return law.zeta_inf(tr.z.back()) - tr.s.back();
  }
  const auto run = run_backward(cfg, &law, z_f, v_f, s0);
  if (run.failed) throw SolverError("shooting_residual: " + run.status, run.failure_time);
  if (run.collapsed) return law.zeta_inf(run.rows.back().z) - run.rows.back().s;
  std::vector<double> s, z;
  for (const auto& r : run.rows) {
    s.push_back(r.s);
    z.push_back(r.z);
  }
  const auto zs = z_at(s, z, s0);
  if (!zs) throw SolverError("shooting_residual: run stopped before s0", s.back());
  return law.zeta_inf(*zs) - s0;
}

BisectionResult bisect_zf(const RunConfig& cfg, const ForceLaw& law) {
  const bool pde = cfg.mode == "pde";
  BisectionResult b;
  b.ode_prediction = law.zeta_inf_inverse(cfg.t_final);
  b.bracket = cfg.z_f_bracket ? *cfg.z_f_bracket : std::array<double, 2>{b.ode_prediction - 0.5, b.ode_prediction + 0.5};
  auto g = [&](double zf) {
    const double r = shooting_residual(cfg, law, zf, pde);
    b.history.push_back({zf, r});
    return r;
  };
  const double glo = g(b.bracket[0]), ghi = g(b.bracket[1]);
  if (!(glo * ghi < 0.0))
    throw BracketError("bisect_zf: no sign change of zeta(z(s0)) - s0 on the bracket", glo, ghi);

  // bracketed TOMS 748: bisection safeguarded by inverse cubic steps
  std::uintmax_t iters = 60;
  auto tol = [&](double a, double c) {
    if (pde) return std::abs(c - a) <= cfg.zf_tol;
    return boost::math::tools::eps_tolerance<double>(50)(a, c);
  };
  const auto r = boost::math::tools::toms748_solve(g, b.bracket[0], b.bracket[1], glo, ghi, tol, iters);
  b.iterations = static_cast<int>(iters);
  // return the evaluated point with the smallest residual
  auto best = std::min_element(b.history.begin(), b.history.end(),
                               [](const auto& x, const auto& y) { return std::abs(x[1]) < std::abs(y[1]); });
  if (std::abs(r.second - r.first) <= 4 * std::numeric_limits<double>::epsilon() * std::abs(r.first)) {
    b.z_f = 0.5 * (r.first + r.second);
    b.residual = (*best)[0] == b.z_f ? (*best)[1] : g(b.z_f);
  } else {
    b.z_f = (*best)[0];
    b.residual = (*best)[1];
  }
  b.criterion_met = std::abs(b.residual) <= cfg.s_min / std::sqrt(std::log(cfg.s_min));
  return b;
}

AttractionReport attraction_demo(const RunConfig& cfg) {
  if (!(cfg.params.gamma > 2.0)) throw RegimeError("attraction_demo: needs gamma > 2");
  AttractionReport a;
  a.gamma = cfg.params.gamma;
  a.z_f = cfg.z_f ? *cfg.z_f : 11.0;
  const ForceLaw law = force_law_for(cfg);
  a.v_f = cfg.vf_factor * std::sqrt(std::abs(law.big_f(a.z_f)));

  auto crossing = [](const Trajectory& tr) -> std::optional<double> {
    for (std::size_t i = 0; i + 1 < tr.v.size(); ++i)
      if (tr.v[i] > 0.0 && tr.v[i + 1] <= 0.0)
        return tr.s[i] + (tr.s[i + 1] - tr.s[i]) * tr.v[i] / (tr.v[i] - tr.v[i + 1]);
    return std::nullopt;
  };
  a.ode = integrate_ode(law, a.z_f, a.v_f, cfg.t_final, 0.0, 0.05, 20);
  a.ode_crossing_s = crossing(a.ode);

  RunConfig c0 = cfg;
  c0.params.gamma = 0.0;
  const ForceLaw law0 = force_law_for(c0);
  a.control_crossing_s = crossing(integrate_ode(law0, a.z_f, a.v_f, cfg.t_final, 0.0, 0.05, 20));

  const auto run = run_backward(cfg, nullptr, a.z_f, a.v_f, cfg.t_final - cfg.window);
  a.pde_rows = run.rows;
  a.status = run.status;
  a.failure_time = run.failure_time;
  a.blowup = run.status == "blowup";
  // slope of z - 2 log t against t
  double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
  for (const auto& r : a.pde_rows) {
    sx += r.s;
    sy += r.z_minus_2logs;
    sxx += r.s * r.s;
    sxy += r.s * r.z_minus_2logs;
    n += 1;
  }
  if (n >= 3) {
    a.pde_trend = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    a.pde_decreasing = a.pde_trend < 0.0;
  }
  return a;
}

void write_trajectory_csv(const fs::path& file, const std::vector<ShootingRow>& rows) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream out(file);
  if (!out) throw Error("cannot write " + file.string());
  out << "s,lambda,gamma,z,v,xi_h1,z_minus_2logs,zeta_minus_s\n";
  out.precision(17);
  for (const auto& r : rows)
    out << r.s << ',' << r.lambda << ',' << r.gamma << ',' << r.z << ',' << r.v << ',' << r.xi_h1 << ','
        << r.z_minus_2logs << ',' << r.zeta_minus_s << '\n';
}

std::vector<ShootingRow> read_trajectory_csv(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot read " + file.string());
  std::string line;
  std::getline(in, line);
  if (line != "s,lambda,gamma,z,v,xi_h1,z_minus_2logs,zeta_minus_s") throw Error("unexpected trajectory header");
  std::vector<ShootingRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ShootingRow r;
    char c;
    std::istringstream ls(line);
    ls >> r.s >> c >> r.lambda >> c >> r.gamma >> c >> r.z >> c >> r.v >> c >> r.xi_h1 >> c >> r.z_minus_2logs >> c >>
        r.zeta_minus_s;
    if (!ls) throw Error("malformed trajectory row: " + line);
    rows.push_back(r);
  }
  return rows;
}

void write_snapshot_csv(const fs::path& file, const WaveField& u) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream out(file);
  if (!out) throw Error("cannot write " + file.string());
  out << "x,re_u,im_u,abs_u_sq\n";
  out.precision(17);
  for (std::size_t i = 0; i < u.size(); ++i)
    out << u.grid.x(i) << ',' << u.values[i].real() << ',' << u.values[i].imag() << ',' << std::norm(u.values[i])
        << '\n';
}

WaveField read_snapshot_csv(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot read " + file.string());
  std::string line;
  std::getline(in, line);
  if (line != "x,re_u,im_u,abs_u_sq") throw Error("unexpected snapshot header");
  std::vector<double> xs;
  std::vector<cplx> vals;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double x, re, im, a2;
    char c;
    std::istringstream ls(line);
    ls >> x >> c >> re >> c >> im >> c >> a2;
    if (!ls) throw Error("malformed snapshot row: " + line);
    xs.push_back(x);
    vals.emplace_back(re, im);
  }
  if (xs.size() < 3) throw Error("snapshot has fewer than three nodes");
  const Grid1D g(xs.front(), xs.back(), xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (std::abs(xs[i] - g.x(i)) > 1e-9 * std::max(1.0, std::abs(xs[i]))) throw Error("snapshot grid is not uniform");
  return WaveField(g, std::move(vals));
}

namespace {

json verdicts_json(const ShootingVerdicts& v) {
  return {{"xi_s_max", v.xi_s_max},
          {"xi_s_median", v.xi_s_median},
          {"xi_ok", v.xi_ok},
          {"slope", v.slope},
          {"slope_ok", v.slope_ok},
          {"max_z_minus_2logs", v.max_z_minus_2logs},
          {"max_v_s", v.max_v_s},
          {"max_lambda_s", v.max_lambda_s},
          {"boot_ok", v.boot_ok},
          {"worst_boot_ratio", v.worst_boot_ratio},
          {"rows_used", v.rows_used}};
}

json opt(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

}  // namespace

std::string report_json(const ShootingReport& r, const RunConfig& cfg) {
  json j;
  j["config"] = json::parse(config_to_json(cfg));
  j["z_f"] = r.z_f;
  j["v_f"] = r.v_f;
  j["status"] = r.status;
  j["failed"] = r.failed;
  j["failure_time"] = r.failure_time;
  j["rows"] = r.rows.size();
  j["verdicts"] = verdicts_json(r.verdicts);
  j["ode_rel_gap"] = r.ode_rel_gap;
  j["ode_agreement_ok"] = r.ode_rel_gap <= 0.05;
  j["budgets"] = {{"xi_s_ratio_limit", 10.0}, {"slope", {1.7, 2.3}}, {"ode_rel_gap_limit", 0.05}};
  j["mass_drift"] = r.mass_drift;
  j["energy_drift"] = r.energy_drift;
  return j.dump(2);
}

std::string report_json(const BisectionResult& b) {
  json j;
  j["z_f"] = b.z_f;
  j["residual"] = b.residual;
  j["criterion_met"] = b.criterion_met;
  j["iterations"] = b.iterations;
  j["bracket"] = b.bracket;
  j["ode_prediction"] = b.ode_prediction;
  j["history"] = b.history;
  return j.dump(2);
}

std::string report_json(const AttractionReport& a) {
  json j;
  j["gamma"] = a.gamma;
  j["regime"] = to_string(regime(a.gamma));
  j["z_f"] = a.z_f;
  j["v_f"] = a.v_f;
  j["ode_crossing_s"] = opt(a.ode_crossing_s);
  j["ode_status"] = a.ode.status;
  j["control_crossing_s"] = opt(a.control_crossing_s);
  j["pde_trend"] = a.pde_trend;
  j["pde_decreasing"] = a.pde_decreasing;
  j["pde_rows"] = a.pde_rows.size();
  j["blowup"] = a.blowup;
  j["status"] = a.status;
  j["failure_time"] = a.failure_time;
  return j.dump(2);
}

namespace {

void write_text(const fs::path& file, const std::string& text) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream out(file);
  if (!out) throw Error("cannot write " + file.string());
  out << text << '\n';
}

}  // namespace

int run_experiment(const RunConfig& cfg) {
  cfg.validate();
  const fs::path dir = cfg.out_dir;
  const bool write = !cfg.out_dir.empty();
  if (cfg.experiment == "attract") {
    const auto a = attraction_demo(cfg);
    if (write) {
      write_trajectory_csv(dir / "trajectory.csv", a.pde_rows);
      write_text(dir / "report.json", report_json(a));
    }
    if (a.status != "ok" && !a.blowup) return 3;
    return a.ode_crossing_s && !a.control_crossing_s && a.pde_decreasing ? 0 : 4;
  }

  if (cfg.experiment == "evolve") throw ConfigError("evolve runs through the evolve subcommand");
  const ForceLaw law = force_law_for(cfg);
  std::optional<BisectionResult> bis;
  if (cfg.experiment == "bisect" || !cfg.z_f) {
    bis = bisect_zf(cfg, law);
    if (write) write_text(dir / "bisection.json", report_json(*bis));
    if (cfg.experiment == "bisect") return bis->criterion_met ? 0 : 4;
  }
  RunConfig run = cfg;
  if (bis) run.z_f = bis->z_f;
  const auto rep = shoot_backward(run, law);
  if (write) {
    write_trajectory_csv(dir / "trajectory.csv", rep.rows);
    write_text(dir / "report.json", report_json(rep, run));
  }
  if (rep.failed) return 3;
  return rep.verdicts.xi_ok && rep.verdicts.slope_ok ? 0 : 4;
}

}  // namespace twosol
