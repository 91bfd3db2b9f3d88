#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "twosol/grid.hpp"
#include "twosol/soliton.hpp"
#include "twosol/tridiag.hpp"

namespace twosol {

struct EvolverConfig {
  double dt = 1e-3;  ///< negative runs backward
  ModelParams params{};
  std::size_t conservation_check_every = 100;
  bool nonlinear = true;
  /// Amplitude allowed within `guard_width` nodes of either end.
  double boundary_guard = 1e-10;
  std::size_t guard_width = 5;
};

/// Discrete mass h sum |u_j|^2, the quantity the linear substep preserves.
double discrete_mass(const WaveField& u);
/// h sum |u_{j+1} - u_j|^2 / h^2 + gamma |u(0)|^2 - 2/(p+1) h sum |u_j|^{p+1}:
/// the energy whose quadratic part is the operator the scheme uses.
double discrete_energy(const WaveField& u, const ModelParams& mp);

/// Strang splitting: half nonlinear phase rotation, Crank-Nicolson step for
/// i u_t = (-d^2 + gamma delta) u with +gamma/h on the x = 0 node and
/// homogeneous Dirichlet ends, half rotation. The linear factorization is
/// cached, so reuse one Evolver for a run.
class Evolver {
 public:
  Evolver(const Grid1D& grid, const EvolverConfig& cfg);

  const Grid1D& grid() const noexcept { return grid_; }
  const EvolverConfig& config() const noexcept { return cfg_; }

  void step(WaveField& u) const;
  /// Crank-Nicolson substep only.
  void linear_step(WaveField& u, double dt) const;

 private:
  Grid1D grid_;
  EvolverConfig cfg_;
  std::vector<cplx> diag_;  // of the operator A, off-diagonals are -1/h^2
  std::unique_ptr<TridiagLU<cplx>> lhs_;
};

/// One step with a freshly factored system; prefer Evolver for repeated steps.
WaveField step(const WaveField& u, const EvolverConfig& cfg);

struct ConservationRecord {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
};

struct EvolveResult {
  WaveField u;
  double t = 0.0;  ///< time reached
  std::vector<ConservationRecord> log;
  double mass_drift = 0.0;    ///< max relative deviation from the initial value
  double energy_drift = 0.0;  ///< relative to max(|E(0)|, 1e-300)
  double boundary_max = 0.0;
  bool boundary_ok = true;
  bool blowup = false;
  double blowup_time = 0.0;
};

/// Called every `observe_every` steps and at the end; return false to stop.
using Observer = std::function<bool(double t, const WaveField& u)>;

/// Steps from t0 to t1; (t1 - t0)/dt must be a whole number of steps of the
/// right sign. A non-finite value stops the run with `blowup` set.
EvolveResult evolve(const WaveField& u0, double t0, double t1, const EvolverConfig& cfg,
                    const Observer& observe = {}, std::size_t observe_every = 0);

/// omega^{1/(p-1)} u(sqrt(omega) x) sampled on `target` (default: u's grid),
/// with the potential strength of the equation it solves, gamma sqrt(omega).
/// Sampling on u.grid.scaled(1/sqrt(omega)) is exact.
std::pair<WaveField, ModelParams> rescale_solution(const WaveField& u, double omega, const ModelParams& mp);
std::pair<WaveField, ModelParams> rescale_solution(const WaveField& u, double omega, const ModelParams& mp,
                                                   const Grid1D& target);

}  // namespace twosol
