#pragma once

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include "twosol/eigen.hpp"
#include "twosol/errors.hpp"
#include "twosol/grid.hpp"
#include "twosol/soliton.hpp"

namespace twosol {

enum class ModulationMode {
  Full,          ///< (lambda, gamma, z, v) from four conditions, the fourth against i T_z
  ThreePlusLaw,  ///< (lambda, gamma, z) from three conditions, v supplied by the caller
};

struct ModulationResult {
  SolitonState state;
  WaveField xi;   ///< on u.grid scaled by 1/lambda, so xi(x_j) needs no interpolation
  /// right-soliton frame, same grid as xi; radiation shifted past the edge is dropped
  WaveField eta;
  /// <eta, Q>, <eta, yQ>, <eta, i Lambda Q>, <eta, i T_z>; the last is only
  /// driven to zero in Full mode.
  std::array<double, 4> residuals{};
  int iterations = 0;
};

/// Newton gave up; carries the best iterate.
class DecompositionError : public SolverError {
 public:
  DecompositionError(const std::string& what, double residual, const SolitonState& best)
      : SolverError(what, residual), best_(best) {}
  const SolitonState& best() const noexcept { return best_; }

 private:
  SolitonState best_;
};

/// eta(y) = e^{-ivy/2} xi(y + z/2) on xi's grid. Exact when z/2 is a multiple
/// of the spacing, cubic interpolation otherwise. Throws DomainError if
/// content of xi above 1e-10 would be shifted off the grid.
WaveField eta_from_xi(const WaveField& xi, const SolitonState& st);

struct ModulationOptions {
  int max_iterations = 50;
  double tolerance = 1e-12;  ///< target on max |residual|
  double accept = 1e-10;     ///< worst residual still returned as success
  double fd_step = 1e-6;
  /// T_z is re-solved when z has moved further than this.
  double t_refresh = 0.25;
};

/// Decomposition u = e^{i gamma} lambda^{-2/(p-1)} [P(./lambda; z, v) + xi(./lambda)].
/// Caches the perturbed mode T_z between calls, so reuse one instance along a run.
class Modulator {
 public:
  Modulator(const ModelParams& mp, const Grid1D& eigen_grid = Grid1D::standard(), ModulationOptions opt = {});
  ~Modulator();
  Modulator(Modulator&&) noexcept;
  Modulator& operator=(Modulator&&) noexcept;

  ModulationResult decompose(const WaveField& u, const SolitonState& guess,
                             ModulationMode mode = ModulationMode::Full);
  /// Residual vector and its finite-difference Jacobian at `st` (4 x 4, rows
  /// are conditions, columns lambda, gamma, z, v), T_z held at its cached z.
  std::pair<std::array<double, 4>, std::array<std::array<double, 4>, 4>> linearize(const WaveField& u,
                                                                                  const SolitonState& st);
  const ModelParams& params() const noexcept { return mp_; }

 private:
  struct Impl;
  ModelParams mp_;
  ModulationOptions opt_;
  std::unique_ptr<Impl> impl_;
};

ModulationResult decompose(const WaveField& u, const SolitonState& guess, const ModelParams& mp,
                           ModulationMode mode = ModulationMode::Full);

/// Centred differences of (lambda, gamma, z, v) at the middle of the history
/// (at least three states, spacing dt), combined into the modulation vector.
MVector mvec_estimate(const std::vector<SolitonState>& history, double dt);

/// Im int conj(eta) eta_y chi~(|y| / log s) dy.
double localized_momentum(const WaveField& eta, double s);

struct EnergyW {
  double H = 0.0;
  double J = 0.0;
  double W = 0.0;
  double M1 = 0.0;
  double M2 = 0.0;
};
/// The modified linearized energy H (with the point term and the cut-off
/// pairing), J = (v/2)(M1 - M2) and W = H - J at time s.
EnergyW energy_functional_w(const WaveField& xi, const SolitonState& st, const ModelParams& mp, double s);

struct EinnerCheck {
  double z = 0.0;          ///< separation used (snapped)
  double measured = 0.0;   ///< <E_P, (e^{iv./2} T_z)(. - z/2)>, Richardson in h
  double predicted = 0.0;  ///< M(Q) m4 + H(z) - 2 gamma c_p e^{-z/2} T_z(-z/2)
  double gap = 0.0;
  double t_at_delta = 0.0;
  double h = 0.0;          ///< H(z)
  /// e^{-z}(|m| z^2 + v^2 z^2 + e^{-z/2}), constant not included
  double budget = 0.0;
};

/// Evaluates the pairing of the approximate-solution residual with the
/// perturbed translational mode. Holds the mode solvers for one p.
class EinnerChecker {
 public:
  explicit EinnerChecker(double p, const Grid1D& coarse = Grid1D::standard());
  EinnerCheck check(const SolitonState& st, double gamma, const MVector& m = {}) const;

 private:
  double p_;
  RefinedModeSolver modes_;
};

EinnerCheck einner_check(const SolitonState& st, const ModelParams& mp, const MVector& m = {});

}  // namespace twosol
