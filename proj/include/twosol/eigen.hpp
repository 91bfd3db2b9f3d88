#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "twosol/grid.hpp"

namespace twosol {

/// Finite-difference L+_z = -d^2 + 1 - p Q^(p-1) + gamma delta_{-z/2}.
/// The delta is the +gamma/h entry on the node at -z/2.
struct PointOperator {
  Grid1D grid;
  double p = 3.0;
  double gamma = 0.0;
  double delta_position = 0.0;
  std::size_t delta_index = 0;
  bool potential = true;
  std::vector<double> diag;
  double off_diag = 0.0;

  std::vector<double> apply(const std::vector<double>& x) const;
};

/// Throws DomainError if -z/2 is not an interior node of the grid.
PointOperator assemble(const Grid1D& grid, double p, double gamma, double z, bool with_potential = true);

/// Snap z so that -z/2 lies on a node of a grid with spacing h.
double snap_separation(double z, double h);

struct EigenPair {
  double value = 0.0;
  RealField vector;
  double norm_target = 1.0;
  double residual = 0.0;  ///< ||(L - value) v|| / ||v||
};

/// Number of eigenvalues strictly below x (Sturm count of the LDL^T pivots).
std::size_t sturm_count(const PointOperator& op, double x);
/// k-th smallest eigenvalue (k = 0 is the ground state) by bisection.
double bisect_eigenvalue(const PointOperator& op, std::size_t k);

/// Ground and first excited pairs. Both vectors are scaled to `norm_target`;
/// the excited one has <v, Q'> > 0 and the ground one a positive mean.
std::pair<EigenPair, EigenPair> lowest_two(const PointOperator& op, double norm_target);
std::pair<EigenPair, EigenPair> lowest_two(const PointOperator& op);

/// Perturbed translational mode at one separation.
struct PerturbedMode {
  double z = 0.0;
  double nu = 0.0;       ///< gamma-induced shift, from the exact rank-one identity
  double nu_raw = 0.0;   ///< bisection eigenvalue at this gamma
  double nu0_raw = 0.0;  ///< bisection eigenvalue at gamma = 0 (discretization offset)
  double tau = 0.0;      ///< ||Q'||^2 nu / (2 c_p^2 e^{-z})
  double rho = 0.0;      ///< T(-z/2) / (c_p e^{-z/2}) with the discrete tail error divided out
  double rho_raw = 0.0;  ///< the same ratio read directly
  double t_at_delta = 0.0;
  double residual = 0.0;
  RealField T;
  RealField q0;  ///< discrete gamma = 0 mode on the same grid
};

/// Holds the gamma = 0 discrete zero mode for one (grid, p); read-only after
/// construction, so one instance can serve concurrent sweeps.
class TranslationalModeSolver {
 public:
  TranslationalModeSolver(const Grid1D& grid, double p);

  const Grid1D& grid() const noexcept { return grid_; }
  double p() const noexcept { return p_; }
  const RealField& zero_mode() const noexcept { return q0_; }
  double zero_mode_value() const noexcept { return nu0_; }

  /// z is snapped so that -z/2 is a node.
  PerturbedMode solve(double gamma, double z) const;

 private:
  Grid1D grid_;
  double p_;
  double nu0_;
  RealField q0_;
};

/// Scalars of a perturbed mode after Richardson extrapolation in h.
struct ModeScalars {
  double z = 0.0;
  double nu = 0.0;
  double tau = 0.0;
  double rho = 0.0;
  double t_at_delta = 0.0;
};

/// (4 fine - coarse) / 3 for a second-order quantity; `fine` uses h/2.
ModeScalars richardson(const PerturbedMode& coarse, const PerturbedMode& fine);

/// Pair of mode solvers on h and h/2 over the same extent.
class RefinedModeSolver {
 public:
  RefinedModeSolver(const Grid1D& coarse, double p);
  const TranslationalModeSolver& coarse() const noexcept { return coarse_; }
  const TranslationalModeSolver& fine() const noexcept { return fine_; }
  ModeScalars solve(double gamma, double z) const;

 private:
  TranslationalModeSolver coarse_;
  TranslationalModeSolver fine_;
};

struct NuBracket {
  double lower = 0.0;
  double upper = 0.0;
  double a_p = 0.5;         ///< exponent of the upper correction
  double lower_rate = 0.5;  ///< exponent of the lower correction
};
/// Bracket shared by tau_z and 1 - rho_z.
NuBracket nu_bracket(double p, double gamma);

/// Richardson scalars at one separation next to their bracket.
struct NuReport {
  double z = 0.0;
  double gamma = 0.0;
  double nu = 0.0;
  double tau = 0.0;
  double rho = 0.0;
  NuBracket bracket;
  double below_lower = 0.0;  ///< max(0, lower - tau), in units of e^{-z/2}
  double above_upper = 0.0;  ///< max(0, tau - upper), in units of e^{-a_p z}
  double rho_below_lower = 0.0;  ///< same two numbers for 1 - rho
  double rho_above_upper = 0.0;
  double consistency = 0.0;  ///< |rho - (1 - tau)| e^{z/2}
};
NuReport nu_report(const RefinedModeSolver& modes, double gamma, double z);

/// Central difference of the Richardson nu in z, z +- step (step a multiple of 2h).
double dz_nu(const RefinedModeSolver& modes, double gamma, double z, double step = 0.24);

/// Deviation of T_z from the discrete Gamma = 0 mode, which stands in for Q'
/// so the O(h^2) tail error does not swamp the e^{-z/2} scale.
struct DeviationReport {
  double z = 0.0;
  double gamma = 0.0;
  double l2 = 0.0;
  double h1 = 0.0;
  double l1 = 0.0;
  double dz_l2 = 0.0;  ///< ||d_z T_z||_2 by central difference at fixed y
  /// max over each region of |T_z - Q'| divided by its bound, without sqrt(Gamma):
  /// y <= -z/2: e^{-sqrt(1-nu)|y|}; -z/2 <= y <= 0: e^{-z-y}; y >= 0: e^{-z}((y+z)e^{-y} + e^{-z/2})
  std::array<double, 3> region_ratio{};
};
DeviationReport pointwise_profile(const TranslationalModeSolver& modes, double gamma, double z, double step = 0.24);

/// A "<~" statement checked along a sweep: C is `safety` times the first
/// sample, then every sample must stay below C.
struct FittedBound {
  double constant = 0.0;
  double worst = 0.0;  ///< largest sample
  bool holds = false;
};
FittedBound fit_and_enforce(const std::vector<double>& samples, double safety = 2.0);

}  // namespace twosol
