#pragma once

#include <memory>
#include <string>
#include <vector>

#include "twosol/eigen.hpp"
#include "twosol/grid.hpp"

namespace twosol {

enum class Regime { Escape, Attraction, Unresolved };

/// Gamma < 3/2 escape, Gamma > 2 attraction, otherwise unresolved.
Regime regime(double gamma);
std::string to_string(Regime r);

/// (2/M(Q)) (H(z) - 2 gamma c_p e^{-z/2} T_z(-z/2)) at one separation, with
/// T_z(-z/2) from the Richardson-extrapolated mode.
double htilde_direct(double z, double p, double gamma, const RefinedModeSolver& modes);

struct ForceLawConfig {
  double p = 3.0;
  double gamma = 1.0;
  double z_min = 8.0;
  double z_max = 40.0;
  double step = 0.2;
  double z0 = 8.0;
  std::size_t grid_n = 6001;
  double grid_half_width = 60.0;
};

struct ForceNode {
  double z = 0.0;
  double h = 0.0;       ///< H(z)
  double rho = 0.0;     ///< T_z(-z/2) / (c_p e^{-z/2})
  double htilde = 0.0;
  double f = 0.0;       ///< htilde e^z
};

/// Tabulated modified force law with the potential F and time map zeta.
/// Immutable after construction.
class ForceLaw {
 public:
  explicit ForceLaw(const ForceLawConfig& cfg);
  ~ForceLaw();
  ForceLaw(ForceLaw&&) noexcept;
  ForceLaw& operator=(ForceLaw&&) noexcept;

  const ForceLawConfig& config() const noexcept { return cfg_; }
  const std::vector<ForceNode>& table() const noexcept { return nodes_; }
  double sigma_sq() const noexcept { return sigma_sq_; }

  /// Surrogate f(z) = htilde(z) e^z; tail value f(z_max) beyond the table.
  double f(double z) const;
  double htilde(double z) const;
  /// F(z) = int_z^inf htilde
  double big_f(double z) const;
  /// v on the zero-energy orbit, sqrt(F). Throws RegimeError when F <= 0.
  double classical_velocity(double z) const;
  /// zeta(z) = int_{z0}^z dz' / (2 sqrt F(z')), so zeta(z0) = 0.
  double zeta(double z) const;
  /// zeta + 1/sqrt(F(z0)): the zero-energy clock with F continued as
  /// F(z0) e^{z0 - z} below z0, so it counts time from z = -inf.
  double zeta_inf(double z) const;
  /// Inverse of zeta_inf.
  double zeta_inf_inverse(double s) const;
  double energy(double z, double v) const;

 private:
  struct Impl;
  ForceLawConfig cfg_;
  double sigma_sq_ = 0.0;
  std::vector<ForceNode> nodes_;
  std::unique_ptr<Impl> impl_;

  void check_range(double z) const;
};

struct Trajectory {
  std::vector<double> s;
  std::vector<double> z;
  std::vector<double> v;
  double energy_drift = 0.0;  ///< max |E(s) - E(s0)|
  bool truncated = false;
  std::string status = "ok";
};

/// Classical RK4 for z' = 2v, v' = -htilde(z) from s0 to s1 (s1 < s0 runs
/// backward). Stops early, with `truncated`, when z leaves [z_min, inf).
Trajectory integrate_ode(const ForceLaw& law, double z_init, double v_init, double s0, double s1, double dt = 0.05,
                         std::size_t record_every = 1);

}  // namespace twosol
