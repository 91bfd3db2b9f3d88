#pragma once

#include "twosol/cutoff.hpp"
#include "twosol/grid.hpp"

namespace twosol {

struct ModelParams {
  double p = 3.0;
  double gamma = 0.0;

  /// Throws InvalidParameter unless p > 2, p != 5 and (gamma >= 0 or allowed).
  void validate(bool allow_negative_gamma = false) const;
};

struct SolitonState {
  double lambda = 1.0;
  double gamma_phase = 0.0;
  double z = 20.0;
  double v = 0.0;
};

/// Modulation defect vector built from (lambda'/lambda, z', gamma', v').
struct MVector {
  double m1 = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;

  static MVector from_rates(const SolitonState& s, double lam_rate, double zdot, double gdot, double vdot);
  double norm() const noexcept;
};

double cp_constant(double p);

double q_profile(double x, double p);
double q_prime(double x, double p);
double q_second(double x, double p);
/// x Q' + 2/(p-1) Q
double lambda_q(double x, double p);
/// omega^(1/(p-1)) Q(sqrt(omega) x)
double q_scaled(double x, double p, double omega);

/// Closed forms of the profile integrals.
double q_l2_sq(double p);
double q_prime_l2_sq(double p);
double q_mass(double p);  ///< M(Q) = ||Q||^2 / 2
/// sigma^2 = 4 c_p^2 / M(Q)
double sigma_sq(double p);

RealField q_field(const Grid1D& g, double p, double center = 0.0);
RealField q_prime_field(const Grid1D& g, double p, double center = 0.0);

struct ProfileResidual {
  double analytic = 0.0;
  double fd = 0.0;
};
/// sup |-Q'' + Q - Q^p|
ProfileResidual ode_residual(double p, const Grid1D& g);
/// sup |(Q')^2 + 2/(p+1) Q^(p+1) - Q^2| for the profile scaled by `scale`.
double pohozaev_residual(double p, const Grid1D& g, double scale = 1.0);

WaveField free_two_soliton(const Grid1D& g, double z, double v, double p);
WaveField approx_two_soliton(const Grid1D& g, double z, double v, double p, const Cutoff& chi = {});
/// d/dy of P0
WaveField free_two_soliton_dy(const Grid1D& g, double z, double v, double p);

WaveField interaction_g(const Grid1D& g, double z, double v, double p);

/// Residual of P = chi P0 in the rescaled equation, assembled from the
/// modulation vector and the cut-off corrections.
WaveField error_field(const Grid1D& g, const SolitonState& st, const MVector& m, double p,
                      const Cutoff& chi = {});

double pair_distance(double z1, double z2, double v, double omega, double p, const Grid1D& g);

}  // namespace twosol
