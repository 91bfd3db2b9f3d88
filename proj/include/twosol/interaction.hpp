#pragma once

#include "twosol/grid.hpp"
#include "twosol/soliton.hpp"

namespace twosol {

/// int Q^p(x) e^{-x} dx on the default grid.
double ip_integral(double p, const Grid1D& g = Grid1D::standard());

/// The soliton-soliton interaction integral H(z), trapezoid with spacing h.
double h_interaction(double z, double p, double h = 0.02);

struct GInnerCheck {
  double lhs = 0.0;     ///< <G, (e^{iv/2 .} Q')(. - z/2)>
  double rhs = 0.0;     ///< H(z)
  double gap = 0.0;     ///< lhs - rhs
  double budget = 0.0;  ///< e^{-z}(v^2 z^2 + e^{-z/2}), constant not included
};
GInnerCheck g_inner_check(double z, double v, double p, const Grid1D& g = Grid1D::standard());

struct Functionals {
  double energy = 0.0;
  double mass = 0.0;
  double action = 0.0;
  double nehari = 0.0;
};
/// Energy, mass, action and Nehari functional; the point term reads the x = 0 node.
Functionals action_and_nehari(const WaveField& u, const ModelParams& mp);

/// ||u'||^2 with the fourth-order derivative stencil.
double gradient_sq(const WaveField& u);

}  // namespace twosol
