#pragma once

namespace twosol {

/// C-infinity ramp from 0 at `lo` to 1 at `hi`, built from exp(-1/t).
struct SmoothStep {
  double lo = 0.0;
  double hi = 1.0;

  double operator()(double r) const noexcept;
  double d1(double r) const noexcept;
  double d2(double r) const noexcept;
};

/// The origin cut-off: even, 0 on |y| <= inner, 1 on |y| >= outer.
struct Cutoff {
  double inner = 1.0;
  double outer = 2.0;

  double operator()(double y) const noexcept;
  double d1(double y) const noexcept;
  double d2(double y) const noexcept;
};

double cutoff_chi(double y) noexcept;

/// Profile used by the localized momentum: 1 on [0, 1/10], 0 on [1/8, inf).
double momentum_cutoff(double r) noexcept;

}  // namespace twosol
