#include "twosol/cutoff.hpp"

#include <cmath>

namespace twosol {

namespace {

double psi(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
double psi1(double t) { return t > 0.0 ? psi(t) / (t * t) : 0.0; }
double psi2(double t) {
  if (t <= 0.0) return 0.0;
  const double t2 = t * t;
  return psi(t) * (1.0 / (t2 * t2) - 2.0 / (t2 * t));
}

struct Unit {
  double s, s1, s2;
};

// step(t) = psi(t) / (psi(t) + psi(1 - t)) with its first two derivatives
Unit unit_step(double t) {
  if (t <= 0.0) return {0.0, 0.0, 0.0};
  if (t >= 1.0) return {1.0, 0.0, 0.0};
  const double a = psi(t), b = psi(1.0 - t);
  const double a1 = psi1(t), b1 = -psi1(1.0 - t);
  const double a2 = psi2(t), b2 = psi2(1.0 - t);
  const double d = a + b, d1 = a1 + b1;
  const double num = a1 * b - a * b1;
  const double num1 = a2 * b - a * b2;
  return {a / d, num / (d * d), num1 / (d * d) - 2.0 * num * d1 / (d * d * d)};
}

}  // namespace

double SmoothStep::operator()(double r) const noexcept { return unit_step((r - lo) / (hi - lo)).s; }
double SmoothStep::d1(double r) const noexcept {
  return unit_step((r - lo) / (hi - lo)).s1 / (hi - lo);
}
double SmoothStep::d2(double r) const noexcept {
  const double w = hi - lo;
  return unit_step((r - lo) / w).s2 / (w * w);
}

double Cutoff::operator()(double y) const noexcept { return SmoothStep{inner, outer}(std::abs(y)); }
double Cutoff::d1(double y) const noexcept {
  const double g = SmoothStep{inner, outer}.d1(std::abs(y));
  return y < 0.0 ? -g : g;
}
double Cutoff::d2(double y) const noexcept { return SmoothStep{inner, outer}.d2(std::abs(y)); }

double cutoff_chi(double y) noexcept { return Cutoff{}(y); }

double momentum_cutoff(double r) noexcept { return 1.0 - SmoothStep{0.1, 0.125}(std::abs(r)); }

}  // namespace twosol
