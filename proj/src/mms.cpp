#include "biot/mms.hpp"

#include <cmath>

namespace biot {

namespace {

constexpr double kPi = 3.14159265358979323846;

// One-dimensional factor x^2 (1-x)^2 and its derivatives.
struct Poly1d {
  double f, d1, d2, d3;
};

Poly1d poly1d(double x) {
  Poly1d p;
  double omx = 1.0 - x;
  p.f = x * x * omx * omx;
  p.d1 = 2.0 * x * omx * (1.0 - 2.0 * x);
  p.d2 = 2.0 - 12.0 * x + 12.0 * x * x;
  p.d3 = 24.0 * x - 12.0;
  return p;
}

}  // namespace

BenchmarkSolution::BenchmarkSolution(const ModelParameters& par) : par_(par) { par_.validate(); }

double BenchmarkSolution::time_factor_displacement(double t) const { return std::sin(kPi * t); }

double BenchmarkSolution::time_factor_velocity(double t) const { return kPi * std::cos(kPi * t); }

double BenchmarkSolution::time_factor_pressure(double t) const {
  // chosen so the seepage equation holds exactly with w = u
  return -par_.rho_seepage * kPi * std::cos(kPi * t) +
         (par_.rho_fluid * kPi * kPi - 1.0) * std::sin(kPi * t);
}

Eigen::Vector2d BenchmarkSolution::profile(const Eigen::Vector2d& x) const {
  Poly1d px = poly1d(x.x()), py = poly1d(x.y());
  return {px.d1 * py.f, px.f * py.d1};
}

Eigen::Matrix2d BenchmarkSolution::profile_gradient(const Eigen::Vector2d& x) const {
  Poly1d px = poly1d(x.x()), py = poly1d(x.y());
  Eigen::Matrix2d h;
  h << px.d2 * py.f, px.d1 * py.d1, px.d1 * py.d1, px.f * py.d2;
  return h;
}

double BenchmarkSolution::pressure_profile(const Eigen::Vector2d& x) const {
  Poly1d px = poly1d(x.x()), py = poly1d(x.y());
  return px.f * py.f - 1.0 / 900.0;  // mean of psi over the unit square is 1/900
}

Eigen::Vector2d BenchmarkSolution::displacement(const Eigen::Vector2d& x, double t) const {
  return time_factor_displacement(t) * profile(x);
}

Eigen::Vector2d BenchmarkSolution::velocity(const Eigen::Vector2d& x, double t) const {
  return time_factor_velocity(t) * profile(x);
}

Eigen::Vector2d BenchmarkSolution::seepage(const Eigen::Vector2d& x, double t) const {
  return displacement(x, t);
}

double BenchmarkSolution::pressure(const Eigen::Vector2d& x, double t) const {
  return time_factor_pressure(t) * pressure_profile(x);
}

Eigen::Matrix2d BenchmarkSolution::displacement_gradient(const Eigen::Vector2d& x,
                                                         double t) const {
  return time_factor_displacement(t) * profile_gradient(x);
}

Eigen::Vector2d BenchmarkSolution::momentum_source(const Eigen::Vector2d& x, double t) const {
  Poly1d px = poly1d(x.x()), py = poly1d(x.y());
  double st = std::sin(kPi * t), ct = std::cos(kPi * t);
  Eigen::Vector2d grad_psi(px.d1 * py.f, px.f * py.d1);
  // div(eps(grad psi)) = grad(laplace psi) for the symmetric profile
  Eigen::Vector2d grad_lap(px.d3 * py.f + px.d1 * py.d2, px.d2 * py.d1 + px.f * py.d3);
  double coeff = -par_.rho_bulk * kPi * kPi * st + par_.biot_alpha * time_factor_pressure(t) +
                 par_.rho_fluid * kPi * ct;
  return coeff * grad_psi - (2.0 * par_.lame_mu + par_.lame_lambda) * st * grad_lap;
}

double BenchmarkSolution::mass_source(const Eigen::Vector2d& x, double t) const {
  Poly1d px = poly1d(x.x()), py = poly1d(x.y());
  double st = std::sin(kPi * t), ct = std::cos(kPi * t);
  double lap = px.d2 * py.f + px.f * py.d2;
  double dt_pressure_factor = par_.rho_seepage * kPi * kPi * st +
                              (par_.rho_fluid * kPi * kPi - 1.0) * kPi * ct;
  return par_.storage * dt_pressure_factor * (px.f * py.f - 1.0 / 900.0) +
         (par_.biot_alpha * kPi * ct + st) * lap;
}

Eigen::Vector2d BenchmarkSolution::darcy_residual(const Eigen::Vector2d& x, double t) const {
  double st = std::sin(kPi * t), ct = std::cos(kPi * t);
  Eigen::Vector2d phi = profile(x);
  return -par_.rho_fluid * kPi * kPi * st * phi        // rho_f d_tt u
         + par_.rho_seepage * kPi * ct * phi           // rho_w d_t w
         + par_.k_inv * (st * phi)                     // K^-1 w
         + time_factor_pressure(t) * phi;              // grad p
}

}  // namespace biot
