// Closed-form benchmark solution of the dynamic poroelastic system on the
// unit square, with matching load terms.  The displacement and seepage fields
// share the separable profile sin(pi t) grad(psi) with
// psi = x^2 (1-x)^2 y^2 (1-y)^2, which vanishes to first order on the
// boundary; the pressure is a mean-free multiple of psi - 1/900.
#pragma once

#include <Eigen/Dense>

#include "biot/assembly.hpp"

namespace biot {

class BenchmarkSolution {
 public:
  explicit BenchmarkSolution(const ModelParameters& par = benchmark_parameters());

  const ModelParameters& parameters() const { return par_; }

  // Exact fields.
  Eigen::Vector2d displacement(const Eigen::Vector2d& x, double t) const;
  Eigen::Vector2d velocity(const Eigen::Vector2d& x, double t) const;
  Eigen::Vector2d seepage(const Eigen::Vector2d& x, double t) const;
  double pressure(const Eigen::Vector2d& x, double t) const;
  Eigen::Matrix2d displacement_gradient(const Eigen::Vector2d& x, double t) const;

  // Loads of the momentum and mass balance equations.
  Eigen::Vector2d momentum_source(const Eigen::Vector2d& x, double t) const;
  double mass_source(const Eigen::Vector2d& x, double t) const;

  // Residual of the seepage (Darcy) equation, zero for the constructed fields.
  Eigen::Vector2d darcy_residual(const Eigen::Vector2d& x, double t) const;

  // Separable structure: field(x,t) = time factor * spatial profile.
  double time_factor_displacement(double t) const;  // sin(pi t)
  double time_factor_velocity(double t) const;      // pi cos(pi t)
  double time_factor_pressure(double t) const;
  Eigen::Vector2d profile(const Eigen::Vector2d& x) const;           // grad psi
  Eigen::Matrix2d profile_gradient(const Eigen::Vector2d& x) const;  // Hessian of psi
  double pressure_profile(const Eigen::Vector2d& x) const;           // psi - 1/900

 private:
  ModelParameters par_;
};

}  // namespace biot
