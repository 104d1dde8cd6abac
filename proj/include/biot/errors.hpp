// Space-time error norms: the maximum over sample times of the spatial L2
// distance between a trajectory field and an exact field, plus convergence
// order bookkeeping.
#pragma once

#include <functional>
#include <vector>

#include "biot/spaces.hpp"
#include "biot/timestepping.hpp"

namespace biot {

// Exact comparison fields.  When a field is separable (time factor times a
// fixed spatial profile) the measurement uses a per-slab Gram matrix of the
// profile and the nodal discrete fields, making the time sampling cheap; the
// general path integrates the difference at every sample time.
struct ExactVectorField {
  std::function<Eigen::Vector2d(const Eigen::Vector2d&, double)> eval;
  bool separable = false;
  std::function<double(double)> time_factor;
  std::function<Eigen::Vector2d(const Eigen::Vector2d&)> profile;
};

struct ExactScalarField {
  std::function<double(const Eigen::Vector2d&, double)> eval;
  bool separable = false;
  std::function<double(double)> time_factor;
  std::function<double(const Eigen::Vector2d&)> profile;
};

struct ExactMatrixField {
  std::function<Eigen::Matrix2d(const Eigen::Vector2d&, double)> eval;
  bool separable = false;
  std::function<double(double)> time_factor;
  std::function<Eigen::Matrix2d(const Eigen::Vector2d&)> profile;
};

// Sample times within each slab are the uniform subdivision with
// samples_per_slab intervals, endpoints included.
double linf_l2_error(const Trajectory& traj, const FESpace& space, FieldId field,
                     const ExactVectorField& exact, int samples_per_slab = 100,
                     int quad_degree = -1);
double linf_l2_error(const Trajectory& traj, const FESpace& space, FieldId field,
                     const ExactScalarField& exact, int samples_per_slab = 100,
                     int quad_degree = -1);
// Broken (cellwise) gradient error of a vector field.
double linf_l2_gradient_error(const Trajectory& traj, const FESpace& space, FieldId field,
                              const ExactMatrixField& exact, int samples_per_slab = 100,
                              int quad_degree = -1);

// Experimental order of convergence between two refinement levels with a mesh
// and step ratio of two.
double eoc(double coarse, double fine);

struct ErrorRow {
  int level = 0;
  double tau = 0.0;
  double h = 0.0;
  double grad_solid = 0.0;
  double velocity = 0.0;
  double seepage = 0.0;
  double pressure = 0.0;
};

struct ErrorReport {
  std::vector<ErrorRow> rows;
};

}  // namespace biot
