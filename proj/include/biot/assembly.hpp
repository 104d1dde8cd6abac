// Assembly of the spatial operators: weighted mass matrices, the interior
// penalty elasticity form, the divergence coupling and load vectors.
#pragma once

#include <functional>

#include <Eigen/Dense>

#include "biot/linalg.hpp"
#include "biot/spaces.hpp"

namespace biot {

// Material and model constants.  k_inv is the inverse permeability tensor
// (symmetric positive semidefinite; zero switches the seepage damping off).
struct ModelParameters {
  double rho_bulk = 0.95;     // total density (solid acceleration)
  double rho_fluid = 1.0;     // solid/fluid coupling density
  double rho_seepage = 2.0;   // density of the relative fluid acceleration
  double lame_mu = 0.0;
  double lame_lambda = 0.0;
  double biot_alpha = 0.9;    // pressure/stress coupling
  double storage = 0.01;      // specific storage coefficient
  Eigen::Matrix2d k_inv = Eigen::Matrix2d::Identity();
  double penalty = 0.0;       // interior penalty strength; 0 selects the default

  // Fills the Lame constants from Young's modulus and Poisson ratio.
  void set_youngs(double e_mod, double nu);
  // Throws std::invalid_argument when a coefficient violates the model
  // assumptions (densities must form a positive definite 2x2 block, mu > 0,
  // lambda >= 0, alpha in (0,1], storage > 0, k_inv PSD).
  void validate() const;
};

// Benchmark constants: E = 100, nu = 0.35, densities (0.95, 1, 2), alpha 0.9,
// storage 0.01, identity inverse permeability.
ModelParameters benchmark_parameters();

// Penalty default 4 (m+1)^2 for a vector space of degree m, scaling with the
// square of the polynomial degree as required for coercivity.
double default_penalty(int vector_order);

// Full-dof matrices (no boundary restriction applied).
SparseMat assemble_vector_mass(const FESpace& v, const Eigen::Matrix2d& weight);
SparseMat assemble_scalar_mass(const FESpace& p);
// Symmetric interior penalty form: cellwise strain and divergence stiffness
// plus consistency, adjoint consistency and penalty facet terms acting on
// tangential jumps (normal jumps vanish for H(div) fields).
SparseMat assemble_elasticity(const FESpace& v, double mu, double lambda, double eta);
// The penalty part alone: sum_e (2 mu eta / h_e) <[tang u], [tang phi]>_e.
SparseMat assemble_tangent_penalty(const FESpace& v, double mu, double eta);
// <div u, q> with pressure rows and vector columns.
SparseMat assemble_div_coupling(const FESpace& p, const FESpace& v);
// Cellwise <grad u, grad phi> with full (not symmetrized) gradients.
SparseMat assemble_vector_gradient_gram(const FESpace& v);

Eigen::VectorXd assemble_vector_load(const FESpace& v,
                                     const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& f,
                                     int quad_degree = -1);
Eigen::VectorXd assemble_scalar_load(const FESpace& p,
                                     const std::function<double(const Eigen::Vector2d&)>& g,
                                     int quad_degree = -1);
// <G, grad phi> for a matrix-valued field, used by the error measurement.
Eigen::VectorXd assemble_gradient_load(
    const FESpace& v, const std::function<Eigen::Matrix2d(const Eigen::Vector2d&)>& g,
    int quad_degree = -1);

// Keeps the rows/columns belonging to free dofs.
SparseMat restrict_matrix(const SparseMat& a, const FESpace& rows, const FESpace& cols);

// Operators of the coupled system, restricted to free dofs.  The same
// divergence coupling matrix serves the solid and the seepage field; the
// pressure gradient blocks of the slab system are its transpose, so adjoint
// consistency of the pair holds by construction.
struct OperatorSet {
  SparseMat vector_mass;        // identity-weighted vector mass
  SparseMat seepage_damping;    // k_inv-weighted vector mass
  SparseMat pressure_mass;
  SparseMat elasticity;
  SparseMat div_coupling;       // pressure rows x free vector columns
  Eigen::VectorXd pressure_volume;  // integrals of the pressure basis functions
};

OperatorSet build_operators(const FESpace& v, const FESpace& p, const ModelParameters& par);

}  // namespace biot
