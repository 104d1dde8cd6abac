// Global finite element spaces: dof numbering, facet orientation signs,
// boundary constraints, canonical interpolation and point evaluation.
#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "biot/elements.hpp"
#include "biot/mesh.hpp"

namespace biot {

enum class ElementFamily {
  vector_hdiv,  // H(div)-conforming vector element, normal trace continuous
  scalar_dg     // discontinuous modal scalar element
};

// A vector space of order m has m+1 dofs on every facet (shared between the
// adjacent cells) plus m^2-1 interior dofs per cell.  Facet dofs on the
// domain boundary are constrained to zero (normal trace condition); the
// remaining dofs are the free dofs the solver works with.  A scalar space is
// fully discontinuous: per-cell modal dofs, no constraints.
class FESpace {
 public:
  FESpace(const Mesh& mesh, ElementFamily family, int order);

  const Mesh& mesh() const { return *mesh_; }
  ElementFamily family() const { return family_; }
  int order() const { return order_; }
  int n_dofs() const { return n_dofs_; }
  int n_free() const { return static_cast<int>(free_to_global_.size()); }
  int dofs_per_cell() const { return dofs_per_cell_; }

  const BDMElement& bdm() const { return *bdm_; }
  const DGElement& dg() const { return *dg_; }

  const std::vector<int>& cell_dofs(int cell) const { return cell_dofs_[cell]; }
  // Orientation sign of each local dof (+1 or -1); the local coefficient is
  // the sign times the global coefficient.
  const std::vector<double>& cell_signs(int cell) const { return cell_signs_[cell]; }

  bool is_constrained(int dof) const { return free_index_[dof] < 0; }
  int free_index(int dof) const { return free_index_[dof]; }
  const std::vector<int>& free_to_global() const { return free_to_global_; }

  // Global id of moment q on a facet (vector spaces only).
  int facet_dof(int facet, int q) const { return facet * (order_ + 1) + q; }

  Eigen::VectorXd restrict_free(const Eigen::VectorXd& full) const;
  Eigen::VectorXd expand_free(const Eigen::VectorXd& free) const;

  // Canonical interpolation: facet moments of the normal trace plus interior
  // moments (vector spaces).  Returns full-length coefficients.
  Eigen::VectorXd interpolate_vector(
      const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& field) const;
  // Cellwise L2 projection (scalar spaces).
  Eigen::VectorXd interpolate_scalar(
      const std::function<double(const Eigen::Vector2d&)>& field) const;

  // Point evaluation of coefficient fields (full-length coefficients).
  Eigen::Vector2d value_vector(int cell, const Eigen::Vector2d& xhat,
                               const Eigen::VectorXd& full) const;
  Eigen::Matrix2d gradient_vector(int cell, const Eigen::Vector2d& xhat,
                                  const Eigen::VectorXd& full) const;
  double divergence_vector(int cell, const Eigen::Vector2d& xhat,
                           const Eigen::VectorXd& full) const;
  double value_scalar(int cell, const Eigen::Vector2d& xhat,
                      const Eigen::VectorXd& full) const;

 private:
  const Mesh* mesh_;
  ElementFamily family_;
  int order_;
  int n_dofs_ = 0;
  int dofs_per_cell_ = 0;
  std::shared_ptr<const BDMElement> bdm_;
  std::shared_ptr<const DGElement> dg_;
  std::vector<std::vector<int>> cell_dofs_;
  std::vector<std::vector<double>> cell_signs_;
  std::vector<int> free_index_;
  std::vector<int> free_to_global_;

  // Signed local coefficients of one cell gathered from a full vector.
  Eigen::VectorXd local_coefficients(int cell, const Eigen::VectorXd& full) const;
};

}  // namespace biot
