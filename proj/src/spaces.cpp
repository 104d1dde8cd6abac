#include "biot/spaces.hpp"

#include <stdexcept>

#include "biot/quadrature.hpp"

namespace biot {

namespace {

double facet_legendre(int q, double t) {
  // Legendre P_q(2t-1) via the recurrence.
  double z = 2.0 * t - 1.0;
  double p0 = 1.0, p1 = z;
  if (q == 0) return p0;
  for (int k = 1; k < q; ++k) {
    double p2 = ((2 * k + 1) * z * p1 - k * p0) / (k + 1);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

}  // namespace

FESpace::FESpace(const Mesh& mesh, ElementFamily family, int order)
    : mesh_(&mesh), family_(family), order_(order) {
  if (family_ == ElementFamily::vector_hdiv) {
    bdm_ = std::make_shared<BDMElement>(order);
    dofs_per_cell_ = bdm_->dim;
    int per_facet = order + 1;
    int per_cell = bdm_->interior_dof_count;
    int facet_total = mesh.n_facets() * per_facet;
    n_dofs_ = facet_total + mesh.n_cells() * per_cell;
    cell_dofs_.resize(mesh.n_cells());
    cell_signs_.resize(mesh.n_cells());
    for (int c = 0; c < mesh.n_cells(); ++c) {
      auto& dofs = cell_dofs_[c];
      auto& signs = cell_signs_[c];
      dofs.resize(dofs_per_cell_);
      signs.assign(dofs_per_cell_, 1.0);
      for (int f = 0; f < 3; ++f) {
        int g = mesh.cell_facets[c][f];
        bool owner = mesh.facets[g].cell0 == c;
        for (int q = 0; q <= order; ++q) {
          dofs[f * per_facet + q] = facet_dof(g, q);
          // The neighbour traverses the facet backwards: its outward normal is
          // the opposite of the stored one and the Legendre argument reverses,
          // giving the combined factor -(-1)^q.
          signs[f * per_facet + q] = owner ? 1.0 : (q % 2 == 0 ? -1.0 : 1.0);
        }
      }
      for (int s = 0; s < per_cell; ++s)
        dofs[3 * per_facet + s] = facet_total + c * per_cell + s;
    }
    free_index_.assign(n_dofs_, 0);
    for (int g = 0; g < mesh.n_facets(); ++g)
      if (mesh.facets[g].boundary())
        for (int q = 0; q <= order; ++q) free_index_[facet_dof(g, q)] = -1;
  } else {
    dg_ = std::make_shared<DGElement>(order);
    dofs_per_cell_ = dg_->dim;
    n_dofs_ = mesh.n_cells() * dofs_per_cell_;
    cell_dofs_.resize(mesh.n_cells());
    cell_signs_.resize(mesh.n_cells());
    for (int c = 0; c < mesh.n_cells(); ++c) {
      cell_dofs_[c].resize(dofs_per_cell_);
      for (int i = 0; i < dofs_per_cell_; ++i) cell_dofs_[c][i] = c * dofs_per_cell_ + i;
      cell_signs_[c].assign(dofs_per_cell_, 1.0);
    }
    free_index_.assign(n_dofs_, 0);
  }
  free_to_global_.reserve(n_dofs_);
  for (int g = 0; g < n_dofs_; ++g) {
    if (free_index_[g] == 0) {
      free_index_[g] = static_cast<int>(free_to_global_.size());
      free_to_global_.push_back(g);
    }
  }
}

Eigen::VectorXd FESpace::restrict_free(const Eigen::VectorXd& full) const {
  Eigen::VectorXd out(n_free());
  for (int i = 0; i < n_free(); ++i) out(i) = full(free_to_global_[i]);
  return out;
}

Eigen::VectorXd FESpace::expand_free(const Eigen::VectorXd& free) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n_dofs_);
  for (int i = 0; i < n_free(); ++i) out(free_to_global_[i]) = free(i);
  return out;
}

Eigen::VectorXd FESpace::interpolate_vector(
    const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& field) const {
  if (family_ != ElementFamily::vector_hdiv)
    throw std::logic_error("interpolate_vector: not a vector space");
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(n_dofs_);
  int m = order_;
  // Facet moments of the normal trace, taken in the stored facet orientation.
  QuadratureRule1D line = gauss_rule(m + 3);
  for (int g = 0; g < mesh_->n_facets(); ++g) {
    const Facet& facet = mesh_->facets[g];
    Eigen::Vector2d a = mesh_->vertices[facet.v0];
    Eigen::Vector2d b = mesh_->vertices[facet.v1];
    for (size_t i = 0; i < line.points.size(); ++i) {
      double t = line.points[i];
      Eigen::Vector2d x = (1.0 - t) * a + t * b;
      double flux = field(x).dot(facet.normal) * facet.length * line.weights[i];
      for (int q = 0; q <= m; ++q)
        coeffs(facet_dof(g, q)) += flux * facet_legendre(q, t) ;
    }
  }
  // Interior moments via the contravariant pullback to the reference cell.
  if (bdm_->interior_dof_count > 0) {
    for (int c = 0; c < mesh_->n_cells(); ++c) {
      CellGeometry geom = cell_geometry(*mesh_, c);
      auto pullback = [&](const Eigen::Vector2d& xhat) -> Eigen::Vector2d {
        return geom.det * (geom.inv_jac * field(geom.map(xhat)));
      };
      Eigen::VectorXd local = bdm_reference_dofs(*bdm_, pullback);
      const auto& dofs = cell_dofs_[c];
      for (int s = 0; s < bdm_->interior_dof_count; ++s)
        coeffs(dofs[3 * (m + 1) + s]) = local(3 * (m + 1) + s);
    }
  }
  return coeffs;
}

Eigen::VectorXd FESpace::interpolate_scalar(
    const std::function<double(const Eigen::Vector2d&)>& field) const {
  if (family_ != ElementFamily::scalar_dg)
    throw std::logic_error("interpolate_scalar: not a scalar space");
  Eigen::VectorXd coeffs(n_dofs_);
  TriangleRule tri = triangle_rule(2 * order_ + 8);
  DGElement::Tabulation tab = dg_->tabulate(tri.points);
  for (int c = 0; c < mesh_->n_cells(); ++c) {
    CellGeometry geom = cell_geometry(*mesh_, c);
    Eigen::VectorXd local = Eigen::VectorXd::Zero(dofs_per_cell_);
    for (size_t i = 0; i < tri.points.size(); ++i) {
      double fv = field(geom.map(tri.points[i])) * tri.weights[i];
      local += fv * tab.value.row(i).transpose();
    }
    for (int j = 0; j < dofs_per_cell_; ++j) coeffs(cell_dofs_[c][j]) = local(j);
  }
  return coeffs;
}

Eigen::VectorXd FESpace::local_coefficients(int cell, const Eigen::VectorXd& full) const {
  const auto& dofs = cell_dofs_[cell];
  const auto& signs = cell_signs_[cell];
  Eigen::VectorXd local(dofs_per_cell_);
  for (int i = 0; i < dofs_per_cell_; ++i) local(i) = signs[i] * full(dofs[i]);
  return local;
}

Eigen::Vector2d FESpace::value_vector(int cell, const Eigen::Vector2d& xhat,
                                      const Eigen::VectorXd& full) const {
  CellGeometry geom = cell_geometry(*mesh_, cell);
  BDMElement::Tabulation tab = bdm_->tabulate({xhat});
  Eigen::VectorXd local = local_coefficients(cell, full);
  Eigen::Vector2d vhat(tab.value_x.row(0).dot(local), tab.value_y.row(0).dot(local));
  return geom.piola_value(vhat);
}

Eigen::Matrix2d FESpace::gradient_vector(int cell, const Eigen::Vector2d& xhat,
                                         const Eigen::VectorXd& full) const {
  CellGeometry geom = cell_geometry(*mesh_, cell);
  BDMElement::Tabulation tab = bdm_->tabulate({xhat});
  Eigen::VectorXd local = local_coefficients(cell, full);
  Eigen::Matrix2d jhat;
  jhat << tab.jac_xx.row(0).dot(local), tab.jac_xy.row(0).dot(local),
      tab.jac_yx.row(0).dot(local), tab.jac_yy.row(0).dot(local);
  return geom.piola_jacobian(jhat);
}

double FESpace::divergence_vector(int cell, const Eigen::Vector2d& xhat,
                                  const Eigen::VectorXd& full) const {
  CellGeometry geom = cell_geometry(*mesh_, cell);
  BDMElement::Tabulation tab = bdm_->tabulate({xhat});
  Eigen::VectorXd local = local_coefficients(cell, full);
  return geom.piola_div(tab.div.row(0).dot(local));
}

double FESpace::value_scalar(int cell, const Eigen::Vector2d& xhat,
                             const Eigen::VectorXd& full) const {
  DGElement::Tabulation tab = dg_->tabulate({xhat});
  Eigen::VectorXd local = local_coefficients(cell, full);
  return tab.value.row(0).dot(local);
}

}  // namespace biot
