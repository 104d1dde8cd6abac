// Reference elements: an orthonormal scalar modal basis on the triangle, the
// discontinuous pressure element built from it, and the H(div)-conforming
// vector element with facet-moment and interior-moment degrees of freedom.
#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace biot {

// Number of scalar polynomials of total degree <= degree.
int scalar_basis_dim(int degree);

// Evaluates the L2-orthonormal modal basis of degree <= degree at a reference
// point.  Basis functions are ordered (p,q) lexicographically; index 0 is the
// constant sqrt(2).
void scalar_basis_eval(int degree, const Eigen::Vector2d& xhat, Eigen::VectorXd& values);
void scalar_basis_eval(int degree, const Eigen::Vector2d& xhat, Eigen::VectorXd& values,
                       Eigen::Matrix<double, Eigen::Dynamic, 2>& grads);

// Reference facet f runs from point a to point b; scaled_normal is the
// clockwise rotation of b - a, so its length equals the facet length and it
// points out of the reference triangle.
struct ReferenceFacet {
  Eigen::Vector2d a, b, scaled_normal;
};
ReferenceFacet reference_facet(int f);

// Discontinuous scalar element of degree `order` (modal, orthonormal).
struct DGElement {
  int order = 0;
  int dim = 0;

  explicit DGElement(int order);

  struct Tabulation {
    Eigen::MatrixXd value;    // points x dim
    Eigen::MatrixXd grad_x;   // reference gradients
    Eigen::MatrixXd grad_y;
  };
  Tabulation tabulate(const std::vector<Eigen::Vector2d>& points) const;
};

// Vector element of degree `order` m with full polynomial components.  Degrees
// of freedom: per facet the moments of the normal trace against Legendre
// polynomials of degree 0..m in the facet parameter (weighted by the facet
// length), then interior moments against gradients of scalar modes of degree
// <= m-1 and against curls of bubble-weighted scalar modes of degree <= m-2.
struct BDMElement {
  int order = 0;             // m >= 1
  int dim = 0;               // (m+1)(m+2)
  int facet_dof_count = 0;   // m+1 per facet
  int interior_dof_count = 0;
  Eigen::MatrixXd coeff;     // column j = modal coefficients of nodal function j

  explicit BDMElement(int order);

  struct Tabulation {
    Eigen::MatrixXd value_x, value_y;            // points x dim
    Eigen::MatrixXd jac_xx, jac_xy, jac_yx, jac_yy;
    Eigen::MatrixXd div;
  };
  Tabulation tabulate(const std::vector<Eigen::Vector2d>& points) const;
};

// Applies the reference degrees of freedom to an arbitrary vector field given
// on the reference triangle.  Used to build the element and to interpolate.
Eigen::VectorXd bdm_reference_dofs(
    const BDMElement& elem,
    const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& field);

}  // namespace biot
