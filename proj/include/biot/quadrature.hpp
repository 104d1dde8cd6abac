// Gauss, Gauss-Lobatto and triangle quadrature rules on reference domains.
#pragma once

#include <vector>

#include <Eigen/Dense>

namespace biot {

// Rule on the reference interval [0,1].  Weights are positive and sum to 1.
struct QuadratureRule1D {
  std::vector<double> points;
  std::vector<double> weights;
  int degree = 0;  // highest polynomial degree integrated exactly
};

// Rule on the reference triangle {x >= 0, y >= 0, x + y <= 1}.
// Weights are positive and sum to the area 1/2.
struct TriangleRule {
  std::vector<Eigen::Vector2d> points;
  std::vector<double> weights;
  int degree = 0;
};

// n-point Gauss-Legendre rule, exact for degree 2n-1.
QuadratureRule1D gauss_rule(int n);

// n-point Gauss-Lobatto rule (includes both endpoints), exact for degree 2n-3.
// Requires n >= 2.
QuadratureRule1D gauss_lobatto_rule(int n);

// Conical-product rule exact for all polynomials of total degree <= degree.
TriangleRule triangle_rule(int degree);

}  // namespace biot
