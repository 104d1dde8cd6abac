#include "biot/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace biot {

namespace {

// Nodes and weights of the n-point Gauss rule for the Jacobi weight
// (1-z)^a (1+z)^b on [-1,1], computed via the Golub-Welsch eigenvalue method.
std::pair<std::vector<double>, std::vector<double>> gauss_jacobi(int n, double a, double b) {
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    double s = 2 * k + a + b;
    double diag = (k == 0) ? (b - a) / (a + b + 2)
                           : (b * b - a * a) / (s * (s + 2));
    jac(k, k) = diag;
    if (k >= 1) {
      double off2 = (k == 1)
          ? 4 * (1 + a) * (1 + b) / ((2 + a + b) * (2 + a + b) * (3 + a + b))
          : 4 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1) * (s - 1));
      jac(k, k - 1) = jac(k - 1, k) = std::sqrt(off2);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  double mu0 = std::pow(2.0, a + b + 1) * std::tgamma(a + 1) * std::tgamma(b + 1) /
               std::tgamma(a + b + 2);
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    x[i] = es.eigenvalues()(i);
    double v0 = es.eigenvectors()(0, i);
    w[i] = mu0 * v0 * v0;
  }
  return {x, w};
}

double legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  if (n == 0) return p0;
  for (int k = 1; k < n; ++k) {
    double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

}  // namespace

QuadratureRule1D gauss_rule(int n) {
  if (n < 1) throw std::invalid_argument("gauss_rule: need at least one point");
  QuadratureRule1D rule;
  rule.degree = 2 * n - 1;
  switch (n) {
    case 1:
      rule.points = {0.5};
      rule.weights = {1.0};
      return rule;
    case 2: {
      double d = 0.5 / std::sqrt(3.0);
      rule.points = {0.5 - d, 0.5 + d};
      rule.weights = {0.5, 0.5};
      return rule;
    }
    case 3: {
      double d = 0.5 * std::sqrt(3.0 / 5.0);
      rule.points = {0.5 - d, 0.5, 0.5 + d};
      rule.weights = {5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0};
      return rule;
    }
    default: {
      auto [x, w] = gauss_jacobi(n, 0.0, 0.0);
      rule.points.resize(n);
      rule.weights.resize(n);
      for (int i = 0; i < n; ++i) {
        rule.points[i] = 0.5 * (x[i] + 1.0);
        rule.weights[i] = 0.5 * w[i];
      }
      return rule;
    }
  }
}

QuadratureRule1D gauss_lobatto_rule(int n) {
  if (n < 2) throw std::invalid_argument("gauss_lobatto_rule: need at least two points");
  QuadratureRule1D rule;
  rule.degree = 2 * n - 3;
  switch (n) {
    case 2:
      rule.points = {0.0, 1.0};
      rule.weights = {0.5, 0.5};
      return rule;
    case 3:
      rule.points = {0.0, 0.5, 1.0};
      rule.weights = {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0};
      return rule;
    case 4: {
      double d = std::sqrt(5.0) / 10.0;
      rule.points = {0.0, 0.5 - d, 0.5 + d, 1.0};
      rule.weights = {1.0 / 12.0, 5.0 / 12.0, 5.0 / 12.0, 1.0 / 12.0};
      return rule;
    }
    case 5: {
      double d = std::sqrt(21.0) / 14.0;
      rule.points = {0.0, 0.5 - d, 0.5, 0.5 + d, 1.0};
      rule.weights = {0.05, 49.0 / 180.0, 16.0 / 45.0, 49.0 / 180.0, 0.05};
      return rule;
    }
    default: {
      // Interior nodes are the roots of P'_{n-1}, i.e. of the Jacobi(1,1)
      // polynomial of degree n-2.  Weights: 2 / (n(n-1) P_{n-1}(x)^2) on [-1,1].
      auto [x, w] = gauss_jacobi(n - 2, 1.0, 1.0);
      rule.points.resize(n);
      rule.weights.resize(n);
      rule.points[0] = 0.0;
      rule.points[n - 1] = 1.0;
      double we = 2.0 / (n * (n - 1));
      rule.weights[0] = rule.weights[n - 1] = 0.5 * we;
      for (int i = 0; i < n - 2; ++i) {
        double p = legendre(n - 1, x[i]);
        rule.points[i + 1] = 0.5 * (x[i] + 1.0);
        rule.weights[i + 1] = 0.5 * 2.0 / (n * (n - 1) * p * p);
      }
      return rule;
    }
  }
}

TriangleRule triangle_rule(int degree) {
  if (degree < 0 || degree > 60)
    throw std::invalid_argument("triangle_rule: unsupported degree");
  // Duffy substitution x = s(1-t), y = t turns the triangle integral into
  //   int_0^1 int_0^1 f(s(1-t), t) (1-t) ds dt,
  // handled by a Gauss-Legendre rule in s and a Gauss-Jacobi(1,0) rule in t.
  int n = degree / 2 + 1;
  QuadratureRule1D gs = gauss_rule(n);
  auto [xt, wt] = gauss_jacobi(n, 1.0, 0.0);
  TriangleRule rule;
  rule.degree = degree;
  rule.points.reserve(n * n);
  rule.weights.reserve(n * n);
  for (int j = 0; j < n; ++j) {
    double t = 0.5 * (xt[j] + 1.0);
    double wj = 0.25 * wt[j];  // maps weight (1-z) dz on [-1,1] to (1-t) dt on [0,1]
    for (int i = 0; i < n; ++i) {
      rule.points.emplace_back(gs.points[i] * (1.0 - t), t);
      rule.weights.push_back(gs.weights[i] * wj);
    }
  }
  return rule;
}

}  // namespace biot
