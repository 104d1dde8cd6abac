#include "biot/elements.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "biot/quadrature.hpp"

namespace biot {

namespace {

// Forward-mode value plus gradient, used to differentiate the recurrences
// without collapsed-coordinate singularities.
struct Dual {
  double v = 0.0, dx = 0.0, dy = 0.0;
};
inline Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.dx + b.dx, a.dy + b.dy}; }
inline Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.dx - b.dx, a.dy - b.dy}; }
inline Dual operator*(Dual a, Dual b) {
  return {a.v * b.v, a.dx * b.v + a.v * b.dx, a.dy * b.v + a.v * b.dy};
}
inline Dual operator*(double s, Dual a) { return {s * a.v, s * a.dx, s * a.dy}; }
inline Dual operator+(Dual a, double s) { return {a.v + s, a.dx, a.dy}; }
inline Dual constant(double s) { return {s, 0.0, 0.0}; }

// Jacobi polynomial P_n^(alpha,beta)(z) by the three-term recurrence.
template <class T>
T jacobi(int n, double alpha, double beta, T z) {
  T p0 = 0.0 * z + 1.0;
  if (n == 0) return p0;
  T p1 = 0.5 * (alpha + beta + 2.0) * z + 0.5 * (alpha - beta);
  for (int k = 1; k < n; ++k) {
    double a = 2.0 * (k + 1) * (k + alpha + beta + 1) * (2 * k + alpha + beta);
    double b = (2 * k + alpha + beta + 1) * (alpha * alpha - beta * beta);
    double c = (2 * k + alpha + beta) * (2 * k + alpha + beta + 1) * (2 * k + alpha + beta + 2);
    double d = 2.0 * (k + alpha) * (k + beta) * (2 * k + alpha + beta + 2);
    T p2 = (1.0 / a) * ((b * p1 + c * (z * p1)) - d * p0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

// Scaled Legendre v^p P_p(u/v), a polynomial in (u,v) by the homogenized
// recurrence (p+1) S_{p+1} = (2p+1) u S_p - p v^2 S_{p-1}.
template <class T>
T scaled_legendre(int p, T u, T v) {
  T s0 = 0.0 * u + 1.0;
  if (p == 0) return s0;
  T s1 = u;
  T v2 = v * v;
  for (int k = 1; k < p; ++k) {
    T s2 = (1.0 / (k + 1)) * ((2 * k + 1) * (u * s1) - double(k) * (v2 * s0));
    s0 = s1;
    s1 = s2;
  }
  return s1;
}

// Orthonormal modal basis function (p,q) on the reference triangle.
template <class T>
T modal(int p, int q, T x, T y) {
  T u = 2.0 * x + y + (-1.0);
  T v = -1.0 * y + 1.0;
  T z = 2.0 * y + (-1.0);
  double c = std::sqrt(2.0 * (2 * p + 1) * (p + q + 1));
  return c * (scaled_legendre(p, u, v) * jacobi(q, 2 * p + 1, 0.0, z));
}

template <class T>
void modal_all(int degree, T x, T y, std::vector<T>& out) {
  out.clear();
  for (int p = 0; p <= degree; ++p)
    for (int q = 0; q <= degree - p; ++q) out.push_back(modal(p, q, x, y));
}

// Legendre P_q(2t-1) on [0,1], for the facet moments.
double facet_legendre(int q, double t) { return jacobi(q, 0.0, 0.0, 2.0 * t - 1.0); }

}  // namespace

int scalar_basis_dim(int degree) {
  if (degree < 0) return 0;
  return (degree + 1) * (degree + 2) / 2;
}

void scalar_basis_eval(int degree, const Eigen::Vector2d& xhat, Eigen::VectorXd& values) {
  std::vector<double> vals;
  modal_all(degree, xhat.x(), xhat.y(), vals);
  values = Eigen::Map<Eigen::VectorXd>(vals.data(), vals.size());
}

void scalar_basis_eval(int degree, const Eigen::Vector2d& xhat, Eigen::VectorXd& values,
                       Eigen::Matrix<double, Eigen::Dynamic, 2>& grads) {
  std::vector<Dual> vals;
  modal_all(degree, Dual{xhat.x(), 1.0, 0.0}, Dual{xhat.y(), 0.0, 1.0}, vals);
  int n = static_cast<int>(vals.size());
  values.resize(n);
  grads.resize(n, 2);
  for (int i = 0; i < n; ++i) {
    values(i) = vals[i].v;
    grads(i, 0) = vals[i].dx;
    grads(i, 1) = vals[i].dy;
  }
}

ReferenceFacet reference_facet(int f) {
  switch (f) {
    case 0: return {{0.0, 0.0}, {1.0, 0.0}, {0.0, -1.0}};
    case 1: return {{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
    case 2: return {{0.0, 1.0}, {0.0, 0.0}, {-1.0, 0.0}};
    default: throw std::invalid_argument("reference_facet: facet index out of range");
  }
}

DGElement::DGElement(int order_) : order(order_), dim(scalar_basis_dim(order_)) {
  if (order < 0) throw std::invalid_argument("DGElement: negative order");
}

DGElement::Tabulation DGElement::tabulate(const std::vector<Eigen::Vector2d>& points) const {
  Tabulation tab;
  int np = static_cast<int>(points.size());
  tab.value.resize(np, dim);
  tab.grad_x.resize(np, dim);
  tab.grad_y.resize(np, dim);
  Eigen::VectorXd vals;
  Eigen::Matrix<double, Eigen::Dynamic, 2> grads;
  for (int i = 0; i < np; ++i) {
    scalar_basis_eval(order, points[i], vals, grads);
    tab.value.row(i) = vals.transpose();
    tab.grad_x.row(i) = grads.col(0).transpose();
    tab.grad_y.row(i) = grads.col(1).transpose();
  }
  return tab;
}

namespace {

// Modal vector basis backing the BDM element: first the scalar modes paired
// with e_x, then with e_y.
void vector_modal_eval(int order, const Eigen::Vector2d& xhat, Eigen::MatrixX2d& values,
                       Eigen::VectorXd& divs, Eigen::MatrixX4d* jacs = nullptr) {
  std::vector<Dual> vals;
  modal_all(order, Dual{xhat.x(), 1.0, 0.0}, Dual{xhat.y(), 0.0, 1.0}, vals);
  int half = static_cast<int>(vals.size());
  values.resize(2 * half, 2);
  divs.resize(2 * half);
  if (jacs) jacs->resize(2 * half, 4);  // columns: d(vx)/dx, d(vx)/dy, d(vy)/dx, d(vy)/dy
  for (int i = 0; i < half; ++i) {
    values(i, 0) = vals[i].v;
    values(i, 1) = 0.0;
    values(half + i, 0) = 0.0;
    values(half + i, 1) = vals[i].v;
    divs(i) = vals[i].dx;
    divs(half + i) = vals[i].dy;
    if (jacs) {
      (*jacs)(i, 0) = vals[i].dx;
      (*jacs)(i, 1) = vals[i].dy;
      (*jacs)(i, 2) = 0.0;
      (*jacs)(i, 3) = 0.0;
      (*jacs)(half + i, 0) = 0.0;
      (*jacs)(half + i, 1) = 0.0;
      (*jacs)(half + i, 2) = vals[i].dx;
      (*jacs)(half + i, 3) = vals[i].dy;
    }
  }
}

}  // namespace

Eigen::VectorXd bdm_reference_dofs(
    const BDMElement& elem,
    const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& field) {
  int m = elem.order;
  Eigen::VectorXd dofs = Eigen::VectorXd::Zero(elem.dim);
  QuadratureRule1D line = gauss_rule(m + 3);
  for (int f = 0; f < 3; ++f) {
    ReferenceFacet rf = reference_facet(f);
    for (size_t i = 0; i < line.points.size(); ++i) {
      double t = line.points[i];
      Eigen::Vector2d x = (1.0 - t) * rf.a + t * rf.b;
      double flux = field(x).dot(rf.scaled_normal) * line.weights[i];
      for (int q = 0; q <= m; ++q)
        dofs(f * (m + 1) + q) += flux * facet_legendre(q, t);
    }
  }
  if (elem.interior_dof_count > 0) {
    TriangleRule tri = triangle_rule(2 * m + 6);
    int grad_count = scalar_basis_dim(m - 1) - 1;
    int curl_count = scalar_basis_dim(m - 2);
    int base = 3 * (m + 1);
    Eigen::VectorXd svals;
    Eigen::Matrix<double, Eigen::Dynamic, 2> sgrads;
    for (size_t i = 0; i < tri.points.size(); ++i) {
      const Eigen::Vector2d& x = tri.points[i];
      Eigen::Vector2d v = field(x) * tri.weights[i];
      scalar_basis_eval(m - 1, x, svals, sgrads);
      for (int s = 0; s < grad_count; ++s)
        dofs(base + s) += v.dot(sgrads.row(s + 1));
      if (curl_count > 0) {
        // curl of the cubic bubble times a scalar mode of degree <= m-2
        double bx = x.x(), by = x.y();
        double bub = bx * by * (1.0 - bx - by);
        Eigen::Vector2d dbub(by * (1.0 - 2.0 * bx - by), bx * (1.0 - bx - 2.0 * by));
        Eigen::VectorXd cvals;
        Eigen::Matrix<double, Eigen::Dynamic, 2> cgrads;
        scalar_basis_eval(m - 2, x, cvals, cgrads);
        for (int s = 0; s < curl_count; ++s) {
          Eigen::Vector2d grad_total = dbub * cvals(s) + bub * cgrads.row(s).transpose();
          Eigen::Vector2d curl(grad_total.y(), -grad_total.x());
          dofs(base + grad_count + s) += v.dot(curl);
        }
      }
    }
  }
  return dofs;
}

BDMElement::BDMElement(int order_) : order(order_) {
  if (order < 1) throw std::invalid_argument("BDMElement: order must be >= 1");
  dim = (order + 1) * (order + 2);
  facet_dof_count = order + 1;
  interior_dof_count = dim - 3 * facet_dof_count;  // = order^2 - 1
  // Dof matrix on the modal vector basis, then invert to get the nodal basis.
  Eigen::MatrixXd dmat(dim, dim);
  for (int j = 0; j < dim; ++j) {
    auto basis_j = [this, j](const Eigen::Vector2d& x) {
      Eigen::MatrixX2d values;
      Eigen::VectorXd divs;
      vector_modal_eval(order, x, values, divs);
      return Eigen::Vector2d(values(j, 0), values(j, 1));
    };
    dmat.col(j) = bdm_reference_dofs(*this, basis_j);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(dmat);
  if (!lu.isInvertible())
    throw std::runtime_error("BDMElement: dof matrix is singular");
  coeff = lu.inverse();
}

BDMElement::Tabulation BDMElement::tabulate(const std::vector<Eigen::Vector2d>& points) const {
  Tabulation tab;
  int np = static_cast<int>(points.size());
  tab.value_x.resize(np, dim);
  tab.value_y.resize(np, dim);
  tab.jac_xx.resize(np, dim);
  tab.jac_xy.resize(np, dim);
  tab.jac_yx.resize(np, dim);
  tab.jac_yy.resize(np, dim);
  tab.div.resize(np, dim);
  Eigen::MatrixX2d values;
  Eigen::VectorXd divs;
  Eigen::MatrixX4d jacs;
  for (int i = 0; i < np; ++i) {
    vector_modal_eval(order, points[i], values, divs, &jacs);
    tab.value_x.row(i) = (values.col(0).transpose() * coeff);
    tab.value_y.row(i) = (values.col(1).transpose() * coeff);
    tab.jac_xx.row(i) = (jacs.col(0).transpose() * coeff);
    tab.jac_xy.row(i) = (jacs.col(1).transpose() * coeff);
    tab.jac_yx.row(i) = (jacs.col(2).transpose() * coeff);
    tab.jac_yy.row(i) = (jacs.col(3).transpose() * coeff);
    tab.div.row(i) = (divs.transpose() * coeff);
  }
  return tab;
}

}  // namespace biot
