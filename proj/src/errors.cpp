#include "biot/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "biot/assembly.hpp"
#include "biot/quadrature.hpp"

namespace biot {

namespace {

// Maximum over samples of sqrt(z^T G z) with the per-slab Gram matrix G of
// (profile, nodal discrete fields) and z = (T(t), -L_0(s), ..., -L_k(s)).
double separable_linf(const Trajectory& traj, FieldId field, const SparseMat& mass,
                      const Eigen::VectorXd& load, double profile_norm2,
                      const std::function<double(double)>& time_factor, int samples) {
  int k = traj.k;
  TemporalMatrices tm = temporal_matrices(k);
  double tau = traj.time_mesh.tau();
  double worst = 0.0;
  Eigen::MatrixXd gram(k + 2, k + 2);
  Eigen::VectorXd z(k + 2);
  for (size_t n = 0; n < traj.slabs.size(); ++n) {
    const Eigen::MatrixXd& c = slab_field(traj.slabs[n], field);
    Eigen::MatrixXd mc(c.rows(), k + 1);
    for (int j = 0; j <= k; ++j) mc.col(j) = spmv(mass, c.col(j));
    gram(0, 0) = profile_norm2;
    for (int j = 0; j <= k; ++j) {
      gram(0, j + 1) = gram(j + 1, 0) = load.dot(c.col(j));
      for (int i = 0; i <= k; ++i) gram(i + 1, j + 1) = c.col(i).dot(mc.col(j));
    }
    double t0 = traj.time_mesh.boundary(static_cast<int>(n));
    for (int s = 0; s <= samples; ++s) {
      double shat = double(s) / samples;
      z(0) = time_factor(t0 + tau * shat);
      for (int j = 0; j <= k; ++j) z(j + 1) = -lagrange_value(tm.trial_nodes, j, shat);
      double e2 = z.dot(gram * z);
      worst = std::max(worst, std::sqrt(std::max(e2, 0.0)));
    }
  }
  return worst;
}

// Squared-norm integral of a profile over the mesh.
template <class SquaredAt>
double integrate_norm2(const Mesh& mesh, int degree, SquaredAt&& squared_at) {
  TriangleRule rule = triangle_rule(degree);
  double total = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    CellGeometry geom = cell_geometry(mesh, c);
    double acc = 0.0;
    for (size_t q = 0; q < rule.points.size(); ++q)
      acc += rule.weights[q] * squared_at(geom.map(rule.points[q]));
    total += geom.det * acc;
  }
  return total;
}

enum class EvalMode { value, gradient };

// Direct sampling path: integrates |exact - discrete|^2 at each sample time.
template <class ExactAt>
double general_linf_vector(const Trajectory& traj, const FESpace& space, FieldId field,
                           ExactAt&& exact_at, EvalMode mode, int samples, int degree) {
  int k = traj.k;
  TemporalMatrices tm = temporal_matrices(k);
  double tau = traj.time_mesh.tau();
  TriangleRule rule = triangle_rule(degree);
  BDMElement::Tabulation tab = space.bdm().tabulate(rule.points);
  const Mesh& mesh = space.mesh();
  int nloc = space.dofs_per_cell();
  double worst2 = 0.0;
  for (size_t n = 0; n < traj.slabs.size(); ++n) {
    const Eigen::MatrixXd& c = slab_field(traj.slabs[n], field);
    double t0 = traj.time_mesh.boundary(static_cast<int>(n));
    for (int s = 0; s <= samples; ++s) {
      double shat = double(s) / samples;
      double t = t0 + tau * shat;
      Eigen::VectorXd free_now = Eigen::VectorXd::Zero(c.rows());
      for (int j = 0; j <= k; ++j)
        free_now += lagrange_value(tm.trial_nodes, j, shat) * c.col(j);
      Eigen::VectorXd full = space.expand_free(free_now);
      double err2 = 0.0;
      for (int cell = 0; cell < mesh.n_cells(); ++cell) {
        CellGeometry geom = cell_geometry(mesh, cell);
        const auto& dofs = space.cell_dofs(cell);
        const auto& signs = space.cell_signs(cell);
        Eigen::VectorXd local(nloc);
        for (int i = 0; i < nloc; ++i) local(i) = signs[i] * full(dofs[i]);
        double acc = 0.0;
        for (size_t q = 0; q < rule.points.size(); ++q) {
          Eigen::Vector2d x = geom.map(rule.points[q]);
          if (mode == EvalMode::value) {
            Eigen::Vector2d vhat(tab.value_x.row(q).dot(local), tab.value_y.row(q).dot(local));
            acc += rule.weights[q] *
                   (geom.piola_value(vhat) - exact_at(x, t, EvalMode::value).col(0))
                       .squaredNorm();
          } else {
            Eigen::Matrix2d jhat;
            jhat << tab.jac_xx.row(q).dot(local), tab.jac_xy.row(q).dot(local),
                tab.jac_yx.row(q).dot(local), tab.jac_yy.row(q).dot(local);
            Eigen::Matrix2d diff =
                geom.piola_jacobian(jhat) - exact_at(x, t, EvalMode::gradient);
            acc += rule.weights[q] * diff.squaredNorm();
          }
        }
        err2 += geom.det * acc;
      }
      worst2 = std::max(worst2, err2);
    }
  }
  return std::sqrt(worst2);
}

}  // namespace

double linf_l2_error(const Trajectory& traj, const FESpace& space, FieldId field,
                     const ExactVectorField& exact, int samples_per_slab, int quad_degree) {
  if (space.family() != ElementFamily::vector_hdiv)
    throw std::invalid_argument("linf_l2_error: vector space required");
  if (field == FieldId::pressure)
    throw std::invalid_argument("linf_l2_error: vector overload used for the pressure");
  int degree = quad_degree > 0 ? quad_degree : std::max(2 * space.order() + 2, 16);
  if (exact.separable) {
    SparseMat mass =
        restrict_matrix(assemble_vector_mass(space, Eigen::Matrix2d::Identity()), space, space);
    Eigen::VectorXd load =
        space.restrict_free(assemble_vector_load(space, exact.profile, degree));
    double norm2 = integrate_norm2(space.mesh(), degree, [&](const Eigen::Vector2d& x) {
      return exact.profile(x).squaredNorm();
    });
    return separable_linf(traj, field, mass, load, norm2, exact.time_factor, samples_per_slab);
  }
  auto exact_at = [&](const Eigen::Vector2d& x, double t, EvalMode) -> Eigen::Matrix2d {
    Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
    m.col(0) = exact.eval(x, t);
    return m;
  };
  return general_linf_vector(traj, space, field, exact_at, EvalMode::value, samples_per_slab,
                             degree);
}

double linf_l2_gradient_error(const Trajectory& traj, const FESpace& space, FieldId field,
                              const ExactMatrixField& exact, int samples_per_slab,
                              int quad_degree) {
  if (space.family() != ElementFamily::vector_hdiv)
    throw std::invalid_argument("linf_l2_gradient_error: vector space required");
  int degree = quad_degree > 0 ? quad_degree : std::max(2 * space.order() + 2, 16);
  if (exact.separable) {
    SparseMat gram = restrict_matrix(assemble_vector_gradient_gram(space), space, space);
    Eigen::VectorXd load =
        space.restrict_free(assemble_gradient_load(space, exact.profile, degree));
    double norm2 = integrate_norm2(space.mesh(), degree, [&](const Eigen::Vector2d& x) {
      return exact.profile(x).squaredNorm();
    });
    return separable_linf(traj, field, gram, load, norm2, exact.time_factor, samples_per_slab);
  }
  auto exact_at = [&](const Eigen::Vector2d& x, double t, EvalMode) -> Eigen::Matrix2d {
    return exact.eval(x, t);
  };
  return general_linf_vector(traj, space, field, exact_at, EvalMode::gradient, samples_per_slab,
                             degree);
}

double linf_l2_error(const Trajectory& traj, const FESpace& space, FieldId field,
                     const ExactScalarField& exact, int samples_per_slab, int quad_degree) {
  if (space.family() != ElementFamily::scalar_dg)
    throw std::invalid_argument("linf_l2_error: scalar space required");
  if (field != FieldId::pressure)
    throw std::invalid_argument("linf_l2_error: scalar overload used for a vector field");
  int degree = quad_degree > 0 ? quad_degree : std::max(2 * space.order() + 2, 16);
  if (exact.separable) {
    SparseMat mass = assemble_scalar_mass(space);
    Eigen::VectorXd load = assemble_scalar_load(space, exact.profile, degree);
    double norm2 = integrate_norm2(space.mesh(), degree, [&](const Eigen::Vector2d& x) {
      double v = exact.profile(x);
      return v * v;
    });
    return separable_linf(traj, field, mass, load, norm2, exact.time_factor, samples_per_slab);
  }
  // direct sampling
  int k = traj.k;
  TemporalMatrices tm = temporal_matrices(k);
  double tau = traj.time_mesh.tau();
  TriangleRule rule = triangle_rule(degree);
  DGElement::Tabulation tab = space.dg().tabulate(rule.points);
  const Mesh& mesh = space.mesh();
  int nloc = space.dofs_per_cell();
  double worst2 = 0.0;
  for (size_t n = 0; n < traj.slabs.size(); ++n) {
    const Eigen::MatrixXd& c = slab_field(traj.slabs[n], field);
    double t0 = traj.time_mesh.boundary(static_cast<int>(n));
    for (int s = 0; s <= samples_per_slab; ++s) {
      double shat = double(s) / samples_per_slab;
      double t = t0 + tau * shat;
      Eigen::VectorXd now = Eigen::VectorXd::Zero(c.rows());
      for (int j = 0; j <= k; ++j) now += lagrange_value(tm.trial_nodes, j, shat) * c.col(j);
      double err2 = 0.0;
      for (int cell = 0; cell < mesh.n_cells(); ++cell) {
        CellGeometry geom = cell_geometry(mesh, cell);
        const auto& dofs = space.cell_dofs(cell);
        Eigen::VectorXd local(nloc);
        for (int i = 0; i < nloc; ++i) local(i) = now(dofs[i]);
        double acc = 0.0;
        for (size_t q = 0; q < rule.points.size(); ++q) {
          double diff = tab.value.row(q).dot(local) - exact.eval(geom.map(rule.points[q]), t);
          acc += rule.weights[q] * diff * diff;
        }
        err2 += geom.det * acc;
      }
      worst2 = std::max(worst2, err2);
    }
  }
  return std::sqrt(worst2);
}

double eoc(double coarse, double fine) {
  if (!(coarse > 0.0) || !(fine > 0.0))
    throw std::invalid_argument("eoc: errors must be positive");
  return std::log2(coarse / fine);
}

}  // namespace biot
