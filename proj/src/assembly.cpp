#include "biot/assembly.hpp"

#include <cmath>
#include <stdexcept>

#include "biot/quadrature.hpp"

namespace biot {

void ModelParameters::set_youngs(double e_mod, double nu) {
  if (e_mod <= 0.0 || nu <= -1.0 || nu >= 0.5)
    throw std::invalid_argument("set_youngs: need E > 0 and nu in (-1, 1/2)");
  lame_mu = e_mod / (2.0 * (1.0 + nu));
  lame_lambda = e_mod * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
}

void ModelParameters::validate() const {
  if (rho_bulk <= 0.0 || rho_seepage <= 0.0 ||
      rho_bulk * rho_seepage - rho_fluid * rho_fluid <= 0.0)
    throw std::invalid_argument("ModelParameters: density block is not positive definite");
  if (lame_mu <= 0.0) throw std::invalid_argument("ModelParameters: mu must be positive");
  if (lame_lambda < 0.0) throw std::invalid_argument("ModelParameters: lambda must be nonnegative");
  if (biot_alpha <= 0.0 || biot_alpha > 1.0)
    throw std::invalid_argument("ModelParameters: alpha must lie in (0,1]");
  if (storage <= 0.0) throw std::invalid_argument("ModelParameters: storage must be positive");
  if (std::abs(k_inv(0, 1) - k_inv(1, 0)) > 1e-12 * (1.0 + k_inv.norm()))
    throw std::invalid_argument("ModelParameters: k_inv must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(k_inv);
  if (es.eigenvalues().minCoeff() < -1e-12 * (1.0 + k_inv.norm()))
    throw std::invalid_argument("ModelParameters: k_inv must be positive semidefinite");
  if (penalty < 0.0) throw std::invalid_argument("ModelParameters: negative penalty");
}

ModelParameters benchmark_parameters() {
  ModelParameters par;
  par.set_youngs(100.0, 0.35);
  return par;
}

double default_penalty(int vector_order) { return 4.0 * (vector_order + 1) * (vector_order + 1); }

namespace {

void require_vector(const FESpace& v, const char* who) {
  if (v.family() != ElementFamily::vector_hdiv)
    throw std::invalid_argument(std::string(who) + ": vector space required");
}

void require_scalar(const FESpace& p, const char* who) {
  if (p.family() != ElementFamily::scalar_dg)
    throw std::invalid_argument(std::string(who) + ": scalar space required");
}

void scatter_cell(std::vector<Triplet>& out, const FESpace& space, int cell,
                  const Eigen::MatrixXd& local) {
  const auto& dofs = space.cell_dofs(cell);
  const auto& signs = space.cell_signs(cell);
  int n = space.dofs_per_cell();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.emplace_back(dofs[i], dofs[j], signs[i] * signs[j] * local(i, j));
}

}  // namespace

SparseMat assemble_vector_mass(const FESpace& v, const Eigen::Matrix2d& weight) {
  require_vector(v, "assemble_vector_mass");
  Eigen::Matrix2d sym = 0.5 * (weight + weight.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(sym);
  if (es.eigenvalues().minCoeff() < -1e-12 * (1.0 + weight.norm()))
    throw std::invalid_argument("assemble_vector_mass: indefinite weight");
  const BDMElement& elem = v.bdm();
  TriangleRule rule = triangle_rule(2 * elem.order);
  BDMElement::Tabulation tab = elem.tabulate(rule.points);
  int n = elem.dim;
  std::vector<Triplet> triplets;
  triplets.reserve(v.mesh().n_cells() * n * n);
  for (int c = 0; c < v.mesh().n_cells(); ++c) {
    CellGeometry geom = cell_geometry(v.mesh(), c);
    // (W J psi_j / det) . (J psi_i / det) det = psi_j^T (J^T W J / det) psi_i
    Eigen::Matrix2d g = geom.jac.transpose() * weight * geom.jac / geom.det;
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(n, n);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      auto vx = tab.value_x.row(q);
      auto vy = tab.value_y.row(q);
      double w = rule.weights[q];
      local += w * (g(0, 0) * vx.transpose() * vx + g(0, 1) * vx.transpose() * vy +
                    g(1, 0) * vy.transpose() * vx + g(1, 1) * vy.transpose() * vy);
    }
    scatter_cell(triplets, v, c, local);
  }
  return matrix_from_triplets(v.n_dofs(), v.n_dofs(), triplets);
}

SparseMat assemble_scalar_mass(const FESpace& p) {
  require_scalar(p, "assemble_scalar_mass");
  const DGElement& elem = p.dg();
  TriangleRule rule = triangle_rule(2 * elem.order);
  DGElement::Tabulation tab = elem.tabulate(rule.points);
  int n = elem.dim;
  std::vector<Triplet> triplets;
  triplets.reserve(p.mesh().n_cells() * n * n);
  for (int c = 0; c < p.mesh().n_cells(); ++c) {
    CellGeometry geom = cell_geometry(p.mesh(), c);
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(n, n);
    for (size_t q = 0; q < rule.points.size(); ++q)
      local += (geom.det * rule.weights[q]) * tab.value.row(q).transpose() * tab.value.row(q);
    scatter_cell(triplets, p, c, local);
  }
  return matrix_from_triplets(p.n_dofs(), p.n_dofs(), triplets);
}

namespace {

// Shared machinery of the elasticity form and its penalty part.
SparseMat elasticity_terms(const FESpace& v, double mu, double lambda, double eta,
                           bool with_volume, bool with_consistency, bool with_penalty) {
  require_vector(v, "assemble_elasticity");
  const Mesh& mesh = v.mesh();
  const BDMElement& elem = v.bdm();
  int n = elem.dim;
  int m = elem.order;
  std::vector<Triplet> triplets;

  if (with_volume) {
    TriangleRule rule = triangle_rule(2 * m);
    BDMElement::Tabulation tab = elem.tabulate(rule.points);
    for (int c = 0; c < mesh.n_cells(); ++c) {
      CellGeometry geom = cell_geometry(mesh, c);
      Eigen::MatrixXd local = Eigen::MatrixXd::Zero(n, n);
      // physical strains and divergences of all basis functions per point
      Eigen::MatrixXd exx(1, n), eyy(1, n), exy(1, n), dv(1, n);
      for (size_t q = 0; q < rule.points.size(); ++q) {
        for (int i = 0; i < n; ++i) {
          Eigen::Matrix2d jhat;
          jhat << tab.jac_xx(q, i), tab.jac_xy(q, i), tab.jac_yx(q, i), tab.jac_yy(q, i);
          Eigen::Matrix2d jac = geom.piola_jacobian(jhat);
          exx(0, i) = jac(0, 0);
          eyy(0, i) = jac(1, 1);
          exy(0, i) = 0.5 * (jac(0, 1) + jac(1, 0));
          dv(0, i) = geom.piola_div(tab.div(q, i));
        }
        double w = rule.weights[q] * geom.det;
        local += w * (2.0 * mu *
                          (exx.transpose() * exx + eyy.transpose() * eyy +
                           2.0 * exy.transpose() * exy) +
                      lambda * dv.transpose() * dv);
      }
      scatter_cell(triplets, v, c, local);
    }
  }

  if (with_consistency || with_penalty) {
    QuadratureRule1D line = gauss_rule(m + 2);
    int npts = static_cast<int>(line.points.size());
    // cache: reference points along each local facet, forward and reversed
    std::vector<BDMElement::Tabulation> tab_fwd(3), tab_rev(3);
    for (int f = 0; f < 3; ++f) {
      ReferenceFacet rf = reference_facet(f);
      std::vector<Eigen::Vector2d> fwd(npts), rev(npts);
      for (int q = 0; q < npts; ++q) {
        fwd[q] = (1.0 - line.points[q]) * rf.a + line.points[q] * rf.b;
        rev[q] = line.points[q] * rf.a + (1.0 - line.points[q]) * rf.b;
      }
      tab_fwd[f] = elem.tabulate(fwd);
      tab_rev[f] = elem.tabulate(rev);
    }
    auto local_facet_index = [&mesh](int cell, int facet) {
      for (int f = 0; f < 3; ++f)
        if (mesh.cell_facets[cell][f] == facet) return f;
      throw std::logic_error("facet not found in cell");
    };

    for (int g = 0; g < mesh.n_facets(); ++g) {
      const Facet& facet = mesh.facets[g];
      int n_sides = facet.boundary() ? 1 : 2;
      double avg = facet.boundary() ? 1.0 : 0.5;
      Eigen::Vector2d nrm = facet.normal;
      std::array<int, 2> cells = {facet.cell0, facet.cell1};
      std::array<double, 2> jump_sign = {1.0, -1.0};
      // per side and point: tangential values and strain-normal products
      std::array<std::vector<Eigen::MatrixXd>, 2> tang, strain_n;
      std::array<CellGeometry, 2> geoms;
      for (int s = 0; s < n_sides; ++s) {
        geoms[s] = cell_geometry(mesh, cells[s]);
        int lf = local_facet_index(cells[s], g);
        const BDMElement::Tabulation& tab = (s == 0) ? tab_fwd[lf] : tab_rev[lf];
        tang[s].assign(npts, Eigen::MatrixXd(2, n));
        strain_n[s].assign(npts, Eigen::MatrixXd(2, n));
        for (int q = 0; q < npts; ++q) {
          for (int i = 0; i < n; ++i) {
            Eigen::Vector2d val =
                geoms[s].piola_value({tab.value_x(q, i), tab.value_y(q, i)});
            Eigen::Vector2d tg = val - val.dot(nrm) * nrm;
            tang[s][q].col(i) = tg;
            Eigen::Matrix2d jhat;
            jhat << tab.jac_xx(q, i), tab.jac_xy(q, i), tab.jac_yx(q, i), tab.jac_yy(q, i);
            Eigen::Matrix2d jac = geoms[s].piola_jacobian(jhat);
            strain_n[s][q].col(i) = 0.5 * (jac + jac.transpose()) * nrm;
          }
        }
      }
      for (int sa = 0; sa < n_sides; ++sa) {
        const auto& dofs_a = v.cell_dofs(cells[sa]);
        const auto& signs_a = v.cell_signs(cells[sa]);
        for (int sb = 0; sb < n_sides; ++sb) {
          const auto& dofs_b = v.cell_dofs(cells[sb]);
          const auto& signs_b = v.cell_signs(cells[sb]);
          Eigen::MatrixXd local = Eigen::MatrixXd::Zero(n, n);
          for (int q = 0; q < npts; ++q) {
            double w = line.weights[q] * facet.length;
            // test jump x trial average, trial jump x test average, jump x jump
            if (with_consistency)
              local -= (2.0 * mu * avg * w) *
                       (jump_sign[sa] * tang[sa][q].transpose() * strain_n[sb][q] +
                        jump_sign[sb] * strain_n[sa][q].transpose() * tang[sb][q]);
            if (with_penalty)
              local += (2.0 * mu * eta / facet.length * w * jump_sign[sa] * jump_sign[sb]) *
                       tang[sa][q].transpose() * tang[sb][q];
          }
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              triplets.emplace_back(dofs_a[i], dofs_b[j],
                                    signs_a[i] * signs_b[j] * local(i, j));
        }
      }
    }
  }
  return matrix_from_triplets(v.n_dofs(), v.n_dofs(), triplets);
}

}  // namespace

SparseMat assemble_elasticity(const FESpace& v, double mu, double lambda, double eta) {
  if (mu <= 0.0 || lambda < 0.0 || eta <= 0.0)
    throw std::invalid_argument("assemble_elasticity: invalid coefficients");
  return elasticity_terms(v, mu, lambda, eta, true, true, true);
}

SparseMat assemble_tangent_penalty(const FESpace& v, double mu, double eta) {
  return elasticity_terms(v, mu, 0.0, eta, false, false, true);
}

SparseMat assemble_div_coupling(const FESpace& p, const FESpace& v) {
  require_scalar(p, "assemble_div_coupling");
  require_vector(v, "assemble_div_coupling");
  if (&p.mesh() != &v.mesh())
    throw std::invalid_argument("assemble_div_coupling: spaces live on different meshes");
  const BDMElement& ve = v.bdm();
  const DGElement& pe = p.dg();
  // <div u, q> pulls back to the reference cell with no geometric factor, so
  // one local matrix serves every cell.
  TriangleRule rule = triangle_rule(ve.order - 1 + pe.order + 2);
  BDMElement::Tabulation vtab = ve.tabulate(rule.points);
  DGElement::Tabulation ptab = pe.tabulate(rule.points);
  Eigen::MatrixXd local = Eigen::MatrixXd::Zero(pe.dim, ve.dim);
  for (size_t q = 0; q < rule.points.size(); ++q)
    local += rule.weights[q] * ptab.value.row(q).transpose() * vtab.div.row(q);
  std::vector<Triplet> triplets;
  triplets.reserve(p.mesh().n_cells() * pe.dim * ve.dim);
  for (int c = 0; c < p.mesh().n_cells(); ++c) {
    const auto& pdofs = p.cell_dofs(c);
    const auto& vdofs = v.cell_dofs(c);
    const auto& vsigns = v.cell_signs(c);
    for (int i = 0; i < pe.dim; ++i)
      for (int j = 0; j < ve.dim; ++j)
        triplets.emplace_back(pdofs[i], vdofs[j], vsigns[j] * local(i, j));
  }
  return matrix_from_triplets(p.n_dofs(), v.n_dofs(), triplets);
}

SparseMat assemble_vector_gradient_gram(const FESpace& v) {
  require_vector(v, "assemble_vector_gradient_gram");
  const BDMElement& elem = v.bdm();
  int n = elem.dim;
  TriangleRule rule = triangle_rule(2 * elem.order);
  BDMElement::Tabulation tab = elem.tabulate(rule.points);
  std::vector<Triplet> triplets;
  triplets.reserve(v.mesh().n_cells() * n * n);
  for (int c = 0; c < v.mesh().n_cells(); ++c) {
    CellGeometry geom = cell_geometry(v.mesh(), c);
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd g00(1, n), g01(1, n), g10(1, n), g11(1, n);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      for (int i = 0; i < n; ++i) {
        Eigen::Matrix2d jhat;
        jhat << tab.jac_xx(q, i), tab.jac_xy(q, i), tab.jac_yx(q, i), tab.jac_yy(q, i);
        Eigen::Matrix2d jac = geom.piola_jacobian(jhat);
        g00(0, i) = jac(0, 0);
        g01(0, i) = jac(0, 1);
        g10(0, i) = jac(1, 0);
        g11(0, i) = jac(1, 1);
      }
      double w = rule.weights[q] * geom.det;
      local += w * (g00.transpose() * g00 + g01.transpose() * g01 + g10.transpose() * g10 +
                    g11.transpose() * g11);
    }
    scatter_cell(triplets, v, c, local);
  }
  return matrix_from_triplets(v.n_dofs(), v.n_dofs(), triplets);
}

Eigen::VectorXd assemble_vector_load(
    const FESpace& v, const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& f,
    int quad_degree) {
  require_vector(v, "assemble_vector_load");
  const BDMElement& elem = v.bdm();
  int deg = quad_degree > 0 ? quad_degree : 2 * elem.order + 8;
  TriangleRule rule = triangle_rule(deg);
  BDMElement::Tabulation tab = elem.tabulate(rule.points);
  int n = elem.dim;
  Eigen::VectorXd load = Eigen::VectorXd::Zero(v.n_dofs());
  for (int c = 0; c < v.mesh().n_cells(); ++c) {
    CellGeometry geom = cell_geometry(v.mesh(), c);
    Eigen::VectorXd local = Eigen::VectorXd::Zero(n);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      // det cancels: f . (J psi / det) det = (J^T f) . psi
      Eigen::Vector2d ft = geom.jac.transpose() * f(geom.map(rule.points[q]));
      if (!ft.allFinite())
        throw std::runtime_error("assemble_vector_load: source is not finite");
      local += rule.weights[q] *
               (ft.x() * tab.value_x.row(q).transpose() + ft.y() * tab.value_y.row(q).transpose());
    }
    const auto& dofs = v.cell_dofs(c);
    const auto& signs = v.cell_signs(c);
    for (int i = 0; i < n; ++i) load(dofs[i]) += signs[i] * local(i);
  }
  return load;
}

Eigen::VectorXd assemble_scalar_load(const FESpace& p,
                                     const std::function<double(const Eigen::Vector2d&)>& g,
                                     int quad_degree) {
  require_scalar(p, "assemble_scalar_load");
  const DGElement& elem = p.dg();
  int deg = quad_degree > 0 ? quad_degree : 2 * elem.order + 8;
  TriangleRule rule = triangle_rule(deg);
  DGElement::Tabulation tab = elem.tabulate(rule.points);
  Eigen::VectorXd load = Eigen::VectorXd::Zero(p.n_dofs());
  for (int c = 0; c < p.mesh().n_cells(); ++c) {
    CellGeometry geom = cell_geometry(p.mesh(), c);
    Eigen::VectorXd local = Eigen::VectorXd::Zero(elem.dim);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      double gv = g(geom.map(rule.points[q]));
      if (!std::isfinite(gv))
        throw std::runtime_error("assemble_scalar_load: source is not finite");
      local += (gv * geom.det * rule.weights[q]) * tab.value.row(q).transpose();
    }
    const auto& dofs = p.cell_dofs(c);
    for (int i = 0; i < elem.dim; ++i) load(dofs[i]) += local(i);
  }
  return load;
}

Eigen::VectorXd assemble_gradient_load(
    const FESpace& v, const std::function<Eigen::Matrix2d(const Eigen::Vector2d&)>& g,
    int quad_degree) {
  require_vector(v, "assemble_gradient_load");
  const BDMElement& elem = v.bdm();
  int deg = quad_degree > 0 ? quad_degree : 2 * elem.order + 8;
  TriangleRule rule = triangle_rule(deg);
  BDMElement::Tabulation tab = elem.tabulate(rule.points);
  int n = elem.dim;
  Eigen::VectorXd load = Eigen::VectorXd::Zero(v.n_dofs());
  for (int c = 0; c < v.mesh().n_cells(); ++c) {
    CellGeometry geom = cell_geometry(v.mesh(), c);
    Eigen::VectorXd local = Eigen::VectorXd::Zero(n);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      Eigen::Matrix2d gv = g(geom.map(rule.points[q]));
      if (!gv.allFinite())
        throw std::runtime_error("assemble_gradient_load: field is not finite");
      double w = rule.weights[q] * geom.det;
      for (int i = 0; i < n; ++i) {
        Eigen::Matrix2d jhat;
        jhat << tab.jac_xx(q, i), tab.jac_xy(q, i), tab.jac_yx(q, i), tab.jac_yy(q, i);
        local(i) += w * gv.cwiseProduct(geom.piola_jacobian(jhat)).sum();
      }
    }
    const auto& dofs = v.cell_dofs(c);
    const auto& signs = v.cell_signs(c);
    for (int i = 0; i < n; ++i) load(dofs[i]) += signs[i] * local(i);
  }
  return load;
}

SparseMat restrict_matrix(const SparseMat& a, const FESpace& rows, const FESpace& cols) {
  if (a.rows() != rows.n_dofs() || a.cols() != cols.n_dofs())
    throw std::invalid_argument("restrict_matrix: shape mismatch");
  std::vector<Triplet> triplets;
  triplets.reserve(a.nonZeros());
  for (int r = 0; r < a.outerSize(); ++r) {
    int fr = rows.free_index(r);
    if (fr < 0) continue;
    for (SparseMat::InnerIterator it(a, r); it; ++it) {
      int fc = cols.free_index(it.col());
      if (fc >= 0) triplets.emplace_back(fr, fc, it.value());
    }
  }
  return matrix_from_triplets(rows.n_free(), cols.n_free(), triplets);
}

OperatorSet build_operators(const FESpace& v, const FESpace& p, const ModelParameters& par) {
  require_vector(v, "build_operators");
  require_scalar(p, "build_operators");
  if (&v.mesh() != &p.mesh())
    throw std::invalid_argument("build_operators: spaces live on different meshes");
  if (p.order() != v.order() - 1)
    throw std::invalid_argument("build_operators: pressure degree must be one below the "
                                "vector degree so divergences land in the pressure space");
  par.validate();
  double eta = par.penalty > 0.0 ? par.penalty : default_penalty(v.order());
  OperatorSet ops;
  ops.vector_mass = restrict_matrix(assemble_vector_mass(v, Eigen::Matrix2d::Identity()), v, v);
  ops.seepage_damping = restrict_matrix(assemble_vector_mass(v, par.k_inv), v, v);
  ops.pressure_mass = assemble_scalar_mass(p);  // no pressure constraints
  ops.elasticity =
      restrict_matrix(assemble_elasticity(v, par.lame_mu, par.lame_lambda, eta), v, v);
  SparseMat b_full = assemble_div_coupling(p, v);
  // keep all pressure rows, restrict vector columns
  std::vector<Triplet> triplets;
  triplets.reserve(b_full.nonZeros());
  for (int r = 0; r < b_full.outerSize(); ++r)
    for (SparseMat::InnerIterator it(b_full, r); it; ++it) {
      int fc = v.free_index(it.col());
      if (fc >= 0) triplets.emplace_back(r, fc, it.value());
    }
  ops.div_coupling = matrix_from_triplets(p.n_dofs(), v.n_free(), triplets);
  // cell integrals of pressure basis functions, for mean-value checks
  ops.pressure_volume = Eigen::VectorXd::Zero(p.n_dofs());
  TriangleRule rule = triangle_rule(p.order());
  DGElement::Tabulation tab = p.dg().tabulate(rule.points);
  for (int c = 0; c < p.mesh().n_cells(); ++c) {
    CellGeometry geom = cell_geometry(p.mesh(), c);
    const auto& dofs = p.cell_dofs(c);
    for (int i = 0; i < p.dg().dim; ++i) {
      double s = 0.0;
      for (size_t q = 0; q < rule.points.size(); ++q) s += rule.weights[q] * tab.value(q, i);
      ops.pressure_volume(dofs[i]) += geom.det * s;
    }
  }
  return ops;
}

}  // namespace biot
