#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "biot/mms.hpp"
#include "biot/quadrature.hpp"
#include "biot/timestepping.hpp"

using biot::ElementFamily;
using biot::FESpace;
using biot::FieldId;

namespace {

Eigen::VectorXd random_vector(int n, std::mt19937& gen) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = dist(gen);
  return v;
}

// Degree-k Lagrange interpolant of nodal vectors evaluated at s.
Eigen::VectorXd at_interp(const std::vector<Eigen::VectorXd>& nodal,
                          const std::vector<double>& nodes, double s) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(nodal.front().size());
  for (size_t j = 0; j < nodal.size(); ++j)
    out += biot::lagrange_value(nodes, static_cast<int>(j), s) * nodal[j];
  return out;
}

struct SmallProblem {
  biot::Mesh mesh;
  biot::ModelParameters par;
  FESpace v, p;
  biot::OperatorSet ops;

  SmallProblem()
      : mesh(biot::unit_square_mesh(2)),
        par(biot::benchmark_parameters()),
        v(mesh, ElementFamily::vector_hdiv, 2),
        p(mesh, ElementFamily::scalar_dg, 1),
        ops(biot::build_operators(v, p, par)) {}
};

}  // namespace

TEST_CASE("lowest order temporal matrices match the closed form") {
  auto tm = biot::temporal_matrices(1);
  REQUIRE(tm.trial_nodes.size() == 2);
  REQUIRE(tm.test_nodes.size() == 1);
  CHECK(tm.trial_nodes[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(tm.trial_nodes[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(tm.test_nodes[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(tm.test_weights[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(tm.deriv_moments(0, 0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(tm.deriv_moments(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(tm.value_moments(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(tm.value_moments(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("temporal moment matrices equal explicit integrals") {
  // deriv_moments(i,j) = int L_j' Lg_i, value_moments(i,j) = int L_j Lg_i,
  // recomputed here with an oversized quadrature and the Lagrange formulas
  for (int k = 1; k <= 3; ++k) {
    auto tm = biot::temporal_matrices(k);
    auto rule = biot::gauss_rule(k + 4);
    std::vector<double> test_nodes(tm.test_nodes);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j <= k; ++j) {
        double dm = 0.0, vm = 0.0;
        for (size_t q = 0; q < rule.points.size(); ++q) {
          double s = rule.points[q], w = rule.weights[q];
          double test = biot::lagrange_value(test_nodes, i, s);
          dm += w * test * biot::lagrange_deriv(tm.trial_nodes, j, s);
          vm += w * test * biot::lagrange_value(tm.trial_nodes, j, s);
        }
        CHECK(tm.deriv_moments(i, j) == doctest::Approx(dm).epsilon(1e-13).scale(1.0));
        CHECK(tm.value_moments(i, j) == doctest::Approx(vm).epsilon(1e-13).scale(1.0));
      }
      // constants: derivative rows sum to zero, value rows to the weight
      CHECK(tm.deriv_moments.row(i).sum() == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
      CHECK(tm.value_moments.row(i).sum() ==
            doctest::Approx(tm.test_weights[i]).epsilon(1e-14));
    }
  }
}

TEST_CASE("lagrange basis has the nodal delta property") {
  std::vector<double> nodes = {0.0, 0.3, 0.7, 1.0};
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) {
      CHECK(biot::lagrange_value(nodes, j, nodes[i]) ==
            doctest::Approx(i == j ? 1.0 : 0.0).scale(1.0).epsilon(1e-14));
    }
  }
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    double s = dist(gen);
    double sum = 0.0, dsum = 0.0;
    for (int j = 0; j < 4; ++j) {
      sum += biot::lagrange_value(nodes, j, s);
      dsum += biot::lagrange_deriv(nodes, j, s);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(dsum == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    // derivative against differences
    const double h = 1e-6;
    double fd = (biot::lagrange_value(nodes, 2, s + h) - biot::lagrange_value(nodes, 2, s - h)) /
                (2 * h);
    CHECK(biot::lagrange_deriv(nodes, 2, s) == doctest::Approx(fd).epsilon(1e-8));
  }
}

TEST_CASE("slab solutions satisfy the weak-in-time equations") {
  // residual oracle: the solved nodal polynomials must satisfy the four
  // moment equations, re-derived here from the Lagrange representation with
  // an independent quadrature instead of the solver's moment matrices
  SmallProblem prob;
  std::mt19937 gen(404);
  const int nv = prob.v.n_free(), np = prob.p.n_dofs();
  const auto& par = prob.par;
  const auto& ops = prob.ops;
  for (int k = 1; k <= 3; ++k) {
    biot::SlabSolver solver(ops, par, k, nv, np);
    const double tau = 0.17;
    solver.prepare(tau);
    biot::InitialState start{random_vector(nv, gen), random_vector(nv, gen),
                             random_vector(nv, gen), random_vector(np, gen)};
    std::vector<Eigen::VectorXd> fload(k + 1), gload(k + 1);
    for (int j = 0; j <= k; ++j) {
      fload[j] = random_vector(nv, gen);
      gload[j] = random_vector(np, gen);
    }
    biot::SlabState slab = solver.solve(start, fload, gload);

    // continuity: column 0 repeats the start data exactly
    CHECK((slab.solid.col(0) - start.solid).cwiseAbs().maxCoeff() == 0.0);
    CHECK((slab.pressure.col(0) - start.pressure).cwiseAbs().maxCoeff() == 0.0);

    const auto& nodes = solver.temporal().trial_nodes;
    auto rule = biot::gauss_rule(k + 2);
    auto at = [&](const Eigen::MatrixXd& cols, double s, bool deriv) {
      Eigen::VectorXd out = Eigen::VectorXd::Zero(cols.rows());
      for (int j = 0; j <= k; ++j) {
        double w = deriv ? biot::lagrange_deriv(nodes, j, s) : biot::lagrange_value(nodes, j, s);
        out += w * cols.col(j);
      }
      return out;
    };
    std::vector<double> test_nodes(solver.temporal().test_nodes);
    double scale = 0.0;
    Eigen::VectorXd worst = Eigen::VectorXd::Zero(4);
    for (int i = 0; i < k; ++i) {
      Eigen::VectorXd r_mom = Eigen::VectorXd::Zero(nv), r_kin = Eigen::VectorXd::Zero(nv);
      Eigen::VectorXd r_dar = Eigen::VectorXd::Zero(nv), r_mas = Eigen::VectorXd::Zero(np);
      for (size_t q = 0; q < rule.points.size(); ++q) {
        double s = rule.points[q];
        double w = rule.weights[q] * biot::lagrange_value(test_nodes, i, s);
        Eigen::VectorXd u = at(slab.solid, s, false), du = at(slab.solid, s, true);
        Eigen::VectorXd vel = at(slab.velocity, s, false), dvel = at(slab.velocity, s, true);
        Eigen::VectorXd wp = at(slab.seepage, s, false), dwp = at(slab.seepage, s, true);
        Eigen::VectorXd pr = at(slab.pressure, s, false), dpr = at(slab.pressure, s, true);
        Eigen::VectorXd f = at_interp(fload, nodes, s), g = at_interp(gload, nodes, s);
        Eigen::VectorXd btp = biot::spmv_transpose(ops.div_coupling, pr);
        r_mom += w * (par.rho_bulk * biot::spmv(ops.vector_mass, dvel) +
                      par.rho_fluid * biot::spmv(ops.vector_mass, dwp) +
                      tau * (biot::spmv(ops.elasticity, u) - par.biot_alpha * btp - f));
        r_kin += w * (biot::spmv(ops.vector_mass, du) - tau * biot::spmv(ops.vector_mass, vel));
        r_dar += w * (par.rho_fluid * biot::spmv(ops.vector_mass, dvel) +
                      par.rho_seepage * biot::spmv(ops.vector_mass, dwp) +
                      tau * (biot::spmv(ops.seepage_damping, wp) - btp));
        r_mas += w * (par.storage * biot::spmv(ops.pressure_mass, dpr) +
                      par.biot_alpha * biot::spmv(ops.div_coupling, du) +
                      tau * (biot::spmv(ops.div_coupling, wp) - g));
      }
      worst[0] = std::max(worst[0], r_mom.cwiseAbs().maxCoeff());
      worst[1] = std::max(worst[1], r_kin.cwiseAbs().maxCoeff());
      worst[2] = std::max(worst[2], r_dar.cwiseAbs().maxCoeff());
      worst[3] = std::max(worst[3], r_mas.cwiseAbs().maxCoeff());
    }
    // scale: the largest single term entering the balances
    scale = tau * std::max(1.0, biot::spmv(ops.elasticity, slab.solid.col(k)).cwiseAbs().maxCoeff());
    for (int eq = 0; eq < 4; ++eq) CHECK(worst[eq] < 1e-10 * scale);
  }
}

TEST_CASE("solid derivative equals velocity at the temporal Gauss points") {
  SmallProblem prob;
  biot::BenchmarkSolution sol(prob.par);
  biot::TimeMesh tmesh{0.3, 3};
  for (int k : {1, 2}) {
    auto initial = biot::interpolate_initial_state(
        prob.v, prob.p, [&](const Eigen::Vector2d& x) { return sol.displacement(x, 0.0); },
        [&](const Eigen::Vector2d& x) { return sol.velocity(x, 0.0); },
        [&](const Eigen::Vector2d& x) { return sol.seepage(x, 0.0); },
        [&](const Eigen::Vector2d& x) { return sol.pressure(x, 0.0); });
    auto traj = biot::run_transient(
        prob.v, prob.p, prob.ops, prob.par, k, tmesh, initial,
        [&](const Eigen::Vector2d& x, double t) { return sol.momentum_source(x, t); },
        [&](const Eigen::Vector2d& x, double t) { return sol.mass_source(x, t); });
    auto tm = biot::temporal_matrices(k);
    double max_rel = 0.0;
    for (int n = 0; n < tmesh.n_slabs; ++n) {
      for (int i = 0; i < k; ++i) {
        double t = tmesh.boundary(n) + tmesh.tau() * tm.test_nodes[i];
        Eigen::VectorXd du = traj.eval_deriv(FieldId::solid, t);
        Eigen::VectorXd vel = traj.eval(FieldId::velocity, t);
        max_rel = std::max(max_rel, (du - vel).norm() / vel.norm());
      }
    }
    CHECK(max_rel < 1e-10);
  }
}

TEST_CASE("energy decays without sources and is conserved without damping") {
  SmallProblem prob;
  std::mt19937 gen(2718);
  biot::InitialState initial{random_vector(prob.v.n_free(), gen),
                             random_vector(prob.v.n_free(), gen),
                             random_vector(prob.v.n_free(), gen),
                             random_vector(prob.p.n_dofs(), gen)};
  biot::TimeMesh tmesh{0.5, 25};
  for (int k : {1, 2}) {
    auto traj = biot::run_transient(prob.v, prob.p, prob.ops, prob.par, k, tmesh, initial,
                                    nullptr, nullptr);
    double e_prev = biot::energy(prob.ops, prob.par, initial.solid, initial.velocity,
                                 initial.seepage, initial.pressure);
    const double e0 = e_prev;
    for (const auto& slab : traj.slabs) {
      double e = biot::energy(prob.ops, prob.par, slab.solid.col(k), slab.velocity.col(k),
                              slab.seepage.col(k), slab.pressure.col(k));
      CHECK(e <= e_prev + 1e-10 * e0);
      e_prev = e;
    }
    CHECK(e_prev < e0);  // damping genuinely dissipates
  }
  // zero inverse permeability: the system is conservative
  auto par0 = prob.par;
  par0.k_inv.setZero();
  auto ops0 = biot::build_operators(prob.v, prob.p, par0);
  for (int k : {1, 2}) {
    auto traj = biot::run_transient(prob.v, prob.p, ops0, par0, k, tmesh, initial,
                                    nullptr, nullptr);
    double e0 = biot::energy(ops0, par0, initial.solid, initial.velocity, initial.seepage,
                             initial.pressure);
    const auto& last = traj.slabs.back();
    double e_end = biot::energy(ops0, par0, last.solid.col(k), last.velocity.col(k),
                                last.seepage.col(k), last.pressure.col(k));
    CHECK(std::abs(e_end - e0) < 1e-8 * e0);
  }
}

TEST_CASE("trajectory evaluation is continuous at slab boundaries") {
  SmallProblem prob;
  std::mt19937 gen(5050);
  biot::InitialState initial{random_vector(prob.v.n_free(), gen),
                             random_vector(prob.v.n_free(), gen),
                             random_vector(prob.v.n_free(), gen),
                             random_vector(prob.p.n_dofs(), gen)};
  biot::TimeMesh tmesh{0.4, 4};
  auto traj = biot::run_transient(prob.v, prob.p, prob.ops, prob.par, 2, tmesh, initial,
                                  nullptr, nullptr);
  for (int n = 1; n < tmesh.n_slabs; ++n) {
    double t = tmesh.boundary(n);
    // approaching from the left lands in slab n-1, the exact boundary belongs
    // to slab n-1 as well; the next slab repeats the value in its column 0
    Eigen::VectorXd left = traj.eval(FieldId::pressure, t);
    CHECK((left - traj.slabs[n].pressure.col(0)).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK((traj.eval(FieldId::solid, 0.0) - initial.solid).cwiseAbs().maxCoeff() == 0.0);
  CHECK((traj.eval(FieldId::seepage, tmesh.t_end) -
         traj.slabs.back().seepage.col(2)).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS(traj.eval(FieldId::solid, tmesh.t_end + 0.1));
}

TEST_CASE("checkpoints restore a trajectory bit for bit") {
  SmallProblem prob;
  std::mt19937 gen(6060);
  biot::InitialState initial{random_vector(prob.v.n_free(), gen),
                             random_vector(prob.v.n_free(), gen),
                             random_vector(prob.v.n_free(), gen),
                             random_vector(prob.p.n_dofs(), gen)};
  biot::TimeMesh tmesh{0.3, 3};
  auto traj = biot::run_transient(prob.v, prob.p, prob.ops, prob.par, 2, tmesh, initial,
                                  nullptr, nullptr);
  const char* path = "test_checkpoint.bin";
  biot::save_trajectory(path, traj, 1, 4);
  int ell = -1, level = -1;
  auto back = biot::load_trajectory(path, &ell, &level);
  CHECK(ell == 1);
  CHECK(level == 4);
  CHECK(back.k == traj.k);
  CHECK(back.time_mesh.t_end == traj.time_mesh.t_end);
  CHECK(back.time_mesh.n_slabs == traj.time_mesh.n_slabs);
  REQUIRE(back.slabs.size() == traj.slabs.size());
  for (size_t n = 0; n < traj.slabs.size(); ++n) {
    CHECK((back.slabs[n].solid - traj.slabs[n].solid).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.slabs[n].velocity - traj.slabs[n].velocity).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.slabs[n].seepage - traj.slabs[n].seepage).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.slabs[n].pressure - traj.slabs[n].pressure).cwiseAbs().maxCoeff() == 0.0);
  }
  // corrupted header is refused
  {
    std::FILE* f = std::fopen(path, "r+b");
    REQUIRE(f != nullptr);
    std::fputs("xxxx", f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(biot::load_trajectory(path), std::runtime_error);
  std::remove(path);
  CHECK_THROWS_AS(biot::load_trajectory(path), std::runtime_error);
}

TEST_CASE("invalid slab configurations are rejected") {
  SmallProblem prob;
  CHECK_THROWS(biot::SlabSolver(prob.ops, prob.par, 0, prob.v.n_free(), prob.p.n_dofs()));
  biot::SlabSolver solver(prob.ops, prob.par, 1, prob.v.n_free(), prob.p.n_dofs());
  biot::InitialState start{Eigen::VectorXd::Zero(prob.v.n_free()),
                           Eigen::VectorXd::Zero(prob.v.n_free()),
                           Eigen::VectorXd::Zero(prob.v.n_free()),
                           Eigen::VectorXd::Zero(prob.p.n_dofs())};
  std::vector<Eigen::VectorXd> fload(2, Eigen::VectorXd::Zero(prob.v.n_free()));
  std::vector<Eigen::VectorXd> gload(2, Eigen::VectorXd::Zero(prob.p.n_dofs()));
  CHECK_THROWS(solver.solve(start, fload, gload));  // prepare() not called
  CHECK_THROWS(solver.prepare(0.0));
}
