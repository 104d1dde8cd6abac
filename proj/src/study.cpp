#include "biot/study.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "biot/assembly.hpp"
#include "biot/output.hpp"
#include "biot/timestepping.hpp"

namespace biot {

void StudyConfig::validate() const {
  if (k < 1 || k > 3) throw std::invalid_argument("StudyConfig: k must be 1, 2 or 3");
  if (pressure_degree < 1 || pressure_degree > 2)
    throw std::invalid_argument("StudyConfig: pressure degree must be 1 or 2");
  if (levels < 1) throw std::invalid_argument("StudyConfig: need at least one level");
  if (base_divisions < 1) throw std::invalid_argument("StudyConfig: base divisions must be >= 1");
  if (tau0 <= 0.0 || t_end <= 0.0) throw std::invalid_argument("StudyConfig: invalid times");
  if (samples_per_slab < 1) throw std::invalid_argument("StudyConfig: need sample points");
  params.validate();
}

ErrorReport run_convergence(const StudyConfig& config, std::ostream* log) {
  config.validate();
  BenchmarkSolution exact(config.params);

  ExactMatrixField grad_u{
      [&exact](const Eigen::Vector2d& x, double t) { return exact.displacement_gradient(x, t); },
      true, [&exact](double t) { return exact.time_factor_displacement(t); },
      [&exact](const Eigen::Vector2d& x) { return exact.profile_gradient(x); }};
  ExactVectorField vel{
      [&exact](const Eigen::Vector2d& x, double t) { return exact.velocity(x, t); }, true,
      [&exact](double t) { return exact.time_factor_velocity(t); },
      [&exact](const Eigen::Vector2d& x) { return exact.profile(x); }};
  ExactVectorField seep{
      [&exact](const Eigen::Vector2d& x, double t) { return exact.seepage(x, t); }, true,
      [&exact](double t) { return exact.time_factor_displacement(t); },
      [&exact](const Eigen::Vector2d& x) { return exact.profile(x); }};
  ExactScalarField pres{
      [&exact](const Eigen::Vector2d& x, double t) { return exact.pressure(x, t); }, true,
      [&exact](double t) { return exact.time_factor_pressure(t); },
      [&exact](const Eigen::Vector2d& x) { return exact.pressure_profile(x); }};

  ErrorReport report;
  Mesh mesh = unit_square_mesh(config.base_divisions, config.diagonal);
  for (int level = 0; level < config.levels; ++level) {
    if (level > 0) mesh = refine_uniform(mesh);
    auto t_start = std::chrono::steady_clock::now();
    double tau = config.tau0 / std::pow(2.0, level);
    int n_slabs = static_cast<int>(std::lround(config.t_end / tau));
    TimeMesh time_mesh{config.t_end, n_slabs};

    FESpace v(mesh, ElementFamily::vector_hdiv, config.pressure_degree + 1);
    FESpace p(mesh, ElementFamily::scalar_dg, config.pressure_degree);
    OperatorSet ops = build_operators(v, p, config.params);

    InitialState init = interpolate_initial_state(
        v, p, [&](const Eigen::Vector2d& x) { return exact.displacement(x, 0.0); },
        [&](const Eigen::Vector2d& x) { return exact.velocity(x, 0.0); },
        [&](const Eigen::Vector2d& x) { return exact.seepage(x, 0.0); },
        [&](const Eigen::Vector2d& x) { return exact.pressure(x, 0.0); });

    TransientOptions options;
    options.load_quad_degree = config.load_quad_degree;
    Trajectory traj = run_transient(
        v, p, ops, config.params, config.k, time_mesh, init,
        [&](const Eigen::Vector2d& x, double t) { return exact.momentum_source(x, t); },
        [&](const Eigen::Vector2d& x, double t) { return exact.mass_source(x, t); }, options);

    ErrorRow row;
    row.level = level;
    row.tau = tau;
    row.h = mesh.mesh_size();
    row.grad_solid = linf_l2_gradient_error(traj, v, FieldId::solid, grad_u,
                                            config.samples_per_slab, config.error_quad_degree);
    row.velocity = linf_l2_error(traj, v, FieldId::velocity, vel, config.samples_per_slab,
                                 config.error_quad_degree);
    row.seepage = linf_l2_error(traj, v, FieldId::seepage, seep, config.samples_per_slab,
                                config.error_quad_degree);
    row.pressure = linf_l2_error(traj, p, FieldId::pressure, pres, config.samples_per_slab,
                                 config.error_quad_degree);
    report.rows.push_back(row);

    if (log) {
      auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start);
      char buf[256];
      std::snprintf(buf, sizeof buf,
                    "level %d: %d cells, %d slabs, system %d, %.1fs  "
                    "grad_u %.3e  v %.3e  w %.3e  p %.3e\n",
                    level, mesh.n_cells(), n_slabs, config.k * (3 * v.n_free() + p.n_dofs()),
                    dt.count(), row.grad_solid, row.velocity, row.seepage, row.pressure);
      (*log) << buf << std::flush;
    }

    bool finest = level == config.levels - 1;
    if (finest && !config.export_prefix.empty()) {
      int sub = config.export_subdivisions > 0 ? config.export_subdivisions
                                               : config.pressure_degree + 1;
      for (size_t i = 0; i < config.export_times.size(); ++i) {
        double t = config.export_times[i];
        write_vtk(config.export_prefix + "_" + std::to_string(i) + ".vtk", v, p,
                  v.expand_free(traj.eval(FieldId::solid, t)),
                  v.expand_free(traj.eval(FieldId::velocity, t)),
                  v.expand_free(traj.eval(FieldId::seepage, t)),
                  traj.eval(FieldId::pressure, t), sub);
      }
    }
    if (finest && !config.state_path.empty())
      save_trajectory(config.state_path, traj, config.pressure_degree, level);
  }

  if (!config.csv_path.empty()) {
    std::ofstream csv(config.csv_path);
    if (!csv) throw std::runtime_error("run_convergence: cannot open " + config.csv_path);
    write_convergence_csv(csv, report);
  }
  return report;
}

}  // namespace biot
