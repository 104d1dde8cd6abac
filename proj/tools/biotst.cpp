// Command line driver: runs convergence studies of the benchmark problem and
// optionally exports fields or a trajectory checkpoint.
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "biot/output.hpp"
#include "biot/study.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Space-time solver for dynamic poroelasticity with H(div) elements"};
  app.set_config("--config", "", "read options from a key=value file");

  biot::StudyConfig cfg;
  double youngs = 100.0, poisson = 0.35, kinv_scale = 1.0;
  std::string diagonal = "bltr";

  app.add_option("-k,--time-degree", cfg.k, "temporal polynomial degree (1-3)")
      ->check(CLI::Range(1, 3))
      ->capture_default_str();
  app.add_option("-l,--pressure-degree", cfg.pressure_degree,
                 "pressure degree; vector fields use one order more")
      ->check(CLI::Range(1, 2))
      ->capture_default_str();
  app.add_option("--levels", cfg.levels, "number of refinement levels")
      ->check(CLI::Range(1, 8))
      ->capture_default_str();
  app.add_option("--base-divisions", cfg.base_divisions, "squares per side on the coarsest mesh")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--tau0", cfg.tau0, "slab length on the coarsest level")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--t-end", cfg.t_end, "end time")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--diagonal", diagonal, "square splitting direction")
      ->check(CLI::IsMember({"bltr", "tlbr"}))
      ->capture_default_str();
  app.add_option("--eta", cfg.params.penalty,
                 "interior penalty strength (default scales with the degree)");
  app.add_option("--samples", cfg.samples_per_slab, "error sample intervals per slab")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--load-quad-degree", cfg.load_quad_degree, "quadrature degree for loads");
  app.add_option("--error-quad-degree", cfg.error_quad_degree, "quadrature degree for errors");

  app.add_option("--csv", cfg.csv_path, "write the error table to this CSV file");
  app.add_option("--export-times", cfg.export_times, "times for VTK export on the finest level");
  app.add_option("--export-prefix", cfg.export_prefix, "path prefix of exported VTK files");
  app.add_option("--export-subdivisions", cfg.export_subdivisions,
                 "per-cell lattice subdivisions in VTK output");
  app.add_option("--save-state", cfg.state_path, "checkpoint file of the finest trajectory");

  app.add_option("--youngs", youngs, "Young's modulus")->capture_default_str();
  app.add_option("--poisson", poisson, "Poisson ratio")->capture_default_str();
  app.add_option("--alpha", cfg.params.biot_alpha, "pressure coupling")->capture_default_str();
  app.add_option("--storage", cfg.params.storage, "storage coefficient")->capture_default_str();
  app.add_option("--rho-bulk", cfg.params.rho_bulk, "total density")->capture_default_str();
  app.add_option("--rho-fluid", cfg.params.rho_fluid, "coupling density")->capture_default_str();
  app.add_option("--rho-seepage", cfg.params.rho_seepage, "seepage density")
      ->capture_default_str();
  app.add_option("--kinv-scale", kinv_scale, "isotropic inverse permeability")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.params.set_youngs(youngs, poisson);
    cfg.params.k_inv = kinv_scale * Eigen::Matrix2d::Identity();
    cfg.diagonal = diagonal == "bltr" ? biot::Diagonal::bottom_left_to_top_right
                                      : biot::Diagonal::top_left_to_bottom_right;
    biot::ErrorReport report = biot::run_convergence(cfg, &std::cout);
    std::cout << '\n' << biot::format_convergence_table(report);
    return 0;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
}
