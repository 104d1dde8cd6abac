// Convergence studies of the benchmark problem: a ladder of simultaneous
// mesh and step refinements with error measurement against the closed-form
// solution.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "biot/errors.hpp"
#include "biot/mesh.hpp"
#include "biot/mms.hpp"

namespace biot {

struct StudyConfig {
  int k = 1;                 // temporal degree
  int pressure_degree = 1;   // spatial pressure degree; vector fields use one more
  int levels = 4;            // refinement rows, level j halves h and tau j times
  int base_divisions = 5;    // coarsest mesh: base x base squares, split
  Diagonal diagonal = Diagonal::bottom_left_to_top_right;
  double tau0 = 0.1;
  double t_end = 1.0;
  ModelParameters params = benchmark_parameters();
  int samples_per_slab = 100;
  int load_quad_degree = -1;
  int error_quad_degree = -1;

  std::string csv_path;            // written when nonempty
  std::vector<double> export_times;
  std::string export_prefix;       // VTK files <prefix>_<index>.vtk, finest level
  int export_subdivisions = 0;     // 0 selects pressure_degree + 1
  std::string state_path;          // checkpoint of the finest-level trajectory

  void validate() const;
};

// Runs all levels and returns the error table; per-level progress goes to the
// log stream when given.
ErrorReport run_convergence(const StudyConfig& config, std::ostream* log = nullptr);

}  // namespace biot
