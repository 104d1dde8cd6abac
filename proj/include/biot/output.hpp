// Report formatting (CSV and aligned text) and VTK field export.
#pragma once

#include <iosfwd>
#include <string>

#include "biot/errors.hpp"
#include "biot/spaces.hpp"

namespace biot {

// Columns: level,tau,h,err_grad_u,eoc_u,err_v,eoc_v,err_w,eoc_w,err_p,eoc_p.
// Orders are log2 ratios between consecutive rows; the first row prints "--".
void write_convergence_csv(std::ostream& out, const ErrorReport& report);

std::string format_convergence_table(const ErrorReport& report);

// Writes one legacy-ASCII VTK file with the three vector fields and the
// pressure, evaluated on a per-cell lattice with the given number of
// subdivisions (>= 1; points are duplicated across cell boundaries so the
// discontinuous fields render faithfully).
void write_vtk(const std::string& path, const FESpace& v, const FESpace& p,
               const Eigen::VectorXd& solid_full, const Eigen::VectorXd& velocity_full,
               const Eigen::VectorXd& seepage_full, const Eigen::VectorXd& pressure_full,
               int subdivisions);

}  // namespace biot
