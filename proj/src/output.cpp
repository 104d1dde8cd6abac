#include "biot/output.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "biot/errors.hpp"

namespace biot {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// eoc column entry relative to the previous row, "--" on the first row.
std::string eoc_entry(const ErrorReport& report, size_t row, double ErrorRow::*member) {
  if (row == 0) return "--";
  return fmt("%.3f", eoc(report.rows[row - 1].*member, report.rows[row].*member));
}

}  // namespace

void write_convergence_csv(std::ostream& out, const ErrorReport& report) {
  out << "level,tau,h,err_grad_u,eoc_u,err_v,eoc_v,err_w,eoc_w,err_p,eoc_p\n";
  for (size_t r = 0; r < report.rows.size(); ++r) {
    const ErrorRow& row = report.rows[r];
    out << row.level << ',' << fmt("%.6e", row.tau) << ',' << fmt("%.6e", row.h) << ','
        << fmt("%.6e", row.grad_solid) << ',' << eoc_entry(report, r, &ErrorRow::grad_solid)
        << ',' << fmt("%.6e", row.velocity) << ',' << eoc_entry(report, r, &ErrorRow::velocity)
        << ',' << fmt("%.6e", row.seepage) << ',' << eoc_entry(report, r, &ErrorRow::seepage)
        << ',' << fmt("%.6e", row.pressure) << ',' << eoc_entry(report, r, &ErrorRow::pressure)
        << '\n';
  }
}

std::string format_convergence_table(const ErrorReport& report) {
  std::string s;
  char line[256];
  std::snprintf(line, sizeof line, "%5s %10s %10s  %10s %6s  %10s %6s  %10s %6s  %10s %6s\n",
                "level", "tau", "h", "grad u", "eoc", "v", "eoc", "w", "eoc", "p", "eoc");
  s += line;
  for (size_t r = 0; r < report.rows.size(); ++r) {
    const ErrorRow& row = report.rows[r];
    std::snprintf(line, sizeof line,
                  "%5d %10.3e %10.3e  %10.3e %6s  %10.3e %6s  %10.3e %6s  %10.3e %6s\n",
                  row.level, row.tau, row.h, row.grad_solid,
                  eoc_entry(report, r, &ErrorRow::grad_solid).c_str(), row.velocity,
                  eoc_entry(report, r, &ErrorRow::velocity).c_str(), row.seepage,
                  eoc_entry(report, r, &ErrorRow::seepage).c_str(), row.pressure,
                  eoc_entry(report, r, &ErrorRow::pressure).c_str());
    s += line;
  }
  return s;
}

void write_vtk(const std::string& path, const FESpace& v, const FESpace& p,
               const Eigen::VectorXd& solid_full, const Eigen::VectorXd& velocity_full,
               const Eigen::VectorXd& seepage_full, const Eigen::VectorXd& pressure_full,
               int subdivisions) {
  if (subdivisions < 1) throw std::invalid_argument("write_vtk: subdivisions must be >= 1");
  if (&v.mesh() != &p.mesh()) throw std::invalid_argument("write_vtk: mesh mismatch");
  const Mesh& mesh = v.mesh();
  int r = subdivisions;
  // reference lattice
  std::vector<Eigen::Vector2d> lattice;
  std::vector<std::array<int, 3>> sub_tris;
  std::vector<std::vector<int>> rowstart(r + 1);
  {
    int idx = 0;
    for (int j = 0; j <= r; ++j) {
      rowstart[j].resize(r - j + 1);
      for (int i = 0; i + j <= r; ++i) {
        rowstart[j][i] = idx++;
        lattice.emplace_back(double(i) / r, double(j) / r);
      }
    }
    for (int j = 0; j < r; ++j) {
      for (int i = 0; i + j < r; ++i) {
        int a = rowstart[j][i], b = rowstart[j][i + 1], c = rowstart[j + 1][i];
        sub_tris.push_back({a, b, c});
        if (i + j < r - 1) sub_tris.push_back({b, rowstart[j + 1][i + 1], c});
      }
    }
  }
  int pts_per_cell = static_cast<int>(lattice.size());
  BDMElement::Tabulation vtab = v.bdm().tabulate(lattice);
  DGElement::Tabulation ptab = p.dg().tabulate(lattice);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_vtk: cannot open " + path);
  out << "# vtk DataFile Version 3.0\n";
  out << "poroelastic fields\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  long npoints = static_cast<long>(mesh.n_cells()) * pts_per_cell;
  out << "POINTS " << npoints << " double\n";
  out.precision(9);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    CellGeometry geom = cell_geometry(mesh, c);
    for (const auto& xh : lattice) {
      Eigen::Vector2d x = geom.map(xh);
      out << x.x() << ' ' << x.y() << " 0\n";
    }
  }
  long ncells = static_cast<long>(mesh.n_cells()) * sub_tris.size();
  out << "CELLS " << ncells << ' ' << 4 * ncells << '\n';
  for (int c = 0; c < mesh.n_cells(); ++c) {
    long base = static_cast<long>(c) * pts_per_cell;
    for (const auto& tri : sub_tris)
      out << "3 " << base + tri[0] << ' ' << base + tri[1] << ' ' << base + tri[2] << '\n';
  }
  out << "CELL_TYPES " << ncells << '\n';
  for (long i = 0; i < ncells; ++i) out << "5\n";

  out << "POINT_DATA " << npoints << '\n';
  auto write_vector_field = [&](const char* name, const Eigen::VectorXd& full) {
    out << "VECTORS " << name << " double\n";
    for (int c = 0; c < mesh.n_cells(); ++c) {
      CellGeometry geom = cell_geometry(mesh, c);
      const auto& dofs = v.cell_dofs(c);
      const auto& signs = v.cell_signs(c);
      Eigen::VectorXd local(v.dofs_per_cell());
      for (int i = 0; i < v.dofs_per_cell(); ++i) local(i) = signs[i] * full(dofs[i]);
      for (int q = 0; q < pts_per_cell; ++q) {
        Eigen::Vector2d val = geom.piola_value(
            {vtab.value_x.row(q).dot(local), vtab.value_y.row(q).dot(local)});
        out << val.x() << ' ' << val.y() << " 0\n";
      }
    }
  };
  write_vector_field("solid_displacement", solid_full);
  write_vector_field("solid_velocity", velocity_full);
  write_vector_field("seepage_velocity", seepage_full);
  out << "SCALARS pressure double 1\n";
  out << "LOOKUP_TABLE default\n";
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& dofs = p.cell_dofs(c);
    Eigen::VectorXd local(p.dofs_per_cell());
    for (int i = 0; i < p.dofs_per_cell(); ++i) local(i) = pressure_full(dofs[i]);
    for (int q = 0; q < pts_per_cell; ++q) out << ptab.value.row(q).dot(local) << '\n';
  }
  if (!out) throw std::runtime_error("write_vtk: write failed");
}

}  // namespace biot
