#include "biot/timestepping.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "biot/quadrature.hpp"

namespace biot {

double lagrange_value(const std::vector<double>& nodes, int j, double s) {
  double v = 1.0;
  for (size_t r = 0; r < nodes.size(); ++r)
    if (static_cast<int>(r) != j) v *= (s - nodes[r]) / (nodes[j] - nodes[r]);
  return v;
}

double lagrange_deriv(const std::vector<double>& nodes, int j, double s) {
  double d = 0.0;
  for (size_t r = 0; r < nodes.size(); ++r) {
    if (static_cast<int>(r) == j) continue;
    double term = 1.0 / (nodes[j] - nodes[r]);
    for (size_t q = 0; q < nodes.size(); ++q)
      if (static_cast<int>(q) != j && q != r) term *= (s - nodes[q]) / (nodes[j] - nodes[q]);
    d += term;
  }
  return d;
}

TemporalMatrices temporal_matrices(int k) {
  if (k < 1) throw std::invalid_argument("temporal_matrices: k must be >= 1");
  TemporalMatrices tm;
  tm.k = k;
  QuadratureRule1D lobatto = gauss_lobatto_rule(k + 1);
  QuadratureRule1D gauss = gauss_rule(k);
  tm.trial_nodes = lobatto.points;
  tm.test_nodes = gauss.points;
  tm.test_weights = gauss.weights;
  tm.deriv_moments.resize(k, k + 1);
  tm.value_moments.resize(k, k + 1);
  // The test basis is Lagrange at the Gauss points, so evaluating the Gauss
  // rule collapses the moments to weighted point values of the trial basis.
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j <= k; ++j) {
      tm.deriv_moments(i, j) = gauss.weights[i] * lagrange_deriv(tm.trial_nodes, j, gauss.points[i]);
      tm.value_moments(i, j) = gauss.weights[i] * lagrange_value(tm.trial_nodes, j, gauss.points[i]);
    }
  }
  return tm;
}

int Trajectory::slab_of(double t) const {
  if (t < -1e-12 || t > time_mesh.t_end * (1.0 + 1e-12))
    throw std::invalid_argument("Trajectory: time outside the simulated interval");
  if (t <= 0.0) return 0;
  int n = static_cast<int>(std::ceil(t / time_mesh.tau() - 1e-12)) - 1;
  return std::min(std::max(n, 0), time_mesh.n_slabs - 1);
}

const Eigen::MatrixXd& slab_field(const SlabState& slab, FieldId field) {
  switch (field) {
    case FieldId::solid: return slab.solid;
    case FieldId::velocity: return slab.velocity;
    case FieldId::seepage: return slab.seepage;
    case FieldId::pressure: return slab.pressure;
  }
  throw std::invalid_argument("unknown field id");
}

Eigen::VectorXd Trajectory::eval(FieldId field, double t) const {
  int n = slab_of(t);
  if (n >= static_cast<int>(slabs.size()))
    throw std::invalid_argument("Trajectory: slab not computed");
  const Eigen::MatrixXd& coeffs = slab_field(slabs[n], field);
  double s = (t - time_mesh.boundary(n)) / time_mesh.tau();
  TemporalMatrices tm = temporal_matrices(k);
  // Exact nodal values at the trial nodes; in particular slab boundaries
  // reproduce the stored states bit for bit despite roundoff in s.
  for (int j = 0; j <= k; ++j)
    if (std::abs(s - tm.trial_nodes[j]) < 1e-12) return coeffs.col(j);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(coeffs.rows());
  for (int j = 0; j <= k; ++j) out += lagrange_value(tm.trial_nodes, j, s) * coeffs.col(j);
  return out;
}

Eigen::VectorXd Trajectory::eval_deriv(FieldId field, double t) const {
  int n = slab_of(t);
  if (n >= static_cast<int>(slabs.size()))
    throw std::invalid_argument("Trajectory: slab not computed");
  const Eigen::MatrixXd& coeffs = slab_field(slabs[n], field);
  double s = (t - time_mesh.boundary(n)) / time_mesh.tau();
  TemporalMatrices tm = temporal_matrices(k);
  for (int j = 0; j <= k; ++j)
    if (std::abs(s - tm.trial_nodes[j]) < 1e-12) s = tm.trial_nodes[j];
  Eigen::VectorXd out = Eigen::VectorXd::Zero(coeffs.rows());
  for (int j = 0; j <= k; ++j) out += lagrange_deriv(tm.trial_nodes, j, s) * coeffs.col(j);
  return out / time_mesh.tau();
}

SlabSolver::SlabSolver(const OperatorSet& ops, const ModelParameters& par, int k, int n_vector,
                       int n_pressure)
    : ops_(&ops), par_(par), tm_(temporal_matrices(k)), nv_(n_vector), np_(n_pressure) {
  par_.validate();
  if (ops.vector_mass.rows() != nv_ || ops.pressure_mass.rows() != np_ ||
      ops.div_coupling.rows() != np_ || ops.div_coupling.cols() != nv_)
    throw std::invalid_argument("SlabSolver: operator sizes do not match the spaces");
  block_sizes_.clear();
  for (int j = 0; j < tm_.k; ++j) {
    block_sizes_.push_back(nv_);  // momentum row / solid column
    block_sizes_.push_back(nv_);  // kinematic row / velocity column
    block_sizes_.push_back(nv_);  // seepage row / seepage column
    block_sizes_.push_back(np_);  // mass row / pressure column
  }
}

void SlabSolver::prepare(double tau) {
  if (tau <= 0.0) throw std::invalid_argument("SlabSolver: tau must be positive");
  int k = tm_.k;
  BlockSystem blocks(block_sizes_);
  for (int i = 1; i <= k; ++i) {
    for (int j = 1; j <= k; ++j) {
      double a = tm_.deriv_moments(i - 1, j);
      double b = tau * tm_.value_moments(i - 1, j);
      int row = 4 * (i - 1), col = 4 * (j - 1);
      // momentum balance
      blocks.add_block(row + 0, col + 0, b, ops_->elasticity);
      blocks.add_block(row + 0, col + 1, a * par_.rho_bulk, ops_->vector_mass);
      blocks.add_block(row + 0, col + 2, a * par_.rho_fluid, ops_->vector_mass);
      blocks.add_block_transpose(row + 0, col + 3, -b * par_.biot_alpha, ops_->div_coupling);
      // kinematic relation between solid and velocity
      blocks.add_block(row + 1, col + 0, a, ops_->vector_mass);
      blocks.add_block(row + 1, col + 1, -b, ops_->vector_mass);
      // seepage (Darcy) balance
      blocks.add_block(row + 2, col + 1, a * par_.rho_fluid, ops_->vector_mass);
      blocks.add_block(row + 2, col + 2, a * par_.rho_seepage, ops_->vector_mass);
      blocks.add_block(row + 2, col + 2, b, ops_->seepage_damping);
      blocks.add_block_transpose(row + 2, col + 3, -b, ops_->div_coupling);
      // mass balance
      blocks.add_block(row + 3, col + 0, a * par_.biot_alpha, ops_->div_coupling);
      blocks.add_block(row + 3, col + 2, b, ops_->div_coupling);
      blocks.add_block(row + 3, col + 3, a * par_.storage, ops_->pressure_mass);
    }
  }
  solver_.factor(blocks.assemble());
  tau_ = tau;
}

SlabState SlabSolver::solve(const InitialState& start,
                            const std::vector<Eigen::VectorXd>& momentum_load,
                            const std::vector<Eigen::VectorXd>& mass_load) const {
  int k = tm_.k;
  if (tau_ <= 0.0) throw std::logic_error("SlabSolver: prepare() was not called");
  if (static_cast<int>(momentum_load.size()) != k + 1 ||
      static_cast<int>(mass_load.size()) != k + 1)
    throw std::invalid_argument("SlabSolver: need loads at all k+1 trial nodes");
  for (const auto& l : momentum_load)
    if (!l.allFinite()) throw std::runtime_error("SlabSolver: momentum load not finite");
  for (const auto& l : mass_load)
    if (!l.allFinite()) throw std::runtime_error("SlabSolver: mass load not finite");

  const OperatorSet& ops = *ops_;
  // operator applications of the incoming state, shared by all test rows
  Eigen::VectorXd m_v0 = spmv(ops.vector_mass, start.velocity);
  Eigen::VectorXd m_w0 = spmv(ops.vector_mass, start.seepage);
  Eigen::VectorXd m_u0 = spmv(ops.vector_mass, start.solid);
  Eigen::VectorXd a_u0 = spmv(ops.elasticity, start.solid);
  Eigen::VectorXd d_w0 = spmv(ops.seepage_damping, start.seepage);
  Eigen::VectorXd bt_p0 = spmv_transpose(ops.div_coupling, start.pressure);
  Eigen::VectorXd b_u0 = spmv(ops.div_coupling, start.solid);
  Eigen::VectorXd b_w0 = spmv(ops.div_coupling, start.seepage);
  Eigen::VectorXd mp_p0 = spmv(ops.pressure_mass, start.pressure);

  Eigen::VectorXd rhs(k * (3 * nv_ + np_));
  int off = 0;
  for (int i = 1; i <= k; ++i) {
    double a0 = tm_.deriv_moments(i - 1, 0);
    double b0 = tau_ * tm_.value_moments(i - 1, 0);
    Eigen::VectorXd r_mom = -(a0 * (par_.rho_bulk * m_v0 + par_.rho_fluid * m_w0) +
                              b0 * (a_u0 - par_.biot_alpha * bt_p0));
    Eigen::VectorXd r_kin = -(a0 * m_u0 - b0 * m_v0);
    Eigen::VectorXd r_dar = -(a0 * (par_.rho_fluid * m_v0 + par_.rho_seepage * m_w0) +
                              b0 * (d_w0 - bt_p0));
    Eigen::VectorXd r_mas = -(a0 * (par_.storage * mp_p0 + par_.biot_alpha * b_u0) + b0 * b_w0);
    for (int j = 0; j <= k; ++j) {
      double bw = tau_ * tm_.value_moments(i - 1, j);
      r_mom += bw * momentum_load[j];
      r_mas += bw * mass_load[j];
    }
    rhs.segment(off, nv_) = r_mom;
    rhs.segment(off + nv_, nv_) = r_kin;
    rhs.segment(off + 2 * nv_, nv_) = r_dar;
    rhs.segment(off + 3 * nv_, np_) = r_mas;
    off += 3 * nv_ + np_;
  }

  Eigen::VectorXd sol = solver_.solve(rhs);
  SlabState out;
  out.solid.resize(nv_, k + 1);
  out.velocity.resize(nv_, k + 1);
  out.seepage.resize(nv_, k + 1);
  out.pressure.resize(np_, k + 1);
  out.solid.col(0) = start.solid;
  out.velocity.col(0) = start.velocity;
  out.seepage.col(0) = start.seepage;
  out.pressure.col(0) = start.pressure;
  off = 0;
  for (int j = 1; j <= k; ++j) {
    out.solid.col(j) = sol.segment(off, nv_);
    out.velocity.col(j) = sol.segment(off + nv_, nv_);
    out.seepage.col(j) = sol.segment(off + 2 * nv_, nv_);
    out.pressure.col(j) = sol.segment(off + 3 * nv_, np_);
    off += 3 * nv_ + np_;
  }
  return out;
}

InitialState interpolate_initial_state(
    const FESpace& v, const FESpace& p,
    const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& solid,
    const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& velocity,
    const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& seepage,
    const std::function<double(const Eigen::Vector2d&)>& pressure) {
  InitialState s;
  s.solid = v.restrict_free(v.interpolate_vector(solid));
  s.velocity = v.restrict_free(v.interpolate_vector(velocity));
  s.seepage = v.restrict_free(v.interpolate_vector(seepage));
  s.pressure = p.interpolate_scalar(pressure);
  return s;
}

Trajectory run_transient(const FESpace& v, const FESpace& p, const OperatorSet& ops,
                         const ModelParameters& par, int k, const TimeMesh& time_mesh,
                         const InitialState& initial, const VectorSource& momentum_source,
                         const ScalarSource& mass_source, const TransientOptions& options) {
  if (time_mesh.n_slabs < 1 || time_mesh.t_end <= 0.0)
    throw std::invalid_argument("run_transient: empty time mesh");
  SlabSolver solver(ops, par, k, v.n_free(), p.n_dofs());
  solver.prepare(time_mesh.tau());
  const TemporalMatrices& tm = solver.temporal();

  Trajectory traj;
  traj.time_mesh = time_mesh;
  traj.k = k;
  traj.slabs.reserve(time_mesh.n_slabs);

  auto momentum_load_at = [&](double t) -> Eigen::VectorXd {
    if (!momentum_source) return Eigen::VectorXd::Zero(v.n_free());
    auto fn = [&](const Eigen::Vector2d& x) { return momentum_source(x, t); };
    return v.restrict_free(assemble_vector_load(v, fn, options.load_quad_degree));
  };
  auto mass_load_at = [&](double t) -> Eigen::VectorXd {
    if (!mass_source) return Eigen::VectorXd::Zero(p.n_dofs());
    auto fn = [&](const Eigen::Vector2d& x) { return mass_source(x, t); };
    return assemble_scalar_load(p, fn, options.load_quad_degree);
  };

  InitialState state = initial;
  std::vector<Eigen::VectorXd> f_nodes(k + 1), g_nodes(k + 1);
  for (int n = 0; n < time_mesh.n_slabs; ++n) {
    double t0 = time_mesh.boundary(n);
    for (int j = 0; j <= k; ++j) {
      double t = t0 + time_mesh.tau() * tm.trial_nodes[j];
      if (n > 0 && j == 0) continue;  // carried over from the previous slab end
      f_nodes[j] = momentum_load_at(t);
      g_nodes[j] = mass_load_at(t);
    }
    SlabState slab = solver.solve(state, f_nodes, g_nodes);
    state.solid = slab.solid.col(k);
    state.velocity = slab.velocity.col(k);
    state.seepage = slab.seepage.col(k);
    state.pressure = slab.pressure.col(k);
    if (options.check_pressure_mean) {
      double mean = std::abs(ops.pressure_volume.dot(state.pressure));
      double scale = std::sqrt(std::max(state.pressure.dot(spmv(ops.pressure_mass, state.pressure)),
                                        1e-300));
      traj.max_pressure_mean_rel = std::max(traj.max_pressure_mean_rel, mean / scale);
    }
    traj.slabs.push_back(std::move(slab));
    f_nodes[0] = f_nodes[k];
    g_nodes[0] = g_nodes[k];
  }
  return traj;
}

double energy(const OperatorSet& ops, const ModelParameters& par, const Eigen::VectorXd& u,
              const Eigen::VectorXd& v, const Eigen::VectorXd& w, const Eigen::VectorXd& p) {
  double strain = u.dot(spmv(ops.elasticity, u));
  Eigen::VectorXd mv = spmv(ops.vector_mass, v);
  Eigen::VectorXd mw = spmv(ops.vector_mass, w);
  double kinetic = par.rho_bulk * v.dot(mv) + 2.0 * par.rho_fluid * w.dot(mv) +
                   par.rho_seepage * w.dot(mw);
  double store = par.storage * p.dot(spmv(ops.pressure_mass, p));
  return 0.5 * (strain + kinetic + store);
}

void save_trajectory(const std::string& path, const Trajectory& traj, int pressure_degree,
                     int level) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_trajectory: cannot open " + path);
  int nv = traj.slabs.empty() ? 0 : static_cast<int>(traj.slabs.front().solid.rows());
  int np = traj.slabs.empty() ? 0 : static_cast<int>(traj.slabs.front().pressure.rows());
  out << "slab-trajectory v1\n";
  out.precision(17);  // exact double round trip
  out << "k " << traj.k << " ell " << pressure_degree << " level " << level << " tau "
      << traj.time_mesh.tau() << " slabs " << static_cast<int>(traj.slabs.size()) << " of "
      << traj.time_mesh.n_slabs << " nv " << nv << " np " << np << " t_end "
      << traj.time_mesh.t_end << "\n";
  auto dump = [&out](const Eigen::MatrixXd& m) {
    out.write(reinterpret_cast<const char*>(m.data()),
              static_cast<std::streamsize>(sizeof(double) * m.size()));
  };
  for (size_t n = 0; n < traj.slabs.size(); ++n) {
    out << "slab " << n << "\n";
    dump(traj.slabs[n].solid);
    dump(traj.slabs[n].velocity);
    dump(traj.slabs[n].seepage);
    dump(traj.slabs[n].pressure);
  }
  if (!out) throw std::runtime_error("save_trajectory: write failed");
}

Trajectory load_trajectory(const std::string& path, int* pressure_degree, int* level) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_trajectory: cannot open " + path);
  std::string line;
  std::getline(in, line);
  if (line != "slab-trajectory v1")
    throw std::runtime_error("load_trajectory: unrecognized header");
  std::getline(in, line);
  std::istringstream hdr(line);
  std::string key, of_word;
  int k, ell, lvl, n_saved, n_total, nv, np;
  double tau, t_end;
  hdr >> key >> k >> key >> ell >> key >> lvl >> key >> tau >> key >> n_saved >> of_word >>
      n_total >> key >> nv >> key >> np >> key >> t_end;
  if (!hdr) throw std::runtime_error("load_trajectory: malformed header");
  if (pressure_degree) *pressure_degree = ell;
  if (level) *level = lvl;
  Trajectory traj;
  traj.k = k;
  traj.time_mesh.n_slabs = n_total;
  traj.time_mesh.t_end = t_end;
  if (std::abs(traj.time_mesh.tau() - tau) > 1e-12 * std::abs(tau))
    throw std::runtime_error("load_trajectory: inconsistent step size in header");
  traj.slabs.resize(n_saved);
  auto slurp = [&in](Eigen::MatrixXd& m, int rows, int cols) {
    m.resize(rows, cols);
    in.read(reinterpret_cast<char*>(m.data()),
            static_cast<std::streamsize>(sizeof(double) * m.size()));
  };
  for (int n = 0; n < n_saved; ++n) {
    std::getline(in, line);
    if (line != "slab " + std::to_string(n))
      throw std::runtime_error("load_trajectory: bad slab marker");
    slurp(traj.slabs[n].solid, nv, k + 1);
    slurp(traj.slabs[n].velocity, nv, k + 1);
    slurp(traj.slabs[n].seepage, nv, k + 1);
    slurp(traj.slabs[n].pressure, np, k + 1);
  }
  if (!in) throw std::runtime_error("load_trajectory: truncated file");
  return traj;
}

}  // namespace biot
