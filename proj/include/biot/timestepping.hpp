// Time integration on slabs: trial functions are continuous piecewise
// polynomials of degree k represented by their values at the k+1
// Gauss-Lobatto nodes of each slab, test functions are discontinuous of
// degree k-1.  Each slab couples the four fields in one sparse system that is
// factored once per step size and reused.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "biot/assembly.hpp"
#include "biot/linalg.hpp"
#include "biot/spaces.hpp"

namespace biot {

struct TimeMesh {
  double t_end = 1.0;
  int n_slabs = 1;

  double tau() const { return t_end / n_slabs; }
  double boundary(int n) const { return t_end * n / n_slabs; }
};

// Moments of the Gauss-Lobatto Lagrange basis L_j (trial, degree k) against
// the Gauss-point Lagrange basis of degree k-1 on [0,1]:
//   deriv_moments(i,j) = int L_j' L^G_i,  value_moments(i,j) = int L_j L^G_i.
// Both are exact: the k-point Gauss rule integrates degree 2k-1 and the
// integrands have degree at most 2k-2.
struct TemporalMatrices {
  int k = 1;
  std::vector<double> trial_nodes;   // k+1 Gauss-Lobatto points
  std::vector<double> test_nodes;    // k Gauss points
  std::vector<double> test_weights;
  Eigen::MatrixXd deriv_moments;     // k x (k+1)
  Eigen::MatrixXd value_moments;     // k x (k+1)
};

TemporalMatrices temporal_matrices(int k);

// Lagrange basis for arbitrary distinct nodes on [0,1].
double lagrange_value(const std::vector<double>& nodes, int j, double s);
double lagrange_deriv(const std::vector<double>& nodes, int j, double s);

enum class FieldId { solid, velocity, seepage, pressure };

// Nodal coefficient columns of one slab; vector fields hold free
// coefficients, the pressure all its dofs.  Column 0 repeats the state at the
// slab start (continuity of the trial functions).
struct SlabState {
  Eigen::MatrixXd solid, velocity, seepage, pressure;
};

const Eigen::MatrixXd& slab_field(const SlabState& slab, FieldId field);

struct Trajectory {
  TimeMesh time_mesh;
  int k = 1;
  std::vector<SlabState> slabs;
  double max_pressure_mean_rel = 0.0;  // largest relative pressure mean drift seen

  // Coefficients of a field at time t (free coefficients for vector fields).
  Eigen::VectorXd eval(FieldId field, double t) const;
  // Time derivative coefficients at time t inside the containing slab.
  Eigen::VectorXd eval_deriv(FieldId field, double t) const;
  int slab_of(double t) const;
};

struct InitialState {
  Eigen::VectorXd solid, velocity, seepage, pressure;
};

class SlabSolver {
 public:
  SlabSolver(const OperatorSet& ops, const ModelParameters& par, int k, int n_vector,
             int n_pressure);

  int k() const { return tm_.k; }
  const TemporalMatrices& temporal() const { return tm_; }

  // Factors the slab matrix for step size tau; must be called before solve
  // and again whenever tau changes.
  void prepare(double tau);

  // Advances one slab.  Sources are the assembled loads at the k+1 trial
  // nodes of the slab (momentum load on free vector dofs, mass load on
  // pressure dofs).
  SlabState solve(const InitialState& start, const std::vector<Eigen::VectorXd>& momentum_load,
                  const std::vector<Eigen::VectorXd>& mass_load) const;

 private:
  const OperatorSet* ops_;
  ModelParameters par_;
  TemporalMatrices tm_;
  int nv_, np_;
  double tau_ = -1.0;
  DirectSolver solver_;
  std::vector<int> block_sizes_;
};

struct TransientOptions {
  int load_quad_degree = -1;     // default of the assembly routines
  bool check_pressure_mean = true;  // record the pressure mean drift per slab
};

using VectorSource = std::function<Eigen::Vector2d(const Eigen::Vector2d&, double)>;
using ScalarSource = std::function<double(const Eigen::Vector2d&, double)>;

// Runs the transient problem from the given initial state.  Null sources are
// treated as zero.
Trajectory run_transient(const FESpace& v, const FESpace& p, const OperatorSet& ops,
                         const ModelParameters& par, int k, const TimeMesh& time_mesh,
                         const InitialState& initial, const VectorSource& momentum_source,
                         const ScalarSource& mass_source,
                         const TransientOptions& options = {});

// Initial state interpolated from closed-form fields; the vector fields are
// reduced to their free coefficients.
InitialState interpolate_initial_state(
    const FESpace& v, const FESpace& p,
    const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& solid,
    const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& velocity,
    const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& seepage,
    const std::function<double(const Eigen::Vector2d&)>& pressure);

// Total energy: elastic strain part plus the kinetic quadratic form of
// (velocity, seepage) plus the pressure storage part.
double energy(const OperatorSet& ops, const ModelParameters& par, const Eigen::VectorXd& u,
              const Eigen::VectorXd& v, const Eigen::VectorXd& w, const Eigen::VectorXd& p);

// Checkpointing: text header plus raw little-endian doubles per slab.
void save_trajectory(const std::string& path, const Trajectory& traj, int pressure_degree,
                     int level);
Trajectory load_trajectory(const std::string& path, int* pressure_degree = nullptr,
                           int* level = nullptr);

}  // namespace biot
