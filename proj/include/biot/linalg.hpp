// Sparse matrices, a direct LU solver with residual verification, and a block
// assembler for the coupled slab systems.
#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

namespace biot {

// Row-major compressed storage: outer indices are row offsets, inner indices
// are sorted unique column ids.
using SparseMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<double>;

SparseMat matrix_from_triplets(int rows, int cols, const std::vector<Triplet>& triplets);

// y = A x and y = A^T x as explicit loops over the stored entries, so the
// transpose product accumulates in exactly the order of an explicitly
// transposed matrix.
Eigen::VectorXd spmv(const SparseMat& a, const Eigen::VectorXd& x);
Eigen::VectorXd spmv_transpose(const SparseMat& a, const Eigen::VectorXd& x);

// Largest absolute difference between A and B (same shape required).
double max_abs_diff(const SparseMat& a, const SparseMat& b);

// Sparse LU with column reordering.  solve() verifies the residual of every
// solution and throws std::runtime_error when it exceeds the tolerance.
class DirectSolver {
 public:
  explicit DirectSolver(double residual_tol = 1e-10);

  void factor(const SparseMat& a);
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  bool factored() const { return factored_; }

 private:
  double residual_tol_;
  bool factored_ = false;
  SparseMat a_;  // kept for residual checks
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
};

// Assembles a square block matrix from sparse blocks placed at given offsets.
class BlockSystem {
 public:
  // sizes[i] = dimension of block row/column i
  explicit BlockSystem(const std::vector<int>& sizes);

  int total_size() const { return total_; }
  int block_offset(int i) const { return offsets_[i]; }

  // Adds coeff * block at block position (i, j); zero coefficients are skipped.
  void add_block(int i, int j, double coeff, const SparseMat& block);
  // Same with the transposed block.
  void add_block_transpose(int i, int j, double coeff, const SparseMat& block);

  SparseMat assemble() const;

  // Views into a stacked vector.
  Eigen::VectorBlock<Eigen::VectorXd> segment(Eigen::VectorXd& v, int i) const;

 private:
  std::vector<int> offsets_;
  int total_ = 0;
  std::vector<Triplet> triplets_;
};

}  // namespace biot
