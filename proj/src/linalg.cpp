#include "biot/linalg.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace biot {

SparseMat matrix_from_triplets(int rows, int cols, const std::vector<Triplet>& triplets) {
  SparseMat a(rows, cols);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  return a;
}

Eigen::VectorXd spmv(const SparseMat& a, const Eigen::VectorXd& x) {
  if (x.size() != a.cols()) throw std::invalid_argument("spmv: size mismatch");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(a.rows());
  for (int r = 0; r < a.outerSize(); ++r)
    for (SparseMat::InnerIterator it(a, r); it; ++it) y(r) += it.value() * x(it.col());
  return y;
}

Eigen::VectorXd spmv_transpose(const SparseMat& a, const Eigen::VectorXd& x) {
  if (x.size() != a.rows()) throw std::invalid_argument("spmv_transpose: size mismatch");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(a.cols());
  for (int r = 0; r < a.outerSize(); ++r)
    for (SparseMat::InnerIterator it(a, r); it; ++it) y(it.col()) += it.value() * x(r);
  return y;
}

double max_abs_diff(const SparseMat& a, const SparseMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  SparseMat d = a - b;
  double m = 0.0;
  for (int r = 0; r < d.outerSize(); ++r)
    for (SparseMat::InnerIterator it(d, r); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

DirectSolver::DirectSolver(double residual_tol) : residual_tol_(residual_tol) {}

void DirectSolver::factor(const SparseMat& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("DirectSolver: matrix not square");
  a_ = a;
  Eigen::SparseMatrix<double> col_major = a;
  lu_.compute(col_major);
  if (lu_.info() != Eigen::Success)
    throw std::runtime_error("DirectSolver: factorization failed (" + lu_.lastErrorMessage() + ")");
  factored_ = true;
}

Eigen::VectorXd DirectSolver::solve(const Eigen::VectorXd& b) const {
  if (!factored_) throw std::logic_error("DirectSolver: solve before factor");
  if (b.size() != a_.rows()) throw std::invalid_argument("DirectSolver: rhs size mismatch");
  Eigen::VectorXd x = lu_.solve(b);
  if (lu_.info() != Eigen::Success) throw std::runtime_error("DirectSolver: solve failed");
  // One step of iterative refinement: the slab systems mix mass-scale and
  // stiffness-scale blocks, and the raw substitution loses several digits on
  // the small blocks.
  Eigen::VectorXd r = b - spmv(a_, x);
  x += lu_.solve(r);
  double rnorm = (spmv(a_, x) - b).norm();
  double rel = rnorm / std::max(b.norm(), 1e-300);
  // absolute fallback covers near-zero right-hand sides
  if (rel > residual_tol_ && rnorm > residual_tol_) {
    char msg[128];
    std::snprintf(msg, sizeof(msg), "DirectSolver: relative residual %.3e exceeds tolerance %.3e",
                  rel, residual_tol_);
    throw std::runtime_error(msg);
  }
  return x;
}

BlockSystem::BlockSystem(const std::vector<int>& sizes) {
  offsets_.reserve(sizes.size());
  for (int s : sizes) {
    if (s < 0) throw std::invalid_argument("BlockSystem: negative block size");
    offsets_.push_back(total_);
    total_ += s;
  }
}

void BlockSystem::add_block(int i, int j, double coeff, const SparseMat& block) {
  if (coeff == 0.0) return;
  int r0 = offsets_.at(i), c0 = offsets_.at(j);
  for (int r = 0; r < block.outerSize(); ++r)
    for (SparseMat::InnerIterator it(block, r); it; ++it)
      triplets_.emplace_back(r0 + r, c0 + it.col(), coeff * it.value());
}

void BlockSystem::add_block_transpose(int i, int j, double coeff, const SparseMat& block) {
  if (coeff == 0.0) return;
  int r0 = offsets_.at(i), c0 = offsets_.at(j);
  for (int r = 0; r < block.outerSize(); ++r)
    for (SparseMat::InnerIterator it(block, r); it; ++it)
      triplets_.emplace_back(r0 + it.col(), c0 + r, coeff * it.value());
}

SparseMat BlockSystem::assemble() const {
  SparseMat a(total_, total_);
  a.setFromTriplets(triplets_.begin(), triplets_.end());
  a.makeCompressed();
  return a;
}

Eigen::VectorBlock<Eigen::VectorXd> BlockSystem::segment(Eigen::VectorXd& v, int i) const {
  int size = (i + 1 < static_cast<int>(offsets_.size()) ? offsets_[i + 1] : total_) - offsets_[i];
  return v.segment(offsets_[i], size);
}

}  // namespace biot
