#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include <Eigen/Sparse>

namespace pfluid {

using SparseMatrix = Eigen::SparseMatrix<double>;

class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sparse LU for unsymmetric saddle-point systems. The symbolic analysis is
/// kept across refactorizations of matrices with an identical pattern.
class SparseDirectSolver {
 public:
  SparseDirectSolver();
  ~SparseDirectSolver();
  SparseDirectSolver(SparseDirectSolver&&) noexcept;
  SparseDirectSolver& operator=(SparseDirectSolver&&) noexcept;

  /// Numeric factorization; runs the symbolic step on first use or when the
  /// size or nonzero count changes. Throws SingularSystemError.
  void factorize(const SparseMatrix& a);
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  bool factorized() const { return factorized_; }
  /// Name of the factorization backend.
  static std::string backend();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  bool factorized_ = false;
  Eigen::Index rows_ = -1;
  Eigen::Index nonzeros_ = -1;
};

}  // namespace pfluid
