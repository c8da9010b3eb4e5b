#include "pfluid/linalg.hpp"

#include <Eigen/SparseLU>

namespace pfluid {

struct SparseDirectSolver::Impl {
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
};

SparseDirectSolver::SparseDirectSolver() : impl_(std::make_unique<Impl>()) {}
SparseDirectSolver::~SparseDirectSolver() = default;
SparseDirectSolver::SparseDirectSolver(SparseDirectSolver&&) noexcept = default;
SparseDirectSolver& SparseDirectSolver::operator=(SparseDirectSolver&&) noexcept = default;

std::string SparseDirectSolver::backend() { return "eigen-sparselu"; }

void SparseDirectSolver::factorize(const SparseMatrix& a) {
  if (!a.isCompressed()) throw std::invalid_argument("SparseDirectSolver: matrix not compressed");
  if (a.rows() != rows_ || a.nonZeros() != nonzeros_) {
    impl_->lu.analyzePattern(a);
    rows_ = a.rows();
    nonzeros_ = a.nonZeros();
  }
  impl_->lu.factorize(a);
  factorized_ = impl_->lu.info() == Eigen::Success;
  if (!factorized_) {
    rows_ = -1;
    throw SingularSystemError("sparse factorization failed (n=" + std::to_string(a.rows()) +
                              "): " + impl_->lu.lastErrorMessage());
  }
}

Eigen::VectorXd SparseDirectSolver::solve(const Eigen::VectorXd& rhs) const {
  if (!factorized_) throw std::logic_error("SparseDirectSolver: solve before factorize");
  Eigen::VectorXd x = impl_->lu.solve(rhs);
  if (impl_->lu.info() != Eigen::Success || !x.allFinite()) {
    throw SingularSystemError("sparse back-substitution failed");
  }
  return x;
}

}  // namespace pfluid
