#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace smpnp {

struct Triplet {
  int row;
  int col;
  double value;
};

/// Square matrix in compressed sparse row form. Column indices are sorted and
/// unique within each row; structural zeros are kept so assembly into a fixed
/// pattern stays possible.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  /// Duplicate (row, col) entries are summed in insertion order, which makes
  /// repeated single-threaded assembly bit-identical.
  static SparseMatrix from_triplets(int dim, std::vector<Triplet> triplets);

  int dim() const { return dim_; }
  std::size_t nnz() const { return values_.size(); }

  const std::vector<int>& row_offsets() const { return row_offsets_; }
  const std::vector<int>& cols() const { return cols_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  /// Index into values() for entry (row, col), or -1 if not in the pattern.
  int find(int row, int col) const;

  std::vector<double> multiply(const std::vector<double>& x) const;

  /// Max |A - A^T| over the shared pattern; 0.0 for an exactly symmetric matrix.
  double symmetry_gap() const;

  void write_matrix_market(std::ostream& out) const;

 private:
  int dim_ = 0;
  std::vector<int> row_offsets_{0};
  std::vector<int> cols_;
  std::vector<double> values_;
};

std::vector<double> spmv(const SparseMatrix& a, const std::vector<double>& x);

/// Matrix, right-hand side and the Dirichlet constraint set (index, value).
struct LinearSystem {
  SparseMatrix matrix;
  std::vector<double> rhs;
  std::vector<std::pair<int, double>> constraints;
};

/// Row/column elimination of the constraints: constrained rows become identity
/// rows with the prescribed value on the right-hand side, and constrained
/// columns are moved to the right-hand side so a symmetric matrix stays
/// symmetric. Idempotent.
LinearSystem apply_dirichlet(LinearSystem system);

enum class Preconditioner { None, Jacobi };

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, int iterations, double residual)
      : std::runtime_error(what), iterations(iterations), residual(residual) {}
  int iterations;
  double residual;
};

struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Preconditioned conjugate gradient; A must be symmetric positive definite.
/// Stops when ||b - Ax||/||b|| <= tol, throws SolverError on breakdown or
/// after max_iter iterations.
std::vector<double> solve_cg(const SparseMatrix& a, const std::vector<double>& b, double tol,
                             int max_iter, Preconditioner precond, SolveStats* stats = nullptr);

/// Preconditioned BiCGStab for nonsymmetric systems. A rho-breakdown is
/// restarted once with the current residual; a second breakdown throws.
std::vector<double> solve_bicgstab(const SparseMatrix& a, const std::vector<double>& b, double tol,
                                   int max_iter, Preconditioner precond,
                                   SolveStats* stats = nullptr);

double norm2(const std::vector<double>& v);

}  // namespace smpnp
