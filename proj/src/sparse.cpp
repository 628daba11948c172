#include "smpnp/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace smpnp {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> jacobi_diagonal(const SparseMatrix& a) {
  std::vector<double> inv(a.dim(), 1.0);
  for (int r = 0; r < a.dim(); ++r) {
    int k = a.find(r, r);
    if (k >= 0 && a.values()[k] != 0.0) inv[r] = 1.0 / a.values()[k];
  }
  return inv;
}

void apply_precond(const std::vector<double>* inv_diag, const std::vector<double>& r,
                   std::vector<double>& z) {
  if (!inv_diag) {
    z = r;
    return;
  }
  for (std::size_t i = 0; i < r.size(); ++i) z[i] = (*inv_diag)[i] * r[i];
}

}  // namespace

double norm2(const std::vector<double>& v) { return std::sqrt(dot(v, v)); }

SparseMatrix SparseMatrix::from_triplets(int dim, std::vector<Triplet> triplets) {
  for (const Triplet& t : triplets)
    if (t.row < 0 || t.row >= dim || t.col < 0 || t.col >= dim)
      throw std::invalid_argument("SparseMatrix: triplet index out of range");

  // Stable sort keeps insertion order within each (row, col) group so the
  // duplicate summation order is reproducible.
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseMatrix m;
  m.dim_ = dim;
  m.row_offsets_.assign(dim + 1, 0);
  m.cols_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  std::size_t i = 0;
  for (int r = 0; r < dim; ++r) {
    while (i < triplets.size() && triplets[i].row == r) {
      int c = triplets[i].col;
      double v = triplets[i].value;
      ++i;
      while (i < triplets.size() && triplets[i].row == r && triplets[i].col == c) {
        v += triplets[i].value;
        ++i;
      }
      m.cols_.push_back(c);
      m.values_.push_back(v);
    }
    m.row_offsets_[r + 1] = static_cast<int>(m.cols_.size());
  }
  return m;
}

int SparseMatrix::find(int row, int col) const {
  auto begin = cols_.begin() + row_offsets_[row];
  auto end = cols_.begin() + row_offsets_[row + 1];
  auto it = std::lower_bound(begin, end, col);
  if (it == end || *it != col) return -1;
  return static_cast<int>(it - cols_.begin());
}

std::vector<double> SparseMatrix::multiply(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != dim_)
    throw std::invalid_argument("SparseMatrix::multiply: dimension mismatch");
  std::vector<double> y(dim_, 0.0);
  for (int r = 0; r < dim_; ++r) {
    double s = 0.0;
    for (int k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) s += values_[k] * x[cols_[k]];
    y[r] = s;
  }
  return y;
}

double SparseMatrix::symmetry_gap() const {
  double gap = 0.0;
  for (int r = 0; r < dim_; ++r)
    for (int k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      int kt = find(cols_[k], r);
      double vt = kt >= 0 ? values_[kt] : 0.0;
      gap = std::max(gap, std::abs(values_[k] - vt));
    }
  return gap;
}

void SparseMatrix::write_matrix_market(std::ostream& out) const {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << dim_ << ' ' << dim_ << ' ' << nnz() << "\n";
  for (int r = 0; r < dim_; ++r)
    for (int k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k)
      out << (r + 1) << ' ' << (cols_[k] + 1) << ' ' << values_[k] << "\n";
}

std::vector<double> spmv(const SparseMatrix& a, const std::vector<double>& x) {
  return a.multiply(x);
}

LinearSystem apply_dirichlet(LinearSystem system) {
  SparseMatrix& a = system.matrix;
  const int n = a.dim();
  std::vector<char> constrained(n, 0);
  std::vector<double> value(n, 0.0);
  for (const auto& [idx, val] : system.constraints) {
    if (idx < 0 || idx >= n) throw std::invalid_argument("apply_dirichlet: index out of range");
    constrained[idx] = 1;
    value[idx] = val;
  }

  const auto& offsets = a.row_offsets();
  const auto& cols = a.cols();
  auto& vals = a.values();
  for (int r = 0; r < n; ++r) {
    if (constrained[r]) {
      // Identity row; keep the pattern, zero everything off-diagonal.
      bool has_diag = false;
      for (int k = offsets[r]; k < offsets[r + 1]; ++k) {
        has_diag = has_diag || cols[k] == r;
        vals[k] = cols[k] == r ? 1.0 : 0.0;
      }
      if (!has_diag)
        throw std::runtime_error("apply_dirichlet: constrained row lacks a diagonal entry");
      system.rhs[r] = value[r];
    } else {
      // Column elimination: move known values to the right-hand side.
      for (int k = offsets[r]; k < offsets[r + 1]; ++k)
        if (constrained[cols[k]]) {
          system.rhs[r] -= vals[k] * value[cols[k]];
          vals[k] = 0.0;
        }
    }
  }
  return system;
}

std::vector<double> solve_cg(const SparseMatrix& a, const std::vector<double>& b, double tol,
                             int max_iter, Preconditioner precond, SolveStats* stats) {
  if (static_cast<int>(b.size()) != a.dim())
    throw std::invalid_argument("solve_cg: dimension mismatch");
  if (!(tol > 0.0)) throw std::invalid_argument("solve_cg: tol must be positive");

  std::vector<double> x(b.size(), 0.0);
  double nb = norm2(b);
  if (nb == 0.0) {
    if (stats) *stats = {0, 0.0};
    return x;
  }

  std::vector<double> inv_diag_store;
  const std::vector<double>* inv_diag = nullptr;
  if (precond == Preconditioner::Jacobi) {
    inv_diag_store = jacobi_diagonal(a);
    inv_diag = &inv_diag_store;
  }

  std::vector<double> r = b;  // x0 = 0
  std::vector<double> z(r.size());
  apply_precond(inv_diag, r, z);
  std::vector<double> p = z;
  std::vector<double> ap(r.size());
  double rz = dot(r, z);

  for (int it = 1; it <= max_iter; ++it) {
    ap = a.multiply(p);
    double pap = dot(p, ap);
    if (pap <= 0.0)
      throw SolverError("solve_cg: breakdown, non-positive curvature (matrix not SPD?)", it,
                        norm2(r) / nb);
    double alpha = rz / pap;
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    double rel = norm2(r) / nb;
    if (rel <= tol) {
      if (stats) *stats = {it, rel};
      return x;
    }
    apply_precond(inv_diag, r, z);
    double rz_new = dot(r, z);
    double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = z[i] + beta * p[i];
  }
  throw SolverError("solve_cg: no convergence within " + std::to_string(max_iter) + " iterations",
                    max_iter, norm2(r) / nb);
}

std::vector<double> solve_bicgstab(const SparseMatrix& a, const std::vector<double>& b, double tol,
                                   int max_iter, Preconditioner precond, SolveStats* stats) {
  if (static_cast<int>(b.size()) != a.dim())
    throw std::invalid_argument("solve_bicgstab: dimension mismatch");
  if (!(tol > 0.0)) throw std::invalid_argument("solve_bicgstab: tol must be positive");

  const std::size_t n = b.size();
  std::vector<double> x(n, 0.0);
  double nb = norm2(b);
  if (nb == 0.0) {
    if (stats) *stats = {0, 0.0};
    return x;
  }

  std::vector<double> inv_diag_store;
  const std::vector<double>* inv_diag = nullptr;
  if (precond == Preconditioner::Jacobi) {
    inv_diag_store = jacobi_diagonal(a);
    inv_diag = &inv_diag_store;
  }

  std::vector<double> r = b;
  std::vector<double> r0 = r;
  std::vector<double> p(n, 0.0), v(n, 0.0), y(n), z(n), s(n), t(n);
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  bool restarted = false;

  for (int it = 1; it <= max_iter; ++it) {
    double rho_new = dot(r0, r);
    if (rho_new == 0.0 || omega == 0.0) {
      if (restarted)
        throw SolverError("solve_bicgstab: breakdown (rho = 0) after restart", it, norm2(r) / nb);
      // restart with the current residual as the shadow vector
      restarted = true;
      r0 = r;
      rho = alpha = omega = 1.0;
      std::fill(p.begin(), p.end(), 0.0);
      std::fill(v.begin(), v.end(), 0.0);
      rho_new = dot(r0, r);
      if (rho_new == 0.0) {
        double rel = norm2(r) / nb;
        if (rel <= tol) {  // converged exactly at the restart point
          if (stats) *stats = {it, rel};
          return x;
        }
        throw SolverError("solve_bicgstab: breakdown, zero residual projection", it, rel);
      }
    }
    double beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
    apply_precond(inv_diag, p, y);
    v = a.multiply(y);
    double r0v = dot(r0, v);
    if (r0v == 0.0)
      throw SolverError("solve_bicgstab: breakdown (r0'v = 0)", it, norm2(r) / nb);
    alpha = rho / r0v;
    for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
    double rel_s = norm2(s) / nb;
    if (rel_s <= tol) {
      for (std::size_t i = 0; i < n; ++i) x[i] += alpha * y[i];
      if (stats) *stats = {it, rel_s};
      return x;
    }
    apply_precond(inv_diag, s, z);
    t = a.multiply(z);
    double tt = dot(t, t);
    if (tt == 0.0)
      throw SolverError("solve_bicgstab: breakdown (t = 0)", it, rel_s);
    omega = dot(t, s) / tt;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * y[i] + omega * z[i];
      r[i] = s[i] - omega * t[i];
    }
    double rel = norm2(r) / nb;
    if (rel <= tol) {
      if (stats) *stats = {it, rel};
      return x;
    }
  }
  throw SolverError(
      "solve_bicgstab: no convergence within " + std::to_string(max_iter) + " iterations",
      max_iter, norm2(r) / nb);
}

}  // namespace smpnp
