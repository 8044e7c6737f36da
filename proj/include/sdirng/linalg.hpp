// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace sdirng {

using cplx = std::complex<double>;

// Dense row-major complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data);

  static ComplexMatrix zeros(std::size_t n) { return ComplexMatrix(n, n); }
  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> d);
  static ComplexMatrix diagonal(std::initializer_list<double> d);
  static ComplexMatrix real(std::size_t rows, std::size_t cols, std::initializer_list<double> v);
  // |v><v|
  static ComplexMatrix outer(std::span<const cplx> v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  bool empty() const { return data_.empty(); }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<cplx> data() { return data_; }
  std::span<const cplx> data() const { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conj() const;
  cplx trace() const;
  double max_abs() const;
  double frobenius() const;
  // max |A_ij - conj(A_ji)|
  double hermitian_defect() const;
  bool is_hermitian(double tol = 1e-12) const;
  ComplexMatrix hermitian_part() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, ComplexMatrix a);
ComplexMatrix operator*(ComplexMatrix a, cplx s);

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Trace out every subsystem not listed in keep. dims gives the factor sizes,
// keep must be strictly increasing.
ComplexMatrix partial_trace(const ComplexMatrix& a, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep);
ComplexMatrix partial_trace(const ComplexMatrix& a, std::initializer_list<std::size_t> dims,
                            std::initializer_list<std::size_t> keep);

struct SpectralDecomposition {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // columns
};

// Cyclic Jacobi. Input is symmetrized first; throws NotHermitian if the
// defect exceeds 1e-9 relative to the largest entry.
SpectralDecomposition eigh(const ComplexMatrix& a);

double min_eigenvalue(const ComplexMatrix& a);
double max_eigenvalue(const ComplexMatrix& a);
bool is_psd(const ComplexMatrix& a, double tol);
double trace_norm(const ComplexMatrix& a);
ComplexMatrix sqrt_psd(const ComplexMatrix& a);
// Uhlmann fidelity (Tr sqrt(sqrt(r) s sqrt(r)))^2
double fidelity(const ComplexMatrix& r, const ComplexMatrix& s);

// Closed-form eigenvalues of a real symmetric 2x2 [[a,b],[b,c]]
double sym2_min_eigenvalue(double a, double b, double c);
double sym2_max_eigenvalue(double a, double b, double c);

}  // namespace sdirng
