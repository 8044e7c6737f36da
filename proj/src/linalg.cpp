// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#include "sdirng/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sdirng/error.hpp"

namespace sdirng {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  require(data_.size() == rows * cols, ErrorCode::DimensionMismatch, "matrix data size mismatch");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::initializer_list<double> d) {
  return diagonal(std::span<const double>(d.begin(), d.size()));
}

ComplexMatrix ComplexMatrix::real(std::size_t rows, std::size_t cols,
                                  std::initializer_list<double> v) {
  require(v.size() == rows * cols, ErrorCode::DimensionMismatch, "matrix data size mismatch");
  std::vector<cplx> d(v.begin(), v.end());
  return ComplexMatrix(rows, cols, std::move(d));
}

ComplexMatrix ComplexMatrix::outer(std::span<const cplx> v) {
  ComplexMatrix m(v.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

ComplexMatrix ComplexMatrix::conj() const {
  ComplexMatrix m = *this;
  for (auto& x : m.data_) x = std::conj(x);
  return m;
}

cplx ComplexMatrix::trace() const {
  require(square(), ErrorCode::DimensionMismatch, "trace of non-square matrix");
  cplx t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& x : data_) m = std::max(m, std::abs(x));
  return m;
}

double ComplexMatrix::frobenius() const {
  double s = 0.0;
  for (const auto& x : data_) s += std::norm(x);
  return std::sqrt(s);
}

double ComplexMatrix::hermitian_defect() const {
  require(square(), ErrorCode::DimensionMismatch, "hermitian check on non-square matrix");
  double d = 0.0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i; j < cols_; ++j)
      d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return d;
}

bool ComplexMatrix::is_hermitian(double tol) const {
  return square() && hermitian_defect() <= tol * std::max(1.0, max_abs());
}

ComplexMatrix ComplexMatrix::hermitian_part() const {
  require(square(), ErrorCode::DimensionMismatch, "hermitian part of non-square matrix");
  ComplexMatrix m(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      m(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
  for (std::size_t i = 0; i < rows_; ++i) m(i, i) = m(i, i).real();
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  require(rows_ == o.rows_ && cols_ == o.cols_, ErrorCode::DimensionMismatch, "matrix sum shape");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  require(rows_ == o.rows_ && cols_ == o.cols_, ErrorCode::DimensionMismatch, "matrix difference shape");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& x : data_) x *= s;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.cols() == b.rows(), ErrorCode::DimensionMismatch, "matrix product shape");
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorCode::DimensionMismatch,
          "matrix comparison shape");
  double d = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
  return d;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      if (aij == 0.0) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) c(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return c;
}

namespace {

std::vector<std::size_t> offsets(std::span<const std::size_t> dims,
                                 std::span<const std::size_t> strides,
                                 const std::vector<std::size_t>& which) {
  std::size_t total = 1;
  for (auto w : which) total *= dims[w];
  std::vector<std::size_t> out(total, 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx, off = 0;
    for (std::size_t p = which.size(); p-- > 0;) {
      const std::size_t w = which[p];
      off += (rem % dims[w]) * strides[w];
      rem /= dims[w];
    }
    out[idx] = off;
  }
  return out;
}

}  // namespace

ComplexMatrix partial_trace(const ComplexMatrix& a, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep) {
  std::size_t total = 1;
  for (auto d : dims) {
    require(d > 0, ErrorCode::DimensionMismatch, "zero subsystem dimension");
    total *= d;
  }
  require(a.square() && a.rows() == total, ErrorCode::DimensionMismatch,
          "partial trace: matrix size does not match subsystem dims");
  for (std::size_t i = 0; i < keep.size(); ++i) {
    require(keep[i] < dims.size(), ErrorCode::DimensionMismatch, "partial trace: bad subsystem index");
    require(i == 0 || keep[i] > keep[i - 1], ErrorCode::InvalidArgument,
            "partial trace: keep list must be increasing");
  }
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) strides[i - 1] = strides[i] * dims[i];
  std::vector<std::size_t> kept(keep.begin(), keep.end()), traced;
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (std::find(kept.begin(), kept.end(), i) == kept.end()) traced.push_back(i);
  const auto ok = offsets(dims, strides, kept);
  const auto ot = offsets(dims, strides, traced);
  ComplexMatrix out(ok.size(), ok.size());
  for (std::size_t i = 0; i < ok.size(); ++i)
    for (std::size_t j = 0; j < ok.size(); ++j) {
      cplx s = 0.0;
      for (auto t : ot) s += a(ok[i] + t, ok[j] + t);
      out(i, j) = s;
    }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& a, std::initializer_list<std::size_t> dims,
                            std::initializer_list<std::size_t> keep) {
  return partial_trace(a, std::span<const std::size_t>(dims.begin(), dims.size()),
                       std::span<const std::size_t>(keep.begin(), keep.size()));
}

SpectralDecomposition eigh(const ComplexMatrix& input) {
  require(input.square(), ErrorCode::DimensionMismatch, "eigh of non-square matrix");
  const double scale = std::max(1.0, input.max_abs());
  if (input.hermitian_defect() > 1e-9 * scale)
    fail(ErrorCode::NotHermitian,
         "eigh: matrix is not Hermitian (defect " + std::to_string(input.hermitian_defect()) + ")");
  const std::size_t n = input.rows();
  ComplexMatrix a = input.hermitian_part();
  ComplexMatrix v = ComplexMatrix::identity(n);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += std::norm(a(i, j));
    return std::sqrt(2.0 * s);
  };
  const double target = 1e-15 * std::max(a.frobenius(), 1e-300);
  for (int sweep = 0; sweep < 100 && off_norm() > target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag < 1e-300) continue;
        const cplx phase = a(p, q) / mag;
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // J = W R with W = diag(1, conj(phase)) on (p,q)
        const cplx jpp = c, jpq = s, jqp = -s * std::conj(phase), jqq = c * std::conj(phase);
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * jpp + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * jqq;
        }
      }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    out.eigenvalues[c] = a(order[c], order[c]).real();
    for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, c) = v(r, order[c]);
  }
  return out;
}

double min_eigenvalue(const ComplexMatrix& a) {
  if (a.rows() == 2 && a.cols() == 2 && a(0, 1).imag() == 0.0 && a(1, 0).imag() == 0.0 &&
      a.hermitian_defect() == 0.0)
    return sym2_min_eigenvalue(a(0, 0).real(), a(0, 1).real(), a(1, 1).real());
  return eigh(a).eigenvalues.front();
}

double max_eigenvalue(const ComplexMatrix& a) { return eigh(a).eigenvalues.back(); }

bool is_psd(const ComplexMatrix& a, double tol) { return eigh(a).eigenvalues.front() >= -tol; }

double trace_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (double e : eigh(a).eigenvalues) s += std::abs(e);
  return s;
}

ComplexMatrix sqrt_psd(const ComplexMatrix& a) {
  const auto sd = eigh(a);
  const std::size_t n = a.rows();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double r = std::sqrt(std::max(0.0, sd.eigenvalues[k]));
    if (r == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += r * sd.eigenvectors(i, k) * std::conj(sd.eigenvectors(j, k));
  }
  return out;
}

double fidelity(const ComplexMatrix& r, const ComplexMatrix& s) {
  const ComplexMatrix sr = sqrt_psd(r);
  const ComplexMatrix inner = (sr * s * sr).hermitian_part();
  double t = 0.0;
  for (double e : eigh(inner).eigenvalues) t += std::sqrt(std::max(0.0, e));
  return t * t;
}

double sym2_min_eigenvalue(double a, double b, double c) {
  return 0.5 * (a + c) - std::hypot(0.5 * (a - c), b);
}

double sym2_max_eigenvalue(double a, double b, double c) {
  return 0.5 * (a + c) + std::hypot(0.5 * (a - c), b);
}

}  // namespace sdirng
