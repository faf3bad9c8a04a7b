// Copyright 2026 The sbqs developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sbqs/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <unsupported/Eigen/MatrixFunctions>

namespace sbqs {

Index max_composite_dim() {
  if (const char* env = std::getenv("SBQS_MAX_DIM")) {
    char* end = nullptr;
    long long v = std::strtoll(env, &end, 10);
    if (end != env && v > 0) return static_cast<Index>(v);
  }
  return Index{1} << 20;
}

ComplexMatrix identity(Index d) { return ComplexMatrix::Identity(d, d); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Index rows = a.rows() * b.rows();
  const Index cols = a.cols() * b.cols();
  if (rows > max_composite_dim() || cols > max_composite_dim()) {
    throw DimensionError("kron: composite dimension " + std::to_string(rows) +
                         "x" + std::to_string(cols) + " exceeds cap " +
                         std::to_string(max_composite_dim()));
  }
  ComplexMatrix out(rows, cols);
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix swap_operator(Index d) {
  if (d < 1) throw std::invalid_argument("swap_operator: dimension must be >= 1");
  ComplexMatrix s = ComplexMatrix::Zero(d * d, d * d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) s(i * d + j, j * d + i) = 1.0;
  return s;
}

namespace {

std::vector<Index> subsystem_strides(const std::vector<Index>& dims) {
  std::vector<Index> strides(dims.size(), 1);
  for (std::size_t s = dims.size(); s-- > 1;)
    strides[s - 1] = strides[s] * dims[s];
  return strides;
}

}  // namespace

QRegister partial_trace(const QRegister& reg, const std::vector<std::size_t>& keep) {
  const std::size_t k = reg.dims.size();
  if (reg.state.rows() != reg.dim() || reg.state.cols() != reg.dim())
    throw std::invalid_argument("partial_trace: state does not match dims");
  std::vector<bool> kept(k, false);
  for (std::size_t idx : keep) {
    if (idx >= k) throw std::invalid_argument("partial_trace: subsystem index out of range");
    if (kept[idx]) throw std::invalid_argument("partial_trace: duplicate subsystem index");
    kept[idx] = true;
  }

  std::vector<Index> kept_dims, traced_dims;
  std::vector<std::size_t> kept_pos, traced_pos;
  for (std::size_t s = 0; s < k; ++s) {
    if (kept[s]) {
      kept_dims.push_back(reg.dims[s]);
      kept_pos.push_back(s);
    } else {
      traced_dims.push_back(reg.dims[s]);
      traced_pos.push_back(s);
    }
  }

  const auto strides = subsystem_strides(reg.dims);
  Index kd = 1;
  for (Index d : kept_dims) kd *= d;
  Index td = 1;
  for (Index d : traced_dims) td *= d;

  // Flat offsets of every kept / traced multi-index into the full register.
  auto offsets = [&](const std::vector<Index>& dims,
                     const std::vector<std::size_t>& pos, Index count) {
    std::vector<Index> off(static_cast<std::size_t>(count), 0);
    for (Index flat = 0; flat < count; ++flat) {
      Index rem = flat, o = 0;
      for (std::size_t s = dims.size(); s-- > 0;) {
        o += (rem % dims[s]) * strides[pos[s]];
        rem /= dims[s];
      }
      off[static_cast<std::size_t>(flat)] = o;
    }
    return off;
  };
  const auto kept_off = offsets(kept_dims, kept_pos, kd);
  const auto traced_off = offsets(traced_dims, traced_pos, td);

  ComplexMatrix out = ComplexMatrix::Zero(kd, kd);
  for (Index i = 0; i < kd; ++i)
    for (Index j = 0; j < kd; ++j) {
      Complex acc{0.0, 0.0};
      for (Index m = 0; m < td; ++m)
        acc += reg.state(kept_off[i] + traced_off[m], kept_off[j] + traced_off[m]);
      out(i, j) = acc;
    }
  return QRegister{kept_dims, std::move(out)};
}

ComplexMatrix vectorize(const ComplexMatrix& a) {
  ComplexMatrix col(a.rows() * a.cols(), 1);
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) col(i * a.cols() + j, 0) = a(i, j);
  return col;
}

ComplexMatrix devectorize(const ComplexMatrix& column) {
  if (column.cols() != 1)
    throw std::invalid_argument("devectorize: expected a column vector");
  const auto n = static_cast<Index>(std::llround(std::sqrt(double(column.rows()))));
  if (n * n != column.rows())
    throw std::invalid_argument("devectorize: length is not a perfect square");
  ComplexMatrix a(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = column(i * n + j, 0);
  return a;
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).norm() <= tol;
}

double min_eigenvalue(const ComplexMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).norm();
}

void ensure_finite(const ComplexMatrix& a, const char* what) {
  if (!a.allFinite())
    throw NumericError(std::string(what) + ": non-finite entries encountered");
}

ComplexMatrix mat_exp(const ComplexMatrix& a, Complex scale) {
  if (a.rows() != a.cols()) throw std::invalid_argument("mat_exp: matrix must be square");
  ensure_finite(a, "mat_exp input");
  const double scale_tol = 1e-13 * std::max(1.0, a.norm());

  // Hermitian / skew-Hermitian inputs: exact spectral exponentiation.
  const bool herm = (a - a.adjoint()).norm() <= scale_tol;
  const bool skew = (a + a.adjoint()).norm() <= scale_tol;
  if (herm || skew) {
    const ComplexMatrix h = herm ? a : ComplexMatrix(-kImag * a);
    const Complex eff = herm ? scale : scale * kImag;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    if (es.info() != Eigen::Success)
      throw NumericError("mat_exp: eigendecomposition failed, input norm " +
                         std::to_string(a.norm()));
    ComplexVector phases(es.eigenvalues().size());
    for (Index i = 0; i < phases.size(); ++i)
      phases(i) = std::exp(eff * es.eigenvalues()(i));
    ComplexMatrix out =
        es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    ensure_finite(out, "mat_exp result");
    return out;
  }

  ComplexMatrix m = scale * a;
  ComplexMatrix out = m.exp();
  if (!out.allFinite())
    throw NumericError("mat_exp: exponential did not converge, scaled norm " +
                       std::to_string(m.norm()));
  return out;
}

bool is_valid_density(const ComplexMatrix& a, const Tolerances& tol) {
  if (a.rows() != a.cols() || !a.allFinite()) return false;
  if ((a - a.adjoint()).norm() > tol.herm) return false;
  if (std::abs(a.trace() - Complex{1.0, 0.0}) > tol.trace) return false;
  const ComplexMatrix h = 0.5 * (a + a.adjoint());
  return min_eigenvalue(h) >= -tol.psd;
}

void require_density(const ComplexMatrix& a, const Tolerances& tol, const char* what) {
  if (!is_valid_density(a, tol))
    throw std::invalid_argument(std::string(what) + " is not a valid density matrix");
}

ComplexMatrix basis_projector(Index d, Index i) {
  ComplexMatrix p = ComplexMatrix::Zero(d, d);
  p(i, i) = 1.0;
  return p;
}

ComplexVector basis_vector(Index d, Index i) {
  ComplexVector v = ComplexVector::Zero(d);
  v(i) = 1.0;
  return v;
}

ComplexMatrix annihilation_operator(Index n_max) {
  ComplexMatrix a = ComplexMatrix::Zero(n_max, n_max);
  for (Index n = 1; n < n_max; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

std::vector<Index> swap_digits_permutation(const std::vector<Index>& dims,
                                           std::size_t a, std::size_t b) {
  if (a >= dims.size() || b >= dims.size())
    throw std::invalid_argument("swap_digits_permutation: subsystem out of range");
  if (dims[a] != dims[b])
    throw DimensionError("swap_digits_permutation: subsystem dimensions differ");
  const auto strides = subsystem_strides(dims);
  Index total = 1;
  for (Index d : dims) total *= d;
  std::vector<Index> perm(static_cast<std::size_t>(total));
  for (Index r = 0; r < total; ++r) {
    const Index da = (r / strides[a]) % dims[a];
    const Index db = (r / strides[b]) % dims[b];
    perm[static_cast<std::size_t>(r)] =
        r + (db - da) * strides[a] + (da - db) * strides[b];
  }
  return perm;
}

ComplexMatrix conjugate_by_permutation(const ComplexMatrix& m,
                                       const std::vector<Index>& perm) {
  ComplexMatrix out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      out(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]) = m(i, j);
  return out;
}

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << Complex{0, 0}, Complex{0, -1}, Complex{0, 1}, Complex{0, 0};
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace sbqs
