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

#include "sbqs/decompose.hpp"

#include <algorithm>
#include <cmath>

namespace sbqs {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_reconstruction(StateDecomposition& d, const ComplexMatrix& source,
                          double tol) {
  d.reconstruction_error = frobenius_distance(reconstruct(d), source);
  if (d.reconstruction_error > tol)
    throw NumericError("decomposition reconstruction error " +
                       std::to_string(d.reconstruction_error) + " exceeds " +
                       std::to_string(tol));
}

ComplexMatrix pair_projector(Index d, Index m, Index n, Complex phase) {
  // |v><v| with |v> = (|m> + phase |n>)/sqrt2.
  ComplexVector v = ComplexVector::Zero(d);
  v(m) = 1.0 / std::sqrt(2.0);
  v(n) = phase / std::sqrt(2.0);
  return v * v.adjoint();
}

}  // namespace

ComplexMatrix reconstruct(const StateDecomposition& d) {
  ComplexMatrix out = d.identity_offset * identity(d.dim);
  for (const auto& t : d.terms) out += t.weight * t.rho;
  return out;
}

StateDecomposition polarization_decompose(const ComplexMatrix& h, const Tolerances& tol) {
  if (h.rows() != h.cols()) throw std::invalid_argument("polarization: matrix must be square");
  if (!is_hermitian(h, tol.herm))
    throw std::invalid_argument("polarization: input is not Hermitian");
  const Index d = h.rows();
  const double prune = 1e-14 * std::max(1.0, h.norm());

  StateDecomposition out;
  out.dim = d;
  std::vector<double> diag(static_cast<std::size_t>(d));
  for (Index m = 0; m < d; ++m) diag[static_cast<std::size_t>(m)] = h(m, m).real();

  // H_mn|m><n| + H_mn^*|n><m| = 2a P+ - 2b P- + (b - a)(|m><m| + |n><n|)
  // with a = Re H_mn, b = Im H_mn; row-major pair order.
  for (Index m = 0; m < d; ++m) {
    for (Index n = m + 1; n < d; ++n) {
      const double a = h(m, n).real();
      const double b = h(m, n).imag();
      if (std::abs(a) > prune)
        out.terms.push_back({Complex{2.0 * a, 0.0}, pair_projector(d, m, n, 1.0)});
      if (std::abs(b) > prune)
        out.terms.push_back({Complex{-2.0 * b, 0.0}, pair_projector(d, m, n, kImag)});
      diag[static_cast<std::size_t>(m)] += b - a;
      diag[static_cast<std::size_t>(n)] += b - a;
    }
  }

  const bool uniform = std::all_of(diag.begin(), diag.end(), [&](double w) {
    return std::abs(w - diag[0]) <= prune;
  });
  if (uniform && d > 0 && std::abs(diag[0]) > prune) {
    out.identity_offset = Complex{diag[0], 0.0};
  } else {
    for (Index m = 0; m < d; ++m) {
      const double w = diag[static_cast<std::size_t>(m)];
      if (std::abs(w) > prune)
        out.terms.push_back({Complex{w, 0.0}, basis_projector(d, m)});
    }
  }

  check_reconstruction(out, h, tol.recon);
  return out;
}

StateDecomposition support_split_decompose(const ComplexMatrix& h, const Tolerances& tol) {
  if (!is_hermitian(h, tol.herm))
    throw std::invalid_argument("support split: input is not Hermitian");
  const Index d = h.rows();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (h + h.adjoint()));
  const double cutoff = 1e-12 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());

  ComplexMatrix pos = ComplexMatrix::Zero(d, d);
  ComplexMatrix neg = ComplexMatrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    const double lam = es.eigenvalues()(i);
    const ComplexVector v = es.eigenvectors().col(i);
    if (lam > cutoff)
      pos += lam * (v * v.adjoint()).eval();
    else if (lam < -cutoff)
      neg -= lam * (v * v.adjoint()).eval();
  }

  StateDecomposition out;
  out.dim = d;
  const double tp = pos.trace().real();
  const double tn = neg.trace().real();
  if (tp > 0) out.terms.push_back({Complex{tp, 0.0}, pos / tp});
  if (tn > 0) out.terms.push_back({Complex{-tn, 0.0}, neg / tn});
  check_reconstruction(out, h, tol.recon);
  return out;
}

StateDecomposition shift_normalize_decompose(const ComplexMatrix& h, double margin,
                                             const Tolerances& tol) {
  if (!is_hermitian(h, tol.herm))
    throw std::invalid_argument("shift normalize: input is not Hermitian");
  if (margin < 0) throw std::invalid_argument("shift normalize: margin must be >= 0");
  const Index d = h.rows();

  StateDecomposition out;
  out.dim = d;
  const Complex mean = h.trace() / double(d);
  if ((h - mean * identity(d)).norm() <= 1e-14 * std::max(1.0, h.norm())) {
    // Degenerate case H = c*I: rho_H = I/d carries the full trace.
    if (std::abs(h.trace()) > 0)
      out.terms.push_back({h.trace(), identity(d) / double(d)});
    check_reconstruction(out, h, tol.recon);
    return out;
  }

  const double lam_min = min_eigenvalue(h);
  const double s = std::max(0.0, -lam_min) + margin;
  const double weight = h.trace().real() + double(d) * s;
  ComplexMatrix rho = (h + s * identity(d)) / weight;
  out.terms.push_back({Complex{weight, 0.0}, std::move(rho)});
  out.identity_offset = Complex{-s, 0.0};
  check_reconstruction(out, h, tol.recon);
  return out;
}

std::vector<Complex> coherent_grid_points(const CoherentGrid& grid) {
  if (grid.delta <= 0 || grid.cutoff <= 0)
    throw std::invalid_argument("coherent grid: delta and cutoff must be positive");
  std::vector<Complex> pts;
  const auto half = static_cast<long>(std::floor(grid.cutoff / grid.delta));
  for (long p = -half; p <= half; ++p)
    for (long q = -half; q <= half; ++q) {
      const Complex alpha{grid.delta * double(p), grid.delta * double(q)};
      if (std::abs(alpha) <= grid.cutoff) pts.push_back(alpha);
    }
  return pts;
}

ComplexVector truncated_coherent_state(Complex alpha, Index n_max) {
  if (n_max < 2) throw std::invalid_argument("coherent state: n_max must be >= 2");
  ComplexVector v(n_max);
  Complex amp = std::exp(-0.5 * std::norm(alpha));
  v(0) = amp;
  for (Index n = 1; n < n_max; ++n) {
    amp *= alpha / std::sqrt(double(n));
    v(n) = amp;
  }
  return v / v.norm();
}

namespace {

double truncated_norm(double abs_alpha, Index n_max) {
  // Norm of the truncated (unnormalized) coherent state at |alpha|.
  const double lam = abs_alpha * abs_alpha;
  double term = std::exp(-lam);
  double acc = term;
  for (Index n = 1; n < n_max; ++n) {
    term *= lam / double(n);
    acc += term;
  }
  return std::sqrt(std::min(1.0, acc));
}

}  // namespace

StateDecomposition coherent_grid_decompose(const std::vector<AntinormalMonomial>& poly,
                                           const CoherentGrid& grid) {
  if (truncated_norm(grid.cutoff, grid.n_max) < 1.0 - 1e-6)
    throw NumericError("coherent grid: Fock truncation n_max=" +
                       std::to_string(grid.n_max) +
                       " loses coherent-state norm at the cutoff");

  StateDecomposition out;
  out.dim = grid.n_max;
  if (poly.empty()) return out;

  const double cell = grid.delta * grid.delta / kPi;
  for (const Complex& alpha : coherent_grid_points(grid)) {
    Complex w{0.0, 0.0};
    for (const auto& mono : poly)
      w += mono.coeff * std::pow(alpha, mono.m) * std::pow(std::conj(alpha), mono.n);
    w *= cell;
    if (std::abs(w) == 0.0) continue;
    const ComplexVector v = truncated_coherent_state(alpha, grid.n_max);
    out.terms.push_back({w, v * v.adjoint()});
  }

  // Discretized P-form reconstruction error against the truncated operator.
  ComplexMatrix truth = ComplexMatrix::Zero(grid.n_max, grid.n_max);
  const ComplexMatrix a = annihilation_operator(grid.n_max);
  const ComplexMatrix ad = a.adjoint();
  for (const auto& mono : poly) {
    ComplexMatrix term = identity(grid.n_max);
    for (int i = 0; i < mono.m; ++i) term = term * a;
    for (int i = 0; i < mono.n; ++i) term = term * ad;
    truth += mono.coeff * term;
  }
  out.reconstruction_error = frobenius_distance(reconstruct(out), truth);
  return out;
}

}  // namespace sbqs
