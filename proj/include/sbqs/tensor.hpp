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

#pragma once

#include <vector>

#include "sbqs/types.hpp"

namespace sbqs {

/// A state or operator on a tensor-product space together with its
/// subsystem signature. dims[0] is the most significant factor.
struct QRegister {
  std::vector<Index> dims;
  ComplexMatrix state;

  Index dim() const {
    Index d = 1;
    for (Index s : dims) d *= s;
    return d;
  }
};

ComplexMatrix identity(Index d);

/// Kronecker product with dims[0]-major ordering. Throws DimensionError when
/// the product space exceeds max_composite_dim().
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// SWAP operator on d x d: S|i>|j> = |j>|i>. Hermitian, unitary, S^2 = I.
ComplexMatrix swap_operator(Index d);

/// Trace out every subsystem not listed in keep (ascending indices into
/// reg.dims). The result keeps the relative order of the kept subsystems.
QRegister partial_trace(const QRegister& reg, const std::vector<std::size_t>& keep);

/// Row-major vectorization |A>> = sum_ij A_ij |i>|j| as a column vector,
/// so that |ABC>> = (A (x) C^T)|B>>.
ComplexMatrix vectorize(const ComplexMatrix& a);
ComplexMatrix devectorize(const ComplexMatrix& column);

/// e^{scale * a}. Hermitian and skew-Hermitian inputs go through an
/// eigendecomposition; everything else through scaling-and-squaring Pade.
ComplexMatrix mat_exp(const ComplexMatrix& a, Complex scale = Complex{1.0, 0.0});

bool is_hermitian(const ComplexMatrix& a, double tol);
double min_eigenvalue(const ComplexMatrix& hermitian);
double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// Density-matrix validity: Hermitian within tol.herm, |Tr - 1| <= tol.trace,
/// eigenvalues >= -tol.psd, all entries finite.
bool is_valid_density(const ComplexMatrix& a, const Tolerances& tol = {});
void require_density(const ComplexMatrix& a, const Tolerances& tol = {},
                     const char* what = "state");

/// Throws NumericError if any entry is NaN or infinite.
void ensure_finite(const ComplexMatrix& a, const char* what);

ComplexMatrix basis_projector(Index d, Index i);
ComplexVector basis_vector(Index d, Index i);

/// Truncated-Fock annihilation operator, a|n> = sqrt(n)|n-1>.
ComplexMatrix annihilation_operator(Index n_max);

/// Basis permutation sending |digits> to |digits with a and b exchanged>,
/// as an index map p with U|k> = |p(k)>. dims describes the full register.
std::vector<Index> swap_digits_permutation(const std::vector<Index>& dims,
                                           std::size_t a, std::size_t b);

/// U M U^dag for a basis-permutation unitary U given by its index map.
ComplexMatrix conjugate_by_permutation(const ComplexMatrix& m,
                                       const std::vector<Index>& perm);

// Pauli matrices in the computational basis.
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

}  // namespace sbqs
