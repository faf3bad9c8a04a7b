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

#include "sbqs/tensor.hpp"
#include "sbqs/types.hpp"

namespace sbqs {

/// Expansion of an operator as sum_j h_j rho_j + identity_offset * I,
/// where every rho_j is a valid density matrix.
struct StateDecomposition {
  struct Term {
    Complex weight;
    ComplexMatrix rho;
  };

  Index dim = 0;
  std::vector<Term> terms;
  Complex identity_offset{0.0, 0.0};
  // Frobenius distance between reconstruct() and the source operator. Exact
  // methods keep this at rounding level; the coherent grid reports its
  // discretization error here instead of failing.
  double reconstruction_error = 0.0;

  double weight_l1() const {
    double s = 0;
    for (const auto& t : terms) s += std::abs(t.weight);
    return s;
  }
};

ComplexMatrix reconstruct(const StateDecomposition& d);

/// Exact decomposition of a Hermitian operator over computational-basis
/// projectors |m><m| and the pair states (|m>+|n>)/sqrt2, (|m>+i|n>)/sqrt2.
/// Off-diagonal pairs are folded through Hermiticity so all weights are real.
StateDecomposition polarization_decompose(const ComplexMatrix& h,
                                          const Tolerances& tol = {});

/// H = Tr[H+] rho+ - Tr[H-] rho- from the positive/negative spectral supports.
StateDecomposition support_split_decompose(const ComplexMatrix& h,
                                           const Tolerances& tol = {});

/// Single-state form (Tr[H] + d*s) rho_H with identity offset -s, where
/// s = max(0, -lambda_min) + margin makes H + s*I positive semidefinite.
StateDecomposition shift_normalize_decompose(const ComplexMatrix& h,
                                             double margin = 0.0,
                                             const Tolerances& tol = {});

/// Square grid of coherent-state amplitudes, spacing delta, clipped at
/// |alpha| <= cutoff, on an n_max-dimensional truncated Fock space.
struct CoherentGrid {
  double delta;
  double cutoff;
  Index n_max;
};

/// One antinormal-ordered monomial J * a^m a^dag^n.
struct AntinormalMonomial {
  int m;
  int n;
  Complex coeff;
};

std::vector<Complex> coherent_grid_points(const CoherentGrid& grid);

/// Fock-truncated coherent state, renormalized after truncation. Throws
/// NumericError when the truncated norm at |alpha| falls below 1 - 1e-6.
ComplexVector truncated_coherent_state(Complex alpha, Index n_max);

/// Diagonal coherent-state decomposition of sum_mn J_mn a^m a^dag^n on the
/// truncated space. Discretization error is O(delta^2) and is reported in
/// reconstruction_error rather than enforced.
StateDecomposition coherent_grid_decompose(const std::vector<AntinormalMonomial>& poly,
                                           const CoherentGrid& grid);

}  // namespace sbqs
