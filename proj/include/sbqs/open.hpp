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

#include <cstdint>
#include <vector>

#include "sbqs/decompose.hpp"
#include "sbqs/evolve.hpp"
#include "sbqs/types.hpp"

namespace sbqs {

struct Jump {
  ComplexMatrix L;
  double gamma;
};

struct LindbladSpec {
  ComplexMatrix H;
  std::vector<Jump> jumps;
};

/// Generator on the doubled space under row-major vectorization:
/// -i(H (x) I - I (x) H^T)
///   + sum_k gamma_k (L (x) L* - 1/2 L^dag L (x) I - 1/2 I (x) (L^dag L)^T).
ComplexMatrix vectorize_lindbladian(const LindbladSpec& spec);

/// Splits the generator into Hermitian and anti-Hermitian parts, polarization-
/// decomposes each, and merges with complex weights. Identity content of both
/// parts lands in the complex identity_offset (dropped during evolution; its
/// real part only rescales the vector norm).
StateDecomposition decompose_lindbladian(const ComplexMatrix& ll,
                                         const Tolerances& tol = {});

struct VectorizedState {
  ComplexVector psi;      // unit vector on the doubled space
  double norm0 = 1.0;     // sqrt(<<sigma(0)|sigma(0)>>)
  double log_norm = 0.0;  // accumulated log of per-step norm factors
};

/// sigma = sum_ij <ij|psi> |i><j| / sum_k <kk|psi>; trace 1 by construction.
/// Throws NumericError when the trace denominator falls below 1e-8.
ComplexMatrix readout_sigma(const ComplexVector& psi);

struct OpenOptions {
  StepKind kind = StepKind::Exact;
  HeraldMode herald = HeraldMode::ExactConditional;
  std::uint64_t seed = 0;
  long record_stride = 0;
  long max_steps = 1'000'000;
};

struct OpenResult {
  Trajectory trajectory;  // sigma(t) at sample times
  VectorizedState state;  // simulated vector at the final time
  Complex identity_offset;
  TrotterPlan schedule;
};

OpenResult simulate_open(const LindbladSpec& spec, const ComplexMatrix& sigma0, double t,
                         double eps, const OpenOptions& opts = {});

/// Expectation of A recovered the measurement way: project psi onto the
/// Gram-normalized eigenprojector vectors |P_i>>, recover p_i from the
/// relative weights p_i^2 (clamped nonnegative square root), normalize by
/// sum p_i = 1, and return sum a_i p_i. cross_check_error receives the
/// deviation from Tr[A sigma] on the readout state when requested.
double expectation_via_projectors(const VectorizedState& v, const ComplexMatrix& a,
                                  double* cross_check_error = nullptr);

}  // namespace sbqs
