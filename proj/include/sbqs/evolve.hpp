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
#include "sbqs/dme.hpp"
#include "sbqs/types.hpp"

namespace sbqs {

struct TrotterPlan {
  long n = 1;
  double delta = 0.0;
  std::vector<std::size_t> term_order;
  double target_error = 0.0;
};

/// First-order product-formula schedule: n = ceil(t^2 (sum|h_j|)^2 / eps),
/// refined so every per-term angle |h_j| * delta stays within the step guard.
TrotterPlan plan(const StateDecomposition& d, double t, double eps,
                 long max_steps = 1'000'000);

TrotterPlan plan_with_steps(const StateDecomposition& d, double t, long n);

/// Seed-controlled term-order shuffle for order-sensitivity studies.
void shuffle_term_order(TrotterPlan& p, std::uint64_t seed);

struct Trajectory {
  std::vector<double> times;
  std::vector<ComplexMatrix> states;
  std::vector<double> herald_probs;  // one entry per heralded circuit step
  double error_budget = 0.0;

  const ComplexMatrix& final_state() const { return states.back(); }
};

struct SimOptions {
  StepKind kind = StepKind::Exact;
  HeraldMode herald = HeraldMode::ExactConditional;
  std::uint64_t seed = 0;
  long record_stride = 0;  // 0: choose a stride that keeps ~100 samples
  double guard = 0.1;
};

/// Evolves sigma0 by (prod_j e^{-i delta h_j rho_j})^n. Complex weights follow
/// the non-Hermitian contract e^{-i H delta} sigma e^{+i H^dag delta} with
/// renormalization; the identity offset is dropped (pure phase).
Trajectory simulate_linear(const StateDecomposition& d, const ComplexMatrix& sigma0,
                           double t, const TrotterPlan& p, const SimOptions& opts = {});

}  // namespace sbqs
