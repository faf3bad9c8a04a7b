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

#include <functional>
#include <vector>

#include "sbqs/open.hpp"
#include "sbqs/types.hpp"

// Classical ground truth, kept independent of the state-based simulation
// path: nothing here calls into dme, evolve, or nonlinear.

namespace sbqs::oracle {

/// e^{-iHt} sigma0 e^{+iHt} through an eigendecomposition of H.
ComplexMatrix exact_unitary(const ComplexMatrix& h, const ComplexMatrix& sigma0, double t);

/// RK4 on the matrix-valued master equation.
ComplexMatrix direct_lindblad(const LindbladSpec& spec, const ComplexMatrix& sigma0,
                              double t, double dt);

struct OdeProblem {
  // rhs(t, x, delayed) where delayed[j] = x(t - delays[j]).
  std::function<RealVector(double, const RealVector&, const std::vector<RealVector>&)> rhs;
  std::vector<double> delays;
  std::function<RealVector(double)> initial_history;  // defined on [-max delay, 0]
  double dt = 1e-4;
};

struct OdeTrajectory {
  std::vector<double> times;
  std::vector<RealVector> values;

  const RealVector& at_time(double t) const;
};

/// Classic RK4 with linear history interpolation on the dt grid. Nonzero
/// delays must be at least dt.
OdeTrajectory rk4_delay(const OdeProblem& p, double T);

/// Norm-preservation is monitored, not enforced: integrates
/// i dpsi/dt = (H0 + g diag(|psi|^2)) psi and reports the norm drift.
ComplexVector direct_gp(const ComplexMatrix& h0, double g, const ComplexVector& psi0,
                        double t, double dt, double* norm_drift = nullptr);

}  // namespace sbqs::oracle
