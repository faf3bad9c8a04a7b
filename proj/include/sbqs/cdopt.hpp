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

#include <variant>
#include <vector>

#include "sbqs/decompose.hpp"
#include "sbqs/dme.hpp"
#include "sbqs/types.hpp"

namespace sbqs {

/// Ramp s(t) sampled on a uniform grid over [0, T], s(0) = 0, s(T) = 1,
/// monotone; tau is the finite-difference lag, an integer multiple of delta.
struct Schedule {
  std::vector<double> samples;
  double T = 1.0;
  double tau = 5e-3;
  double delta = 1e-3;

  double at(double t) const;
  void validate() const;

  static Schedule linear(double T, double delta, double tau);
  static Schedule smooth(double T, double delta, double tau);  // sin^2 ramp
};

/// H(sigma) = fixed_part + sum_k c_k Tr[xi_k sigma] rho_k.
struct StateDependentTarget {
  ComplexMatrix fixed_part;
  struct Coupling {
    double c;
    ComplexMatrix xi;
    ComplexMatrix rho;
  };
  std::vector<Coupling> couplings;

  ComplexMatrix evaluate(const ComplexMatrix& sigma) const;
};

struct CdProblem {
  ComplexMatrix H0;
  std::variant<ComplexMatrix, StateDependentTarget> target;
  ComplexVector psi0;  // ground state of H0

  void validate() const;
  ComplexMatrix target_at(double s, const ComplexMatrix& sigma) const;
};

enum class CdMode { Exact, Circuit };

/// Choice of counterdiabatic term along a run. LaggedDifference is the
/// literal finite-difference feedback H(t) - (i/tau)[sigma(t-tau), sigma(t)].
/// Beware: that closed loop anti-damps transverse deviations at rate up to
/// O(1/tau) (the backward difference has positive real loop gain at every
/// frequency), so long sweeps saturate in a limit cycle instead of tracking;
/// Off runs the plain interpolated Hamiltonian, which converges for slow
/// schedules. See the README for the stability discussion.
enum class CdTermMode { LaggedDifference, Off };

struct CdOptions {
  CdMode realization = CdMode::Exact;
  CdTermMode cd_term = CdTermMode::LaggedDifference;
};

/// One step of H(t) - (i/tau)[sigma(t-tau), sigma(t)]. The commutator part is
/// Hermitian by construction; the circuit route realizes it as two heralded
/// exponentiations of the positive operators (s_lag -+ i s_now)(s_lag +- i s_now).
ComplexMatrix cd_step(const ComplexMatrix& h_t, const ComplexMatrix& sigma_now,
                      const ComplexMatrix& sigma_lag, double tau, double delta,
                      CdMode mode = CdMode::Exact);

struct AdiabaticResult {
  ComplexMatrix sigma;
  double energy = 0.0;
  std::vector<double> times;
  std::vector<double> energies;
  std::vector<double> residuals;   // ||[H(t), sigma]||_F
  std::vector<double> fidelities;  // Uhlmann against the instantaneous ground state
  bool degenerate_gap_warning = false;
  double error_budget = 0.0;
};

AdiabaticResult run_adiabatic(const CdProblem& p, const Schedule& sched,
                              const CdOptions& opts = {});

/// Adiabatic-CD ground-state energy of (A^2 (x) I + I (x) A^2)/2 - A (x) A on
/// the doubled space: a lower bound for the variance over product states.
double variance_lower_bound(const ComplexMatrix& a, const Schedule& sched,
                            const ComplexMatrix& h0_doubled, const CdOptions& opts = {});

enum class VarianceSign { Minus, Plus };

struct VarianceOptimum {
  ComplexMatrix sigma;
  double variance = 0.0;
  double eigenstate_residual = 0.0;  // ||[A, sigma]||_F
};

/// Counterdiabatic run toward the state-dependent H(sigma) = A^2 - <A> A
/// (Minus, consistent with the variance identity; Plus kept behind the flag).
VarianceOptimum variance_exact_optimum(const ComplexMatrix& a, const ComplexMatrix& h0,
                                       const Schedule& sched,
                                       VarianceSign sign = VarianceSign::Minus,
                                       const CdOptions& opts = {});

/// Lowest-eigenvalue eigenvector.
ComplexVector ground_state(const ComplexMatrix& h);

}  // namespace sbqs
