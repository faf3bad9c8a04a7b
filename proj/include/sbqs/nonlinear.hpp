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

#include <deque>
#include <string>
#include <vector>

#include "sbqs/evolve.hpp"
#include "sbqs/types.hpp"

namespace sbqs {

/// One coupling c * Tr[xi * Gamma] * rho with
/// Gamma = prod_j sigma^{powers[j]}(t - delays[j]), multiplied in list order.
struct HistoryTerm {
  double c = 0.0;
  ComplexMatrix xi;   // trace-unity positive operator
  ComplexMatrix rho;  // resource density
  std::vector<double> delays;
  std::vector<int> powers;

  long copies() const;  // sum of powers
  void validate(const Tolerances& tol = {}) const;
};

/// Ring of simulator states on the delta grid, newest first:
/// entry k holds sigma(t - k*delta).
class HistoryBuffer {
 public:
  HistoryBuffer(double delta, double max_delay, ComplexMatrix initial);
  HistoryBuffer(double delta, std::vector<ComplexMatrix> newest_first);

  double delta() const { return delta_; }
  std::size_t depth() const { return states_.size(); }
  const ComplexMatrix& current() const { return states_.front(); }

  /// Snaps the delay to the grid; a mismatch beyond delta/2 or a delay not
  /// covered by the stored window raises GridMismatchError.
  const ComplexMatrix& at_delay(double a) const;

  void push(ComplexMatrix next);

 private:
  double delta_;
  std::size_t capacity_;
  std::deque<ComplexMatrix> states_;
};

/// xi (x) Gamma register with N+1 parties (party 0 carries xi).
QRegister build_gamma_register(const HistoryTerm& term, const HistoryBuffer& buf);

/// Chained c-SWAP estimator: control |0> - i c delta |1> shared across N
/// adjacent-pair c-SWAPs, targets traced out. The returned amplitudes satisfy
/// amp1/amp0 = -i c delta Tr[xi Gamma].
ControlQubit chain_cswap_estimate(const QRegister& xi_gamma, Complex c, double delta);

struct NonlinearOptions {
  bool circuit = false;  // route couplings through chained c-SWAP circuits
  HeraldMode herald = HeraldMode::ExactConditional;
  std::uint64_t seed = 0;
  long record_stride = 0;
};

/// One heralded step of the history-dependent Hamiltonian c Tr[xi Gamma] rho
/// applied to the buffer's current state.
HeraldResult nonlinear_step(const HistoryTerm& term, const HistoryBuffer& buf,
                            double delta, const NonlinearOptions& opts = {});

/// Physical-copy cost model for a lab run of the same protocol.
struct ResourceReport {
  long steps = 0;
  long terms_per_step = 0;    // R
  long copies_per_term = 0;   // C
  double log10_rerun_copies = 0.0;         // n R C^n, re-running for past copies
  double log10_preprovision_copies = 0.0;  // provisioning all copies up front
  std::string model = "n*R*C^n";
};

/// Advances the buffer state over [0, T]: per step, every history term and
/// then every H0 term (optional linear part) is applied Trotter-style; the
/// new state is pushed into the buffer.
Trajectory simulate_history_dependent(const std::vector<HistoryTerm>& terms,
                                      const StateDecomposition* h0, HistoryBuffer buf,
                                      double T, double delta,
                                      const NonlinearOptions& opts = {},
                                      ResourceReport* report = nullptr);

}  // namespace sbqs
