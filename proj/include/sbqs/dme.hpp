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

#include <random>
#include <vector>

#include "sbqs/tensor.hpp"
#include "sbqs/types.hpp"

namespace sbqs {

/// Control qubit prepared as |0> - i c delta |1>. Kept unnormalized by
/// default (the deviation from unit norm is O(delta^2)); strict mode
/// renormalizes at preparation.
struct ControlQubit {
  Complex amp0{1.0, 0.0};
  Complex amp1{0.0, 0.0};

  static ControlQubit standard(Complex c, double delta, bool strict = false);
  Complex ratio() const { return amp1 / amp0; }
  ComplexMatrix density() const;
};

enum class HeraldMode { ExactConditional, Sampled };

struct HeraldResult {
  ComplexMatrix state;
  double p_herald = 0.0;
  HeraldMode mode = HeraldMode::ExactConditional;
  long attempts = 1;
};

/// A resource state prepared for repeated exponentiation. Caches the spectral
/// data of rho so that e^{-i theta rho} applications stay cheap; pure
/// resources use the closed rank-1 form e^{-i theta P} = I + (e^{-i theta}-1)P.
class GeneratorTerm {
 public:
  explicit GeneratorTerm(ComplexMatrix rho);

  const ComplexMatrix& rho() const { return rho_; }
  bool pure() const { return pure_; }
  Index dim() const { return rho_.rows(); }

  ComplexMatrix propagator(Complex theta) const;

  /// sigma -> e^{-i theta rho} sigma e^{+i conj(theta) rho}.
  ComplexMatrix conjugate(const ComplexMatrix& sigma, Complex theta,
                          bool renormalize = true) const;

  /// psi -> e^{-i theta rho} psi.
  ComplexVector apply(const ComplexVector& psi, Complex theta,
                      bool renormalize = true) const;

 private:
  ComplexMatrix rho_;
  bool pure_ = false;
  ComplexVector carrier_;   // rank-1 direction when pure
  ComplexMatrix evecs_;     // spectral data otherwise
  RealVector evals_;
};

/// sigma -> e^{-i h_delta rho} sigma e^{+i h_delta rho}, exact.
ComplexMatrix dme_channel_exact(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                                double h_delta);

/// One-off variants of GeneratorTerm::conjugate / ::apply.
ComplexMatrix conjugate_by_generator(const ComplexMatrix& sigma, const ComplexMatrix& rho,
                                     Complex theta, bool renormalize = true);
ComplexVector apply_generator(const ComplexVector& psi, const ComplexMatrix& rho,
                              Complex theta, bool renormalize = true);

struct CswapOptions {
  HeraldMode mode = HeraldMode::ExactConditional;
  std::mt19937_64* rng = nullptr;  // required for Sampled
  bool strict_control = false;
  double guard = 0.1;  // maximum |c * delta|
};

/// The explicit circuit: control (x) rho (x) sigma, c-SWAP
/// U = |0><0| (x) I + |1><1| (x) S, heralded |+> measurement on the control,
/// trace over control and resource.
HeraldResult dme_cswap_apply(const ControlQubit& control, const ComplexMatrix& rho,
                             const ComplexMatrix& sigma,
                             HeraldMode mode = HeraldMode::ExactConditional,
                             std::mt19937_64* rng = nullptr);

HeraldResult dme_cswap_step(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                            double delta, double c, const CswapOptions& opts = {});

/// Same circuit with a complex coupling folded into the control amplitude.
HeraldResult dme_cswap_step_weighted(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                                     double delta, Complex c, const CswapOptions& opts = {});

/// Tr_1[e^{-i S delta} (rho (x) sigma) e^{+i ...}]. Complex delta follows the
/// non-Hermitian contract (renormalized).
ComplexMatrix eswap_step(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                         Complex delta);

enum class StepKind { Exact, Cswap, Eswap };

struct RepeatStats {
  std::vector<double> herald_probs;
  long attempts = 0;
};

/// n-fold composition of the chosen step with per-step angle h*t/n,
/// approximating e^{-i h t rho} sigma e^{+i h t rho} to O(1/n).
ComplexMatrix dme_repeat(const ComplexMatrix& rho, const ComplexMatrix& sigma0, double h,
                         double t, long n, StepKind kind, const CswapOptions& opts = {},
                         RepeatStats* stats = nullptr);

}  // namespace sbqs
