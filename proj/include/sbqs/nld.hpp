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
#include <map>
#include <optional>
#include <vector>

#include "sbqs/nonlinear.hpp"
#include "sbqs/types.hpp"

namespace sbqs {

/// Exponent pattern of one monomial: (time slot j, variable i) -> power.
/// Slot 0 is the current time; slots 1..N follow the system's delay list.
struct Monomial {
  std::map<std::pair<int, int>, int> exps;

  int total_degree() const;
  int degree_at_slot(int j) const;
  bool operator<(const Monomial& other) const { return exps < other.exps; }
};

struct NldCoefficient {
  int m = 1;
  int n = 1;
  Monomial monomial;  // over user variables i = 1..D
  double value = 0.0;
};

/// dx_m/dt = sum_n f_mn(x(t), x(t-a_1), ...) x_n with polynomial f_mn.
struct NldSystem {
  int D = 1;
  std::vector<double> delays;  // a_1..a_N, all > 0
  std::vector<int> degrees;    // declared degree bounds l_0..l_N
  std::vector<NldCoefficient> coefficients;
  double x0 = 0.5;
  double alpha = 1.0;  // stored variables are alpha * x
  int taylor_order = 2;

  int slot_count() const { return int(delays.size()) + 1; }
  void validate() const;
};

/// alpha = 0.9 / (B sqrt(D+1)) for a bound B on max_t |x(t)|_inf.
double auto_alpha(double bound, int D);

/// Unit vector (x0, alpha x_1 .. alpha x_D, slack).
struct EmbeddedState {
  ComplexVector psi;
};

EmbeddedState embed(const RealVector& x, const NldSystem& sys);
RealVector read_out(const EmbeddedState& state, const NldSystem& sys);

/// Dense F_mn on the copy space, such that <Psi|F_mn|Psi> = f_mn for
/// Psi = (x) over slots of the embedded state at the slot's time.
ComplexMatrix build_Fmn(const NldSystem& sys, int m, int n);

/// Number of product states in the expansion of F_mn.
long fmn_state_count(const NldSystem& sys, int m, int n);

/// Copies of the embedded state consumed per coupling estimate.
long copy_count(const NldSystem& sys);

struct NldOptions {
  bool circuit = false;  // route every coupling through chained c-SWAPs
  long record_stride = 0;
  std::uint64_t seed = 0;
};

struct NldResult {
  std::vector<double> times;
  std::vector<RealVector> x;
  ResourceReport report;
  double slack_taylor_error = 0.0;  // max_t (1 - x_{D+1})^taylor_order
  double x0_drift = 0.0;            // max_t |psi_0 - x0|
  double error_budget = 0.0;
};

NldResult solve_nld(const NldSystem& sys, const std::function<RealVector(double)>& history,
                    double T, double delta, const NldOptions& opts = {});

/// dx/dt = (r-1) x - r alpha x^2 driven through the full pipeline.
NldResult logistic_report(double r, double alpha, double x0, double x_init, double T,
                          double delta, const NldOptions& opts = {});

}  // namespace sbqs
