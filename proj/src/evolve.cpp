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

#include "sbqs/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sbqs {

namespace {

std::vector<std::size_t> identity_order(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  return order;
}

}  // namespace

TrotterPlan plan(const StateDecomposition& d, double t, double eps, long max_steps) {
  if (eps <= 0) throw std::invalid_argument("plan: eps must be positive");
  TrotterPlan p;
  p.term_order = identity_order(d.terms.size());
  p.target_error = eps;
  if (t == 0.0 || d.terms.empty()) {
    p.n = 1;
    p.delta = t;  // no factors to apply when the term list is empty
    return p;
  }

  const double weight_sum = d.weight_l1();
  double weight_max = 0.0;
  for (const auto& term : d.terms) weight_max = std::max(weight_max, std::abs(term.weight));

  // C_plan = 1, a conservative constant for the first-order formula.
  const double n_error = std::ceil(t * t * weight_sum * weight_sum / eps);
  const double n_guard = std::ceil(std::abs(t) * weight_max / 0.1);
  const double n = std::max({1.0, n_error, n_guard});
  if (n > double(max_steps))
    throw BudgetError("plan: required steps " + std::to_string(n) + " exceed budget " +
                      std::to_string(max_steps));
  p.n = static_cast<long>(n);
  p.delta = t / double(p.n);
  return p;
}

TrotterPlan plan_with_steps(const StateDecomposition& d, double t, long n) {
  if (n < 1) throw std::invalid_argument("plan_with_steps: n must be >= 1");
  TrotterPlan p;
  p.n = n;
  p.delta = t / double(n);
  p.term_order = identity_order(d.terms.size());
  p.target_error = 0.0;
  return p;
}

void shuffle_term_order(TrotterPlan& p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::shuffle(p.term_order.begin(), p.term_order.end(), rng);
}

Trajectory simulate_linear(const StateDecomposition& d, const ComplexMatrix& sigma0,
                           double t, const TrotterPlan& p, const SimOptions& opts) {
  require_density(sigma0, Tolerances{}, "simulate_linear initial state");
  if (!d.terms.empty() && d.terms.front().rho.rows() != sigma0.rows())
    throw DimensionError("simulate_linear: decomposition and state dimensions differ");
  if (p.term_order.size() != d.terms.size())
    throw std::invalid_argument("simulate_linear: plan does not match decomposition");
  if (std::abs(double(p.n) * p.delta - t) > 1e-9 * std::max(1.0, std::abs(t)))
    throw std::invalid_argument("simulate_linear: plan was made for a different horizon");

  std::vector<GeneratorTerm> gens;
  std::vector<Complex> thetas;
  gens.reserve(d.terms.size());
  double weight_sum = 0.0;
  for (const auto& term : d.terms) {
    gens.emplace_back(term.rho);
    thetas.push_back(term.weight * p.delta);
    weight_sum += std::abs(term.weight);
  }

  std::mt19937_64 rng(opts.seed);
  const long stride =
      opts.record_stride > 0 ? opts.record_stride : std::max<long>(1, p.n / 100);

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(sigma0);

  ComplexMatrix sigma = sigma0;
  const double local_budget = std::pow(p.delta * weight_sum, 2);
  for (long step = 1; step <= p.n; ++step) {
    for (std::size_t idx : p.term_order) {
      switch (opts.kind) {
        case StepKind::Exact:
          sigma = gens[idx].conjugate(sigma, thetas[idx], true);
          break;
        case StepKind::Cswap: {
          CswapOptions copts;
          copts.mode = opts.herald;
          copts.rng = &rng;
          copts.guard = opts.guard;
          HeraldResult r =
              dme_cswap_step_weighted(d.terms[idx].rho, sigma, p.delta,
                                      d.terms[idx].weight, copts);
          traj.herald_probs.push_back(r.p_herald);
          sigma = std::move(r.state);
          break;
        }
        case StepKind::Eswap:
          sigma = eswap_step(d.terms[idx].rho, sigma, thetas[idx]);
          break;
      }
    }
    traj.error_budget += local_budget;
    if (step % stride == 0 || step == p.n) {
      traj.times.push_back(double(step) * p.delta);
      traj.states.push_back(sigma);
    }
  }
  return traj;
}

}  // namespace sbqs
