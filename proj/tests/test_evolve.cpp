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

#include <catch2/catch_amalgamated.hpp>

#include "sbqs/evolve.hpp"
#include "sbqs/oracle.hpp"
#include "test_helpers.hpp"

using namespace sbqs;
using test::random_density;
using test::random_hermitian;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_CASE("plan basics") {
  const StateDecomposition d = polarization_decompose(pauli_x());
  const TrotterPlan p0 = plan(d, 0.0, 1e-4);
  REQUIRE(p0.n == 1);
  REQUIRE(p0.delta == 0.0);

  const TrotterPlan p1 = plan(d, 1.0, 0.1);
  const TrotterPlan p2 = plan(d, 1.0, 0.05);
  REQUIRE(p2.n >= 2 * p1.n - 1);

  REQUIRE_THROWS_AS(plan(d, 100.0, 1e-9), BudgetError);
}

TEST_CASE("plan honors the per-term angle guard") {
  StateDecomposition d;
  d.dim = 2;
  d.terms.push_back({Complex{50.0, 0.0}, basis_projector(2, 0)});
  const TrotterPlan p = plan(d, 1.0, 1e6);  // loose error target
  REQUIRE(std::abs(d.terms[0].weight) * p.delta <= 0.1 + 1e-12);
}

TEST_CASE("empty decomposition leaves the state constant") {
  std::mt19937_64 rng(3);
  StateDecomposition d;
  d.dim = 3;
  const ComplexMatrix sigma0 = random_density(3, rng);
  const Trajectory traj = simulate_linear(d, sigma0, 1.0, plan(d, 1.0, 1e-3));
  REQUIRE(frobenius_distance(traj.final_state(), sigma0) < 1e-14);
}

TEST_CASE("sigma_z dephasing picks up the right off-diagonal phase") {
  const StateDecomposition d = polarization_decompose(pauli_z());
  const ComplexMatrix sigma0 = test::projector(test::plus_state());
  const double t = kPi / 2.0;
  const TrotterPlan p = plan(d, t, 1e-4);
  const Trajectory traj = simulate_linear(d, sigma0, t, p);

  const ComplexMatrix expected = oracle::exact_unitary(pauli_z(), sigma0, t);
  REQUIRE(frobenius_distance(traj.final_state(), expected) <= 1e-4);
  REQUIRE(std::abs(traj.final_state()(0, 1) - Complex{-0.5, 0.0}) <= 1e-4);
}

TEST_CASE("single-term evolution meets the planned error target") {
  const StateDecomposition d = polarization_decompose(pauli_x());
  const ComplexMatrix sigma0 = basis_projector(2, 0);
  const TrotterPlan p = plan(d, 1.0, 1e-4);
  const Trajectory traj = simulate_linear(d, sigma0, 1.0, p);
  const ComplexMatrix expected = oracle::exact_unitary(pauli_x(), sigma0, 1.0);
  REQUIRE(frobenius_distance(traj.final_state(), expected) <= 1e-4);
}

TEST_CASE("identity offset does not change the trajectory") {
  std::mt19937_64 rng(7);
  const ComplexMatrix h = random_hermitian(3, rng);
  const ComplexMatrix sigma0 = random_density(3, rng);
  StateDecomposition d = polarization_decompose(h);
  StateDecomposition shifted = d;
  shifted.identity_offset += Complex{2.5, 0.0};

  const TrotterPlan p = plan_with_steps(d, 0.7, 400);
  const ComplexMatrix a = simulate_linear(d, sigma0, 0.7, p).final_state();
  const ComplexMatrix b = simulate_linear(shifted, sigma0, 0.7, p).final_state();
  REQUIRE(frobenius_distance(a, b) < 1e-13);
}

TEST_CASE("realized Trotter error scales as 1/n") {
  std::mt19937_64 rng(11);
  const ComplexMatrix h = random_hermitian(4, rng);
  const ComplexMatrix sigma0 = random_density(4, rng);
  const StateDecomposition d = polarization_decompose(h);
  const ComplexMatrix expected = oracle::exact_unitary(h, sigma0, 1.0);

  std::vector<double> ns{100, 200, 400, 800};
  std::vector<double> errs;
  for (double n : ns) {
    const TrotterPlan p = plan_with_steps(d, 1.0, long(n));
    errs.push_back(
        frobenius_distance(simulate_linear(d, sigma0, 1.0, p).final_state(), expected));
  }
  const double slope = -test::loglog_slope(ns, errs);
  REQUIRE(slope > 0.8);
  REQUIRE(slope < 1.2);
}

TEST_CASE("trace and positivity hold along the trajectory") {
  std::mt19937_64 rng(13);
  const ComplexMatrix h = random_hermitian(4, rng);
  const ComplexMatrix sigma0 = random_density(4, rng);
  const StateDecomposition d = polarization_decompose(h);
  const TrotterPlan p = plan_with_steps(d, 0.5, 200);
  SimOptions opts;
  opts.record_stride = 20;
  const Trajectory traj = simulate_linear(d, sigma0, 0.5, p, opts);
  for (const auto& state : traj.states) REQUIRE(is_valid_density(state, Tolerances{}));
}

TEST_CASE("term order changes stay within the Trotter bound") {
  std::mt19937_64 rng(17);
  const ComplexMatrix h = random_hermitian(4, rng);
  const ComplexMatrix sigma0 = random_density(4, rng);
  const StateDecomposition d = polarization_decompose(h);

  const double t = 1.0;
  TrotterPlan p = plan_with_steps(d, t, 300);
  const ComplexMatrix base = simulate_linear(d, sigma0, t, p).final_state();
  shuffle_term_order(p, 123);
  const ComplexMatrix shuffled = simulate_linear(d, sigma0, t, p).final_state();

  const double bound = 2.0 * t * t * d.weight_l1() * d.weight_l1() / double(p.n);
  REQUIRE(frobenius_distance(base, shuffled) <= bound);
}

TEST_CASE("circuit-mode evolution tracks the exact mode") {
  std::mt19937_64 rng(19);
  const ComplexMatrix h = random_hermitian(2, rng);
  const ComplexMatrix sigma0 = random_density(2, rng);
  const StateDecomposition d = polarization_decompose(h);
  const TrotterPlan p = plan_with_steps(d, 0.4, 200);

  SimOptions exact;
  SimOptions circuit;
  circuit.kind = StepKind::Cswap;
  const ComplexMatrix a = simulate_linear(d, sigma0, 0.4, p, exact).final_state();
  const Trajectory tc = simulate_linear(d, sigma0, 0.4, p, circuit);
  REQUIRE(frobenius_distance(a, tc.final_state()) < 5e-3);
  REQUIRE_FALSE(tc.herald_probs.empty());
  for (double prob : tc.herald_probs) {
    REQUIRE(prob >= 0.45);
    REQUIRE(prob <= 0.55);
  }
}
