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

#include "sbqs/oracle.hpp"
#include "test_helpers.hpp"

using namespace sbqs;
using test::random_density;
using test::random_hermitian;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_CASE("exact unitary basics") {
  std::mt19937_64 rng(3);
  const ComplexMatrix sigma0 = random_density(3, rng);
  REQUIRE(frobenius_distance(oracle::exact_unitary(ComplexMatrix::Zero(3, 3), sigma0, 1.0),
                             sigma0) < 1e-14);

  // e^{-i (pi/2) sz} = -i sz, so a quarter turn conjugates by sz.
  const ComplexMatrix flipped =
      oracle::exact_unitary(pauli_z(), test::projector(test::plus_state()), kPi / 2.0);
  const ComplexMatrix expected =
      pauli_z() * test::projector(test::plus_state()) * pauli_z();
  REQUIRE(frobenius_distance(flipped, expected) < 1e-12);
  // A full e^{-i pi sz} = -I leaves any state untouched.
  const ComplexMatrix full =
      oracle::exact_unitary(pauli_z(), test::projector(test::plus_state()), kPi);
  REQUIRE(frobenius_distance(full, test::projector(test::plus_state())) < 1e-12);

  // Propagator unitarity probe through trace preservation of a full-rank state.
  const ComplexMatrix h = random_hermitian(5, rng);
  const ComplexMatrix out = oracle::exact_unitary(h, random_density(5, rng), 2.7);
  REQUIRE(std::abs(out.trace() - Complex{1.0, 0.0}) < 1e-12);
  REQUIRE(is_valid_density(out));
}

TEST_CASE("direct Lindblad reduces to unitary dynamics at gamma = 0") {
  std::mt19937_64 rng(5);
  const ComplexMatrix h = random_hermitian(2, rng);
  const ComplexMatrix sigma0 = random_density(2, rng);
  LindbladSpec spec{h, {}};
  const ComplexMatrix a = oracle::direct_lindblad(spec, sigma0, 1.0, 1e-4);
  const ComplexMatrix b = oracle::exact_unitary(h, sigma0, 1.0);
  REQUIRE(frobenius_distance(a, b) < 1e-8);
}

TEST_CASE("direct Lindblad matches the two-level closed form") {
  const double omega0 = 1.0, gamma = 0.5;
  LindbladSpec spec{omega0 * pauli_z(), {{pauli_x(), gamma}}};
  const ComplexMatrix sigma0 = test::projector(test::plus_state());
  for (double t : {0.5, 1.0, 2.0}) {
    const ComplexMatrix got = oracle::direct_lindblad(spec, sigma0, t, 1e-4);
    REQUIRE(frobenius_distance(got, test::two_level_open_sigma(omega0, gamma, t)) < 1e-6);
  }
}

TEST_CASE("direct Lindblad keeps positivity on random specs") {
  std::mt19937_64 rng(7);
  LindbladSpec spec{random_hermitian(3, rng),
                    {{test::random_matrix(3, 3, rng), 0.4}}};
  const ComplexMatrix out = oracle::direct_lindblad(spec, random_density(3, rng), 1.0, 1e-4);
  REQUIRE(min_eigenvalue(0.5 * (out + out.adjoint())) > -1e-7);
  REQUIRE(std::abs(out.trace() - Complex{1.0, 0.0}) < 1e-8);
}

TEST_CASE("rk4 trivial and logistic closed form") {
  oracle::OdeProblem constant;
  constant.rhs = [](double, const RealVector& x, const std::vector<RealVector>&) {
    return RealVector::Zero(x.size()).eval();
  };
  constant.initial_history = [](double) {
    RealVector v(1);
    v << 0.3;
    return v;
  };
  constant.dt = 1e-3;
  const auto flat = oracle::rk4_delay(constant, 1.0);
  REQUIRE(std::abs(flat.values.back()(0) - 0.3) < 1e-14);

  // dx/dt = (r-1)x - r x^2 against the closed-form Bernoulli solution.
  const double r = 2.0, x_init = 0.1;
  oracle::OdeProblem logistic;
  logistic.rhs = [r](double, const RealVector& x, const std::vector<RealVector>&) {
    RealVector v(1);
    v << (r - 1.0) * x(0) - r * x(0) * x(0);
    return v;
  };
  logistic.initial_history = [x_init](double) {
    RealVector v(1);
    v << x_init;
    return v;
  };
  logistic.dt = 1e-4;
  const auto traj = oracle::rk4_delay(logistic, 2.0);
  const double x_star = (r - 1.0) / r;
  for (std::size_t i = 0; i < traj.times.size(); i += 1000) {
    const double t = traj.times[i];
    const double expected = x_star * x_init * std::exp((r - 1.0) * t) /
                            (x_star - x_init + x_init * std::exp((r - 1.0) * t));
    REQUIRE(std::abs(traj.values[i](0) - expected) < 1e-8);
  }
}

TEST_CASE("rk4 handles a pure delay term") {
  // x'(t) = -x(t-1) with history 1 gives x = 1 - t on [0, 1].
  oracle::OdeProblem delayed;
  delayed.rhs = [](double, const RealVector&, const std::vector<RealVector>& past) {
    return (-past[0]).eval();
  };
  delayed.delays = {1.0};
  delayed.initial_history = [](double) {
    RealVector v(1);
    v << 1.0;
    return v;
  };
  delayed.dt = 1e-3;
  const auto traj = oracle::rk4_delay(delayed, 1.0);
  for (std::size_t i = 0; i < traj.times.size(); i += 100)
    REQUIRE(std::abs(traj.values[i](0) - (1.0 - traj.times[i])) < 1e-12);
}

TEST_CASE("rk4 self-convergence is fourth order") {
  const double r = 2.0;
  auto solve = [&](double dt) {
    oracle::OdeProblem p;
    p.rhs = [r](double, const RealVector& x, const std::vector<RealVector>&) {
      RealVector v(1);
      v << (r - 1.0) * x(0) - r * x(0) * x(0);
      return v;
    };
    p.initial_history = [](double) {
      RealVector v(1);
      v << 0.1;
      return v;
    };
    p.dt = dt;
    return oracle::rk4_delay(p, 1.0).values.back()(0);
  };
  const double fine = solve(1e-4);
  const double e1 = std::abs(solve(4e-2) - fine);
  const double e2 = std::abs(solve(2e-2) - fine);
  const double ratio = e1 / e2;
  REQUIRE(ratio > 10.0);
  REQUIRE(ratio < 24.0);
}

TEST_CASE("direct GP integrator") {
  std::mt19937_64 rng(11);
  const ComplexMatrix h0 = random_hermitian(3, rng);
  const ComplexVector psi0 = test::random_state(3, rng);

  // g = 0 reduces to the unitary propagator.
  const ComplexVector lin = oracle::direct_gp(h0, 0.0, psi0, 1.0, 1e-4);
  const ComplexMatrix rho = oracle::exact_unitary(h0, test::projector(psi0), 1.0);
  REQUIRE(frobenius_distance(test::projector(lin), rho) < 1e-8);

  // Single site: only a global phase.
  ComplexVector one(1);
  one << 1.0;
  double drift = 0.0;
  const ComplexVector spun =
      oracle::direct_gp(ComplexMatrix::Zero(1, 1), 0.7, one, 1.0, 1e-4, &drift);
  REQUIRE(std::abs(std::abs(spun(0)) - 1.0) < 1e-10);
  REQUIRE(drift < 1e-7);
}

TEST_CASE("direct GP conserves the energy functional on a small lattice") {
  ComplexMatrix h0 = ComplexMatrix::Zero(4, 4);
  for (Index i = 0; i + 1 < 4; ++i) {
    h0(i, i + 1) = -1.0;
    h0(i + 1, i) = -1.0;
  }
  ComplexVector psi0(4);
  psi0 << 0.8, 0.5, 0.3, 0.1;
  psi0 /= psi0.norm();
  const double g = 0.5;

  auto energy = [&](const ComplexVector& psi) {
    double e = (psi.adjoint() * h0 * psi)(0, 0).real();
    for (Index r = 0; r < 4; ++r) e += 0.5 * g * std::norm(psi(r)) * std::norm(psi(r));
    return e;
  };

  double drift = 0.0;
  const ComplexVector out = oracle::direct_gp(h0, g, psi0, 1.0, 1e-4, &drift);
  REQUIRE(std::abs(energy(out) - energy(psi0)) < 1e-6);
  REQUIRE(drift < 1e-7);
}
