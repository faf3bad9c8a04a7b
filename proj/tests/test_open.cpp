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

#include "sbqs/open.hpp"
#include "sbqs/oracle.hpp"
#include "test_helpers.hpp"

using namespace sbqs;
using test::random_density;
using test::random_hermitian;

TEST_CASE("vectorized Lindbladian of the two-level example") {
  const double omega0 = 1.3, gamma = 0.7;
  LindbladSpec spec{omega0 * pauli_z(), {{pauli_x(), gamma}}};
  const ComplexMatrix ll = vectorize_lindbladian(spec);

  const ComplexMatrix eye = identity(2);
  const ComplexMatrix expected =
      -kImag * omega0 * (kron(pauli_z(), eye) - kron(eye, pauli_z())) +
      gamma * (kron(pauli_x(), pauli_x()) - kron(eye, eye));
  REQUIRE(frobenius_distance(ll, expected) < 1e-13);
}

TEST_CASE("closed-system generator has an imaginary spectrum") {
  std::mt19937_64 rng(3);
  LindbladSpec spec{random_hermitian(3, rng), {}};
  const ComplexMatrix ll = vectorize_lindbladian(spec);
  Eigen::ComplexEigenSolver<ComplexMatrix> es(ll);
  for (Index i = 0; i < es.eigenvalues().size(); ++i)
    REQUIRE(std::abs(es.eigenvalues()(i).real()) < 1e-10);
}

TEST_CASE("trace preservation: <<I| L = 0") {
  std::mt19937_64 rng(5);
  LindbladSpec spec{random_hermitian(3, rng),
                    {{test::random_matrix(3, 3, rng), 0.8},
                     {test::random_matrix(3, 3, rng), 0.2}}};
  const ComplexMatrix ll = vectorize_lindbladian(spec);
  const ComplexMatrix left = vectorize(identity(3)).adjoint() * ll;
  REQUIRE(left.norm() < 1e-10);
}

TEST_CASE("decomposing the two-level generator") {
  const double omega0 = 1.0, gamma = 0.5;
  LindbladSpec spec{omega0 * pauli_z(), {{pauli_x(), gamma}}};
  const ComplexMatrix ll = vectorize_lindbladian(spec);
  const StateDecomposition dec = decompose_lindbladian(ll);

  REQUIRE(frobenius_distance(reconstruct(dec), ll) < 1e-10);
  for (const auto& term : dec.terms) REQUIRE(is_valid_density(term.rho));

  // The Hamiltonian part carries weights -2i w0 and +2i w0.
  std::vector<Complex> imag_weights;
  for (const auto& term : dec.terms)
    if (std::abs(term.weight.imag()) > 1e-12) imag_weights.push_back(term.weight);
  REQUIRE(imag_weights.size() == 2);
  const double w0 = std::abs(imag_weights[0].imag());
  const double w1 = std::abs(imag_weights[1].imag());
  REQUIRE(std::abs(w0 - 2.0 * omega0) < 1e-12);
  REQUIRE(std::abs(w1 - 2.0 * omega0) < 1e-12);
  REQUIRE(imag_weights[0].imag() * imag_weights[1].imag() < 0.0);

  // The hand form over product states reconstructs the same generator:
  // -2i w0 (|0><0| x I - I x |0><0|) + 4 g P+ x P+ - 2 g P+ x I - 2 g I x P+ + q I.
  const ComplexMatrix plus = test::projector(test::plus_state());
  const ComplexMatrix eye = identity(2);
  const ComplexMatrix hand =
      -2.0 * kImag * omega0 * (kron(basis_projector(2, 0), eye) - kron(eye, basis_projector(2, 0))) +
      4.0 * gamma * kron(plus, plus) - 2.0 * gamma * kron(plus, eye) -
      2.0 * gamma * kron(eye, plus);
  const Complex q = (ll - hand).trace() / 4.0;
  REQUIRE(frobenius_distance(ll, hand + q * identity(4)) < 1e-12);
  REQUIRE(std::abs(q) < 1e-12);  // the identity coefficient vanishes here
}

TEST_CASE("decomposing the zero generator") {
  const StateDecomposition dec = decompose_lindbladian(ComplexMatrix::Zero(4, 4));
  REQUIRE(dec.terms.empty());
}

TEST_CASE("random generator reconstruction") {
  std::mt19937_64 rng(7);
  const ComplexMatrix ll = test::random_matrix(4, 4, rng);
  const StateDecomposition dec = decompose_lindbladian(ll);
  REQUIRE(frobenius_distance(reconstruct(dec), ll) < 1e-10);
}

TEST_CASE("open simulation reduces to unitary dynamics at gamma = 0") {
  LindbladSpec spec{pauli_z(), {}};
  const ComplexMatrix sigma0 = test::projector(test::plus_state());
  const OpenResult res = simulate_open(spec, sigma0, 1.0, 1e-4);
  const ComplexMatrix expected = oracle::exact_unitary(pauli_z(), sigma0, 1.0);
  REQUIRE(frobenius_distance(res.trajectory.final_state(), expected) < 1e-3);
}

TEST_CASE("open simulation matches the two-level closed form") {
  const double omega0 = 1.0;
  const ComplexMatrix sigma0 = test::projector(test::plus_state());
  for (double gamma : {0.5, 3.0}) {
    LindbladSpec spec{omega0 * pauli_z(), {{pauli_x(), gamma}}};
    for (double scale : {0.5, 1.0, 2.0}) {
      const double t = scale / gamma;
      const OpenResult res = simulate_open(spec, sigma0, t, 1e-3);
      const ComplexMatrix expected = test::two_level_open_sigma(omega0, gamma, t);
      REQUIRE(frobenius_distance(res.trajectory.final_state(), expected) <= 1e-3);
      // Readout trace is exactly one by construction.
      REQUIRE(res.trajectory.final_state().trace() == Complex{1.0, 0.0});
    }
  }
}

TEST_CASE("open simulation against the direct master-equation oracle, order 1/n") {
  std::mt19937_64 rng(11);
  LindbladSpec spec{random_hermitian(2, rng), {{pauli_x(), 0.6}}};
  const ComplexMatrix sigma0 = random_density(2, rng);
  const double t = 0.8;
  const ComplexMatrix truth = oracle::direct_lindblad(spec, sigma0, t, 1e-5);

  OpenOptions opts;
  opts.max_steps = 5'000'000;
  std::vector<double> epses{1e-2, 1e-3, 1e-4};
  std::vector<double> errs, ns;
  for (double eps : epses) {
    const OpenResult res = simulate_open(spec, sigma0, t, eps, opts);
    ns.push_back(double(res.schedule.n));
    errs.push_back(frobenius_distance(res.trajectory.final_state(), truth));
  }
  const double slope = -test::loglog_slope(ns, errs);
  REQUIRE(slope > 0.8);
  REQUIRE(slope < 1.2);
}

TEST_CASE("projector-basis expectation recovers Tr[A sigma]") {
  std::mt19937_64 rng(13);
  const ComplexMatrix sigma = random_density(3, rng);
  VectorizedState v;
  v.psi = vectorize(sigma);
  v.norm0 = v.psi.norm();
  v.psi /= v.norm0;

  REQUIRE(std::abs(expectation_via_projectors(v, identity(3)) - 1.0) < 1e-10);

  const ComplexMatrix a = random_hermitian(3, rng);
  double cross = 0.0;
  const double got = expectation_via_projectors(v, a, &cross);
  REQUIRE(std::abs(got - (a * sigma).trace().real()) < 1e-8);
  REQUIRE(cross < 1e-8);
}

TEST_CASE("projector expectation at t = 0 for the |+> state") {
  const ComplexMatrix sigma0 = test::projector(test::plus_state());
  VectorizedState v;
  v.psi = vectorize(sigma0);
  v.norm0 = v.psi.norm();
  v.psi /= v.norm0;
  REQUIRE(std::abs(expectation_via_projectors(v, pauli_x()) - 1.0) < 1e-10);
}

TEST_CASE("readout singularity is reported") {
  ComplexVector psi(4);
  psi << 0.0, 1.0, 0.0, 0.0;  // traceless direction
  REQUIRE_THROWS_AS(readout_sigma(psi), NumericError);
}

TEST_CASE("circuit-mode open evolution agrees with the exact path") {
  LindbladSpec spec{0.8 * pauli_z(), {{pauli_x(), 0.4}}};
  const ComplexMatrix sigma0 = test::projector(test::plus_state());
  const double t = 0.5;
  OpenOptions circuit;
  circuit.kind = StepKind::Cswap;
  const OpenResult a = simulate_open(spec, sigma0, t, 1e-2);
  const OpenResult b = simulate_open(spec, sigma0, t, 1e-2, circuit);
  REQUIRE(frobenius_distance(a.trajectory.final_state(), b.trajectory.final_state()) < 2e-2);
}
