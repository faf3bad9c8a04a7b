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

#include "sbqs/dme.hpp"
#include "test_helpers.hpp"

using namespace sbqs;
using test::random_density;

namespace {

const double kPi = 3.14159265358979323846;

// Independent channel oracle: series-free conjugation through Eigen's
// spectral decomposition assembled by hand.
ComplexMatrix channel_oracle(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                             double angle) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho);
  ComplexMatrix u = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (Index k = 0; k < rho.rows(); ++k)
    u += std::exp(-kImag * angle * es.eigenvalues()(k)) *
         (es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint());
  return u * sigma * u.adjoint();
}

}  // namespace

TEST_CASE("exact channel fixed points") {
  std::mt19937_64 rng(3);
  const ComplexMatrix rho = random_density(3, rng);
  REQUIRE(frobenius_distance(dme_channel_exact(rho, rho, 0.3), rho) < 1e-12);

  const ComplexMatrix sigma = random_density(3, rng);
  REQUIRE(frobenius_distance(dme_channel_exact(rho, sigma, 0.0), sigma) < 1e-14);
}

TEST_CASE("exact channel rotates |+> to |-> under a pi kick of |0><0|") {
  const ComplexMatrix rho = basis_projector(2, 0);
  const ComplexMatrix sigma = test::projector(test::plus_state());
  const ComplexMatrix out = dme_channel_exact(rho, sigma, kPi);
  REQUIRE(frobenius_distance(out, test::projector(test::minus_state())) < 1e-12);
  REQUIRE(frobenius_distance(out, channel_oracle(rho, sigma, kPi)) < 1e-12);
}

TEST_CASE("rank-1 fast path agrees with the spectral route") {
  std::mt19937_64 rng(5);
  const ComplexMatrix pure = test::projector(test::random_state(4, rng));
  const ComplexMatrix sigma = random_density(4, rng);
  const Complex theta{0.17, 0.05};
  const GeneratorTerm gen(pure);
  REQUIRE(gen.pure());
  const ComplexMatrix fast = gen.conjugate(sigma, theta, false);
  const ComplexMatrix a = mat_exp(pure, -kImag * theta);
  REQUIRE(frobenius_distance(fast, ComplexMatrix(a * sigma * a.adjoint())) < 1e-12);
}

TEST_CASE("cswap step at delta = 0 heralds with probability one half") {
  std::mt19937_64 rng(7);
  const ComplexMatrix rho = random_density(2, rng);
  const ComplexMatrix sigma = random_density(2, rng);
  const HeraldResult r = dme_cswap_step(rho, sigma, 0.0, 1.0);
  REQUIRE(r.p_herald == 0.5);
  REQUIRE(frobenius_distance(r.state, sigma) < 1e-13);
}

TEST_CASE("cswap herald probability stays near one half") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const ComplexMatrix rho = random_density(2, rng);
    const ComplexMatrix sigma = random_density(2, rng);
    const double delta = 0.05 * (rep + 1) / 20.0;
    const HeraldResult r = dme_cswap_step(rho, sigma, delta, 1.0);
    REQUIRE(r.p_herald >= 0.45);
    REQUIRE(r.p_herald <= 0.55);
    REQUIRE(is_valid_density(r.state));
  }
}

TEST_CASE("cswap step converges to the exact channel at second order") {
  std::mt19937_64 rng(13);
  const ComplexMatrix rho = random_density(2, rng);
  const ComplexMatrix sigma = random_density(2, rng);

  std::vector<double> deltas{0.04, 0.02, 0.01};
  std::vector<double> errs;
  for (double d : deltas) {
    const HeraldResult r = dme_cswap_step(rho, sigma, d, 1.0);
    errs.push_back(frobenius_distance(r.state, dme_channel_exact(rho, sigma, d)));
  }
  const double order01 = std::log2(errs[0] / errs[1]);
  const double order12 = std::log2(errs[1] / errs[2]);
  REQUIRE(order01 > 1.8);
  REQUIRE(order01 < 2.2);
  REQUIRE(order12 > 1.8);
  REQUIRE(order12 < 2.2);
  // halving 0.02 -> 0.01 shrinks the error by roughly 4
  REQUIRE(errs[1] / errs[2] > 3.4);
  REQUIRE(errs[1] / errs[2] < 4.6);
}

TEST_CASE("cswap step guard") {
  std::mt19937_64 rng(17);
  const ComplexMatrix rho = random_density(2, rng);
  const ComplexMatrix sigma = random_density(2, rng);
  REQUIRE_THROWS_AS(dme_cswap_step(rho, sigma, 0.2, 1.0), StepSizeError);
}

TEST_CASE("sampled mode matches its herald probability") {
  std::mt19937_64 rng(21);
  const ComplexMatrix rho = random_density(2, rng);
  const ComplexMatrix sigma = random_density(2, rng);

  CswapOptions opts;
  opts.mode = HeraldMode::Sampled;
  std::mt19937_64 sample_rng(99);
  opts.rng = &sample_rng;

  const int trials = 10000;
  long attempts = 0;
  double p = 0.5;
  for (int i = 0; i < trials; ++i) {
    const HeraldResult r = dme_cswap_step(rho, sigma, 0.03, 1.0, opts);
    attempts += r.attempts;
    p = r.p_herald;
  }
  const double freq = double(trials) / double(attempts);
  const double se = p * std::sqrt((1.0 - p) / trials);
  REQUIRE(std::abs(freq - p) <= 3.0 * se);

  // Same seed, same draws.
  std::mt19937_64 rng_a(5), rng_b(5);
  CswapOptions oa;
  oa.mode = HeraldMode::Sampled;
  oa.rng = &rng_a;
  CswapOptions ob = oa;
  ob.rng = &rng_b;
  REQUIRE(dme_cswap_step(rho, sigma, 0.03, 1.0, oa).attempts ==
          dme_cswap_step(rho, sigma, 0.03, 1.0, ob).attempts);

  REQUIRE_THROWS_AS(dme_cswap_step(rho, sigma, 0.03, 1.0,
                                   CswapOptions{HeraldMode::Sampled, nullptr, false, 0.1}),
                    std::invalid_argument);
}

TEST_CASE("strict control preparation renormalizes") {
  const ControlQubit loose = ControlQubit::standard(Complex{2.0, 0.0}, 0.05);
  REQUIRE(std::sqrt(std::norm(loose.amp0) + std::norm(loose.amp1)) > 1.0);
  const ControlQubit strict = ControlQubit::standard(Complex{2.0, 0.0}, 0.05, true);
  REQUIRE(std::abs(std::sqrt(std::norm(strict.amp0) + std::norm(strict.amp1)) - 1.0) <
          1e-14);
  REQUIRE(std::abs(strict.ratio() - loose.ratio()) < 1e-14);
}

TEST_CASE("eswap step") {
  std::mt19937_64 rng(23);
  const ComplexMatrix rho = random_density(2, rng);
  REQUIRE(frobenius_distance(eswap_step(rho, rho, Complex{0.3, 0.0}), rho) < 1e-12);

  const ComplexMatrix sigma = random_density(2, rng);
  REQUIRE(frobenius_distance(eswap_step(rho, sigma, Complex{0.0, 0.0}), sigma) < 1e-14);

  const ComplexMatrix out =
      eswap_step(basis_projector(2, 0), test::projector(test::plus_state()), 0.01);
  const ComplexMatrix exact =
      dme_channel_exact(basis_projector(2, 0), test::projector(test::plus_state()), 0.01);
  REQUIRE(frobenius_distance(out, exact) <= 1e-3);
  REQUIRE(is_valid_density(out));
}

TEST_CASE("repeated steps accumulate to the target channel at rate 1/n") {
  std::mt19937_64 rng(29);
  const ComplexMatrix rho = random_density(2, rng);
  const ComplexMatrix sigma = random_density(2, rng);

  REQUIRE(frobenius_distance(dme_repeat(rho, sigma, 1.0, 0.0, 1, StepKind::Eswap), sigma) <
          1e-14);

  const double h = 1.0, t = 1.0;
  const ComplexMatrix target = dme_channel_exact(rho, sigma, h * t);
  const double e200 =
      frobenius_distance(dme_repeat(rho, sigma, h, t, 200, StepKind::Eswap), target);
  const double e400 =
      frobenius_distance(dme_repeat(rho, sigma, h, t, 400, StepKind::Eswap), target);
  REQUIRE(e200 / e400 > 1.6);
  REQUIRE(e200 / e400 < 2.4);
}

TEST_CASE("copies needed scale like 1/epsilon") {
  std::mt19937_64 rng(31);
  const ComplexMatrix rho = random_density(2, rng);
  const ComplexMatrix sigma = random_density(2, rng);
  const ComplexMatrix target = dme_channel_exact(rho, sigma, 1.0);

  auto copies_for = [&](double eps) {
    long n = 1;
    while (n < (1L << 22)) {
      if (frobenius_distance(dme_repeat(rho, sigma, 1.0, 1.0, n, StepKind::Eswap), target) <=
          eps)
        return n;
      n *= 2;
    }
    return n;
  };
  const long n3 = copies_for(1e-3);
  const long n4 = copies_for(1e-4);
  const double ratio = double(n4) / double(n3);
  REQUIRE(ratio >= 4.0);   // power-of-two probe of a 10x target
  REQUIRE(ratio <= 32.0);
}
