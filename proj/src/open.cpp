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

#include "sbqs/open.hpp"

#include <algorithm>
#include <cmath>

namespace sbqs {

ComplexMatrix vectorize_lindbladian(const LindbladSpec& spec) {
  if (spec.H.rows() != spec.H.cols())
    throw std::invalid_argument("lindbladian: H must be square");
  const Index d = spec.H.rows();
  const ComplexMatrix eye = identity(d);
  ComplexMatrix ll = -kImag * (kron(spec.H, eye) - kron(eye, spec.H.transpose()));
  for (const auto& jump : spec.jumps) {
    if (jump.L.rows() != d || jump.L.cols() != d)
      throw DimensionError("lindbladian: jump operator dimension mismatch");
    if (jump.gamma < 0)
      throw std::invalid_argument("lindbladian: rates must be nonnegative");
    const ComplexMatrix ldl = jump.L.adjoint() * jump.L;
    ll += jump.gamma * (kron(jump.L, jump.L.conjugate()) -
                        0.5 * kron(ldl, eye) - 0.5 * kron(eye, ldl.transpose()));
  }
  return ll;
}

StateDecomposition decompose_lindbladian(const ComplexMatrix& ll, const Tolerances& tol) {
  if (ll.rows() != ll.cols())
    throw std::invalid_argument("decompose_lindbladian: matrix must be square");
  const ComplexMatrix herm = 0.5 * (ll + ll.adjoint());
  const ComplexMatrix anti = (ll - ll.adjoint()) / (2.0 * kImag);

  StateDecomposition out;
  out.dim = ll.rows();
  if (herm.norm() > 0) {
    StateDecomposition hs = polarization_decompose(herm, tol);
    out.terms = std::move(hs.terms);
    out.identity_offset += hs.identity_offset;
  }
  if (anti.norm() > 0) {
    StateDecomposition ha = polarization_decompose(anti, tol);
    for (auto& term : ha.terms)
      out.terms.push_back({kImag * term.weight, std::move(term.rho)});
    out.identity_offset += kImag * ha.identity_offset;
  }
  out.reconstruction_error = frobenius_distance(reconstruct(out), ll);
  if (out.reconstruction_error > tol.recon)
    throw NumericError("decompose_lindbladian: reconstruction error " +
                       std::to_string(out.reconstruction_error));
  return out;
}

ComplexMatrix readout_sigma(const ComplexVector& psi) {
  const auto d = static_cast<Index>(std::llround(std::sqrt(double(psi.size()))));
  if (d * d != psi.size())
    throw std::invalid_argument("readout_sigma: vector length is not a square");
  Complex trace_sum{0.0, 0.0};
  for (Index k = 0; k < d; ++k) trace_sum += psi(k * d + k);
  if (std::abs(trace_sum) < 1e-8)
    throw NumericError("readout singularity: |sum_k <kk|psi>| = " +
                       std::to_string(std::abs(trace_sum)));
  ComplexMatrix sigma(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) sigma(i, j) = psi(i * d + j) / trace_sum;
  return sigma;
}

OpenResult simulate_open(const LindbladSpec& spec, const ComplexMatrix& sigma0, double t,
                         double eps, const OpenOptions& opts) {
  require_density(sigma0, Tolerances{}, "simulate_open initial state");

  const ComplexMatrix ll = vectorize_lindbladian(spec);
  StateDecomposition dec = decompose_lindbladian(ll);

  OpenResult res;
  res.identity_offset = dec.identity_offset;
  res.schedule = plan(dec, t, eps, opts.max_steps);

  // Evolution weights: e^{delta * l_r rho_r} = e^{-i delta (i l_r) rho_r}.
  std::vector<GeneratorTerm> gens;
  std::vector<Complex> thetas;
  for (const auto& term : dec.terms) {
    gens.emplace_back(term.rho);
    thetas.push_back(kImag * term.weight * res.schedule.delta);
  }

  VectorizedState state;
  ComplexVector psi = vectorize(sigma0);
  state.norm0 = psi.norm();
  psi /= state.norm0;

  const long stride = opts.record_stride > 0 ? opts.record_stride
                                             : std::max<long>(1, res.schedule.n / 100);
  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(sigma0);

  std::mt19937_64 rng(opts.seed);
  ComplexMatrix circuit_density;  // doubled-space density, circuit modes only
  if (opts.kind != StepKind::Exact) circuit_density = psi * psi.adjoint();

  const double drop_rate = res.identity_offset.real();
  for (long step = 1; step <= res.schedule.n; ++step) {
    if (opts.kind == StepKind::Exact) {
      for (std::size_t r = 0; r < gens.size(); ++r) {
        ComplexVector next = gens[r].apply(psi, thetas[r], false);
        const double norm = next.norm();
        if (norm < 1e-300) throw NumericError("simulate_open: state vanished");
        state.log_norm += std::log(norm);
        psi = next / norm;
      }
    } else {
      for (std::size_t r = 0; r < gens.size(); ++r) {
        const Complex c = kImag * dec.terms[r].weight;
        switch (opts.kind) {
          case StepKind::Cswap: {
            CswapOptions copts;
            copts.mode = opts.herald;
            copts.rng = &rng;
            HeraldResult h = dme_cswap_step_weighted(dec.terms[r].rho, circuit_density,
                                                     res.schedule.delta, c, copts);
            traj.herald_probs.push_back(h.p_herald);
            circuit_density = std::move(h.state);
            break;
          }
          case StepKind::Eswap:
            circuit_density = eswap_step(dec.terms[r].rho, circuit_density,
                                         c * res.schedule.delta);
            break;
          case StepKind::Exact:
            break;
        }
      }
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(circuit_density);
      psi = es.eigenvectors().col(circuit_density.rows() - 1);
    }
    state.log_norm += drop_rate * res.schedule.delta;

    if (step % stride == 0 || step == res.schedule.n) {
      traj.times.push_back(double(step) * res.schedule.delta);
      traj.states.push_back(readout_sigma(psi));
    }
  }

  state.psi = psi;
  res.state = std::move(state);
  res.trajectory = std::move(traj);
  return res;
}

double expectation_via_projectors(const VectorizedState& v, const ComplexMatrix& a,
                                  double* cross_check_error) {
  if (!is_hermitian(a, 1e-9))
    throw std::invalid_argument("expectation_via_projectors: observable must be Hermitian");
  const Index d = a.rows();
  if (d * d != v.psi.size())
    throw DimensionError("expectation_via_projectors: dimension mismatch");

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a);
  const double group_tol = 1e-10 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());

  double expectation = 0.0;
  std::vector<double> eigenvalues;
  std::vector<double> p_raw;
  Index i = 0;
  while (i < d) {
    Index j = i;
    ComplexMatrix projector = ComplexMatrix::Zero(d, d);
    while (j < d && es.eigenvalues()(j) - es.eigenvalues()(i) <= group_tol) {
      const ComplexVector col = es.eigenvectors().col(j);
      projector += col * col.adjoint();
      ++j;
    }
    const double rank = double(j - i);
    // Gram-normalized |P_i>>; measured weight is proportional to p_i^2 / rank.
    const Complex overlap = (vectorize(projector).adjoint() * v.psi)(0, 0) / std::sqrt(rank);
    eigenvalues.push_back(es.eigenvalues()(i));
    p_raw.push_back(std::sqrt(std::norm(overlap) * rank));  // p_i up to scale, >= 0
    i = j;
  }

  double total = 0.0;
  for (double p : p_raw) total += p;
  if (total < 1e-12)
    throw NumericError("expectation_via_projectors: degenerate readout weights");
  for (std::size_t k = 0; k < p_raw.size(); ++k)
    expectation += eigenvalues[k] * (p_raw[k] / total);

  if (cross_check_error) {
    const ComplexMatrix sigma = readout_sigma(v.psi);
    *cross_check_error = std::abs(expectation - (a * sigma).trace().real());
  }
  return expectation;
}

}  // namespace sbqs
