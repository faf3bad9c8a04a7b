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

#include "sbqs/dme.hpp"

#include <algorithm>
#include <cmath>

namespace sbqs {

ControlQubit ControlQubit::standard(Complex c, double delta, bool strict) {
  ControlQubit q{Complex{1.0, 0.0}, -kImag * c * delta};
  if (strict) {
    const double norm = std::sqrt(std::norm(q.amp0) + std::norm(q.amp1));
    q.amp0 /= norm;
    q.amp1 /= norm;
  }
  return q;
}

ComplexMatrix ControlQubit::density() const {
  ComplexVector v(2);
  v << amp0, amp1;
  return v * v.adjoint();
}

GeneratorTerm::GeneratorTerm(ComplexMatrix rho) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols())
    throw std::invalid_argument("GeneratorTerm: resource must be square");
  ensure_finite(rho_, "GeneratorTerm resource");
  const ComplexMatrix herm = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm);
  evals_ = es.eigenvalues();
  evecs_ = es.eigenvectors();
  pure_ = std::abs((rho_ * rho_).trace() - Complex{1.0, 0.0}) < 1e-12 &&
          std::abs(rho_.trace() - Complex{1.0, 0.0}) < 1e-12 &&
          (rho_ - herm).norm() < 1e-12;
  if (pure_) carrier_ = evecs_.col(rho_.rows() - 1);
}

ComplexMatrix GeneratorTerm::propagator(Complex theta) const {
  if (pure_) {
    return identity(dim()) +
           (std::exp(-kImag * theta) - 1.0) * (carrier_ * carrier_.adjoint());
  }
  ComplexVector phases(evals_.size());
  for (Index i = 0; i < evals_.size(); ++i)
    phases(i) = std::exp(-kImag * theta * evals_(i));
  return evecs_ * phases.asDiagonal() * evecs_.adjoint();
}

ComplexMatrix GeneratorTerm::conjugate(const ComplexMatrix& sigma, Complex theta,
                                       bool renormalize) const {
  if (sigma.rows() != dim())
    throw DimensionError("GeneratorTerm: simulator dimension mismatch");
  ComplexMatrix out;
  if (pure_) {
    // (I + f P) sigma (I + conj(f) P) with P = |u><u|.
    const Complex f = std::exp(-kImag * theta) - 1.0;
    const ComplexVector su = sigma * carrier_;
    const Eigen::RowVectorXcd us = carrier_.adjoint() * sigma;
    const Complex usu = carrier_.adjoint() * su;
    out = sigma;
    out.noalias() += f * (carrier_ * us);
    out.noalias() += std::conj(f) * (su * carrier_.adjoint());
    out.noalias() += (f * std::conj(f) * usu) * (carrier_ * carrier_.adjoint());
  } else {
    const ComplexMatrix a = propagator(theta);
    out = a * sigma * a.adjoint();
  }
  if (renormalize) {
    const double tr = out.trace().real();
    if (std::abs(tr) < 1e-300) throw NumericError("generator step: vanishing trace");
    out /= tr;
  }
  return out;
}

ComplexVector GeneratorTerm::apply(const ComplexVector& psi, Complex theta,
                                   bool renormalize) const {
  if (psi.size() != dim())
    throw DimensionError("GeneratorTerm: simulator dimension mismatch");
  ComplexVector out;
  if (pure_) {
    const Complex f = std::exp(-kImag * theta) - 1.0;
    out = psi + f * carrier_.dot(psi) * carrier_;
  } else {
    out = propagator(theta) * psi;
  }
  if (renormalize) {
    const double n = out.norm();
    if (n < 1e-300) throw NumericError("generator step: state vanished");
    out /= n;
  }
  return out;
}

ComplexMatrix dme_channel_exact(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                                double h_delta) {
  return conjugate_by_generator(sigma, rho, Complex{h_delta, 0.0}, false);
}

ComplexMatrix conjugate_by_generator(const ComplexMatrix& sigma, const ComplexMatrix& rho,
                                     Complex theta, bool renormalize) {
  return GeneratorTerm(rho).conjugate(sigma, theta, renormalize);
}

ComplexVector apply_generator(const ComplexVector& psi, const ComplexMatrix& rho,
                              Complex theta, bool renormalize) {
  return GeneratorTerm(rho).apply(psi, theta, renormalize);
}

HeraldResult dme_cswap_apply(const ControlQubit& control, const ComplexMatrix& rho,
                             const ComplexMatrix& sigma, HeraldMode mode,
                             std::mt19937_64* rng) {
  if (rho.rows() != sigma.rows())
    throw DimensionError("dme_cswap_apply: resource/simulator dimensions differ");
  const Index d = rho.rows();

  const ComplexMatrix ucs = kron(basis_projector(2, 0), identity(d * d)) +
                            kron(basis_projector(2, 1), swap_operator(d));
  const ComplexMatrix m = kron(control.density(), kron(rho, sigma));
  const ComplexMatrix evolved = ucs * m * ucs.adjoint();

  // <+| . |+> on the control, unnormalized.
  const Index dd = d * d;
  ComplexMatrix heralded =
      0.5 * (evolved.block(0, 0, dd, dd) + evolved.block(0, dd, dd, dd) +
             evolved.block(dd, 0, dd, dd) + evolved.block(dd, dd, dd, dd));

  const double p = heralded.trace().real() / evolved.trace().real();

  HeraldResult res;
  res.mode = mode;
  res.p_herald = p;
  if (mode == HeraldMode::Sampled) {
    if (rng == nullptr)
      throw std::invalid_argument("dme_cswap_apply: sampled mode needs an rng");
    std::bernoulli_distribution keep(std::clamp(p, 0.0, 1.0));
    res.attempts = 1;
    while (!keep(*rng)) ++res.attempts;  // failed branch restarts from checkpoint
  }

  heralded /= heralded.trace().real();
  res.state = partial_trace(QRegister{{d, d}, std::move(heralded)}, {1}).state;
  ensure_finite(res.state, "dme_cswap_apply result");
  return res;
}

HeraldResult dme_cswap_step(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                            double delta, double c, const CswapOptions& opts) {
  return dme_cswap_step_weighted(rho, sigma, delta, Complex{c, 0.0}, opts);
}

HeraldResult dme_cswap_step_weighted(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                                     double delta, Complex c, const CswapOptions& opts) {
  if (std::abs(c * delta) > opts.guard)
    throw StepSizeError("dme_cswap_step: |c*delta| = " +
                        std::to_string(std::abs(c * delta)) + " exceeds guard " +
                        std::to_string(opts.guard));
  const ControlQubit ctrl = ControlQubit::standard(c, delta, opts.strict_control);
  return dme_cswap_apply(ctrl, rho, sigma, opts.mode, opts.rng);
}

ComplexMatrix eswap_step(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                         Complex delta) {
  if (rho.rows() != sigma.rows())
    throw DimensionError("eswap_step: dimensions differ");
  const Index d = rho.rows();
  // S^2 = I, so e^{-i S z} = cos(z) I - i sin(z) S.
  const ComplexMatrix s = swap_operator(d);
  const ComplexMatrix eye = identity(d * d);
  const ComplexMatrix e = std::cos(delta) * eye - kImag * std::sin(delta) * s;
  ComplexMatrix joint = e * kron(rho, sigma) * e.adjoint();
  ComplexMatrix out = partial_trace(QRegister{{d, d}, std::move(joint)}, {1}).state;
  if (delta.imag() != 0.0) out /= out.trace().real();
  return out;
}

ComplexMatrix dme_repeat(const ComplexMatrix& rho, const ComplexMatrix& sigma0, double h,
                         double t, long n, StepKind kind, const CswapOptions& opts,
                         RepeatStats* stats) {
  if (n < 1) throw std::invalid_argument("dme_repeat: n must be >= 1");
  const double delta = t / double(n);
  ComplexMatrix sigma = sigma0;
  for (long i = 0; i < n; ++i) {
    switch (kind) {
      case StepKind::Exact:
        sigma = dme_channel_exact(rho, sigma, h * delta);
        break;
      case StepKind::Cswap: {
        HeraldResult r = dme_cswap_step(rho, sigma, delta, h, opts);
        sigma = std::move(r.state);
        if (stats) {
          stats->herald_probs.push_back(r.p_herald);
          stats->attempts += r.attempts;
        }
        break;
      }
      case StepKind::Eswap:
        sigma = eswap_step(rho, sigma, Complex{h * delta, 0.0});
        break;
    }
  }
  return sigma;
}

}  // namespace sbqs
