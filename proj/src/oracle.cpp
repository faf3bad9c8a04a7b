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

#include "sbqs/oracle.hpp"

#include <cmath>

namespace sbqs::oracle {

ComplexMatrix exact_unitary(const ComplexMatrix& h, const ComplexMatrix& sigma0, double t) {
  if (!is_hermitian(h, 1e-9))
    throw std::invalid_argument("exact_unitary: Hamiltonian must be Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  ComplexVector phases(es.eigenvalues().size());
  for (Index i = 0; i < phases.size(); ++i)
    phases(i) = std::exp(-kImag * t * es.eigenvalues()(i));
  const ComplexMatrix u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  return u * sigma0 * u.adjoint();
}

ComplexMatrix direct_lindblad(const LindbladSpec& spec, const ComplexMatrix& sigma0,
                              double t, double dt) {
  if (dt <= 0) throw std::invalid_argument("direct_lindblad: dt must be positive");
  auto rhs = [&spec](const ComplexMatrix& sigma) {
    ComplexMatrix out = -kImag * (spec.H * sigma - sigma * spec.H);
    for (const auto& jump : spec.jumps) {
      const ComplexMatrix ldl = jump.L.adjoint() * jump.L;
      out += jump.gamma * (jump.L * sigma * jump.L.adjoint() -
                           0.5 * (ldl * sigma + sigma * ldl));
    }
    return out;
  };

  const long n = std::max<long>(1, static_cast<long>(std::ceil(t / dt)));
  const double h = t / double(n);
  ComplexMatrix sigma = sigma0;
  for (long i = 0; i < n; ++i) {
    const ComplexMatrix k1 = rhs(sigma);
    const ComplexMatrix k2 = rhs(sigma + 0.5 * h * k1);
    const ComplexMatrix k3 = rhs(sigma + 0.5 * h * k2);
    const ComplexMatrix k4 = rhs(sigma + h * k3);
    sigma += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  ensure_finite(sigma, "direct_lindblad result");
  return sigma;
}

const RealVector& OdeTrajectory::at_time(double t) const {
  if (times.empty()) throw std::out_of_range("OdeTrajectory: empty");
  const double dt = times.size() > 1 ? times[1] - times[0] : 1.0;
  const auto idx = static_cast<std::size_t>(std::llround((t - times.front()) / dt));
  if (idx >= values.size()) throw std::out_of_range("OdeTrajectory: time out of range");
  return values[idx];
}

OdeTrajectory rk4_delay(const OdeProblem& p, double T) {
  if (p.dt <= 0) throw std::invalid_argument("rk4_delay: dt must be positive");
  for (double a : p.delays) {
    if (a < 0) throw std::invalid_argument("rk4_delay: delays must be nonnegative");
    if (a > 0 && a < p.dt)
      throw std::invalid_argument("rk4_delay: nonzero delays must be at least dt");
  }

  const long n = std::max<long>(1, static_cast<long>(std::llround(T / p.dt)));
  const double h = T / double(n);

  OdeTrajectory traj;
  traj.times.reserve(n + 1);
  traj.values.reserve(n + 1);
  traj.times.push_back(0.0);
  traj.values.push_back(p.initial_history ? p.initial_history(0.0) : RealVector());

  // Past values on the grid plus the user history for t <= 0; linear
  // interpolation between grid points.
  auto history = [&](double time, const RealVector& stage_x, double stage_time) -> RealVector {
    if (time >= stage_time) return stage_x;
    if (time <= 0.0) return p.initial_history(time);
    const double pos = time / h;
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, traj.values.size() - 1);
    const double w = pos - double(lo);
    if (lo >= traj.values.size() - 1) return traj.values.back();
    return (1.0 - w) * traj.values[lo] + w * traj.values[hi];
  };

  auto eval = [&](double time, const RealVector& x) {
    std::vector<RealVector> delayed;
    delayed.reserve(p.delays.size());
    for (double a : p.delays)
      delayed.push_back(a == 0.0 ? x : history(time - a, x, time));
    return p.rhs(time, x, delayed);
  };

  RealVector x = traj.values.front();
  for (long i = 0; i < n; ++i) {
    const double t0 = double(i) * h;
    const RealVector k1 = eval(t0, x);
    const RealVector k2 = eval(t0 + 0.5 * h, x + 0.5 * h * k1);
    const RealVector k3 = eval(t0 + 0.5 * h, x + 0.5 * h * k2);
    const RealVector k4 = eval(t0 + h, x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    traj.times.push_back(t0 + h);
    traj.values.push_back(x);
  }
  return traj;
}

ComplexVector direct_gp(const ComplexMatrix& h0, double g, const ComplexVector& psi0,
                        double t, double dt, double* norm_drift) {
  if (dt <= 0) throw std::invalid_argument("direct_gp: dt must be positive");
  auto rhs = [&](const ComplexVector& psi) -> ComplexVector {
    ComplexVector hpsi = h0 * psi;
    for (Index r = 0; r < psi.size(); ++r) hpsi(r) += g * std::norm(psi(r)) * psi(r);
    return -kImag * hpsi;
  };

  const long n = std::max<long>(1, static_cast<long>(std::ceil(t / dt)));
  const double h = t / double(n);
  ComplexVector psi = psi0;
  for (long i = 0; i < n; ++i) {
    const ComplexVector k1 = rhs(psi);
    const ComplexVector k2 = rhs(psi + 0.5 * h * k1);
    const ComplexVector k3 = rhs(psi + 0.5 * h * k2);
    const ComplexVector k4 = rhs(psi + h * k3);
    psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  if (norm_drift) *norm_drift = std::abs(psi.norm() - psi0.norm());
  return psi;
}

}  // namespace sbqs::oracle
