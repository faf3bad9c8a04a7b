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

#include "sbqs/cdopt.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace sbqs {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double Schedule::at(double t) const {
  if (samples.empty()) throw std::invalid_argument("Schedule: no samples");
  if (t <= 0.0) return samples.front();
  if (t >= T) return samples.back();
  const double pos = t / T * double(samples.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const double w = pos - double(lo);
  return (1.0 - w) * samples[lo] + w * samples[std::min(lo + 1, samples.size() - 1)];
}

void Schedule::validate() const {
  if (samples.size() < 2) throw std::invalid_argument("Schedule: need at least two samples");
  if (std::abs(samples.front()) > 1e-12 || std::abs(samples.back() - 1.0) > 1e-12)
    throw std::invalid_argument("Schedule: s(0) = 0 and s(T) = 1 required");
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (samples[i] < samples[i - 1] - 1e-12)
      throw std::invalid_argument("Schedule: s must be monotone nondecreasing");
  if (T <= 0 || delta <= 0) throw std::invalid_argument("Schedule: T and delta must be positive");
  if (tau < delta) throw std::invalid_argument("Schedule: tau must be >= delta");
  const double ratio = tau / delta;
  if (std::abs(ratio - std::llround(ratio)) > 1e-9)
    throw std::invalid_argument("Schedule: tau must be an integer multiple of delta");
}

Schedule Schedule::linear(double T, double delta, double tau) {
  Schedule s;
  s.T = T;
  s.delta = delta;
  s.tau = tau;
  const auto n = static_cast<std::size_t>(std::llround(T / delta));
  s.samples.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) s.samples[i] = double(i) / double(n);
  s.validate();
  return s;
}

Schedule Schedule::smooth(double T, double delta, double tau) {
  Schedule s = linear(T, delta, tau);
  for (auto& v : s.samples) v = std::pow(std::sin(0.5 * kPi * v), 2);
  s.samples.back() = 1.0;
  return s;
}

ComplexMatrix StateDependentTarget::evaluate(const ComplexMatrix& sigma) const {
  ComplexMatrix h = fixed_part.size() > 0
                        ? fixed_part
                        : ComplexMatrix::Zero(sigma.rows(), sigma.cols());
  for (const auto& term : couplings)
    h += term.c * (term.xi * sigma).trace().real() * term.rho;
  return h;
}

void CdProblem::validate() const {
  if (!is_hermitian(H0, 1e-9)) throw std::invalid_argument("CdProblem: H0 must be Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(H0);
  const ComplexVector residual = H0 * psi0 - es.eigenvalues()(0) * psi0;
  if (residual.norm() > 1e-9)
    throw std::invalid_argument("CdProblem: psi0 is not the minimal eigenvector of H0");
}

ComplexMatrix CdProblem::target_at(double s, const ComplexMatrix& sigma) const {
  const ComplexMatrix h1 = std::holds_alternative<ComplexMatrix>(target)
                               ? std::get<ComplexMatrix>(target)
                               : std::get<StateDependentTarget>(target).evaluate(sigma);
  return (1.0 - s) * H0 + s * h1;
}

ComplexVector ground_state(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  return es.eigenvectors().col(0);
}

namespace {

ComplexMatrix cd_hamiltonian(const ComplexMatrix& h_t, const ComplexMatrix& sigma_now,
                             const ComplexMatrix& sigma_lag, double tau) {
  const ComplexMatrix comm = sigma_lag * sigma_now - sigma_now * sigma_lag;
  return h_t - (kImag / tau) * comm;
}

// Heralded exponentiation of c * rho in micro-steps honoring the angle guard.
ComplexMatrix circuit_rotate(const ComplexMatrix& rho, ComplexMatrix sigma, double c,
                             double delta) {
  const long splits = std::max<long>(1, static_cast<long>(std::ceil(std::abs(c) * delta / 0.09)));
  CswapOptions opts;
  for (long k = 0; k < splits; ++k) {
    HeraldResult r = dme_cswap_step(rho, sigma, delta / double(splits), c, opts);
    sigma = std::move(r.state);
  }
  return sigma;
}

}  // namespace

ComplexMatrix cd_step(const ComplexMatrix& h_t, const ComplexMatrix& sigma_now,
                      const ComplexMatrix& sigma_lag, double tau, double delta,
                      CdMode mode) {
  if (mode == CdMode::Exact) {
    const ComplexMatrix h = cd_hamiltonian(h_t, sigma_now, sigma_lag, tau);
    const ComplexMatrix u = mat_exp(h, -kImag * delta);
    return u * sigma_now * u.adjoint();
  }

  // Trotter split: the commutator term through copies of sigma as resources,
  // then the plain H(t) part through its single-state form.
  // -(i/tau)[s_lag, s_now] = (M- - M+)/(2 tau) with M+- = C^dag C / C C^dag,
  // C = s_lag + i s_now; both PSD with equal trace.
  const ComplexMatrix c_op = sigma_lag + kImag * sigma_now;
  const ComplexMatrix m_plus = c_op.adjoint() * c_op;
  const ComplexMatrix m_minus = c_op * c_op.adjoint();
  const double weight = m_plus.trace().real();

  ComplexMatrix sigma = sigma_now;
  if (weight > 1e-12) {
    const ComplexMatrix rho_minus = m_minus / weight;
    const ComplexMatrix rho_plus = m_plus / weight;
    sigma = circuit_rotate(rho_minus, std::move(sigma), weight / (2.0 * tau), delta);
    sigma = circuit_rotate(rho_plus, std::move(sigma), -weight / (2.0 * tau), delta);
  }

  const StateDecomposition dec = shift_normalize_decompose(h_t);
  for (const auto& term : dec.terms)
    sigma = circuit_rotate(term.rho, std::move(sigma), term.weight.real(), delta);
  return sigma;
}

AdiabaticResult run_adiabatic(const CdProblem& p, const Schedule& sched,
                              const CdOptions& opts) {
  p.validate();
  sched.validate();

  const auto n = static_cast<long>(std::llround(sched.T / sched.delta));
  const auto lag_steps = static_cast<std::size_t>(std::llround(sched.tau / sched.delta));
  const long stride = std::max<long>(1, n / 200);
  const bool fixed_target = std::holds_alternative<ComplexMatrix>(p.target);

  AdiabaticResult res;
  ComplexMatrix sigma = p.psi0 * p.psi0.adjoint();
  std::deque<ComplexMatrix> lag_ring{sigma};

  auto record = [&](double t) {
    const ComplexMatrix h_t = p.target_at(sched.at(t), sigma);
    res.times.push_back(t);
    res.energies.push_back((h_t * sigma).trace().real());
    res.residuals.push_back((h_t * sigma - sigma * h_t).norm());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h_t);
    if (es.eigenvalues()(1) - es.eigenvalues()(0) < 1e-6) res.degenerate_gap_warning = true;
    if (fixed_target) {
      const ComplexVector g = es.eigenvectors().col(0);
      const double overlap = std::max(0.0, (g.adjoint() * sigma * g)(0, 0).real());
      res.fidelities.push_back(std::sqrt(overlap));
    }
  };
  record(0.0);

  for (long step = 0; step < n; ++step) {
    const double t = double(step) * sched.delta;
    const ComplexMatrix& lag =
        lag_ring.size() > lag_steps ? lag_ring[lag_steps] : lag_ring.back();
    const ComplexMatrix h_t = p.target_at(sched.at(t), sigma);
    sigma = opts.cd_term == CdTermMode::Off
                ? cd_step(h_t, sigma, sigma, sched.tau, sched.delta, opts.realization)
                : cd_step(h_t, sigma, lag, sched.tau, sched.delta, opts.realization);
    res.error_budget += std::pow(sched.delta * h_t.norm(), 2);

    lag_ring.push_front(sigma);
    while (lag_ring.size() > lag_steps + 1) lag_ring.pop_back();
    if ((step + 1) % stride == 0 || step + 1 == n) record(double(step + 1) * sched.delta);
  }

  res.sigma = sigma;
  res.energy = res.energies.back();
  return res;
}

double variance_lower_bound(const ComplexMatrix& a, const Schedule& sched,
                            const ComplexMatrix& h0_doubled, const CdOptions& opts) {
  if (!is_hermitian(a, 1e-9))
    throw std::invalid_argument("variance_lower_bound: observable must be Hermitian");
  const Index d = a.rows();
  const ComplexMatrix a2 = a * a;
  const ComplexMatrix h_a =
      0.5 * (kron(a2, identity(d)) + kron(identity(d), a2)) - kron(a, a);

  CdProblem problem;
  problem.H0 = h0_doubled;
  problem.target = h_a;
  problem.psi0 = ground_state(h0_doubled);
  const AdiabaticResult res = run_adiabatic(problem, sched, opts);
  return (h_a * res.sigma).trace().real();
}

VarianceOptimum variance_exact_optimum(const ComplexMatrix& a, const ComplexMatrix& h0,
                                       const Schedule& sched, VarianceSign sign,
                                       const CdOptions& opts) {
  if (!is_hermitian(a, 1e-9))
    throw std::invalid_argument("variance_exact_optimum: observable must be Hermitian");
  const double s = sign == VarianceSign::Minus ? -1.0 : 1.0;

  // H(sigma) = A^2 + s <A> A with <A> = sum_j a_j Tr[P_j sigma]. Written over
  // the trace-one operators P/rank, the coupling of (xi = P_j/r_j, rho =
  // P_i/r_i) is s a_i a_j r_i r_j.
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a);
  const Index d = a.rows();
  const double group_tol = 1e-10 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());

  struct Eigenblock {
    double value;
    double rank;
    ComplexMatrix state;  // P / rank
  };
  std::vector<Eigenblock> blocks;
  Index i = 0;
  while (i < d) {
    Index j = i;
    ComplexMatrix projector = ComplexMatrix::Zero(d, d);
    while (j < d && es.eigenvalues()(j) - es.eigenvalues()(i) <= group_tol) {
      projector += es.eigenvectors().col(j) * es.eigenvectors().col(j).adjoint();
      ++j;
    }
    const double rank = double(j - i);
    blocks.push_back({es.eigenvalues()(i), rank, projector / rank});
    i = j;
  }

  StateDependentTarget target;
  target.fixed_part = a * a;
  for (const auto& bi : blocks)
    for (const auto& bj : blocks)
      target.couplings.push_back(
          {s * bi.value * bj.value * bi.rank * bj.rank, bj.state, bi.state});

  CdProblem problem;
  problem.H0 = h0;
  problem.target = target;
  problem.psi0 = ground_state(h0);
  const AdiabaticResult res = run_adiabatic(problem, sched, opts);

  VarianceOptimum out;
  out.sigma = res.sigma;
  const double mean = (a * res.sigma).trace().real();
  out.variance = (a * a * res.sigma).trace().real() - mean * mean;
  out.eigenstate_residual = (a * res.sigma - res.sigma * a).norm();
  return out;
}

}  // namespace sbqs
