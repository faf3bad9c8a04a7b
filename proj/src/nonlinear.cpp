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

#include "sbqs/nonlinear.hpp"

#include <algorithm>
#include <cmath>

namespace sbqs {

long HistoryTerm::copies() const {
  long n = 0;
  for (int p : powers) n += p;
  return n;
}

void HistoryTerm::validate(const Tolerances& tol) const {
  if (delays.size() != powers.size())
    throw std::invalid_argument("HistoryTerm: delays and powers differ in length");
  for (double a : delays)
    if (a < 0) throw std::invalid_argument("HistoryTerm: delays must be nonnegative");
  for (int p : powers)
    if (p < 1) throw std::invalid_argument("HistoryTerm: powers must be >= 1");
  if (!is_hermitian(xi, tol.herm) || std::abs(xi.trace() - Complex{1.0, 0.0}) > tol.trace ||
      min_eigenvalue(0.5 * (xi + xi.adjoint())) < -tol.psd)
    throw std::invalid_argument("HistoryTerm: xi must be positive with unit trace");
  require_density(rho, tol, "HistoryTerm resource");
}

HistoryBuffer::HistoryBuffer(double delta, double max_delay, ComplexMatrix initial)
    : delta_(delta) {
  if (delta <= 0) throw std::invalid_argument("HistoryBuffer: delta must be positive");
  if (max_delay < 0) throw std::invalid_argument("HistoryBuffer: negative window");
  capacity_ = static_cast<std::size_t>(std::llround(max_delay / delta)) + 1;
  states_.assign(capacity_, initial);
}

HistoryBuffer::HistoryBuffer(double delta, std::vector<ComplexMatrix> newest_first)
    : delta_(delta) {
  if (delta <= 0) throw std::invalid_argument("HistoryBuffer: delta must be positive");
  if (newest_first.empty()) throw std::invalid_argument("HistoryBuffer: empty history");
  capacity_ = newest_first.size();
  states_.assign(newest_first.begin(), newest_first.end());
}

const ComplexMatrix& HistoryBuffer::at_delay(double a) const {
  const auto k = static_cast<long>(std::llround(a / delta_));
  if (std::abs(a - double(k) * delta_) > 0.5 * delta_ || k < 0)
    throw GridMismatchError("HistoryBuffer: delay " + std::to_string(a) +
                            " does not sit on the delta grid");
  if (static_cast<std::size_t>(k) >= states_.size())
    throw GridMismatchError("HistoryBuffer: delay " + std::to_string(a) +
                            " is outside the stored window");
  return states_[static_cast<std::size_t>(k)];
}

void HistoryBuffer::push(ComplexMatrix next) {
  states_.push_front(std::move(next));
  while (states_.size() > capacity_) states_.pop_back();
}

QRegister build_gamma_register(const HistoryTerm& term, const HistoryBuffer& buf) {
  const Index d = term.xi.rows();
  QRegister reg;
  reg.dims.push_back(d);
  reg.state = term.xi;
  for (std::size_t j = 0; j < term.delays.size(); ++j) {
    const ComplexMatrix& past = buf.at_delay(term.delays[j]);
    if (past.rows() != d)
      throw DimensionError("build_gamma_register: history dimension mismatch");
    for (int copy = 0; copy < term.powers[j]; ++copy) {
      reg.state = kron(reg.state, past);
      reg.dims.push_back(d);
    }
  }
  return reg;
}

namespace {

// Index map of |1><1| (x) S_{a,b} + |0><0| (x) I on [2, dims...].
std::vector<Index> controlled_swap_permutation(const std::vector<Index>& full_dims,
                                               std::size_t a, std::size_t b) {
  const std::vector<Index> swapped = swap_digits_permutation(full_dims, a, b);
  Index total = 1;
  for (Index d : full_dims) total *= d;
  const Index half = total / 2;  // control is the most significant digit
  std::vector<Index> perm(static_cast<std::size_t>(total));
  for (Index r = 0; r < total; ++r)
    perm[static_cast<std::size_t>(r)] = r < half ? r : swapped[static_cast<std::size_t>(r)];
  return perm;
}

}  // namespace

ControlQubit chain_cswap_estimate(const QRegister& xi_gamma, Complex c, double delta) {
  if (xi_gamma.dims.size() < 2)
    throw std::invalid_argument("chain_cswap_estimate: need at least two parties");
  const ControlQubit prepared = ControlQubit::standard(c, delta);

  std::vector<Index> dims;
  dims.push_back(2);
  dims.insert(dims.end(), xi_gamma.dims.begin(), xi_gamma.dims.end());

  ComplexMatrix state = kron(prepared.density(), xi_gamma.state);
  for (std::size_t k = 0; k + 1 < xi_gamma.dims.size(); ++k) {
    const auto perm = controlled_swap_permutation(dims, k + 1, k + 2);
    state = conjugate_by_permutation(state, perm);
  }

  const ComplexMatrix control = partial_trace(QRegister{dims, std::move(state)}, {0}).state;
  const Complex amp0 = std::sqrt(control(0, 0));
  return ControlQubit{amp0, control(1, 0) / amp0};
}

namespace {

HeraldResult apply_term(const HistoryTerm& term, const HistoryBuffer& buf,
                        const ComplexMatrix& sigma, double delta,
                        const NonlinearOptions& opts, std::mt19937_64* rng) {
  if (opts.circuit) {
    const QRegister reg = build_gamma_register(term, buf);
    const ControlQubit updated = chain_cswap_estimate(reg, Complex{term.c, 0.0}, delta);
    return dme_cswap_apply(updated, term.rho, sigma, opts.herald, rng);
  }

  // Exact route: the coupling trace directly, then the heralded map.
  ComplexMatrix gamma = identity(term.xi.rows());
  for (std::size_t j = 0; j < term.delays.size(); ++j) {
    const ComplexMatrix& past = buf.at_delay(term.delays[j]);
    for (int p = 0; p < term.powers[j]; ++p) gamma = gamma * past;
  }
  const Complex coupling = term.c * (term.xi * gamma).trace();
  const Complex theta = coupling * delta;

  HeraldResult res;
  res.mode = HeraldMode::ExactConditional;
  res.state = conjugate_by_generator(sigma, term.rho, theta, true);
  // Herald probability the equivalent circuit would record.
  const double overlap = (term.rho * sigma).trace().real();
  const double t2 = std::norm(theta);
  res.p_herald = 0.5 * (1.0 + 2.0 * theta.imag() * overlap + t2) / (1.0 + t2);
  return res;
}

}  // namespace

HeraldResult nonlinear_step(const HistoryTerm& term, const HistoryBuffer& buf,
                            double delta, const NonlinearOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  return apply_term(term, buf, buf.current(), delta, opts, &rng);
}

Trajectory simulate_history_dependent(const std::vector<HistoryTerm>& terms,
                                      const StateDecomposition* h0, HistoryBuffer buf,
                                      double T, double delta, const NonlinearOptions& opts,
                                      ResourceReport* report) {
  if (delta <= 0) throw std::invalid_argument("simulate_history_dependent: delta <= 0");
  double min_delay = 0.0;
  for (const auto& term : terms) {
    term.validate();
    for (double a : term.delays)
      if (a > 0) min_delay = min_delay == 0.0 ? a : std::min(min_delay, a);
  }
  if (min_delay > 0 && delta > min_delay / 10.0)
    throw StepSizeError("simulate_history_dependent: delta must be <= min delay / 10");

  std::vector<GeneratorTerm> h0_gens;
  std::vector<Complex> h0_thetas;
  if (h0) {
    for (const auto& term : h0->terms) {
      h0_gens.emplace_back(term.rho);
      h0_thetas.push_back(term.weight * delta);
    }
  }

  const long n = std::max<long>(1, static_cast<long>(std::llround(T / delta)));
  const long stride = opts.record_stride > 0 ? opts.record_stride : std::max<long>(1, n / 100);
  std::mt19937_64 rng(opts.seed);

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(buf.current());

  for (long step = 1; step <= n; ++step) {
    ComplexMatrix sigma = buf.current();
    double local_weight = 0.0;
    for (const auto& term : terms) {
      HeraldResult r = apply_term(term, buf, sigma, delta, opts, &rng);
      traj.herald_probs.push_back(r.p_herald);
      sigma = std::move(r.state);
      local_weight += std::abs(term.c);
    }
    for (std::size_t idx = 0; idx < h0_gens.size(); ++idx) {
      sigma = h0_gens[idx].conjugate(sigma, h0_thetas[idx], true);
      local_weight += std::abs(h0->terms[idx].weight);
    }
    traj.error_budget += std::pow(delta * local_weight, 2);
    buf.push(sigma);
    if (step % stride == 0 || step == n) {
      traj.times.push_back(double(step) * delta);
      traj.states.push_back(buf.current());
    }
  }

  if (report) {
    report->steps = n;
    report->terms_per_step = static_cast<long>(terms.size() + (h0 ? h0->terms.size() : 0));
    long copies = 1;
    for (const auto& term : terms) copies = std::max(copies, term.copies());
    report->copies_per_term = copies;
    const double log_c = std::log10(double(copies));
    const double log_r = std::log10(std::max<double>(1, report->terms_per_step));
    report->log10_rerun_copies = std::log10(double(n)) + log_r + double(n) * log_c;
    report->log10_preprovision_copies =
        copies == 1 ? std::log10(double(n)) + log_r
                    : log_r + double(n + 1) * log_c - std::log10(double(copies - 1));
    report->model = "n*R*C^n";
  }
  return traj;
}

}  // namespace sbqs
