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

#include "sbqs/nld.hpp"

#include <algorithm>
#include <cmath>

namespace sbqs {

int Monomial::total_degree() const {
  int g = 0;
  for (const auto& [key, r] : exps) g += r;
  return g;
}

int Monomial::degree_at_slot(int j) const {
  int g = 0;
  for (const auto& [key, r] : exps)
    if (key.first == j) g += r;
  return g;
}

void NldSystem::validate() const {
  if (D < 1) throw std::invalid_argument("NldSystem: D must be >= 1");
  if (x0 == 0.0) throw std::invalid_argument("NldSystem: x0 must be nonzero");
  if (std::abs(x0) >= 1.0) throw std::invalid_argument("NldSystem: |x0| must be < 1");
  if (alpha <= 0.0) throw std::invalid_argument("NldSystem: alpha must be positive");
  if (taylor_order < 1) throw std::invalid_argument("NldSystem: taylor_order must be >= 1");
  if (int(degrees.size()) != slot_count())
    throw std::invalid_argument("NldSystem: need one degree bound per time slot");
  for (double a : delays)
    if (a <= 0) throw std::invalid_argument("NldSystem: delays must be positive");
  for (const auto& c : coefficients) {
    if (c.m < 1 || c.m > D || c.n < 1 || c.n > D)
      throw std::invalid_argument("NldSystem: coefficient row/column out of range");
    for (const auto& [key, r] : c.monomial.exps) {
      const auto [j, i] = key;
      if (j < 0 || j >= slot_count())
        throw std::invalid_argument("NldSystem: monomial references an unknown time slot");
      if (i < 1 || i > D)
        throw std::invalid_argument("NldSystem: monomial references an unknown variable");
      if (r < 1 || r > degrees[static_cast<std::size_t>(j)])
        throw std::invalid_argument("NldSystem: exponent outside the declared degree bound");
    }
  }
}

double auto_alpha(double bound, int D) {
  if (bound <= 0) throw std::invalid_argument("auto_alpha: bound must be positive");
  return 0.9 / (bound * std::sqrt(double(D + 1)));
}

EmbeddedState embed(const RealVector& x, const NldSystem& sys) {
  if (x.size() != sys.D) throw std::invalid_argument("embed: wrong variable count");
  const Index dim = sys.D + 2;
  ComplexVector psi = ComplexVector::Zero(dim);
  psi(0) = sys.x0;
  double ball = sys.x0 * sys.x0;
  for (int i = 0; i < sys.D; ++i) {
    const double z = sys.alpha * x(i);
    psi(i + 1) = z;
    ball += z * z;
  }
  if (ball > 1.0)
    throw ScalingError("embed: variables exceed the unit-ball budget; lower alpha "
                       "(have " + std::to_string(ball) + ")");
  psi(dim - 1) = std::sqrt(1.0 - ball);
  return EmbeddedState{std::move(psi)};
}

RealVector read_out(const EmbeddedState& state, const NldSystem& sys) {
  RealVector x(sys.D);
  for (int i = 0; i < sys.D; ++i) x(i) = state.psi(i + 1).real() / sys.alpha;
  return x;
}

namespace {

// sum_{k=0}^r (1-u)^k = sum_p (-1)^p binom(r+1, p+1) u^p
std::vector<double> taylor_inverse_coeffs(int r) {
  std::vector<double> c(static_cast<std::size_t>(r) + 1);
  double binom = double(r + 1);  // binom(r+1, 1)
  for (int p = 0; p <= r; ++p) {
    c[static_cast<std::size_t>(p)] = (p % 2 == 0 ? 1.0 : -1.0) * binom;
    binom *= double(r - p) / double(p + 2);
  }
  return c;
}

struct Atom {
  Complex weight;
  // per global slot: projector carrier, or nullopt for an identity factor
  std::vector<std::optional<ComplexVector>> slots;
};

struct ResourcePiece {
  Complex coeff;
  GeneratorTerm gen;
};

struct Row {
  int m, n;
  std::vector<std::pair<Monomial, double>> monomials;
  std::vector<Atom> atoms;
  std::vector<ResourcePiece> resources;
};

struct PolPiece {
  Complex coeff;
  ComplexVector carrier;
};

// |a><b| = P(+) + i P(-) - (1+i)/2 (|a><a| + |b><b|), a != b.
std::vector<PolPiece> polarization_pieces(Index dim, Index a, Index b) {
  const double s = 1.0 / std::sqrt(2.0);
  ComplexVector plus = ComplexVector::Zero(dim);
  plus(a) = s;
  plus(b) = s;
  ComplexVector minus = ComplexVector::Zero(dim);
  minus(a) = s;
  minus(b) = kImag * s;
  return {{Complex{1.0, 0.0}, plus},
          {kImag, minus},
          {Complex{-0.5, -0.5}, basis_vector(dim, a)},
          {Complex{-0.5, -0.5}, basis_vector(dim, b)}};
}

struct Engine {
  const NldSystem* sys;
  Index dim;                         // D + 2
  std::vector<double> slot_delays;   // per time slot, slot 0 = 0
  std::vector<int> copies_per_slot;  // K_j
  std::vector<int> slot_time;       // global slot -> time slot index
  long total_copies = 0;
  std::vector<Row> rows;
  long atoms_per_step = 0;  // R
};

std::map<std::pair<int, int>, std::map<Monomial, double>> extended_rows(const NldSystem& sys) {
  std::map<std::pair<int, int>, std::map<Monomial, double>> rows;

  // Rescaled user rows: stored variables are z = alpha x, so each monomial
  // coefficient picks up alpha^(-degree).
  for (const auto& c : sys.coefficients) {
    const double scaled = c.value * std::pow(sys.alpha, -c.monomial.total_degree());
    rows[{c.m, c.n}][c.monomial] += scaled;
  }

  // Normalization row: d(slack)/dt = f_{D+1,0} x0 with
  // f_{D+1,0} = -x0^{-1} (sum_k (1-u)^k) sum_{mn} f_mn z_m z_n.
  const auto tc = taylor_inverse_coeffs(sys.taylor_order);
  const int slack = sys.D + 1;
  for (const auto& c : sys.coefficients) {
    const double scaled = c.value * std::pow(sys.alpha, -c.monomial.total_degree());
    for (int p = 0; p <= sys.taylor_order; ++p) {
      Monomial mono = c.monomial;
      mono.exps[{0, c.m}] += 1;
      mono.exps[{0, c.n}] += 1;
      if (p > 0) mono.exps[{0, slack}] += p;
      rows[{slack, 0}][mono] +=
          -tc[static_cast<std::size_t>(p)] * scaled / sys.x0;
    }
  }

  // Prune numerically empty entries.
  for (auto it = rows.begin(); it != rows.end();) {
    auto& monos = it->second;
    for (auto mit = monos.begin(); mit != monos.end();)
      mit = std::abs(mit->second) < 1e-15 ? monos.erase(mit) : std::next(mit);
    it = monos.empty() ? rows.erase(it) : std::next(it);
  }
  return rows;
}

Engine compile(const NldSystem& sys) {
  sys.validate();
  Engine eng;
  eng.sys = &sys;
  eng.dim = sys.D + 2;

  eng.slot_delays.push_back(0.0);
  for (double a : sys.delays) eng.slot_delays.push_back(a);

  const auto rows = extended_rows(sys);

  // Copies per time slot: the worst monomial need, sum_i ceil(r_ij / 2).
  eng.copies_per_slot.assign(eng.slot_delays.size(), 0);
  eng.copies_per_slot[0] = 1;  // constants are read through |0><0| at slot 0
  for (const auto& [key, monos] : rows) {
    for (const auto& [mono, coeff] : monos) {
      std::map<int, int> need;
      for (const auto& [ji, r] : mono.exps) need[ji.first] += (r + 1) / 2;
      for (const auto& [j, k] : need)
        eng.copies_per_slot[static_cast<std::size_t>(j)] =
            std::max(eng.copies_per_slot[static_cast<std::size_t>(j)], k);
    }
  }
  std::vector<int> slot_base(eng.slot_delays.size());
  for (std::size_t j = 0; j < eng.copies_per_slot.size(); ++j) {
    slot_base[j] = int(eng.total_copies);
    eng.total_copies += eng.copies_per_slot[j];
    for (int k = 0; k < eng.copies_per_slot[j]; ++k) eng.slot_time.push_back(int(j));
  }

  for (const auto& [mn, monos] : rows) {
    Row row;
    row.m = mn.first;
    row.n = mn.second;
    row.monomials.assign(monos.begin(), monos.end());

    for (const auto& [mono, coeff] : monos) {
      // Slot assignment: per time block, variables in ascending order; even
      // powers become projector pairs, an odd remainder becomes |0><i| with
      // a 1/x0 factor.
      std::vector<std::optional<ComplexVector>> base(
          static_cast<std::size_t>(eng.total_copies));
      std::vector<int> cursor = slot_base;
      double x0_factors = 1.0;
      std::vector<std::size_t> odd_slots;
      std::vector<Index> odd_vars;

      if (mono.exps.empty()) {
        base[static_cast<std::size_t>(slot_base[0])] = basis_vector(eng.dim, 0);
        x0_factors /= sys.x0 * sys.x0;
      } else {
        for (const auto& [ji, r] : mono.exps) {
          const int j = ji.first;
          const Index i = ji.second;
          for (int k = 0; k < r / 2; ++k)
            base[static_cast<std::size_t>(cursor[static_cast<std::size_t>(j)]++)] =
                basis_vector(eng.dim, i);
          if (r % 2 == 1) {
            const auto slot =
                static_cast<std::size_t>(cursor[static_cast<std::size_t>(j)]++);
            x0_factors /= sys.x0;
            if (i == 0) {
              base[slot] = basis_vector(eng.dim, 0);
            } else {
              odd_slots.push_back(slot);
              odd_vars.push_back(i);
            }
          }
        }
      }

      // Expand every |0><i| factor into its four polarization states.
      std::vector<Atom> partial{{Complex{coeff * x0_factors, 0.0}, base}};
      for (std::size_t k = 0; k < odd_slots.size(); ++k) {
        const auto pieces = polarization_pieces(eng.dim, 0, odd_vars[k]);
        std::vector<Atom> next;
        next.reserve(partial.size() * pieces.size());
        for (const auto& atom : partial)
          for (const auto& piece : pieces) {
            Atom expanded = atom;
            expanded.weight *= piece.coeff;
            expanded.slots[odd_slots[k]] = piece.carrier;
            next.push_back(std::move(expanded));
          }
        partial = std::move(next);
      }
      row.atoms.insert(row.atoms.end(), partial.begin(), partial.end());
    }

    // Resource pieces of i |m><n|.
    if (row.m == row.n) {
      const ComplexVector e = basis_vector(eng.dim, row.m);
      row.resources.push_back({kImag, GeneratorTerm(e * e.adjoint())});
    } else {
      for (const auto& piece : polarization_pieces(eng.dim, row.m, row.n))
        row.resources.push_back(
            {kImag * piece.coeff, GeneratorTerm(piece.carrier * piece.carrier.adjoint())});
    }
    eng.atoms_per_step += long(row.atoms.size() * row.resources.size());
    eng.rows.push_back(std::move(row));
  }
  return eng;
}

double slot_expectation(const ComplexVector& carrier, const ComplexMatrix& sigma) {
  return (carrier.adjoint() * sigma * carrier)(0, 0).real();
}

ComplexMatrix atom_xi_state(const Engine& eng, const Atom& atom, double* scale) {
  ComplexMatrix state = ComplexMatrix::Identity(1, 1);
  *scale = 1.0;
  for (const auto& slot : atom.slots) {
    if (slot) {
      state = kron(state, ComplexMatrix(*slot * slot->adjoint()));
    } else {
      state = kron(state, ComplexMatrix(identity(eng.dim) / double(eng.dim)));
      *scale *= double(eng.dim);
    }
  }
  return state;
}

}  // namespace

ComplexMatrix build_Fmn(const NldSystem& sys, int m, int n) {
  const Engine eng = compile(sys);
  Index full = 1;
  for (long k = 0; k < eng.total_copies; ++k) full *= eng.dim;
  ComplexMatrix f = ComplexMatrix::Zero(full, full);
  for (const auto& row : eng.rows) {
    if (row.m != m || row.n != n) continue;
    for (const auto& atom : row.atoms) {
      ComplexMatrix op = ComplexMatrix::Identity(1, 1);
      for (const auto& slot : atom.slots)
        op = kron(op, slot ? ComplexMatrix(*slot * slot->adjoint()) : identity(eng.dim));
      f += atom.weight * op;
    }
  }
  return f;
}

long fmn_state_count(const NldSystem& sys, int m, int n) {
  const Engine eng = compile(sys);
  for (const auto& row : eng.rows)
    if (row.m == m && row.n == n) return long(row.atoms.size());
  return 0;
}

long copy_count(const NldSystem& sys) { return compile(sys).total_copies; }

NldResult solve_nld(const NldSystem& sys, const std::function<RealVector(double)>& history,
                    double T, double delta, const NldOptions& opts) {
  if (delta <= 0) throw std::invalid_argument("solve_nld: delta must be positive");
  const Engine eng = compile(sys);

  double max_delay = 0.0, min_delay = 0.0;
  for (double a : sys.delays) {
    max_delay = std::max(max_delay, a);
    min_delay = min_delay == 0.0 ? a : std::min(min_delay, a);
  }
  if (min_delay > 0 && delta > min_delay / 10.0)
    throw StepSizeError("solve_nld: delta must be <= min delay / 10");

  // History buffer of embedded densities on the delta grid.
  const auto slots_back = static_cast<long>(std::llround(max_delay / delta));
  std::vector<ComplexMatrix> initial;
  for (long k = 0; k <= slots_back; ++k) {
    const EmbeddedState e = embed(history(-double(k) * delta), sys);
    initial.push_back(e.psi * e.psi.adjoint());
  }
  HistoryBuffer buf(delta, std::move(initial));

  const long n = std::max<long>(1, static_cast<long>(std::llround(T / delta)));
  const long stride = opts.record_stride > 0 ? opts.record_stride : std::max<long>(1, n / 200);
  std::mt19937_64 rng(opts.seed);

  NldResult res;
  auto record = [&](double t, const ComplexMatrix& sigma) {
    const double head = std::sqrt(std::max(0.0, sigma(0, 0).real()));
    res.x0_drift = std::max(res.x0_drift, std::abs(head - sys.x0));
    RealVector x(sys.D);
    for (int i = 0; i < sys.D; ++i) x(i) = sigma(0, i + 1).real() / head / sys.alpha;
    const double slack = sigma(0, sys.D + 1).real() / head;
    res.slack_taylor_error = std::max(
        res.slack_taylor_error, std::pow(std::abs(1.0 - slack), sys.taylor_order));
    res.times.push_back(t);
    res.x.push_back(std::move(x));
  };
  record(0.0, buf.current());

  std::vector<Complex> tvals;
  for (long step = 1; step <= n; ++step) {
    ComplexMatrix sigma = buf.current();
    double group_weight = 0.0;
    for (const auto& row : eng.rows) {
      tvals.assign(row.atoms.size(), Complex{0.0, 0.0});
      if (!opts.circuit) {
        for (std::size_t k = 0; k < row.atoms.size(); ++k) {
          double t = 1.0;
          for (std::size_t s = 0; s < row.atoms[k].slots.size(); ++s)
            if (row.atoms[k].slots[s])
              t *= slot_expectation(*row.atoms[k].slots[s],
                                    buf.at_delay(eng.slot_delays[static_cast<std::size_t>(
                                        eng.slot_time[s])]));
          tvals[k] = t;
        }
      } else {
        // One chained c-SWAP estimate per atom on the two-party register
        // (atom state on the copy space) (x) (stacked state copies).
        ComplexMatrix psi_state = ComplexMatrix::Identity(1, 1);
        for (long s = 0; s < eng.total_copies; ++s)
          psi_state = kron(psi_state,
                           buf.at_delay(eng.slot_delays[static_cast<std::size_t>(
                               eng.slot_time[static_cast<std::size_t>(s)])]));
        const Index copy_dim = psi_state.rows();
        for (std::size_t k = 0; k < row.atoms.size(); ++k) {
          double scale = 1.0;
          const ComplexMatrix xi = atom_xi_state(eng, row.atoms[k], &scale);
          const QRegister reg{{copy_dim, copy_dim}, kron(xi, psi_state)};
          const ControlQubit q = chain_cswap_estimate(reg, Complex{1.0, 0.0}, delta);
          tvals[k] = q.ratio() / (-kImag * delta) * scale;
        }
      }

      // Group the rotations by resource state: same-generator factors
      // compose exactly, so the effective product has one factor per piece.
      for (const auto& piece : row.resources) {
        Complex f_val{0.0, 0.0};
        for (std::size_t k = 0; k < row.atoms.size(); ++k) {
          const Complex theta = delta * row.atoms[k].weight * tvals[k] * piece.coeff;
          if (!opts.circuit) {
            sigma = piece.gen.conjugate(sigma, theta, true);
          } else {
            CswapOptions copts;
            copts.rng = &rng;
            copts.guard = 0.25;  // weights up to ~x0^-3 need headroom at small delta
            HeraldResult h = dme_cswap_step_weighted(piece.gen.rho(), sigma, delta,
                                                     theta / delta, copts);
            sigma = std::move(h.state);
          }
          f_val += row.atoms[k].weight * tvals[k];
        }
        group_weight += std::abs(f_val);
      }
    }
    res.error_budget += std::pow(delta * group_weight, 2);
    buf.push(std::move(sigma));
    if (step % stride == 0 || step == n) record(double(step) * delta, buf.current());
  }

  res.report.steps = n;
  res.report.terms_per_step = eng.atoms_per_step;
  res.report.copies_per_term = eng.total_copies;
  const double log_c = std::log10(double(std::max<long>(1, eng.total_copies)));
  const double log_r = std::log10(double(std::max<long>(1, eng.atoms_per_step)));
  res.report.log10_rerun_copies = std::log10(double(n)) + log_r + double(n) * log_c;
  res.report.log10_preprovision_copies =
      eng.total_copies <= 1
          ? std::log10(double(n)) + log_r
          : log_r + double(n + 1) * log_c - std::log10(double(eng.total_copies - 1));
  res.report.model = "n*R*C^n";
  return res;
}

NldResult logistic_report(double r, double alpha, double x0, double x_init, double T,
                          double delta, const NldOptions& opts) {
  NldSystem sys;
  sys.D = 1;
  sys.degrees = {2};
  sys.x0 = x0;
  sys.alpha = 1.0;  // the quadratic coefficient already carries alpha

  NldCoefficient constant;
  constant.m = 1;
  constant.n = 1;
  constant.value = r - 1.0;
  sys.coefficients.push_back(constant);

  NldCoefficient linear;
  linear.m = 1;
  linear.n = 1;
  linear.monomial.exps[{0, 1}] = 1;
  linear.value = -r * alpha;
  sys.coefficients.push_back(linear);

  RealVector start(1);
  start << x_init;
  return solve_nld(sys, [start](double) { return start; }, T, delta, opts);
}

}  // namespace sbqs
