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

#include "sbqs/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "sbqs/cdopt.hpp"
#include "sbqs/oracle.hpp"

namespace sbqs {

namespace {

constexpr double kPi = 3.14159265358979323846;

const std::set<std::string>& known_kinds() {
  static const std::set<std::string> kinds{"decompose", "linear", "open", "nonlinear",
                                           "nld", "logistic", "amplifier", "gp",
                                           "cd", "variance"};
  return kinds;
}

Json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot read scenario file " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("scenario is not valid JSON: ") + e.what());
  }
}

struct Check {
  std::vector<std::string> violations;

  void fail(const std::string& msg) { violations.push_back(msg); }

  bool has(const Json& j, const std::string& key, const char* type) {
    if (!j.contains(key)) {
      fail("missing field '" + key + "'");
      return false;
    }
    const Json& v = j.at(key);
    const std::string t = type;
    const bool ok = (t == "number" && v.is_number()) || (t == "string" && v.is_string()) ||
                    (t == "array" && v.is_array()) || (t == "object" && v.is_object()) ||
                    (t == "integer" && v.is_number_integer());
    if (!ok) fail("field '" + key + "' must be a " + t);
    return ok;
  }

  // Parses a matrix and reports dimension problems instead of throwing.
  std::optional<ComplexMatrix> matrix(const Json& j, const std::string& key,
                                      Index square_dim = -1) {
    if (!j.contains(key)) {
      fail("missing field '" + key + "'");
      return std::nullopt;
    }
    try {
      ComplexMatrix m = matrix_from_json(j.at(key), key);
      if (m.rows() != m.cols()) {
        fail("matrix '" + key + "' must be square, got " + std::to_string(m.rows()) +
             "x" + std::to_string(m.cols()));
        return std::nullopt;
      }
      if (square_dim > 0 && m.rows() != square_dim) {
        fail("matrix '" + key + "' dimension mismatch: expected " +
             std::to_string(square_dim) + ", got " + std::to_string(m.rows()));
        return std::nullopt;
      }
      return m;
    } catch (const SchemaError& e) {
      fail(e.what());
      return std::nullopt;
    }
  }
};

void validate_payload(const std::string& kind, const Json& p, Check& check) {
  if (kind == "decompose") {
    if (check.has(p, "method", "string")) {
      const std::string m = p.at("method");
      if (m == "coherent_grid") {
        if (check.has(p, "grid", "object")) {
          const Json& g = p.at("grid");
          Check sub;
          sub.has(g, "delta", "number");
          sub.has(g, "cutoff", "number");
          sub.has(g, "n_max", "integer");
          for (auto& v : sub.violations) check.fail("grid: " + v);
        }
        check.has(p, "poly", "array");
      } else if (m == "polarization" || m == "support_split" || m == "shift_normalize") {
        check.matrix(p, "H");
      } else {
        check.fail("unknown decomposition method '" + m + "'");
      }
    }
  } else if (kind == "linear") {
    auto h = check.matrix(p, "H");
    if (h) check.matrix(p, "sigma0", h->rows());
    check.has(p, "t", "number");
    check.has(p, "epsilon", "number");
  } else if (kind == "open") {
    auto h = check.matrix(p, "H");
    if (check.has(p, "jumps", "array")) {
      int idx = 0;
      for (const auto& jump : p.at("jumps")) {
        Check sub;
        if (h) sub.matrix(jump, "L", h->rows());
        sub.has(jump, "gamma", "number");
        for (auto& v : sub.violations)
          check.fail("jumps[" + std::to_string(idx) + "]: " + v);
        ++idx;
      }
    }
    if (h) check.matrix(p, "sigma0", h->rows());
    check.has(p, "t", "number");
    check.has(p, "epsilon", "number");
  } else if (kind == "nonlinear") {
    auto sigma = check.matrix(p, "sigma0");
    if (check.has(p, "terms", "array")) {
      int idx = 0;
      for (const auto& term : p.at("terms")) {
        Check sub;
        sub.has(term, "c", "number");
        if (sigma) {
          sub.matrix(term, "xi", sigma->rows());
          sub.matrix(term, "rho", sigma->rows());
        }
        sub.has(term, "delays", "array");
        sub.has(term, "powers", "array");
        for (auto& v : sub.violations)
          check.fail("terms[" + std::to_string(idx) + "]: " + v);
        ++idx;
      }
    }
    if (p.contains("h0") && sigma) check.matrix(p, "h0", sigma->rows());
    check.has(p, "T", "number");
    check.has(p, "delta", "number");
  } else if (kind == "nld") {
    if (check.has(p, "system", "object")) {
      try {
        nld_system_from_json(p.at("system")).validate();
      } catch (const std::exception& e) {
        check.fail(std::string("system: ") + e.what());
      }
    }
    check.has(p, "x_init", "array");
    check.has(p, "T", "number");
    check.has(p, "delta", "number");
  } else if (kind == "logistic") {
    check.has(p, "r", "number");
    check.has(p, "alpha", "number");
    check.has(p, "x0", "number");
    check.has(p, "x_init", "number");
    check.has(p, "T", "number");
    check.has(p, "delta", "number");
  } else if (kind == "amplifier") {
    check.has(p, "g", "number");
    check.has(p, "g_delta", "number");
    if (check.has(p, "grid", "object")) {
      const Json& g = p.at("grid");
      Check sub;
      sub.has(g, "delta", "number");
      sub.has(g, "cutoff", "number");
      sub.has(g, "n_max", "integer");
      for (auto& v : sub.violations) check.fail("grid: " + v);
    }
  } else if (kind == "gp") {
    check.has(p, "sites", "integer");
    check.has(p, "g", "number");
    check.has(p, "T", "number");
    check.has(p, "delta", "number");
    if (check.has(p, "psi0", "array")) {
      if (p.contains("sites") && p.at("sites").is_number_integer() &&
          static_cast<Index>(p.at("psi0").size()) != p.at("sites").get<Index>())
        check.fail("psi0 length must equal sites");
    }
  } else if (kind == "cd") {
    auto h0 = check.matrix(p, "H0");
    if (check.has(p, "target", "object")) {
      const Json& t = p.at("target");
      Check sub;
      if (sub.has(t, "kind", "string")) {
        const std::string tk = t.at("kind");
        if (tk == "fixed") {
          if (h0) sub.matrix(t, "H", h0->rows());
        } else if (tk == "state_dependent") {
          if (h0 && t.contains("fixed")) sub.matrix(t, "fixed", h0->rows());
          if (sub.has(t, "couplings", "array")) {
            for (const auto& c : t.at("couplings")) {
              sub.has(c, "c", "number");
              if (h0) {
                sub.matrix(c, "xi", h0->rows());
                sub.matrix(c, "rho", h0->rows());
              }
            }
          }
        } else {
          sub.fail("target kind must be 'fixed' or 'state_dependent'");
        }
      }
      for (auto& v : sub.violations) check.fail("target: " + v);
    }
    check.has(p, "T", "number");
    check.has(p, "delta", "number");
    check.has(p, "tau", "number");
  } else if (kind == "variance") {
    check.matrix(p, "A");
    check.matrix(p, "H0");
    if (check.has(p, "op", "string")) {
      const std::string op = p.at("op");
      if (op != "lower_bound" && op != "exact_optimum")
        check.fail("op must be 'lower_bound' or 'exact_optimum'");
    }
    check.has(p, "T", "number");
    check.has(p, "delta", "number");
    check.has(p, "tau", "number");
  }
}

ValidationReport validate_document(const Json& doc) {
  Check check;
  if (!doc.is_object()) {
    check.fail("scenario must be a JSON object");
    return {check.violations};
  }
  if (check.has(doc, "kind", "string")) {
    const std::string kind = doc.at("kind");
    if (!known_kinds().count(kind)) {
      check.fail("unknown scenario kind '" + kind + "'");
    } else if (check.has(doc, "payload", "object")) {
      validate_payload(kind, doc.at("payload"), check);
    }
  }
  if (doc.contains("mode")) {
    const std::string m = doc.at("mode");
    if (m != "exact" && m != "circuit" && m != "sampled")
      check.fail("mode must be exact, circuit or sampled");
  }
  if (doc.contains("output")) {
    const Json& out = doc.at("output");
    Check sub;
    sub.has(out, "path", "string");
    if (out.contains("format")) {
      const std::string f = out.at("format");
      if (f != "csv" && f != "json") sub.fail("format must be csv or json");
    }
    for (auto& v : sub.violations) check.fail("output: " + v);
  }
  return {check.violations};
}

struct RunContext {
  std::string mode = "exact";
  std::uint64_t seed = 0;
  std::optional<std::string> out_path;
  std::string out_format = "csv";

  Provenance provenance() const { return Provenance{mode, seed, Tolerances{}}; }
  StepKind step_kind() const {
    return mode == "exact" ? StepKind::Exact : StepKind::Cswap;
  }
  HeraldMode herald() const {
    return mode == "sampled" ? HeraldMode::Sampled : HeraldMode::ExactConditional;
  }
};

StateDecomposition decompose_by_method(const std::string& method, const ComplexMatrix& h,
                                       double margin = 0.0) {
  if (method == "polarization") return polarization_decompose(h);
  if (method == "support_split") return support_split_decompose(h);
  if (method == "shift_normalize") return shift_normalize_decompose(h, margin);
  throw SchemaError("unknown decomposition method '" + method + "'");
}

void emit(const RunContext& ctx, Json& summary, const std::string& csv,
          const Trajectory* traj = nullptr) {
  if (!ctx.out_path) return;
  if (ctx.out_format == "csv") {
    write_text_file(*ctx.out_path, csv);
  } else {
    Json file = summary;
    file["provenance"] = ctx.provenance().to_json();
    if (traj) file["trajectory"] = trajectory_to_json(*traj);
    write_text_file(*ctx.out_path, file.dump(2) + "\n");
  }
  summary["output_path"] = *ctx.out_path;
}

Json run_decompose(const Json& p, const RunContext& ctx) {
  const std::string method = p.at("method");
  StateDecomposition dec;
  if (method == "coherent_grid") {
    const Json& g = p.at("grid");
    CoherentGrid grid{g.at("delta").get<double>(), g.at("cutoff").get<double>(),
                      g.at("n_max").get<Index>()};
    std::vector<AntinormalMonomial> poly;
    for (const auto& mono : p.at("poly"))
      poly.push_back({mono.at("m").get<int>(), mono.at("n").get<int>(),
                      complex_from_json(mono.at("coeff"), "coeff")});
    dec = coherent_grid_decompose(poly, grid);
  } else {
    dec = decompose_by_method(method, matrix_from_json(p.at("H"), "H"),
                              p.value("margin", 0.0));
  }
  Json summary;
  summary["kind"] = "decompose";
  summary["method"] = method;
  summary["terms"] = dec.terms.size();
  summary["reconstruction_error"] = dec.reconstruction_error;
  summary["decomposition"] = decomposition_to_json(dec);
  Json file = summary;
  if (ctx.out_path) {
    file["provenance"] = ctx.provenance().to_json();
    write_text_file(*ctx.out_path, file.dump(2) + "\n");
    summary["output_path"] = *ctx.out_path;
  }
  summary.erase("decomposition");
  return summary;
}

Json run_linear(const Json& p, const RunContext& ctx) {
  const ComplexMatrix h = matrix_from_json(p.at("H"), "H");
  const ComplexMatrix sigma0 = matrix_from_json(p.at("sigma0"), "sigma0");
  const double t = p.at("t").get<double>();
  const double eps = p.at("epsilon").get<double>();
  const StateDecomposition dec = decompose_by_method(p.value("method", "polarization"), h);

  const TrotterPlan schedule = plan(dec, t, eps);
  SimOptions opts;
  opts.kind = ctx.step_kind();
  opts.herald = ctx.herald();
  opts.seed = ctx.seed;
  opts.record_stride = p.value("record_stride", 0L);
  const Trajectory traj = simulate_linear(dec, sigma0, t, schedule, opts);

  Json summary;
  summary["kind"] = "linear";
  summary["trotter_steps"] = schedule.n;
  summary["error_budget"] = traj.error_budget;
  summary["samples"] = traj.times.size();
  summary["final_state"] = matrix_to_json(traj.final_state());
  emit(ctx, summary, trajectory_to_csv(traj, ctx.provenance()), &traj);
  return summary;
}

Json run_open(const Json& p, const RunContext& ctx) {
  const LindbladSpec spec = lindblad_from_json(p);
  const ComplexMatrix sigma0 = matrix_from_json(p.at("sigma0"), "sigma0");
  OpenOptions opts;
  opts.kind = ctx.step_kind();
  opts.herald = ctx.herald();
  opts.seed = ctx.seed;
  const OpenResult res = simulate_open(spec, sigma0, p.at("t").get<double>(),
                                       p.at("epsilon").get<double>(), opts);
  Json summary;
  summary["kind"] = "open";
  summary["trotter_steps"] = res.schedule.n;
  summary["identity_offset"] = complex_to_json(res.identity_offset);
  summary["final_state"] = matrix_to_json(res.trajectory.final_state());
  emit(ctx, summary, trajectory_to_csv(res.trajectory, ctx.provenance()), &res.trajectory);
  return summary;
}

Json run_nonlinear(const Json& p, const RunContext& ctx) {
  const ComplexMatrix sigma0 = matrix_from_json(p.at("sigma0"), "sigma0");
  std::vector<HistoryTerm> terms;
  for (const auto& t : p.at("terms")) terms.push_back(history_term_from_json(t));

  std::optional<StateDecomposition> h0;
  if (p.contains("h0"))
    h0 = decompose_by_method(p.value("h0_method", "polarization"),
                             matrix_from_json(p.at("h0"), "h0"));

  const double T = p.at("T").get<double>();
  const double delta = p.at("delta").get<double>();
  double max_delay = 0.0;
  for (const auto& term : terms)
    for (double a : term.delays) max_delay = std::max(max_delay, a);

  NonlinearOptions opts;
  opts.circuit = ctx.mode != "exact";
  opts.herald = ctx.herald();
  opts.seed = ctx.seed;
  ResourceReport report;
  HistoryBuffer buf(delta, max_delay, sigma0);
  const Trajectory traj = simulate_history_dependent(terms, h0 ? &*h0 : nullptr,
                                                     std::move(buf), T, delta, opts, &report);
  Json summary;
  summary["kind"] = "nonlinear";
  summary["resource_report"] = resource_report_to_json(report);
  summary["error_budget"] = traj.error_budget;
  summary["final_state"] = matrix_to_json(traj.final_state());
  emit(ctx, summary, trajectory_to_csv(traj, ctx.provenance()), &traj);
  return summary;
}

Json nld_summary(const NldResult& res) {
  Json summary;
  summary["resource_report"] = resource_report_to_json(res.report);
  summary["slack_taylor_error"] = res.slack_taylor_error;
  summary["x0_drift"] = res.x0_drift;
  summary["error_budget"] = res.error_budget;
  Json final_x = Json::array();
  for (Index i = 0; i < res.x.back().size(); ++i) final_x.push_back(res.x.back()(i));
  summary["final_x"] = std::move(final_x);
  return summary;
}

Json run_nld(const Json& p, const RunContext& ctx) {
  const NldSystem sys = nld_system_from_json(p.at("system"));
  const auto x_init = p.at("x_init").get<std::vector<double>>();
  if (static_cast<int>(x_init.size()) != sys.D)
    throw SchemaError("x_init length must equal the system dimension D");
  RealVector x0v(sys.D);
  for (int i = 0; i < sys.D; ++i) x0v(i) = x_init[static_cast<std::size_t>(i)];

  NldOptions opts;
  opts.circuit = ctx.mode != "exact";
  opts.seed = ctx.seed;
  const NldResult res = solve_nld(sys, [x0v](double) { return x0v; },
                                  p.at("T").get<double>(), p.at("delta").get<double>(), opts);
  Json summary = nld_summary(res);
  summary["kind"] = "nld";
  emit(ctx, summary, nld_trajectory_to_csv(res, ctx.provenance()));
  return summary;
}

Json run_logistic(const Json& p, const RunContext& ctx) {
  NldOptions opts;
  opts.circuit = ctx.mode != "exact";
  opts.seed = ctx.seed;
  const NldResult res = logistic_report(
      p.at("r").get<double>(), p.at("alpha").get<double>(), p.at("x0").get<double>(),
      p.at("x_init").get<double>(), p.at("T").get<double>(), p.at("delta").get<double>(),
      opts);
  Json summary = nld_summary(res);
  summary["kind"] = "logistic";
  emit(ctx, summary, nld_trajectory_to_csv(res, ctx.provenance()));
  return summary;
}

Json run_amplifier(const Json& p, const RunContext& ctx) {
  const double g = p.at("g").get<double>();
  const double g_delta = p.at("g_delta").get<double>();
  const Json& gj = p.at("grid");
  const CoherentGrid grid{gj.at("delta").get<double>(), gj.at("cutoff").get<double>(),
                          gj.at("n_max").get<Index>()};
  const long reps = p.value("trotter_reps", 2L);
  const Index d = grid.n_max;

  // Two-mode weights 2 (delta^2/pi)^2 Re[g conj(alpha beta)] on the product
  // coherent projectors; the conjugate term lands on the same projector.
  const double cell = grid.delta * grid.delta / kPi;
  const auto points = coherent_grid_points(grid);
  std::vector<ComplexVector> single;
  single.reserve(points.size());
  for (const Complex& alpha : points)
    single.push_back(truncated_coherent_state(alpha, grid.n_max));

  std::vector<double> weights;
  std::vector<ComplexVector> carriers;
  for (std::size_t a = 0; a < points.size(); ++a)
    for (std::size_t b = 0; b < points.size(); ++b) {
      const double w =
          2.0 * cell * cell * (g * std::conj(points[a] * points[b])).real();
      if (w == 0.0) continue;
      weights.push_back(w);
      ComplexVector prod(d * d);
      for (Index i = 0; i < d; ++i)
        prod.segment(i * d, d) = single[a](i) * single[b];
      carriers.push_back(std::move(prod));
    }

  // Reconstruction quality of the grid on the low-Fock block.
  const ComplexMatrix a_op = annihilation_operator(d);
  const ComplexMatrix h_true =
      g * (kron(a_op.adjoint(), a_op.adjoint()) + kron(a_op, a_op));
  const Index probe = std::min<Index>(3, d);
  ComplexMatrix block = ComplexMatrix::Zero(probe * probe, probe * probe);
  for (Index i = 0; i < probe * probe; ++i) {
    const Index row = (i / probe) * d + (i % probe);
    for (Index j = 0; j < probe * probe; ++j) {
      const Index col = (j / probe) * d + (j % probe);
      Complex acc{0.0, 0.0};
      for (std::size_t k = 0; k < carriers.size(); ++k)
        acc += weights[k] * carriers[k](row) * std::conj(carriers[k](col));
      block(i, j) = acc - h_true(row, col);
    }
  }

  // Vacuum input stays pure under the real-weight rank-1 rotations.
  const double delta = g_delta / g;
  ComplexVector psi = ComplexVector::Zero(d * d);
  psi(0) = 1.0;
  for (long rep = 0; rep < reps; ++rep)
    for (std::size_t k = 0; k < carriers.size(); ++k) {
      const Complex f =
          std::exp(-kImag * weights[k] * (delta / double(reps))) - 1.0;
      psi += f * carriers[k].dot(psi) * carriers[k];
    }
  psi /= psi.norm();

  ComplexVector target = ComplexVector::Zero(d * d);
  target(0) = 1.0;
  target(1 * d + 1) = -kImag * g_delta;
  target /= target.norm();
  const double overlap = std::norm(target.dot(psi));

  Json summary;
  summary["kind"] = "amplifier";
  summary["terms"] = weights.size();
  summary["overlap_with_pair_state"] = overlap;
  summary["block_reconstruction_error"] = block.norm();
  summary["fock_dim_per_mode"] = d;
  Json file = summary;
  if (ctx.out_path) {
    file["provenance"] = ctx.provenance().to_json();
    write_text_file(*ctx.out_path, file.dump(2) + "\n");
    summary["output_path"] = *ctx.out_path;
  }
  return summary;
}

Json run_gp(const Json& p, const RunContext& ctx) {
  const Index sites = p.at("sites").get<Index>();
  const double g = p.at("g").get<double>();
  const double hopping = p.value("hopping", 1.0);
  const double T = p.at("T").get<double>();
  const double delta = p.at("delta").get<double>();

  ComplexMatrix h0 = ComplexMatrix::Zero(sites, sites);
  for (Index i = 0; i + 1 < sites; ++i) {
    h0(i, i + 1) = -hopping;
    h0(i + 1, i) = -hopping;
  }
  if (p.contains("potential")) {
    const auto v = p.at("potential").get<std::vector<double>>();
    if (static_cast<Index>(v.size()) != sites)
      throw SchemaError("potential length must equal sites");
    for (Index i = 0; i < sites; ++i) h0(i, i) += v[static_cast<std::size_t>(i)];
  }

  ComplexVector psi0(sites);
  const Json& amp = p.at("psi0");
  if (static_cast<Index>(amp.size()) != sites)
    throw SchemaError("psi0 length must equal sites");
  for (Index i = 0; i < sites; ++i)
    psi0(i) = complex_from_json(amp[static_cast<std::size_t>(i)], "psi0 entry");
  psi0 /= psi0.norm();

  std::vector<HistoryTerm> terms;
  for (Index r = 0; r < sites; ++r) {
    HistoryTerm t;
    t.c = g;
    t.xi = basis_projector(sites, r);
    t.rho = basis_projector(sites, r);
    t.delays = {0.0};
    t.powers = {1};
    terms.push_back(std::move(t));
  }
  const StateDecomposition dec =
      decompose_by_method(p.value("h0_method", "polarization"), h0);

  NonlinearOptions opts;
  opts.circuit = ctx.mode != "exact";
  opts.herald = ctx.herald();
  opts.seed = ctx.seed;
  ResourceReport report;
  HistoryBuffer buf(delta, 0.0, psi0 * psi0.adjoint());
  const Trajectory traj =
      simulate_history_dependent(terms, &dec, std::move(buf), T, delta, opts, &report);

  const ComplexVector truth = oracle::direct_gp(h0, g, psi0, T, 1e-4);
  double sup = 0.0;
  Json profile = Json::array();
  for (Index r = 0; r < sites; ++r) {
    const double dens = traj.final_state()(r, r).real();
    profile.push_back(dens);
    sup = std::max(sup, std::abs(dens - std::norm(truth(r))));
  }

  Json summary;
  summary["kind"] = "gp";
  summary["density_profile"] = std::move(profile);
  summary["profile_sup_error_vs_integrator"] = sup;
  summary["trace_drift"] =
      std::abs(traj.final_state().trace().real() - 1.0);
  summary["resource_report"] = resource_report_to_json(report);
  emit(ctx, summary, trajectory_to_csv(traj, ctx.provenance()), &traj);
  return summary;
}

CdOptions cd_options(const Json& p, const RunContext& ctx) {
  CdOptions opts;
  opts.realization = ctx.mode == "exact" ? CdMode::Exact : CdMode::Circuit;
  const std::string term = p.value("cd_term", "lagged");
  if (term == "off")
    opts.cd_term = CdTermMode::Off;
  else if (term != "lagged")
    throw SchemaError("cd_term must be 'lagged' or 'off'");
  return opts;
}

Schedule make_schedule(const Json& p) {
  const double T = p.at("T").get<double>();
  const double delta = p.at("delta").get<double>();
  const double tau = p.at("tau").get<double>();
  if (p.contains("schedule_samples")) {
    Schedule s;
    s.T = T;
    s.delta = delta;
    s.tau = tau;
    s.samples = p.at("schedule_samples").get<std::vector<double>>();
    s.validate();
    return s;
  }
  const std::string shape = p.value("schedule", "linear");
  if (shape == "smooth") return Schedule::smooth(T, delta, tau);
  if (shape == "linear") return Schedule::linear(T, delta, tau);
  throw SchemaError("schedule must be 'linear' or 'smooth'");
}

Json run_cd(const Json& p, const RunContext& ctx) {
  CdProblem problem;
  problem.H0 = matrix_from_json(p.at("H0"), "H0");
  const Json& t = p.at("target");
  if (t.at("kind") == "fixed") {
    problem.target = matrix_from_json(t.at("H"), "target H");
  } else {
    StateDependentTarget target;
    if (t.contains("fixed")) target.fixed_part = matrix_from_json(t.at("fixed"), "fixed");
    for (const auto& c : t.at("couplings"))
      target.couplings.push_back({c.at("c").get<double>(),
                                  matrix_from_json(c.at("xi"), "xi"),
                                  matrix_from_json(c.at("rho"), "rho")});
    problem.target = std::move(target);
  }
  problem.psi0 = ground_state(problem.H0);

  const AdiabaticResult res = run_adiabatic(problem, make_schedule(p), cd_options(p, ctx));

  Json summary;
  summary["kind"] = "cd";
  summary["energy"] = res.energy;
  summary["final_residual"] = res.residuals.back();
  if (!res.fidelities.empty()) summary["final_fidelity"] = res.fidelities.back();
  summary["degenerate_gap_warning"] = res.degenerate_gap_warning;
  summary["times"] = res.times;
  summary["energies"] = res.energies;
  summary["residuals"] = res.residuals;
  if (!res.fidelities.empty()) summary["fidelities"] = res.fidelities;
  summary["final_state"] = matrix_to_json(res.sigma);

  Json file = summary;
  if (ctx.out_path) {
    file["provenance"] = ctx.provenance().to_json();
    write_text_file(*ctx.out_path, file.dump(2) + "\n");
    summary["output_path"] = *ctx.out_path;
  }
  summary.erase("times");
  summary.erase("energies");
  summary.erase("residuals");
  if (summary.contains("fidelities")) summary.erase("fidelities");
  summary.erase("final_state");
  return summary;
}

Json run_variance(const Json& p, const RunContext& ctx) {
  const ComplexMatrix a = matrix_from_json(p.at("A"), "A");
  const ComplexMatrix h0 = matrix_from_json(p.at("H0"), "H0");
  const Schedule sched = make_schedule(p);
  const CdOptions opts = cd_options(p, ctx);
  const std::string op = p.at("op");

  Json summary;
  summary["kind"] = "variance";
  summary["op"] = op;
  if (op == "lower_bound") {
    if (h0.rows() != a.rows() * a.rows())
      throw SchemaError("lower_bound needs H0 on the doubled space");
    summary["bound"] = variance_lower_bound(a, sched, h0, opts);
  } else {
    const VarianceSign sign =
        p.value("sign", "minus") == "plus" ? VarianceSign::Plus : VarianceSign::Minus;
    const VarianceOptimum res = variance_exact_optimum(a, h0, sched, sign, opts);
    summary["variance"] = res.variance;
    summary["eigenstate_residual"] = res.eigenstate_residual;
    summary["final_state"] = matrix_to_json(res.sigma);
  }
  Json file = summary;
  if (ctx.out_path) {
    file["provenance"] = ctx.provenance().to_json();
    write_text_file(*ctx.out_path, file.dump(2) + "\n");
    summary["output_path"] = *ctx.out_path;
  }
  if (summary.contains("final_state")) summary.erase("final_state");
  return summary;
}

}  // namespace

ValidationReport validate_scenario(const std::string& path) {
  Json doc;
  try {
    doc = load_file(path);
  } catch (const SchemaError& e) {
    return {{e.what()}};
  }
  return validate_document(doc);
}

Json run_scenario(const std::string& path, const CliOverrides& overrides) {
  const Json doc = load_file(path);
  ValidationReport report = validate_document(doc);
  if (!report.ok()) {
    std::string msg = "scenario validation failed:";
    for (const auto& v : report.violations) msg += "\n  - " + v;
    throw SchemaError(msg);
  }

  RunContext ctx;
  ctx.mode = overrides.mode.value_or(doc.value("mode", "exact"));
  if (ctx.mode != "exact" && ctx.mode != "circuit" && ctx.mode != "sampled")
    throw SchemaError("mode must be exact, circuit or sampled");
  ctx.seed = overrides.seed.value_or(doc.value("seed", std::uint64_t{0}));
  if (doc.contains("output")) {
    ctx.out_path = doc.at("output").at("path").get<std::string>();
    ctx.out_format = doc.at("output").value("format", "csv");
  }
  if (overrides.out) {
    ctx.out_path = *overrides.out;
    if (ctx.out_format.empty()) ctx.out_format = "csv";
  }

  const std::string kind = doc.at("kind");
  const Json& payload = doc.at("payload");
  if (kind == "decompose") return run_decompose(payload, ctx);
  if (kind == "linear") return run_linear(payload, ctx);
  if (kind == "open") return run_open(payload, ctx);
  if (kind == "nonlinear") return run_nonlinear(payload, ctx);
  if (kind == "nld") return run_nld(payload, ctx);
  if (kind == "logistic") return run_logistic(payload, ctx);
  if (kind == "amplifier") return run_amplifier(payload, ctx);
  if (kind == "gp") return run_gp(payload, ctx);
  if (kind == "cd") return run_cd(payload, ctx);
  if (kind == "variance") return run_variance(payload, ctx);
  throw SchemaError("unknown scenario kind '" + kind + "'");
}

}  // namespace sbqs
