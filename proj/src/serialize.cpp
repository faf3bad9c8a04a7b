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

#include "sbqs/serialize.hpp"

#include <charconv>
#include <fstream>

namespace sbqs {

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw SchemaError(what + ": expected a [re, im] pair");
  return Complex{j[0].get<double>(), j[1].get<double>()};
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw SchemaError(what + ": expected a matrix");
  const auto rows = static_cast<Index>(j.size());
  if (!j[0].is_array() || j[0].empty())
    throw SchemaError(what + ": expected rows of [re, im] pairs");
  const auto cols = static_cast<Index>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<Index>(j[r].size()) != cols)
      throw SchemaError(what + ": row " + std::to_string(r) + " has mismatched length");
    for (Index c = 0; c < cols; ++c)
      m(r, c) = complex_from_json(j[r][c], what + " entry");
  }
  return m;
}

Json decomposition_to_json(const StateDecomposition& d) {
  Json out;
  out["dim"] = d.dim;
  out["identity_offset"] = complex_to_json(d.identity_offset);
  out["reconstruction_error"] = d.reconstruction_error;
  Json terms = Json::array();
  for (const auto& term : d.terms)
    terms.push_back(
        Json{{"weight", complex_to_json(term.weight)}, {"rho", matrix_to_json(term.rho)}});
  out["terms"] = std::move(terms);
  return out;
}

StateDecomposition decomposition_from_json(const Json& j) {
  StateDecomposition d;
  d.dim = j.at("dim").get<Index>();
  d.identity_offset = complex_from_json(j.at("identity_offset"), "identity_offset");
  for (const auto& term : j.at("terms"))
    d.terms.push_back({complex_from_json(term.at("weight"), "weight"),
                       matrix_from_json(term.at("rho"), "rho")});
  return d;
}

Json lindblad_to_json(const LindbladSpec& spec) {
  Json out;
  out["H"] = matrix_to_json(spec.H);
  Json jumps = Json::array();
  for (const auto& jump : spec.jumps)
    jumps.push_back(Json{{"L", matrix_to_json(jump.L)}, {"gamma", jump.gamma}});
  out["jumps"] = std::move(jumps);
  return out;
}

LindbladSpec lindblad_from_json(const Json& j) {
  LindbladSpec spec;
  spec.H = matrix_from_json(j.at("H"), "H");
  for (const auto& jump : j.at("jumps"))
    spec.jumps.push_back(
        {matrix_from_json(jump.at("L"), "L"), jump.at("gamma").get<double>()});
  return spec;
}

Json history_term_to_json(const HistoryTerm& t) {
  return Json{{"c", t.c},
              {"xi", matrix_to_json(t.xi)},
              {"rho", matrix_to_json(t.rho)},
              {"delays", t.delays},
              {"powers", t.powers}};
}

HistoryTerm history_term_from_json(const Json& j) {
  HistoryTerm t;
  t.c = j.at("c").get<double>();
  t.xi = matrix_from_json(j.at("xi"), "xi");
  t.rho = matrix_from_json(j.at("rho"), "rho");
  t.delays = j.at("delays").get<std::vector<double>>();
  t.powers = j.at("powers").get<std::vector<int>>();
  return t;
}

Json nld_system_to_json(const NldSystem& sys) {
  Json coeffs = Json::array();
  for (const auto& c : sys.coefficients) {
    Json exps = Json::array();
    for (const auto& [ji, r] : c.monomial.exps)
      exps.push_back(Json::array({ji.first, ji.second, r}));
    coeffs.push_back(
        Json{{"m", c.m}, {"n", c.n}, {"exponents", std::move(exps)}, {"value", c.value}});
  }
  return Json{{"D", sys.D},          {"delays", sys.delays},
              {"degrees", sys.degrees}, {"coefficients", std::move(coeffs)},
              {"x0", sys.x0},        {"alpha", sys.alpha},
              {"taylor_order", sys.taylor_order}};
}

NldSystem nld_system_from_json(const Json& j) {
  NldSystem sys;
  sys.D = j.at("D").get<int>();
  sys.delays = j.value("delays", std::vector<double>{});
  sys.degrees = j.at("degrees").get<std::vector<int>>();
  sys.x0 = j.value("x0", 0.5);
  sys.alpha = j.value("alpha", 1.0);
  sys.taylor_order = j.value("taylor_order", 2);
  for (const auto& c : j.at("coefficients")) {
    NldCoefficient coeff;
    coeff.m = c.at("m").get<int>();
    coeff.n = c.at("n").get<int>();
    coeff.value = c.at("value").get<double>();
    for (const auto& e : c.value("exponents", Json::array())) {
      if (!e.is_array() || e.size() != 3)
        throw SchemaError("nld coefficient: exponents must be [slot, variable, power]");
      coeff.monomial.exps[{e[0].get<int>(), e[1].get<int>()}] = e[2].get<int>();
    }
    sys.coefficients.push_back(std::move(coeff));
  }
  return sys;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string Provenance::csv_comment() const {
  std::string out;
  out += "# engine=";
  out += engine_name();
  out += " ";
  out += engine_version();
  out += "\n# mode=" + mode + " seed=" + std::to_string(seed) + "\n";
  out += "# tol_herm=" + format_double(tol.herm) + " tol_trace=" + format_double(tol.trace) +
         " tol_psd=" + format_double(tol.psd) + " tol_recon=" + format_double(tol.recon) +
         "\n";
  return out;
}

Json Provenance::to_json() const {
  return Json{{"engine", engine_name()},
              {"version", engine_version()},
              {"mode", mode},
              {"seed", seed},
              {"tolerances",
               Json{{"herm", tol.herm},
                    {"trace", tol.trace},
                    {"psd", tol.psd},
                    {"recon", tol.recon}}}};
}

std::string trajectory_to_csv(const Trajectory& traj, const Provenance& prov) {
  std::string out = prov.csv_comment();
  if (traj.states.empty()) return out;
  const Index d = traj.states.front().rows();
  out += "t";
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      const std::string tag = std::to_string(i) + std::to_string(j);
      out += ",re_" + tag + ",im_" + tag;
    }
  out += "\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    out += format_double(traj.times[k]);
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) {
        out += "," + format_double(traj.states[k](i, j).real());
        out += "," + format_double(traj.states[k](i, j).imag());
      }
    out += "\n";
  }
  return out;
}

Json trajectory_to_json(const Trajectory& traj) {
  Json out;
  out["times"] = traj.times;
  Json states = Json::array();
  for (const auto& state : traj.states) states.push_back(matrix_to_json(state));
  out["states"] = std::move(states);
  out["herald_probs"] = traj.herald_probs;
  out["error_budget"] = traj.error_budget;
  return out;
}

std::string nld_trajectory_to_csv(const NldResult& res, const Provenance& prov) {
  std::string out = prov.csv_comment();
  if (res.x.empty()) return out;
  out += "t";
  for (Index i = 0; i < res.x.front().size(); ++i)
    out += ",x_" + std::to_string(i + 1);
  out += "\n";
  for (std::size_t k = 0; k < res.times.size(); ++k) {
    out += format_double(res.times[k]);
    for (Index i = 0; i < res.x[k].size(); ++i)
      out += "," + format_double(res.x[k](i));
    out += "\n";
  }
  return out;
}

Json resource_report_to_json(const ResourceReport& report) {
  return Json{{"steps", report.steps},
              {"terms_per_step", report.terms_per_step},
              {"copies_per_term", report.copies_per_term},
              {"log10_rerun_copies", report.log10_rerun_copies},
              {"log10_preprovision_copies", report.log10_preprovision_copies},
              {"model", report.model}};
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  out << content;
}

}  // namespace sbqs
