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

#pragma once

#include <string>

#include <json.hpp>

#include "sbqs/decompose.hpp"
#include "sbqs/evolve.hpp"
#include "sbqs/nld.hpp"
#include "sbqs/nonlinear.hpp"
#include "sbqs/open.hpp"
#include "sbqs/types.hpp"

namespace sbqs {

using Json = nlohmann::json;

// Matrices travel as dense row-major arrays of [re, im] pairs.
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j, const std::string& what);

Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j, const std::string& what);

Json decomposition_to_json(const StateDecomposition& d);
StateDecomposition decomposition_from_json(const Json& j);

Json lindblad_to_json(const LindbladSpec& spec);
LindbladSpec lindblad_from_json(const Json& j);

Json history_term_to_json(const HistoryTerm& t);
HistoryTerm history_term_from_json(const Json& j);

Json nld_system_to_json(const NldSystem& sys);
NldSystem nld_system_from_json(const Json& j);

/// Shortest round-trip decimal representation (std::to_chars), so equal runs
/// produce byte-identical text.
std::string format_double(double v);

struct Provenance {
  std::string mode = "exact";
  std::uint64_t seed = 0;
  Tolerances tol;

  std::string csv_comment() const;
  Json to_json() const;
};

/// time, flattened re/im state entries, with provenance header comments.
std::string trajectory_to_csv(const Trajectory& traj, const Provenance& prov);

Json trajectory_to_json(const Trajectory& traj);

/// time, x_1..x_D.
std::string nld_trajectory_to_csv(const NldResult& res, const Provenance& prov);

Json resource_report_to_json(const ResourceReport& report);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace sbqs
