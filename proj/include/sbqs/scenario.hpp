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

#include <optional>
#include <string>
#include <vector>

#include "sbqs/serialize.hpp"

namespace sbqs {

struct CliOverrides {
  std::optional<std::string> mode;  // exact | circuit | sampled
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Schema checks only; nothing is computed.
ValidationReport validate_scenario(const std::string& path);

/// Loads, validates and executes a scenario file, writing the configured
/// artifacts. Returns the summary document. Malformed files raise
/// SchemaError; numeric/budget failures raise their engine errors.
Json run_scenario(const std::string& path, const CliOverrides& overrides = {});

}  // namespace sbqs
