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

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace sbqs {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr Complex kImag{0.0, 1.0};

/// Absolute tolerances for validity checks. Frobenius norm unless a check
/// states otherwise.
struct Tolerances {
  double herm = 1e-9;
  double trace = 1e-9;
  double psd = 1e-9;
  double recon = 1e-9;
};

// Error taxonomy. The CLI maps SchemaError to exit code 2 and everything
// else thrown from a run to exit code 3.
struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StepSizeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScalingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Cap on the dimension of any composite space. Overridable through the
/// SBQS_MAX_DIM environment variable; exceeding it raises DimensionError.
Index max_composite_dim();

inline const char* engine_name() { return "sbqs"; }
inline const char* engine_version() { return "0.1.0"; }

}  // namespace sbqs
