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

#include <catch2/catch_amalgamated.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "sbqs/scenario.hpp"

using namespace sbqs;
namespace fs = std::filesystem;

namespace {

fs::path write_scenario(const std::string& name, const Json& doc) {
  const fs::path path = fs::temp_directory_path() / name;
  std::ofstream out(path);
  out << doc.dump(2);
  return path;
}

Json logistic_doc() {
  return Json{{"kind", "logistic"},
              {"payload", Json{{"r", 2.0},
                               {"alpha", 1.0},
                               {"x0", 0.5},
                               {"x_init", 0.1},
                               {"T", 0.05},
                               {"delta", 1e-3}}},
              {"seed", 7}};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("a valid logistic scenario passes validation and runs") {
  const fs::path path = write_scenario("sbqs_logistic_ok.json", logistic_doc());
  REQUIRE(validate_scenario(path.string()).ok());

  const Json summary = run_scenario(path.string());
  REQUIRE(summary.at("resource_report").at("terms_per_step") == 125);
  REQUIRE(summary.at("resource_report").at("copies_per_term") == 3);
  REQUIRE(summary.at("resource_report").at("model") == "n*R*C^n");
}

TEST_CASE("missing jump rate is reported by name") {
  Json doc{{"kind", "open"},
           {"payload",
            Json{{"H", matrix_to_json(pauli_z())},
                 {"jumps", Json::array({Json{{"L", matrix_to_json(pauli_x())}}})},
                 {"sigma0", matrix_to_json(0.5 * identity(2))},
                 {"t", 1.0},
                 {"epsilon", 1e-3}}}};
  const fs::path path = write_scenario("sbqs_open_missing_gamma.json", doc);
  const ValidationReport report = validate_scenario(path.string());
  REQUIRE_FALSE(report.ok());
  bool named = false;
  for (const auto& v : report.violations)
    if (v.find("gamma") != std::string::npos) named = true;
  REQUIRE(named);
}

TEST_CASE("dimension mismatches are reported") {
  Json doc{{"kind", "linear"},
           {"payload", Json{{"H", matrix_to_json(pauli_z())},
                            {"sigma0", matrix_to_json(identity(3) / 3.0)},
                            {"t", 0.5},
                            {"epsilon", 1e-3}}}};
  const fs::path path = write_scenario("sbqs_linear_dims.json", doc);
  const ValidationReport report = validate_scenario(path.string());
  REQUIRE_FALSE(report.ok());
  bool mentioned = false;
  for (const auto& v : report.violations)
    if (v.find("dimension mismatch") != std::string::npos) mentioned = true;
  REQUIRE(mentioned);
}

TEST_CASE("schema failures raise SchemaError from run_scenario") {
  Json doc{{"kind", "linear"}, {"payload", Json::object()}};
  const fs::path path = write_scenario("sbqs_linear_empty.json", doc);
  REQUIRE_THROWS_AS(run_scenario(path.string()), SchemaError);

  const fs::path missing = fs::temp_directory_path() / "sbqs_does_not_exist.json";
  REQUIRE_THROWS_AS(run_scenario(missing.string()), SchemaError);
}

TEST_CASE("unknown kinds and malformed JSON are flagged") {
  Json doc{{"kind", "frobnicate"}, {"payload", Json::object()}};
  const fs::path path = write_scenario("sbqs_unknown_kind.json", doc);
  REQUIRE_FALSE(validate_scenario(path.string()).ok());

  const fs::path garbled = fs::temp_directory_path() / "sbqs_garbled.json";
  std::ofstream(garbled) << "{ not json";
  REQUIRE_FALSE(validate_scenario(garbled.string()).ok());
}

TEST_CASE("same scenario and seed produce byte-identical CSV") {
  Json doc = logistic_doc();
  const fs::path out1 = fs::temp_directory_path() / "sbqs_traj_1.csv";
  const fs::path out2 = fs::temp_directory_path() / "sbqs_traj_2.csv";

  doc["output"] = Json{{"path", out1.string()}, {"format", "csv"}};
  run_scenario(write_scenario("sbqs_logistic_rep.json", doc).string());
  doc["output"]["path"] = out2.string();
  run_scenario(write_scenario("sbqs_logistic_rep.json", doc).string());

  const std::string a = slurp(out1);
  const std::string b = slurp(out2);
  REQUIRE_FALSE(a.empty());
  REQUIRE(a == b);

  // Provenance comments lead the file.
  REQUIRE(a.rfind("# engine=sbqs", 0) == 0);
  REQUIRE(a.find("# mode=exact seed=7") != std::string::npos);
}

TEST_CASE("sampled runs are reproducible for a fixed seed") {
  Json doc{{"kind", "linear"},
           {"payload", Json{{"H", matrix_to_json(pauli_x())},
                            {"sigma0", matrix_to_json(basis_projector(2, 0))},
                            {"t", 0.2},
                            {"epsilon", 1e-2},
                            {"record_stride", 5}}},
           {"mode", "sampled"},
           {"seed", 99}};
  const fs::path out1 = fs::temp_directory_path() / "sbqs_sampled_1.csv";
  const fs::path out2 = fs::temp_directory_path() / "sbqs_sampled_2.csv";
  doc["output"] = Json{{"path", out1.string()}, {"format", "csv"}};
  run_scenario(write_scenario("sbqs_sampled.json", doc).string());
  doc["output"]["path"] = out2.string();
  run_scenario(write_scenario("sbqs_sampled.json", doc).string());
  REQUIRE(slurp(out1) == slurp(out2));
}

TEST_CASE("the cli binary reports validation failures with exit code 2") {
#ifdef SBQS_CLI_PATH
  Json doc{{"kind", "open"},
           {"payload",
            Json{{"H", matrix_to_json(pauli_z())},
                 {"jumps", Json::array({Json{{"L", matrix_to_json(pauli_x())}}})},
                 {"sigma0", matrix_to_json(0.5 * identity(2))},
                 {"t", 1.0},
                 {"epsilon", 1e-3}}}};
  const fs::path bad = write_scenario("sbqs_cli_bad.json", doc);
  const std::string cmd_bad =
      std::string(SBQS_CLI_PATH) + " validate " + bad.string() + " > /dev/null 2>&1";
  const int rc_bad = std::system(cmd_bad.c_str());
  REQUIRE(WEXITSTATUS(rc_bad) == 2);

  const fs::path good = write_scenario("sbqs_cli_good.json", logistic_doc());
  const std::string cmd_good =
      std::string(SBQS_CLI_PATH) + " validate " + good.string() + " > /dev/null 2>&1";
  REQUIRE(WEXITSTATUS(std::system(cmd_good.c_str())) == 0);

  const std::string cmd_run =
      std::string(SBQS_CLI_PATH) + " run " + good.string() + " > /dev/null 2>&1";
  REQUIRE(WEXITSTATUS(std::system(cmd_run.c_str())) == 0);
#endif
}

TEST_CASE("SBQS_MAX_DIM caps composite spaces end to end") {
  setenv("SBQS_MAX_DIM", "8", 1);
  Json doc{{"kind", "linear"},
           {"payload", Json{{"H", matrix_to_json(kron(pauli_z(), pauli_z()))},
                            {"sigma0", matrix_to_json(identity(4) / 4.0)},
                            {"t", 0.1},
                            {"epsilon", 1e-2}}},
           {"mode", "circuit"}};
  const fs::path path = write_scenario("sbqs_dim_cap.json", doc);
  // The circuit path needs control (x) rho (x) sigma = 32 > 8.
  REQUIRE_THROWS_AS(run_scenario(path.string()), DimensionError);
  unsetenv("SBQS_MAX_DIM");
  REQUIRE_NOTHROW(run_scenario(path.string()));
}

TEST_CASE("every scenario kind runs end to end") {
  const ComplexMatrix sz = pauli_z();
  const ComplexMatrix sx = pauli_x();
  const ComplexMatrix plus = 0.5 * (identity(2) + sx);

  std::vector<Json> docs;

  docs.push_back(Json{{"kind", "decompose"},
                      {"payload", Json{{"method", "support_split"},
                                       {"H", matrix_to_json(sz + 0.5 * sx)}}}});
  docs.push_back(Json{{"kind", "linear"},
                      {"payload", Json{{"H", matrix_to_json(sx)},
                                       {"sigma0", matrix_to_json(basis_projector(2, 0))},
                                       {"t", 0.3},
                                       {"epsilon", 1e-2}}}});
  docs.push_back(Json{{"kind", "open"},
                      {"payload",
                       Json{{"H", matrix_to_json(sz)},
                            {"jumps", Json::array({Json{{"L", matrix_to_json(sx)},
                                                        {"gamma", 0.4}}})},
                            {"sigma0", matrix_to_json(plus)},
                            {"t", 0.5},
                            {"epsilon", 1e-2}}}});
  docs.push_back(Json{
      {"kind", "nonlinear"},
      {"payload",
       Json{{"sigma0", matrix_to_json(plus)},
            {"terms", Json::array({Json{{"c", 0.5},
                                        {"xi", matrix_to_json(basis_projector(2, 0))},
                                        {"rho", matrix_to_json(basis_projector(2, 0))},
                                        {"delays", Json::array({0.0})},
                                        {"powers", Json::array({1})}}})},
            {"h0", matrix_to_json(sx)},
            {"T", 0.05},
            {"delta", 1e-3}}}});
  docs.push_back(Json{
      {"kind", "nld"},
      {"payload",
       Json{{"system",
             Json{{"D", 1},
                  {"degrees", Json::array({2})},
                  {"x0", 0.5},
                  {"alpha", 1.0},
                  {"taylor_order", 2},
                  {"coefficients",
                   Json::array(
                       {Json{{"m", 1}, {"n", 1}, {"exponents", Json::array()}, {"value", 1.0}},
                        Json{{"m", 1},
                             {"n", 1},
                             {"exponents", Json::array({Json::array({0, 1, 1})})},
                             {"value", -2.0}}})}}},
            {"x_init", Json::array({0.1})},
            {"T", 0.05},
            {"delta", 1e-3}}}});
  docs.push_back(Json{{"kind", "gp"},
                      {"payload", Json{{"sites", 3},
                                       {"g", 0.3},
                                       {"psi0", Json::array({Json::array({0.8, 0.0}),
                                                             Json::array({0.5, 0.0}),
                                                             Json::array({0.3, 0.0})})},
                                       {"T", 0.05},
                                       {"delta", 1e-3}}}});
  docs.push_back(
      Json{{"kind", "cd"},
           {"payload", Json{{"H0", matrix_to_json(sx)},
                            {"target", Json{{"kind", "fixed"}, {"H", matrix_to_json(sz)}}},
                            {"T", 0.2},
                            {"delta", 1e-3},
                            {"tau", 5e-3},
                            {"cd_term", "off"}}}});
  docs.push_back(Json{
      {"kind", "variance"},
      {"payload",
       Json{{"A", matrix_to_json(sz)},
            {"op", "exact_optimum"},
            {"H0", matrix_to_json(-sz)},
            {"T", 0.5},
            {"delta", 1e-3},
            {"tau", 5e-3},
            {"schedule", "smooth"}}}});

  int idx = 0;
  for (const auto& doc : docs) {
    const fs::path path =
        write_scenario("sbqs_kind_" + std::to_string(idx++) + ".json", doc);
    REQUIRE(validate_scenario(path.string()).ok());
    const Json summary = run_scenario(path.string());
    REQUIRE(summary.contains("kind"));
  }
}

TEST_CASE("cd scenarios accept explicit schedule samples") {
  Json doc{{"kind", "cd"},
           {"payload",
            Json{{"H0", matrix_to_json(pauli_x())},
                 {"target", Json{{"kind", "fixed"}, {"H", matrix_to_json(pauli_z())}}},
                 {"T", 0.1},
                 {"delta", 1e-3},
                 {"tau", 5e-3},
                 {"cd_term", "off"},
                 {"schedule_samples", Json::array({0.0, 0.3, 0.7, 1.0})}}}};
  const fs::path path = write_scenario("sbqs_cd_samples.json", doc);
  REQUIRE_NOTHROW(run_scenario(path.string()));

  doc["payload"]["schedule_samples"] = Json::array({0.0, 0.9, 0.4, 1.0});
  const fs::path bad = write_scenario("sbqs_cd_samples_bad.json", doc);
  REQUIRE_THROWS_AS(run_scenario(bad.string()), std::invalid_argument);
}
