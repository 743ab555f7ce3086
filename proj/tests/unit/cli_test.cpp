// Copyright 2026 The lqgsim Authors
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

#include "cli.hpp"

#include <cstdlib>
#include <sstream>

#include "gtest/gtest.h"
#include "lqgsim/io.hpp"
#include "test_util.hpp"

namespace lqgsim {
namespace {

namespace fs = std::filesystem;
using io::json;

struct Result {
  int code;
  std::string out, err;
  json doc() const { return json::parse(out); }
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("lqgsim_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    unsetenv("LQGSIM_OUTPUT_DIR");
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Builds the all-1/2 gate, its dilation and its mesh in the test directory.
  void make_artifacts() {
    ASSERT_EQ(run({"gate", "build", "--spins", "1,1,1,1,1,1,1,1,1,1", "-o", path("g.json")}).code, 0);
    ASSERT_EQ(run({"dilate", path("g.json"), "-o", path("u.json")}).code, 0);
    ASSERT_EQ(run({"mesh", "compile", path("u.json"), "-o", path("m.json")}).code, 0);
  }

  fs::path dir_;
};

TEST_F(CliTest, Su2Dims) {
  auto r = run({"su2", "dims", "--spins", "2,2,2,2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.doc()["dim"], 3);
  EXPECT_EQ(run({"su2", "dims", "--spins", "1,1,1"}).code, 1);
}

TEST_F(CliTest, GateBuildWritesFourByEight) {
  const auto r = run({"gate", "build", "--spins", "1,1,1,1,1,1,1,1,1,1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json g = r.doc();
  EXPECT_EQ(g["schema_version"], io::kSchemaVersion);
  EXPECT_EQ(g["matrix"].size(), 4u);
  EXPECT_EQ(g["matrix"][0].size(), 8u);
  EXPECT_NO_THROW(io::gate_from_json(g));
}

TEST_F(CliTest, GateRestrictAll) {
  ASSERT_EQ(run({"gate", "build", "--spins", "2,2,2,2,2,2,2,2,2,2", "-o", path("g1.json")}).code, 0);
  auto r = run({"gate", "restrict", path("g1.json"), "--all"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.doc()["count"], 32);
  r = run({"gate", "restrict", path("g1.json"), "--choice", "+,-,+,-,+"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.doc()["matrix"].size(), 2u);
  EXPECT_EQ(r.doc()["matrix"][0].size(), 4u);
  EXPECT_EQ(run({"gate", "restrict", path("g1.json")}).code, 1);
}

TEST_F(CliTest, MeshCompileGivesSixtySixElements) {
  make_artifacts();
  const json mesh = io::read_json_file(path("m.json"));
  EXPECT_EQ(mesh["elements"].size(), 66u);
  const auto r = run({"mesh", "stats", path("m.json")});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.doc()["elements"], 66);
  EXPECT_EQ(r.doc()["depth"], 12);
  const auto back = run({"mesh", "reconstruct", path("m.json")});
  ASSERT_EQ(back.code, 0);
  const CMatrix u = io::unitary_from_json(io::read_json_file(path("u.json"))).u;
  EXPECT_LT(max_abs(io::matrix_from_json(back.doc()["matrix"], "m") - u), 1e-8);
}

TEST_F(CliTest, SimulateBasisGivesSquaredColumn) {
  make_artifacts();
  const CMatrix u = io::unitary_from_json(io::read_json_file(path("u.json"))).u;
  for (const std::string file : {"u.json", "m.json"}) {
    const auto r = run({"simulate", "--unitary", path(file), "--input", "basis:3"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto p = r.doc()["probabilities"].get<std::vector<double>>();
    ASSERT_EQ(p.size(), 12u);
    for (int i = 0; i < 12; ++i) EXPECT_NEAR(p[i], std::norm(u(i, 2)), 1e-12);
  }
}

TEST_F(CliTest, SimulateCsvAndShots) {
  make_artifacts();
  const auto r = run({"simulate", "--unitary", path("u.json"), "--input", "super:1,2", "--shots", "5000", "--seed", "7",
                      "--postselect", "1-4", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "mode,count,probability");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 12);
  EXPECT_NE(r.err.find("\"seed\":\"7\""), std::string::npos) << r.err;
}

TEST_F(CliTest, OutputsAreDeterministic) {
  make_artifacts();
  const std::vector<std::string> args{"simulate", "--unitary", path("u.json"), "--input", "basis:2", "--shots", "10000",
                                      "--seed", "3"};
  auto a = args, b = args;
  a.insert(a.end(), {"-o", path("a.json")});
  b.insert(b.end(), {"-o", path("b.json")});
  ASSERT_EQ(run(a).code, 0);
  ASSERT_EQ(run(b).code, 0);
  // The config block names the output file, so compare everything else.
  json ja = io::read_json_file(path("a.json")), jb = io::read_json_file(path("b.json"));
  ja.erase("config");
  jb.erase("config");
  EXPECT_EQ(ja.dump(), jb.dump());
  EXPECT_EQ(run(args).out, run(args).out);
}

TEST_F(CliTest, OutputDirectoryFromEnvironment) {
  setenv("LQGSIM_OUTPUT_DIR", dir_.c_str(), 1);
  const auto r = run({"gate", "build", "--spins", "1,1,1,1,1,1,1,1,1,1", "-o", "env_gate.json"});
  unsetenv("LQGSIM_OUTPUT_DIR");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "env_gate.json"));
}

TEST_F(CliTest, TomographyMatchesGate) {
  make_artifacts();
  const auto r = run({"tomography", "--unitary", path("m.json"), "--rows", "4", "--cols", "8", "--reference", path("g.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LT(r.doc()["reference_error"].get<double>(), 1e-8);
}

TEST_F(CliTest, EntropyCsv) {
  make_artifacts();
  const auto r = run({"entropy", "--unitary", path("u.json"), "--input", "basis:1", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, 15), "subset,entropy\n");
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 15);
  const auto sweep = run({"entropy", "--unitary", path("u.json"), "--sweep", "20", "--seed", "2"});
  ASSERT_EQ(sweep.code, 0) << sweep.err;
  EXPECT_EQ(sweep.doc()["samples"].size(), 20u);
}

TEST_F(CliTest, PipelineReport) {
  const auto r = run({"pipeline", "--spins", "1,1,1,1,1,1,1,1,1,1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json rep = r.doc();
  EXPECT_LT(rep["dilation"]["unitarity_deviation"].get<double>(), 1e-10);
  EXPECT_LT(rep["mesh"]["round_trip_error"].get<double>(), 1e-8);
  EXPECT_LT(rep["tomography"]["reconstruction_error"].get<double>(), 1e-8);
  EXPECT_EQ(rep["mesh"]["elements"], 66);
  EXPECT_NEAR(rep["simulation"]["success_probability"].get<double>(),
              rep["simulation"]["gate_norm_squared"].get<double>(), 1e-10);
  EXPECT_EQ(rep["schema_version"], io::kSchemaVersion);
}

TEST_F(CliTest, IdentityEmbeddedGateHasNoEntanglementForProductInputs) {
  CMatrix m = CMatrix::Zero(4, 8);
  for (int r = 0; r < 4; ++r) m(r, 2 * r) = 0.5;
  io::write_text_file(path("id.json"), io::gate_to_json(testing::half_gate(m)).dump());
  for (const std::string in : {"basis:1", "basis:3", "basis:5", "basis:7"}) {
    const auto r = run({"pipeline", "--gate", path("id.json"), "--input", in});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(r.doc()["entanglement"]["max_entropy"].get<double>(), 0.0, 1e-12);
  }
}

TEST_F(CliTest, FoamCommands) {
  make_artifacts();
  io::write_text_file(path("foam.json"), R"({
    "vertices": ["g.json", {"face_spins": [1,1,1,1,1,1,1,1,1,1]}],
    "edges": [{"from": [0, 3], "to": [1, 0]}]
  })");
  auto r = run({"foam", "validate", path("foam.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.doc()["open_inputs"].size(), 5u);
  r = run({"foam", "simulate", path("foam.json"), "--basis", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LT(r.doc()["relative_deviation"].get<double>(), 1e-9);
  r = run({"foam", "complexity", path("foam.json"), "--c", "66", "--spin-sums", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.doc()["bound"], "4356");

  io::write_text_file(path("bad.json"), R"({
    "vertices": ["g.json", {"face_spins": [2,2,2,2,2,2,2,2,2,2]}],
    "edges": [{"from": [0, 3], "to": [1, 0]}]
  })");
  r = run({"foam", "validate", path("bad.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("area-matching violation"), std::string::npos);
}

TEST_F(CliTest, ExitCodes) {
  auto r = run({"gate", "build", "--spins", "1,1,1,1,1,1,1,1,1,1", "--bogus"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("\"type\":\"usage\""), std::string::npos);
  r = run({"dilate", path("missing.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NO_THROW(json::parse(r.err.substr(r.err.find("{\"error\""))));

  make_artifacts();
  json u = io::read_json_file(path("u.json"));
  u["matrix"][0][0] = json::array({1.5, 0.0});
  io::write_text_file(path("bad_u.json"), u.dump());
  r = run({"mesh", "compile", path("bad_u.json")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("\"type\":\"numerical\""), std::string::npos);
  r = run({"simulate", "--unitary", path("u.json"), "--input", "basis:13"});
  EXPECT_EQ(r.code, 1);
}

TEST_F(CliTest, HelpAndVersion) {
  EXPECT_EQ(run({"--help"}).code, 0);
  const auto r = run({"--version"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("lqgsim"), std::string::npos);
}

}  // namespace
}  // namespace lqgsim
