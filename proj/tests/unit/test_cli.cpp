#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spdc/errors.hpp"
#include "spdc_cli/commands.hpp"
#include "spdc_cli/config.hpp"
#include "spdc_cli/selftest.hpp"

using namespace spdc;
using namespace spdc::cli;
namespace fs = std::filesystem;

namespace {

const char* kSweep = R"(crystal = "LiIO3-Fig1"

[pump]
lambda_p = 400
w_p = 28
tau = 50

[crystal]
L = 0.5
n_p = 1.9
vg_p = 1.708
vg_s = 1.626
gvd_p = 180
gvd_s = 61.7

[collection]
ell = 1

[sweep]
axis = ws_over_wp
values = 0.5, 1, 2, 10
)";

const char* kGrid = R"(crystal = "BBO-Fig5"
[pump]
lambda_p = 400
w_p = 28
tau = 50
[crystal]
n_p = 1.69
[grid]
first = lambda_s
first_min = 798
first_max = 802
first_points = 5
second = q_sx
second_min = -0.01
second_max = 0.01
second_points = 3
)";

RunConfig load(const std::string& text, Command c = Command::PuritySweep) {
  std::istringstream in(text);
  return load_config(in, c);
}

std::string field_error(const std::string& text, Command c = Command::PuritySweep) {
  try {
    load(text, c);
  } catch (const ValidationError& e) {
    return e.field();
  }
  return "none";
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto at = s.find(from);
  if (at == std::string::npos) throw std::runtime_error("pattern not found: " + from);
  return s.replace(at, from.size(), to);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("spdc_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

RunOutcome run_quiet(RunConfig c) {
  std::ostringstream out, err;
  return run(c, out, err);
}

}  // namespace

TEST(Fnv1a, ReferenceVectors) {
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cull);
  EXPECT_EQ(fnv1a("foobar"), 0x85944171f73967e8ull);
}

TEST(Config, ConvertsLabUnits) {
  const RunConfig c = load(kSweep);
  EXPECT_DOUBLE_EQ(c.pump.lambda_p, 0.4);
  EXPECT_DOUBLE_EQ(c.crystal.length, 500.0);
  EXPECT_DOUBLE_EQ(c.crystal.gvd_s, 0.0617);
  EXPECT_DOUBLE_EQ(c.crystal.gvd_i, 0.0617);
  EXPECT_DOUBLE_EQ(c.crystal.vg_divisor_i, 1.626);
  EXPECT_EQ(c.crystal.type, SpdcType::TypeI);
  EXPECT_EQ(c.sweep_axis, SweepAxis::WsOverWp);
  EXPECT_EQ(c.sweep_values, (std::vector<double>{0.5, 1.0, 2.0, 10.0}));
  EXPECT_EQ(c.collection.ell, 1);
  EXPECT_EQ(c.kernel, KernelMode::QuadraticOnly);
}

TEST(Config, LengthSweepValuesInMillimetres) {
  const RunConfig c =
      load(replace(replace(replace(kSweep, "axis = ws_over_wp", "axis = L"), "values = 0.5, 1, 2, 10", "values = 0.5, 5"),
                   "ell = 1", "ell = 1\nws_over_wp = 1"));
  EXPECT_EQ(c.sweep_axis, SweepAxis::Length);
  EXPECT_EQ(c.sweep_values, (std::vector<double>{500.0, 5000.0}));
  EXPECT_DOUBLE_EQ(*c.ws_over_wp, 1.0);
}

TEST(Config, PresetSuppliesBboDispersion) {
  const RunConfig c = load(kGrid, Command::Jsa);
  EXPECT_EQ(c.crystal.type, SpdcType::TypeII);
  EXPECT_DOUBLE_EQ(c.crystal.gvd_i, 0.0751);
  EXPECT_DOUBLE_EQ(c.grid.first.min, 0.798);
  EXPECT_EQ(c.pmf_kinds.size(), 3u);
}

TEST(Config, StrictKeysAndFieldPaths) {
  EXPECT_EQ(field_error(replace(kSweep, "w_p = 28\n", "")), "pump.w_p");
  EXPECT_EQ(field_error(replace(kSweep, "tau = 50\n", "tau = 50\ntua = 1\n")), "pump.tua");
  EXPECT_EQ(field_error(std::string(kSweep) + "[extra]\nx = 1\n"), "[extra]");
  EXPECT_EQ(field_error(replace(kSweep, "vg_p = 1.708\n", "")), "crystal.vg_p");
  EXPECT_EQ(field_error(replace(kSweep, "tau = 50", "tau = fifty")), "pump.tau");
  EXPECT_EQ(field_error(replace(kSweep, "LiIO3-Fig1", "KTP")), "crystal.preset");
  EXPECT_EQ(field_error(replace(kSweep, "axis = ws_over_wp", "axis = colour")), "sweep.axis");
  EXPECT_EQ(field_error(replace(kSweep, "axis = ws_over_wp", "axis = tau")), "collection.w0");
  EXPECT_EQ(field_error(replace(kSweep, "tau = 50", "tau = -5")), "pump.tau");
  EXPECT_EQ(field_error(replace(kGrid, "first_points = 5", "first_points = 1"), Command::Jsa), "grid.first.points");
}

TEST(Config, HashIgnoresFormattingButNotValues) {
  const RunConfig a = load(kSweep);
  std::string shuffled = replace(kSweep, "lambda_p = 400\nw_p = 28\n", "w_p=28.0\n; comment\nlambda_p =   4e2\n");
  shuffled = replace(shuffled, "crystal = \"LiIO3-Fig1\"", "crystal = LiIO3-Fig1");
  const RunConfig b = load(shuffled);
  EXPECT_EQ(a.canonical, b.canonical);
  EXPECT_EQ(a.hash, b.hash);
  EXPECT_EQ(a.hash_hex().size(), 16u);
  const RunConfig c = load(replace(kSweep, "w_p = 28", "w_p = 29"));
  EXPECT_NE(a.hash, c.hash);
}

TEST(Run, SweepCsvSchemaAndHashLine) {
  RunConfig c = load(kSweep);
  c.out_dir = scratch("schema");
  c.threads = 1;
  const RunOutcome o = run_quiet(c);
  EXPECT_EQ(o.exit_code, kOk);
  ASSERT_EQ(o.artifacts.size(), 1u);
  EXPECT_EQ(o.artifacts[0].path.filename(), "purity-sweep_general_" + c.hash_hex() + ".csv");
  std::istringstream in(slurp(o.artifacts[0].path));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "# config-hash: " + c.hash_hex());
  std::getline(in, line);
  EXPECT_EQ(line,
            "model,spdc_type,ell,p,L_mm,w_p_um,w0_um,tau_fs,ws_over_wp,purity,trace_check,converged,wall_time_ms");
  double prev = 0.0;
  int rows = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    ASSERT_EQ(cells.size(), 13u);
    EXPECT_EQ(cells[0], "general");
    EXPECT_EQ(cells[1], "I");
    EXPECT_EQ(cells[11], "true");
    EXPECT_EQ(cells[12], "0");
    const double p = std::stod(cells[9]);
    EXPECT_GE(p, prev);
    prev = p;
    ++rows;
  }
  EXPECT_EQ(rows, 4);
}

TEST(Run, ByteIdenticalAcrossRunsAndThreads) {
  RunConfig c = load(kSweep);
  c.command = Command::CompareModels;
  std::string first;
  for (int threads : {1, 8, 1}) {
    c.threads = threads;
    c.out_dir = scratch("bytes" + std::to_string(threads));
    const RunOutcome o = run_quiet(c);
    const std::string text = slurp(o.artifacts.at(0).path);
    if (first.empty()) first = text;
    EXPECT_EQ(text, first) << threads;
  }
}

TEST(Run, FailedRowsAreFlaggedAndExitZero) {
  RunConfig c = load(replace(replace(replace(kSweep, "axis = ws_over_wp", "axis = ell"), "values = 0.5, 1, 2, 10",
                                     "values = 1, 2.5"),
                             "ell = 1", "w0 = 28"));
  c.out_dir = scratch("partial");
  std::ostringstream out, err;
  const RunOutcome o = run(c, out, err);
  EXPECT_EQ(o.exit_code, kOk);
  const std::string csv = slurp(o.artifacts.at(0).path);
  EXPECT_NE(csv.find(",2.5,0,0.5,28,28,50,1,nan,nan,false,0\n"), std::string::npos) << csv;
  EXPECT_NE(err.str().find("OAM index must be an integer"), std::string::npos);
}

TEST(Run, PmfSliceColumnsAndFigures) {
  RunConfig c = load(kGrid, Command::PmfSlice);
  c.out_dir = scratch("pmf");
  c.figures = true;
  const RunOutcome o = run_quiet(c);
  ASSERT_EQ(o.artifacts.size(), 4u);
  const std::string csv = slurp(o.artifacts[0].path);
  EXPECT_NE(csv.find("\nq_sx,q_sy,q_ix,q_iy,Omega_s,Omega_i,pmf_kind,value\n"), std::string::npos);
  EXPECT_EQ(o.artifacts[0].rows, 45u);
  for (std::size_t k = 1; k < 4; ++k) {
    const std::string svg = slurp(o.artifacts[k].path);
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_EQ(svg, slurp(o.artifacts[k].path));
  }
}

TEST(Run, JsaRequiresFourGaussianForPositions) {
  RunConfig c = load(replace(replace(kGrid, "first = lambda_s\nfirst_min = 798\nfirst_max = 802",
                                     "first = x_s\nfirst_min = -10\nfirst_max = 10"),
                             "second = q_sx", "second = x_i"),
                     Command::Jsa);
  c.out_dir = scratch("pos");
  EXPECT_THROW(run_quiet(c), ValidationError);
  c.kind = ModelKind::FourGaussian;
  EXPECT_EQ(run_quiet(c).exit_code, kOk);
}

TEST(Run, ErrorsMapToExitCodes) {
  std::ostringstream err;
  auto code = [&](auto thrower) {
    try {
      thrower();
    } catch (...) {
      return report_error(err);
    }
    return -1;
  };
  EXPECT_EQ(code([] { throw ValidationError("bad", "pump.w_p"); }), 2);
  EXPECT_EQ(code([] { throw DomainError("outside"); }), 2);
  EXPECT_EQ(code([] { throw ConvergenceError("slow"); }), 3);
  EXPECT_NE(err.str().find("pump.w_p: bad"), std::string::npos);
}

TEST(Selftest, AllChecksPass) {
  std::ostringstream out;
  EXPECT_TRUE(print_selftest(selftest(2), out)) << out.str();
}

TEST(Executable, ExitStatuses) {
  const fs::path dir = scratch("exe");
  std::ofstream(dir / "good.ini") << kSweep;
  std::ofstream(dir / "bad.ini") << replace(kSweep, "w_p = 28\n", "");
  auto status = [&](const std::string& args) {
    const std::string cmd = std::string(SPDC_EXE) + " " + args + " > " + (dir / "log.txt").string() + " 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  };
  EXPECT_EQ(status("purity-sweep --config " + (dir / "good.ini").string() + " --out " + dir.string()), 0);
  EXPECT_EQ(status("purity-sweep --config " + (dir / "bad.ini").string()), 2);
  EXPECT_NE(slurp(dir / "log.txt").find("pump.w_p"), std::string::npos);
  EXPECT_EQ(status("purity-sweep"), 2);
  EXPECT_EQ(status("selftest"), 0);
}
