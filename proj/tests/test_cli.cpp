#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include "z2lat/exterior.hpp"
#include "z2lat/isometry.hpp"
#include "z2lat/json_io.hpp"
#include "z2lat/neighbors.hpp"

using namespace z2lat;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int status = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("z2lat_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string write_form(const std::string& name, const SymBilinearForm& f) {
    return write(name, form_to_json(f).dump());
  }

  Outcome run(const std::string& args, const std::string& stdin_file = "") {
    const fs::path out = dir_ / "stdout", err = dir_ / "stderr";
    std::string cmd = std::string(Z2LAT_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
    if (!stdin_file.empty()) cmd += " <" + stdin_file;
    const int raw = std::system(cmd.c_str());
    Outcome r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  fs::path dir_;
};

TEST_F(Cli, RootsOfE8) {
  const std::string e8 = write_form("e8.json", z2lat::e8());
  Outcome r = run("roots " + e8 + " --norm 2");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "240\n");
  EXPECT_EQ(run("roots - --norm 2", e8).out, "240\n");
  EXPECT_EQ(run("--format text roots " + e8).out, "240\n");
}

TEST_F(Cli, SmithFormOfClosedExteriorMatrix) {
  Outcome r = run("snf " + write_form("b3.json", exterior_matrix_closed_form(3)));
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(ordered_json::parse(r.out)["diagonal"], ordered_json::parse("[1,1,4]"));
}

TEST_F(Cli, CertifyOnesIsUnknottedAndVerifies) {
  const std::string ones = write_form("ones9.json", diagonal_ones(9));
  Outcome first = run("certify " + ones);
  ASSERT_EQ(first.status, 0) << first.err;
  const ordered_json cert = ordered_json::parse(first.out);
  EXPECT_EQ(cert["knotted"], false);
  EXPECT_EQ(run("certify " + ones).out, first.out);

  Outcome v = run("verify " + write("cert.json", first.out));
  EXPECT_EQ(v.status, 0);
  EXPECT_EQ(ordered_json::parse(v.out)["ok"], true);

  ordered_json bad = cert;
  bad["glued"]["matrix"][0][0] = 7;
  Outcome t = run("verify " + write("bad.json", bad.dump()));
  EXPECT_EQ(t.status, 1);
  EXPECT_EQ(ordered_json::parse(t.out)["ok"], false);
}

TEST_F(Cli, ExitCodes) {
  Outcome asym = run("roots " + write("asym.json", R"({"gram": [[1, 2], [3, 4]]})"));
  EXPECT_EQ(asym.status, 1);
  EXPECT_EQ(ordered_json::parse(asym.err)["error"], "InvalidInput");

  Outcome malformed = run("snf " + write("broken.json", "{\"gram\": [[1,"));
  EXPECT_EQ(malformed.status, 1);
  EXPECT_EQ(ordered_json::parse(malformed.err)["error"], "MalformedJson");

  Outcome even = run("certify " + write_form("e8.json", z2lat::e8()));
  EXPECT_EQ(even.status, 1);
  EXPECT_EQ(ordered_json::parse(even.err)["error"], "NotOdd");

  Outcome odd_linking = run("linking " + write_form("one.json", diagonal_ones(1)));
  EXPECT_EQ(odd_linking.status, 1);
  EXPECT_EQ(ordered_json::parse(odd_linking.err)["error"], "NotEven");

  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("frobnicate x").status, 2);
  EXPECT_EQ(run("roots " + (dir_ / "missing.json").string()).status, 2);
  EXPECT_EQ(run("--budget -1 certify " + write_form("o.json", diagonal_ones(1))).status, 2);
  EXPECT_EQ(run("--format xml roots " + write_form("o.json", diagonal_ones(1))).status, 2);
  EXPECT_EQ(run("--help").status, 0);
}

TEST_F(Cli, ExteriorOutputFeedsOtherCommands) {
  Outcome ext = run("exterior " + write_form("ones12.json", diagonal_ones(12)));
  ASSERT_EQ(ext.status, 0) << ext.err;
  const std::string doc = write("ext.json", ext.out);
  EXPECT_EQ(ordered_json::parse(ext.out)["index"], 2);

  EXPECT_EQ(run("roots " + doc).out, "264\n");
  EXPECT_EQ(ordered_json::parse(run("snf " + doc).out)["diagonal"].back(), 2);
  const ordered_json linking = ordered_json::parse(run("linking " + doc).out);
  EXPECT_EQ(linking["group"], ordered_json::parse("[2,2]"));
  EXPECT_EQ(run("fingerprint " + doc).status, 0);
}

TEST_F(Cli, NeighborsOfOnesTwelve) {
  Outcome r = run("neighbors " + write_form("ones12.json", diagonal_ones(12)));
  ASSERT_EQ(r.status, 0) << r.err;
  const ordered_json list = ordered_json::parse(r.out);
  std::size_t gamma = 0;
  for (const auto& n : list) {
    EXPECT_EQ(n["parity"], "odd");
    if (n["label"] == "Gamma12") {
      ++gamma;
      const std::string nb = write("nb.json", n.dump());
      Outcome iso = run("isometry " + nb + " " + write_form("gamma.json", gamma_lattice(12)));
      ASSERT_EQ(iso.status, 0) << iso.err;
      const ordered_json j = ordered_json::parse(iso.out);
      ASSERT_EQ(j["status"], "isometric");
      EXPECT_TRUE(verify_isometry(form_from_json(n), gamma_lattice(12), matrix_from_json(j["matrix"])));
      EXPECT_EQ(ordered_json::parse(run("fingerprint " + nb).out)["counts"]["1"], 0);
    }
  }
  EXPECT_EQ(gamma, 2u);
  EXPECT_EQ(list.size(), 2u);
}

TEST_F(Cli, NonIsometricPair) {
  Outcome r = run("isometry " + write_form("g.json", gamma_lattice(12)) + " " +
              write_form("o.json", diagonal_ones(12)));
  ASSERT_EQ(r.status, 0);
  const ordered_json j = ordered_json::parse(r.out);
  EXPECT_EQ(j["status"], "not-isometric");
  EXPECT_TRUE(j["matrix"].is_null());
}

TEST_F(Cli, PullbackAndPartsRoundTrip) {
  const std::string input =
      R"({"module": [1, 1, 1], "plus": {"gram": [[2, 2], [2, 3]]}, "minus": {"gram": [[4, 2], [2, 1]]}})";
  Outcome lambda = run("pullback " + write("parts.json", input));
  ASSERT_EQ(lambda.status, 0) << lambda.err;
  const std::string lam = write("lambda.json", lambda.out);
  Outcome parts = run("parts " + lam);
  ASSERT_EQ(parts.status, 0) << parts.err;
  const ordered_json p = ordered_json::parse(parts.out);
  EXPECT_EQ(p["plus"], ordered_json::parse(input)["plus"]);
  EXPECT_EQ(p["minus"], ordered_json::parse(input)["minus"]);
  EXPECT_EQ(run("pullback - ", write("p2.json", parts.out)).out, lambda.out);

  Outcome mismatch = run("pullback " + write("bad.json", R"({"module": [0, 0, 1], "plus": [[1]], "minus": [[2]]})"));
  EXPECT_EQ(mismatch.status, 1);
  EXPECT_EQ(ordered_json::parse(mismatch.err)["error"], "PullbackMismatch");
}

TEST_F(Cli, SeedAndBudgetAreDeterministic) {
  const std::string f = write_form("e8p1.json", e8_plus_ones(1));
  Outcome a = run("--seed 3 --budget 8 certify " + f);
  ASSERT_EQ(a.status, 0) << a.err;
  EXPECT_EQ(run("certify " + f + " --seed 3 --budget 8").out, a.out);
  const ordered_json cert = ordered_json::parse(a.out);
  EXPECT_EQ(cert["knotted"], true);
  EXPECT_EQ(run("verify " + write("c.json", a.out)).status, 0);
}

TEST_F(Cli, TextFormat) {
  Outcome r = run("fingerprint --format text " + write_form("ones3.json", diagonal_ones(3)));
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "counts:\n  1: 6\n  2: 12\n  3: 8\nmin_norm: 1\n");
}

}  // namespace
