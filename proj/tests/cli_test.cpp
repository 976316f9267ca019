#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "abpkit/abp.hpp"
#include "abpkit/io.hpp"
#include "abpkit/poly.hpp"
#include "json.hpp"
#include "support.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("abpkit_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(const std::string& args) const {
    const std::string cmd = std::string(ABPKIT_CLI) + " " + args + " 2>" + path("stderr.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  json read(const std::string& name) const {
    std::ifstream in(path(name));
    return json::parse(in);
  }

  std::string slurp(const std::string& name) const {
    std::ifstream in(path(name));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, GenFullRankFourVariables) {
  write("w.json", R"([{"i": 1, "k": 2, "j": 4, "value": "7"}])");
  ASSERT_EQ(run("gen fullrank --n 4 --w " + path("w.json") + " --out " + path("g.json")), 0);
  const auto g = abpkit::poly_from_json(slurp("g.json"));
  using testing_support::poly_of;
  const auto expected = poly_of(4, {{{}, 1}, {{1, 4}, 1}}) * poly_of(4, {{{}, 1}, {{2, 3}, 1}}) +
                        abpkit::poly_scale(poly_of(4, {{{}, 1}, {{1, 2}, 1}}) * poly_of(4, {{{}, 1}, {{3, 4}, 1}}),
                                           abpkit::Fe{7});
  EXPECT_EQ(g, expected);
  EXPECT_EQ(run("gen fullrank --n 5"), 3);
}

TEST_F(Cli, DeterministicOutput) {
  ASSERT_EQ(run("gen random-smabp --n 8 --nodes 30 --seed 9 --out " + path("a.json")), 0);
  ASSERT_EQ(run("gen random-smabp --n 8 --nodes 30 --seed 9 --out " + path("b.json")), 0);
  EXPECT_EQ(slurp("a.json"), slurp("b.json"));
  ASSERT_EQ(run("transform to-formula --seed 9 --in " + path("a.json") + " --out " + path("f1.json")), 0);
  ASSERT_EQ(run("transform to-formula --seed 9 --in " + path("a.json") + " --out " + path("f2.json")), 0);
  EXPECT_EQ(slurp("f1.json"), slurp("f2.json"));
}

TEST_F(Cli, GeneratedProgramsAreMultilinear) {
  for (int seed = 0; seed < 25; ++seed) {
    ASSERT_EQ(run("gen random-smabp --n 7 --nodes 25 --seed " + std::to_string(seed) + " --out " + path("p.json")), 0);
    EXPECT_EQ(run("check smabp --in " + path("p.json") + " --out " + path("r.json")), 0);
  }
}

TEST_F(Cli, TransformPipeline) {
  ASSERT_EQ(run("gen random-smabp --n 9 --nodes 40 --seed 4 --out " + path("p.json")), 0);
  ASSERT_EQ(run("transform decompose --in " + path("p.json") + " --out " + path("d.json")), 0);
  EXPECT_TRUE(read("d.json").at("ok").get<bool>());
  ASSERT_EQ(run("transform to-depth4 --in " + path("p.json") + " --out " + path("d4.json")), 0);
  const json r = read("d4.json").at("report");
  EXPECT_TRUE(r.at("semantics").at("equal").get<bool>());
  EXPECT_EQ(r.at("semantics").at("mode"), "exact");
  EXPECT_LE(r.at("max_factors").get<int>(), r.at("factor_bound").get<int>());
  EXPECT_LE(r.at("max_factor_arity").get<int>(), r.at("tau").get<int>());
  EXPECT_EQ(run("transform to-formula --budget-gates 2 --in " + path("p.json")), 2);
}

TEST_F(Cli, OrderToPass) {
  ASSERT_EQ(run("gen random-smabp --n 6 --nodes 40 --ordered 3 --seed 2 --out " + path("o.json")), 0);
  ASSERT_EQ(run("transform order-to-pass --in " + path("o.json") + " --out " + path("q.json")), 0);
  const json rep = read("q.json").at("report");
  EXPECT_LE(rep.at("l_pass").get<int>(), 3);
  EXPECT_TRUE(rep.at("semantics").at("equal").get<bool>());

  write("d.json", abpkit::abp_to_json(testing_support::diamond()));
  write("id.json", "[[1, 2]]");
  EXPECT_EQ(run("transform order-to-pass --in " + path("d.json") + " --orders " + path("id.json") + " --out " +
                path("v.json")),
            1);
  EXPECT_EQ(read("v.json").at("witness").at("vars"), json::array({2, 1}));
  EXPECT_EQ(run("check ordered --in " + path("d.json") + " --orders " + path("id.json") + " --out " + path("w.json")), 1);
  EXPECT_EQ(read("w.json").at("witness").at("vars"), json::array({2, 1}));
}

TEST_F(Cli, Rank) {
  ASSERT_EQ(run("gen fullrank --n 6 --out " + path("g.json")), 0);
  ASSERT_EQ(run("rank --samples 50 --in " + path("g.json") + " --out " + path("r.json")), 0);
  const json s = read("r.json").at("summary");
  EXPECT_EQ(s.at("min"), 8);
  EXPECT_EQ(s.at("max"), 8);
  write("one.json", abpkit::poly_to_json(abpkit::MultilinearPoly::constant(4, testing_support::kF, abpkit::Fe{1})));
  ASSERT_EQ(run("rank --samples 10 --in " + path("one.json") + " --out " + path("r1.json")), 0);
  EXPECT_EQ(read("r1.json").at("summary").at("max"), 1);
}

TEST_F(Cli, Checks) {
  ASSERT_EQ(run("gen circular --n 6 --seed 3 --out " + path("c.json")), 0);
  EXPECT_EQ(run("check roabp --in " + path("c.json") + " --out " + path("r.json")), 0);
  write("x.json", abpkit::abp_to_json(testing_support::chain(6, {1, 3, 2, 5})));
  EXPECT_EQ(run("check circular-interval --perm 1,2,3,4,5,6 --in " + path("x.json") + " --out " + path("i.json")), 1);
  EXPECT_TRUE(read("i.json").at("witness").contains("triple"));
}

TEST_F(Cli, InputErrors) {
  write("bad.json", "{");
  EXPECT_EQ(run("check smabp --in " + path("bad.json")), 3);
  EXPECT_EQ(run("check smabp --in " + path("missing.json")), 3);
  EXPECT_EQ(run("frobnicate"), 3);
  write("nonml.json", abpkit::abp_to_json(testing_support::chain(2, {1, 1})));
  EXPECT_EQ(run("check smabp --in " + path("nonml.json") + " --out " + path("o.json")), 1);
  EXPECT_EQ(run("transform to-formula --in " + path("nonml.json")), 3);
}
