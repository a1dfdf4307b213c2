#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "iqa/cli.hpp"
#include "iqa/distortions.hpp"
#include "iqa/metrics.hpp"
#include "test_util.hpp"

using namespace iqa;
using Json = nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
protected:
  void SetUp() override {
    ref_ = (dir_ / "ref.png").string();
    dist_ = (dir_ / "dist.png").string();
    save_image(ref_, test::textured_image(32, 1));
    save_image(dist_, gaussian_noise(load_image(ref_), 8, 1));
  }
  test::TempDir dir_{"cli"};
  std::string ref_, dist_;
};

}  // namespace

TEST_F(Cli, MetricPlainAndJson) {
  auto r = run({"metric", "--metric", "psnr", "--ref", ref_, "--dist", ref_});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "inf\n");
  r = run({"metric", "--metric", "ssim", "--ref", ref_, "--dist", dist_, "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["metric"], "ssim");
  EXPECT_DOUBLE_EQ(j["value"].get<double>(), ssim(load_image(ref_), load_image(dist_)).value);
  EXPECT_EQ(j["higher_is_better"], true);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({"metric", "--metric", "psnr", "--ref", ref_}).code, 2);
  EXPECT_EQ(run({"metric", "--metric", "lpips", "--ref", ref_, "--dist", dist_}).code, 2);
  const auto missing = run({"metric", "--metric", "psnr", "--ref", ref_, "--dist", (dir_ / "none.png").string()});
  EXPECT_EQ(missing.code, 1);
  EXPECT_NE(missing.err.find("error"), std::string::npos);
  const auto help = run({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("elo-sim"), std::string::npos);
  const auto usage = run({"elo-sim", "--populations", "20"});
  EXPECT_EQ(usage.code, 2);
  EXPECT_NE(usage.err.find("--seed"), std::string::npos);
}

TEST_F(Cli, DistortNeedsSeedForRandomTypes) {
  const std::string out = (dir_ / "n.png").string();
  EXPECT_EQ(run({"distort", "--type", "noise", "--input", ref_, "--output", out, "--sigma", "5"}).code, 2);
  EXPECT_EQ(run({"distort", "--type", "warp", "--input", ref_, "--output", out}).code, 2);
  ASSERT_EQ(run({"distort", "--type", "noise", "--input", ref_, "--output", out, "--sigma", "5", "--seed", "3"}).code, 0);
  save_image(dir_ / "expected.png", gaussian_noise(load_image(ref_), 5, 3));
  EXPECT_EQ(load_image(out), load_image(dir_ / "expected.png"));
  const auto blur = run({"distort", "--type", "blur", "--input", ref_, "--output", out, "--sigma", "2", "--format", "json"});
  ASSERT_EQ(blur.code, 0);
  EXPECT_EQ(Json::parse(blur.out)["params"]["sigma"], 2.0);
}

TEST_F(Cli, BenchmarkJsonHasOneCellPerMetricAndSubtype) {
  std::ofstream m(dir_ / "m.csv");
  m << "ref_path,dist_path,mos,distortion_type,subtype\n";
  for (int i = 0; i < 10; ++i) {
    const std::string name = "d" + std::to_string(i) + ".png";
    save_image(dir_ / name, gaussian_noise(load_image(ref_), 2.0 + 3 * i, i));
    m << "ref.png," << name << "," << 90 - i << ",noise," << (i % 2 ? "denoising" : "traditional") << "\n";
  }
  m.close();
  const auto r = run({"benchmark", "--manifest", (dir_ / "m.csv").string(), "--metrics", "psnr,ssim", "--group-by",
                      "subtype", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["groups"], Json::array({"traditional", "denoising"}));
  ASSERT_EQ(j["cells"].size(), 4u);
  for (const Json& c : j["cells"]) {
    EXPECT_EQ(c["n"], 5);
    EXPECT_TRUE(c.contains("srcc") && c.contains("krcc") && c.contains("plcc"));
  }
  EXPECT_EQ(run({"benchmark", "--manifest", (dir_ / "m.csv").string(), "--metrics", "psnr"}).code, 0);
}

TEST_F(Cli, EloSimIsDeterministic) {
  const std::vector<std::string> args{"elo-sim", "--populations", "30", "--judgements", "3000", "--checkpoint-every",
                                      "500", "--seed", "4", "--format", "json"};
  const auto a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const Json j = Json::parse(a.out);
  EXPECT_EQ(j["seed"], 4);
  EXPECT_EQ(j["strategy"], "similar");
  EXPECT_GT(j["final_srcc"].get<double>(), 0.5);

  // Sweeps need a directory and write one CSV per run.
  EXPECT_EQ(run({"elo-sim", "--populations", "20", "--judgements", "200", "--checkpoint-every", "100", "--seed", "1,2"})
                .code,
            2);
  const std::string out = (dir_ / "sweep").string();
  const auto sweep = run({"elo-sim", "--populations", "20", "--judgements", "200", "--checkpoint-every", "100", "--seed",
                          "1,2", "--strategy", "similar,random", "--out-dir", out, "--format", "json"});
  ASSERT_EQ(sweep.code, 0) << sweep.err;
  EXPECT_EQ(Json::parse(sweep.out).size(), 4u);
  EXPECT_TRUE(std::filesystem::exists(dir_ / "sweep" / "index.json"));
  EXPECT_TRUE(std::filesystem::exists(dir_ / "sweep" / "k16_m400_random_s2.csv"));
}

TEST_F(Cli, CounterexampleKeepsPsnrAndImprovesSsim) {
  const std::string out = (dir_ / "ce.png").string(), traj = (dir_ / "t.csv").string();
  EXPECT_EQ(run({"counterexample", "--ref", ref_, "--out", out}).code, 2);
  EXPECT_EQ(run({"counterexample", "--ref", ref_, "--noise-sigma", "15", "--out", out}).code, 2);
  const auto r = run({"counterexample", "--metric", "ssim", "--ref", ref_, "--noise-sigma", "15", "--seed", "1",
                      "--out", out, "--trajectory", traj, "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_GE(j["final_objective"].get<double>() - j["initial_objective"].get<double>(), 0.02);
  EXPECT_GE(j["psnr_final"].get<double>(), j["psnr_initial"].get<double>());
  EXPECT_TRUE(std::filesystem::exists(traj));
  EXPECT_EQ(load_image(out).width, 32);
}

TEST_F(Cli, SwdnScoresAndExportsWeights) {
  const auto same = run({"swdn", "--ref", ref_, "--dist", ref_});
  ASSERT_EQ(same.code, 0) << same.err;
  EXPECT_EQ(same.out, "0\n");
  const std::string bundle = (dir_ / "w").string();
  ASSERT_EQ(run({"swdn", "--export-weights", bundle}).code, 0);
  const auto a = run({"swdn", "--ref", ref_, "--dist", dist_, "--weights", bundle});
  const auto b = run({"swdn", "--ref", ref_, "--dist", dist_});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(run({"swdn", "--ref", ref_, "--dist", dist_, "--weights", bundle, "--export-weights", bundle}).code, 2);
}

TEST_F(Cli, ServeRequiresDataDirAndSeed) {
  EXPECT_EQ(run({"serve", "--seed", "1"}).code, 2);
  EXPECT_EQ(run({"serve", "--data-dir", (dir_ / "d").string()}).code, 2);
}
