#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "app.hpp"
#include "json.hpp"
#include "stereo_avoid/config_io.hpp"
#include "stereo_avoid/image_io.hpp"
#include "stereo_avoid/sim.hpp"
#include "support.hpp"

using namespace stereo_avoid;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code;
    std::string out, err;
};

CliResult cli(std::vector<std::string> args) {
    args.insert(args.begin(), "stereo-avoid");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = app::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("stereo_avoid_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    // Renders a scene to left.pgm / right.pgm under `prefix`.
    void render(const sim::Scene& scene, const std::string& prefix) {
        const auto pair = sim::render_stereo(scene, {{0, 0, 0}, 0, 0, 0.5}, CameraRig{});
        write_pgm(path(prefix + "_l.pgm"), pair.left());
        write_pgm(path(prefix + "_r.pgm"), pair.right());
    }

    fs::path dir_;
};

}  // namespace

TEST_F(CliTest, NoSubcommandIsUsageError) { EXPECT_EQ(cli({}).code, 2); }

TEST_F(CliTest, UnknownFlagIsUsageError) { EXPECT_EQ(cli({"steer", "--bogus", "1"}).code, 2); }

TEST_F(CliTest, HelpExitsZero) { EXPECT_EQ(cli({"--help"}).code, 0); }

TEST_F(CliTest, RunWallAtThreeMetersGivesZeroCommand) {
    render(testsupport::wall_scene(3.0), "wall");
    const auto r = cli({"run", "--left", path("wall_l.pgm"), "--right", path("wall_r.pgm"), "--out-dir", path("o")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_NEAR(j["pitch"].get<double>(), 0.0, 1e-9);
    EXPECT_NEAR(j["yaw"].get<double>(), 0.0, 1e-9);
    EXPECT_EQ(j["active_controller"], "primary");
    EXPECT_NEAR(j["regions"]["center"].get<double>(), 3.0, 0.15);
    EXPECT_TRUE(fs::exists(path("o/depth.csv")));
    EXPECT_TRUE(fs::exists(path("o/disparity.pgm")));
    EXPECT_EQ(json::parse(read_file(path("o/command.json"))), j);
}

TEST_F(CliTest, RunFloorObstaclePitchesUp) {
    // Low wall 0.6 m ahead whose top edge is just above the optical axis.
    sim::Scene s = testsupport::wall_scene(3.0);
    s.boxes.push_back({{-3.0, -3.0, 0.6}, {3.0, 0.05, 0.8}, 4, {}});
    render(s, "floor");
    const auto r = cli({"run", "--left", path("floor_l.pgm"), "--right", path("floor_r.pgm"), "--max-disp", "96",
                        "--out-dir", path("o")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_GT(j["pitch"].get<double>(), 0.0);
    EXPECT_NEAR(j["regions"]["down"].get<double>(), 0.6, 0.05);
}

TEST_F(CliTest, MissingFileExitTwoNamesPath) {
    const std::string missing = path("does_not_exist.pgm");
    const auto r = cli({"run", "--left", missing, "--right", missing});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find(missing), std::string::npos);
    EXPECT_EQ(cli({"steer", "--depths", missing}).code, 2);
    EXPECT_EQ(cli({"steer", "--rules", missing}).code, 2);
    EXPECT_EQ(cli({"lut", "--lut", missing}).code, 2);
}

TEST_F(CliTest, SizeMismatchIsNonzero) {
    write_pgm(path("a.pgm"), GrayImage(64, 32, 1));
    write_pgm(path("b.pgm"), GrayImage(60, 32, 1));
    const auto r = cli({"depth", "--left", path("a.pgm"), "--right", path("b.pgm")});
    EXPECT_NE(r.code, 0);
    EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, RigSizeMismatchIsUsageError) {
    render(testsupport::wall_scene(3.0), "w");
    CameraRig rig;
    rig.width_px = 320;
    rig.height_px = 180;
    write_file(path("rig.json"), io::rig_to_json(rig));
    EXPECT_EQ(cli({"depth", "--left", path("w_l.pgm"), "--right", path("w_r.pgm"), "--rig", path("rig.json")}).code, 2);
}

TEST_F(CliTest, NoValidDisparitiesIsComputationError) {
    write_pgm(path("f.pgm"), GrayImage(200, 100, 128));
    const auto r = cli({"depth", "--left", path("f.pgm"), "--right", path("f.pgm"), "--out-dir", path("o")});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("no valid disparities"), std::string::npos);
}

TEST_F(CliTest, DepthOutputsRoundTrip) {
    const auto pair = testsupport::shifted_pair(160, 80, 8, 3);
    write_pgm(path("l.pgm"), pair.left());
    write_pgm(path("r.pgm"), pair.right());
    const auto r = cli({"depth", "--left", path("l.pgm"), "--right", path("r.pgm"), "--max-disp", "16", "--scale",
                        "8", "--out-dir", path("o")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto disp = read_pgm(path("o/disparity.pgm"));
    EXPECT_EQ(disp.at(100, 40), 64);
    EXPECT_EQ(encode_pgm(disp), read_file(path("o/disparity.pgm")));
    const auto text = read_file(path("o/depth.csv"));
    const auto depth = io::parse_depth_map_csv(text);
    EXPECT_EQ(io::depth_map_csv(depth), text);
    EXPECT_NEAR(depth.at(100, 40), 0.12 * 450 / 8, 1e-5);
}

TEST_F(CliTest, SideBySideEqualsPair) {
    const auto pair = testsupport::shifted_pair(120, 60, 5, 8);
    GrayImage sbs(240, 60);
    for (int y = 0; y < 60; ++y)
        for (int x = 0; x < 120; ++x) {
            sbs.at(x, y) = pair.left().at(x, y);
            sbs.at(x + 120, y) = pair.right().at(x, y);
        }
    write_pgm(path("sbs.pgm"), sbs);
    write_pgm(path("l.pgm"), pair.left());
    write_pgm(path("r.pgm"), pair.right());
    const auto a = cli({"regions", "--sbs", path("sbs.pgm"), "--max-disp", "16", "--center-px", "20"});
    const auto b = cli({"regions", "--left", path("l.pgm"), "--right", path("r.pgm"), "--max-disp", "16",
                        "--center-px", "20"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(cli({"regions", "--sbs", path("sbs.pgm"), "--left", path("l.pgm")}).code, 2);
}

TEST_F(CliTest, RegionsGridDump) {
    DepthMap d(640, 360, 2.0f);
    write_file(path("d.csv"), io::depth_map_csv(d));
    const auto r = cli({"regions", "--depth", path("d.csv"), "--grid"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["grid"]["regions"]["center"]["x"], json::array({245, 395}));
    EXPECT_EQ(j["grid"]["regions"]["center"]["y"], json::array({105, 255}));
    EXPECT_EQ(j["depths"]["up_left"].get<double>(), 2.0);
}

TEST_F(CliTest, SteerFlagsAndJsonAgree) {
    const auto a = cli({"steer", "--center", "0.5", "--up", "0.5", "--down", "0.5", "--left", "3", "--right", "3"});
    ASSERT_EQ(a.code, 0) << a.err;
    const auto ja = json::parse(a.out);
    EXPECT_GT(ja["yaw"].get<double>(), 0.0);
    EXPECT_EQ(ja["rule_strengths"].size(), 9u);
    write_file(path("d.json"), io::region_depths_to_json(testsupport::depths_of(0.5, 0.5, 0.5, 3, 3)));
    const auto b = cli({"steer", "--depths", path("d.json")});
    EXPECT_EQ(a.out, b.out);
}

TEST_F(CliTest, SteerPresetsAndCustomFile) {
    const std::vector<std::string> base = {"steer", "--center", "0.6", "--left", "0.6"};
    auto with = [&](std::vector<std::string> extra) {
        auto v = base;
        v.insert(v.end(), extra.begin(), extra.end());
        return cli(v);
    };
    const auto lit = with({"--rules", "paper-literal"});
    const auto cor = with({"--rules", "paper-corrected"});
    ASSERT_EQ(lit.code, 0);
    ASSERT_EQ(cor.code, 0);
    write_file(path("rb.json"), io::rulebase_to_json(build_primary_rulebase(RulePreset::paper_literal)));
    const auto file = with({"--rules", path("rb.json")});
    ASSERT_EQ(file.code, 0) << file.err;
    EXPECT_EQ(json::parse(file.out)["yaw"], json::parse(lit.out)["yaw"]);
    EXPECT_GT(json::parse(cor.out)["yaw"].get<double>(), 0.0);
}

TEST_F(CliTest, SteerRejectsBadDepth) {
    EXPECT_EQ(cli({"steer", "--center", "0"}).code, 1);
    write_file(path("bad.json"), "{\"center\": 1}");
    EXPECT_EQ(cli({"steer", "--depths", path("bad.json")}).code, 2);
}

TEST_F(CliTest, FuzzyEvalMatchesEngine) {
    const auto rb = build_primary_rulebase(RulePreset::paper_corrected);
    const std::map<std::string, double> in = {
        {"center", 0.2}, {"up", 0.9}, {"down", 0.1}, {"left", 0.3}, {"right", 0.8}};
    const auto want = rb.evaluate(in);
    std::vector<std::string> args = {"fuzzy-eval", "--rules", "paper-corrected", "--dump", path("dist.csv")};
    for (const auto& [k, v] : in) {
        args.push_back("--input");
        args.push_back(k + "=" + std::to_string(v));
    }
    const auto r = cli(args);
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_DOUBLE_EQ(j["outputs"]["pitch"].get<double>(), want.at("pitch"));
    EXPECT_DOUBLE_EQ(j["outputs"]["yaw"].get<double>(), want.at("yaw"));
    const auto csv = read_file(path("dist.csv"));
    EXPECT_EQ(csv.rfind("variable,position,degree\n", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 2 * 1001);
}

TEST_F(CliTest, FuzzyEvalInactiveOutputIsNull) {
    const auto r = cli({"fuzzy-eval", "--rules", "paper-corrected", "--input", "center=0.1", "--input", "up=0.1",
                        "--input", "down=0.1", "--input", "left=0.1", "--input", "right=0.1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_TRUE(j["outputs"]["pitch"].is_number());  // corrected rule 7 fires
    EXPECT_TRUE(j["outputs"]["yaw"].is_number());
    // A custom base with one rule leaves the other output inactive.
    auto spec = build_primary_rulebase(RulePreset::paper_corrected).spec();
    spec.rules.resize(1);
    write_file(path("one.json"), io::rulebase_to_json(fuzzy::RuleBase(spec)));
    const auto s = cli({"fuzzy-eval", "--rules", path("one.json"), "--input", "center=0.1"});
    ASSERT_EQ(s.code, 0) << s.err;
    EXPECT_TRUE(json::parse(s.out)["outputs"]["pitch"].is_null());
    EXPECT_EQ(cli({"fuzzy-eval", "--rules", "paper-corrected", "--input", "center"}).code, 2);
}

TEST_F(CliTest, LutBuildAndQuery) {
    write_file(path("lut.csv"), "computed_m,true_m\n2.2,2.0\n1.1,1.0\n");
    const auto r = cli({"lut", "--lut", path("lut.csv"), "--query", "1.65", "--query", "9", "--out", path("n.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["entries"], 2);
    EXPECT_NEAR(j["queries"][0]["refined_m"].get<double>(), 1.5, 1e-12);
    EXPECT_EQ(j["queries"][1]["refined_m"].get<double>(), 2.0);
    EXPECT_EQ(read_file(path("n.csv")), "computed_m,true_m\n1.1,1\n2.2,2\n");
    write_file(path("bad.csv"), "computed_m,true_m\n1,2\n2,1\n");
    EXPECT_EQ(cli({"lut", "--lut", path("bad.csv")}).code, 2);
}

TEST_F(CliTest, SimWritesTrajectoryAndFrames) {
    const auto r = cli({"sim", "--scenario", "empty_corridor", "--steps", "3", "--frames", path("frames"),
                        "--out-dir", path("o"), "--seed", "4"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["steps"], 3);
    EXPECT_FALSE(j["collision"].get<bool>());
    const auto text = read_file(path("o/trajectory.csv"));
    EXPECT_EQ(text.substr(0, text.find('\n')),
              "t,x,y,z,yaw,pitch,cmd_pitch,cmd_yaw,center,up,down,left,right,up_left,up_right,down_left,"
              "down_right,collision");
    EXPECT_EQ(sim::parse_trajectory_csv(text).size(), 3u);
    EXPECT_TRUE(fs::exists(path("frames/frame_0002.ppm")));
    const auto again = cli({"sim", "--scenario", "empty_corridor", "--steps", "3", "--out", path("t2.csv"),
                            "--seed", "4"});
    ASSERT_EQ(again.code, 0);
    EXPECT_EQ(read_file(path("t2.csv")), text);
}

TEST_F(CliTest, SimSceneFile) {
    write_file(path("scene.json"), io::scene_to_json(sim::empty_corridor().scene));
    const auto r = cli({"sim", "--scene", path("scene.json"), "--steps", "2", "--out-dir", path("o")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(cli({"sim", "--scenario", "nowhere"}).code, 2);
    EXPECT_EQ(cli({"sim", "--scene", path("missing.json")}).code, 2);
}

TEST_F(CliTest, BenchReportsEquality) {
    const auto r = cli({"bench", "--workers-list", "1,2", "--repeats", "1", "--out", path("b.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_TRUE(j["outputs_equal"].get<bool>());
    EXPECT_EQ(j["width"], 640);
    EXPECT_EQ(j["max_disparity"], 64);
    EXPECT_EQ(j["runs"][0]["speedup"].get<double>(), 1.0);
    EXPECT_EQ(read_file(path("b.csv")).rfind("workers,seconds,speedup", 0), 0u);
    EXPECT_EQ(cli({"bench", "--workers-list", "2,4"}).code, 2);
    EXPECT_EQ(cli({"bench", "--workers-list", "1"}).code, 2);
}

TEST_F(CliTest, BenchSelfComparisonNearOne) {
    app::RunConfig cfg;
    const auto rep = app::bench(cfg, {1, 1}, 3);
    EXPECT_TRUE(rep.outputs_equal);
    EXPECT_NEAR(rep.speedup[1], 1.0, 0.5);
}

TEST_F(CliTest, RenderSubcommandDeterministic) {
    ASSERT_EQ(cli({"render", "--scenario", "narrow_doorway", "--out-dir", path("a")}).code, 0);
    ASSERT_EQ(cli({"render", "--scenario", "narrow_doorway", "--out-dir", path("b")}).code, 0);
    EXPECT_EQ(read_file(path("a/left.pgm")), read_file(path("b/left.pgm")));
    EXPECT_EQ(read_file(path("a/right.pgm")), read_file(path("b/right.pgm")));
}
