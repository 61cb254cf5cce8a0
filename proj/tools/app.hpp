#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stereo_avoid/camera.hpp"
#include "stereo_avoid/controller.hpp"
#include "stereo_avoid/depth_lut.hpp"
#include "stereo_avoid/disparity.hpp"
#include "stereo_avoid/fuzzy.hpp"
#include "stereo_avoid/regions.hpp"

namespace stereo_avoid::app {

/// Missing or unreadable input, bad flag combination. Exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Pipeline ran but produced nothing usable. Exit code 1.
class ComputationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Throws UsageError naming the path when it is not a readable regular file.
void require_file(const std::filesystem::path& path);

struct RunConfig {
    CameraRig rig;
    MatchParams match;
    DepthLUT lut;
    ControllerConfig controller;
    std::optional<fuzzy::RuleBase> custom_rules;
    std::optional<int> center_side_px;  // default: center_region_px(rig.focal_px)
    std::filesystem::path out_dir = ".";
    unsigned workers = 0;
    double disparity_scale = 4.0;

    RegionGrid grid() const;
};

/// "paper-literal", "paper-corrected" (either separator) or a rule-base JSON path.
void apply_rules_option(RunConfig& cfg, const std::string& rules);

struct PipelineOutput {
    DisparityMap disparity;
    FusedResult fused;
    SteerResult decision;
};

/// fused_pipeline then steer. The disparity map is kept for the PGM dump.
PipelineOutput run_pipeline(const StereoPair& pair, const RunConfig& cfg);

/// File-level entry: loads the pair, runs, writes depth.csv, disparity.pgm and
/// command.json into cfg.out_dir. Returns the command JSON.
std::string run_pipeline(const std::filesystem::path& left, const std::filesystem::path& right,
                         const RunConfig& cfg);

std::string steer_json(const SteerResult& r);

struct BenchReport {
    int width = 0;
    int height = 0;
    int max_disparity = 0;
    std::vector<unsigned> workers;
    std::vector<double> seconds;  // best of the repeats
    std::vector<double> speedup;  // seconds at 1 worker / seconds
    bool outputs_equal = false;   // fused vs unfused and across worker counts

    double speedup_at(unsigned w) const;
};

/// Times fused_pipeline on a rendered corridor frame. Needs at least two
/// worker counts including 1. Throws std::logic_error when outputs differ.
BenchReport bench(const RunConfig& cfg, const std::vector<unsigned>& worker_counts, int repeats = 3);

std::string bench_json(const BenchReport& r);
std::string bench_csv(const BenchReport& r);

/// Whole CLI. Returns the process exit code; never throws.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stereo_avoid::app
