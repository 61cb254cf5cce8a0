#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stereo_avoid/camera.hpp"
#include "stereo_avoid/controller.hpp"
#include "stereo_avoid/depth_lut.hpp"
#include "stereo_avoid/disparity.hpp"
#include "stereo_avoid/image_io.hpp"
#include "stereo_avoid/maps.hpp"
#include "stereo_avoid/regions.hpp"

namespace stereo_avoid::sim {

// World frame: x right, y up, z forward at zero heading.
struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    friend Vec3 operator+(Vec3 a, Vec3 b) noexcept { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(Vec3 a, Vec3 b) noexcept { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(double s, Vec3 a) noexcept { return {s * a.x, s * a.y, s * a.z}; }
    friend bool operator==(const Vec3&, const Vec3&) = default;

    double dot(Vec3 o) const noexcept { return x * o.x + y * o.y + z * o.z; }
    double norm() const noexcept { return std::sqrt(dot(*this)); }
    double operator[](int i) const noexcept { return i == 0 ? x : (i == 1 ? y : z); }
};

/// Axis-aligned textured box. A nonzero velocity translates it linearly in
/// time (scripted motion, no controller of its own).
struct Box {
    Vec3 min;
    Vec3 max;
    std::uint64_t seed = 0;
    Vec3 velocity;

    void validate() const;
    Box at(double time_s) const noexcept;

    friend bool operator==(const Box&, const Box&) = default;
};

struct Scene {
    std::vector<Box> boxes;
    Vec3 bounds_min{-50.0, -50.0, -50.0};
    Vec3 bounds_max{50.0, 50.0, 50.0};

    void validate() const;
    bool inside_bounds(Vec3 p) const noexcept;
};

struct VehicleState {
    Vec3 position;
    double heading_yaw = 0.0;    // radians, positive turns right
    double heading_pitch = 0.0;  // radians, positive climbs
    double speed = 0.5;          // m/s

    void validate() const;
};

/// Left camera frame at the vehicle position. The right camera sits
/// baseline_m along `right`.
struct CameraPose {
    Vec3 origin;
    Vec3 forward;
    Vec3 right;
    Vec3 up;
};

CameraPose camera_pose(const VehicleState& state) noexcept;
CameraPose right_camera(const CameraPose& left, const CameraRig& rig) noexcept;

/// Pinhole projection to pixel coordinates (pixel u's center at x = u).
std::optional<PixelHomog> project(const CameraPose& pose, const CameraRig& rig, Vec3 point) noexcept;

struct RayHit {
    double t = 0.0;  // along a direction with unit forward component: camera-plane depth
    int box = -1;
    int axis = -1;  // slab that was entered
};

std::optional<RayHit> cast_ray(const Scene& scene, Vec3 origin, Vec3 dir, double time_s = 0.0) noexcept;

struct RenderOptions {
    double noise_stddev = 2.0;
    std::uint64_t noise_seed = 0;
    double time_s = 0.0;
    int supersample = 1;  // per-axis rays per pixel
    double sky_intensity = 200.0;  // mean level of the direction-textured sky
    unsigned workers = 0;
};

/// Ideally rectified stereo pair rendered by ray casting.
StereoPair render_stereo(const Scene& scene, const VehicleState& state, const CameraRig& rig,
                         const RenderOptions& options = {});

/// Camera-plane depth of the nearest hit through each left-camera pixel center.
DepthMap ground_truth_depth(const Scene& scene, const VehicleState& state, const CameraRig& rig,
                            double time_s = 0.0);

struct EpisodeConfig {
    CameraRig rig;
    // Stricter than the MatchParams defaults: one stray match corrupts a region minimum.
    MatchParams match{4, 64, 0.35, 1};
    RegionGrid grid = make_grid(640, 360, 150);
    DepthLUT lut;
    ControllerConfig controller;
    std::optional<fuzzy::RuleBase> custom_rules;
    double dt = 0.1;
    double yaw_rate_gain = 1.0;    // rad/s per unit yaw command
    double pitch_rate_gain = 1.0;  // rad/s per unit pitch command
    int max_steps = 300;
    double collision_radius_m = 0.25;
    double noise_stddev = 2.0;
    std::uint64_t seed = 1;
    unsigned workers = 0;

    void validate() const;
};

/// Kinematic update at constant speed. Heading pitch clamps to +/- pi/3.
VehicleState step_vehicle(const VehicleState& state, const SteerCommand& cmd, const EpisodeConfig& cfg) noexcept;

/// Distance from `p` to the nearest box surface at `time_s` (0 when inside).
double clearance(const Scene& scene, Vec3 p, double time_s = 0.0) noexcept;

/// True iff the closed sphere of `radius_m` at `p` touches any box.
bool check_collision(const Scene& scene, Vec3 p, double radius_m, double time_s = 0.0) noexcept;

struct TrajectoryStep {
    double time_s = 0.0;
    VehicleState state;
    SteerCommand command;
    RegionDepths regions;
    bool collision = false;
    ActiveController active = ActiveController::primary;
    double clearance_m = 0.0;
};

enum class EpisodeEnd { max_steps, collision, left_bounds };
std::string_view to_string(EpisodeEnd e) noexcept;

struct TrajectoryLog {
    std::vector<TrajectoryStep> steps;
    EpisodeEnd end = EpisodeEnd::max_steps;
    std::uint64_t seed = 0;

    bool collided() const noexcept { return end == EpisodeEnd::collision; }
    double closest_approach_m() const noexcept;
};

/// Called after each step with the rendered left image and the decision.
using FrameObserver = std::function<void(int step, const GrayImage& left, const SteerResult& decision)>;

/// render -> fused_pipeline -> steer -> log -> step_vehicle until max_steps,
/// collision or leaving the world bounds. Throws std::invalid_argument if the
/// start state already collides.
TrajectoryLog run_episode(const Scene& scene, const VehicleState& start, const EpisodeConfig& cfg,
                          const FrameObserver& observer = {});

/// Columns: t,x,y,z,yaw,pitch,cmd_pitch,cmd_yaw,<nine region names>,collision.
std::string trajectory_csv(const TrajectoryLog& log);
std::vector<TrajectoryStep> parse_trajectory_csv(const std::string& text);

/// Left image with the center band outlined and the command drawn as an arrow
/// from the image center (right = +yaw, up = +pitch).
RgbImage debug_frame(const GrayImage& left, const RegionGrid& grid, const SteerCommand& cmd);

struct Scenario {
    std::string name;
    Scene scene;
    VehicleState start;
    int max_steps = 300;
};

Scenario empty_corridor();
Scenario narrow_doorway();
Scenario lateral_intruder();
/// "empty_corridor", "narrow_doorway" or "lateral_intruder". Throws on others.
Scenario scenario_by_name(std::string_view name);
std::vector<std::string> scenario_names();

}  // namespace stereo_avoid::sim
