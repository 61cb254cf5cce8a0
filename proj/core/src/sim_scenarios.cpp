#include <stdexcept>
#include <string>

#include "stereo_avoid/sim.hpp"

namespace stereo_avoid::sim {

Scenario empty_corridor() {
    Scenario s;
    s.name = "empty_corridor";
    s.scene.boxes = {
        {{-1.3, -1.6, 0.5}, {-1.1, 1.6, 16.0}, 11, {}},  // left wall
        {{1.1, -1.6, 0.5}, {1.3, 1.6, 16.0}, 12, {}},    // right wall
        {{-1.3, -1.8, 0.5}, {1.3, -1.6, 16.0}, 13, {}},  // floor
        {{-1.3, 1.6, 0.5}, {1.3, 1.8, 16.0}, 14, {}},    // ceiling
        {{-1.3, -1.8, 16.0}, {1.3, 1.8, 16.2}, 15, {}},  // far end
    };
    s.scene.bounds_min = {-1.1, -1.6, -1.0};
    s.scene.bounds_max = {1.1, 1.6, 14.0};
    s.start = {{0.0, 0.0, 0.0}, 0.0, 0.0, 0.5};
    s.max_steps = 200;
    return s;
}

namespace {

// Closed textured room [x0, x1] x [-1.6, 1.6] x [z0, z1], inner faces at the bounds.
void add_room(Scene& scene, double x0, double x1, double z0, double z1, std::uint64_t seed) {
    constexpr double t = 0.2, h = 1.6;
    scene.boxes.push_back({{x0 - t, -h - t, z0 - t}, {x0, h + t, z1 + t}, seed, {}});
    scene.boxes.push_back({{x1, -h - t, z0 - t}, {x1 + t, h + t, z1 + t}, seed + 1, {}});
    scene.boxes.push_back({{x0, -h - t, z0 - t}, {x1, -h, z1 + t}, seed + 2, {}});
    scene.boxes.push_back({{x0, h, z0 - t}, {x1, h + t, z1 + t}, seed + 3, {}});
    scene.boxes.push_back({{x0, -h, z1}, {x1, h, z1 + t}, seed + 4, {}});
    scene.boxes.push_back({{x0, -h, z0 - t}, {x1, h, z0}, seed + 5, {}});
    scene.bounds_min = {x0, -h, z0};
    scene.bounds_max = {x1, h, z1};
}

}  // namespace

Scenario narrow_doorway() {
    Scenario s;
    s.name = "narrow_doorway";
    add_room(s.scene, -4.0, 4.0, -1.0, 9.0, 20);
    // Partition at z = 3 with a 1.2 m opening left of the approach line. The
    // right jamb sits inside the vehicle's path so the controller must veer left.
    s.scene.boxes.push_back({{0.0, -1.6, 3.0}, {4.0, 1.6, 3.2}, 31, {}});
    s.scene.boxes.push_back({{-4.0, -1.6, 3.0}, {-1.2, 1.6, 3.2}, 32, {}});
    s.start = {{0.0, 0.0, 0.0}, 0.0, 0.0, 0.5};
    s.max_steps = 160;
    return s;
}

Scenario lateral_intruder() {
    Scenario s;
    s.name = "lateral_intruder";
    add_room(s.scene, -4.0, 4.0, -1.0, 10.0, 40);
    // Box sliding right-to-left across the path; it stays in the right region
    // until it is close, then enters the center band.
    s.scene.boxes.push_back({{0.93, -0.35, 3.0}, {1.33, 0.35, 3.4}, 51, {-0.2, 0.0, 0.0}});
    s.start = {{0.0, 0.0, 0.0}, 0.0, 0.0, 0.5};
    s.max_steps = 120;
    return s;
}

Scenario scenario_by_name(std::string_view name) {
    if (name == "empty_corridor") return empty_corridor();
    if (name == "narrow_doorway") return narrow_doorway();
    if (name == "lateral_intruder") return lateral_intruder();
    throw std::invalid_argument("unknown scenario '" + std::string(name) +
                                "' (empty_corridor, narrow_doorway, lateral_intruder)");
}

std::vector<std::string> scenario_names() { return {"empty_corridor", "narrow_doorway", "lateral_intruder"}; }

}  // namespace stereo_avoid::sim
