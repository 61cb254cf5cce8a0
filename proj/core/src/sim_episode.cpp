#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "stereo_avoid/errors.hpp"
#include "stereo_avoid/sim.hpp"

namespace stereo_avoid::sim {

void EpisodeConfig::validate() const {
    rig.validate();
    match.validate();
    grid.validate();
    controller.validate();
    if (grid.width_px != rig.width_px || grid.height_px != rig.height_px)
        throw std::invalid_argument("episode: grid does not match rig dimensions");
    if (!(dt > 0.0)) throw std::invalid_argument("episode: dt must be > 0");
    if (!(yaw_rate_gain >= 0.0) || !(pitch_rate_gain >= 0.0))
        throw std::invalid_argument("episode: rate gains must be >= 0");
    if (!(collision_radius_m > 0.0)) throw std::invalid_argument("episode: collision radius must be > 0");
    if (max_steps < 1) throw std::invalid_argument("episode: max_steps must be >= 1");
}

VehicleState step_vehicle(const VehicleState& state, const SteerCommand& cmd, const EpisodeConfig& cfg) noexcept {
    constexpr double kPitchLimit = std::numbers::pi / 3;
    VehicleState next = state;
    next.heading_yaw += cmd.yaw * cfg.yaw_rate_gain * cfg.dt;
    next.heading_pitch = std::clamp(state.heading_pitch + cmd.pitch * cfg.pitch_rate_gain * cfg.dt, -kPitchLimit,
                                    kPitchLimit);
    next.position = state.position + (state.speed * cfg.dt) * camera_pose(next).forward;
    return next;
}

double clearance(const Scene& scene, Vec3 p, double time_s) noexcept {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b0 : scene.boxes) {
        const Box b = b0.at(time_s);
        const double dx = std::max({b.min.x - p.x, 0.0, p.x - b.max.x});
        const double dy = std::max({b.min.y - p.y, 0.0, p.y - b.max.y});
        const double dz = std::max({b.min.z - p.z, 0.0, p.z - b.max.z});
        best = std::min(best, std::sqrt(dx * dx + dy * dy + dz * dz));
    }
    return best;
}

bool check_collision(const Scene& scene, Vec3 p, double radius_m, double time_s) noexcept {
    return clearance(scene, p, time_s) <= radius_m;
}

std::string_view to_string(EpisodeEnd e) noexcept {
    switch (e) {
        case EpisodeEnd::max_steps: return "max_steps";
        case EpisodeEnd::collision: return "collision";
        case EpisodeEnd::left_bounds: return "left_bounds";
    }
    return "unknown";
}

double TrajectoryLog::closest_approach_m() const noexcept {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : steps) best = std::min(best, s.clearance_m);
    return best;
}

namespace {
std::uint64_t step_seed(std::uint64_t seed, int step) noexcept {
    std::uint64_t x = seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(step) + 1;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}
}  // namespace

TrajectoryLog run_episode(const Scene& scene, const VehicleState& start, const EpisodeConfig& cfg,
                          const FrameObserver& observer) {
    scene.validate();
    start.validate();
    cfg.validate();
    if (check_collision(scene, start.position, cfg.collision_radius_m, 0.0))
        throw std::invalid_argument("episode: start state is already in collision");

    const AvoidanceController controller =
        cfg.custom_rules ? AvoidanceController(*cfg.custom_rules, cfg.controller) : AvoidanceController(cfg.controller);

    TrajectoryLog log;
    log.seed = cfg.seed;
    log.end = EpisodeEnd::max_steps;
    VehicleState state = start;
    for (int k = 0; k < cfg.max_steps; ++k) {
        const double t = k * cfg.dt;
        RenderOptions render;
        render.noise_stddev = cfg.noise_stddev;
        render.noise_seed = step_seed(cfg.seed, k);
        render.time_s = t;
        render.workers = cfg.workers;
        const StereoPair pair = render_stereo(scene, state, cfg.rig, render);
        const FusedResult fused = fused_pipeline(pair, cfg.match, cfg.grid, cfg.lut, cfg.workers);
        const SteerResult decision = controller.steer_detailed(fused.regions);

        TrajectoryStep step;
        step.time_s = t;
        step.state = state;
        step.command = decision.command;
        step.regions = fused.regions;
        step.active = decision.active;
        step.clearance_m = clearance(scene, state.position, t);
        step.collision = step.clearance_m <= cfg.collision_radius_m;
        log.steps.push_back(step);
        if (observer) observer(k, pair.left(), decision);

        if (step.collision) {
            log.end = EpisodeEnd::collision;
            break;
        }
        state = step_vehicle(state, decision.command, cfg);
        if (!scene.inside_bounds(state.position)) {
            log.end = EpisodeEnd::left_bounds;
            break;
        }
    }
    return log;
}

std::string trajectory_csv(const TrajectoryLog& log) {
    std::ostringstream out;
    out << "t,x,y,z,yaw,pitch,cmd_pitch,cmd_yaw";
    for (Region r : kAllRegions) out << ',' << region_name(r);
    out << ",collision\n";
    out.precision(17);
    for (const auto& s : log.steps) {
        out << s.time_s << ',' << s.state.position.x << ',' << s.state.position.y << ',' << s.state.position.z << ','
            << s.state.heading_yaw << ',' << s.state.heading_pitch << ',' << s.command.pitch << ','
            << s.command.yaw;
        for (double v : s.regions.values) out << ',' << v;
        out << ',' << (s.collision ? 1 : 0) << '\n';
    }
    return out.str();
}

std::vector<TrajectoryStep> parse_trajectory_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,x,y,z,yaw,pitch,cmd_pitch,cmd_yaw,", 0) != 0)
        throw ParseError("trajectory CSV: unexpected header");
    std::vector<TrajectoryStep> steps;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> f;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            const auto comma = std::min(line.find(',', pos), line.size());
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + comma, v);
            if (ec != std::errc{} || ptr != line.data() + comma)
                throw ParseError("trajectory CSV line " + std::to_string(line_no) + ": bad number");
            f.push_back(v);
            pos = comma + 1;
        }
        if (f.size() != 8 + kRegionCount + 1)
            throw ParseError("trajectory CSV line " + std::to_string(line_no) + ": wrong column count");
        TrajectoryStep s;
        s.time_s = f[0];
        s.state.position = {f[1], f[2], f[3]};
        s.state.heading_yaw = f[4];
        s.state.heading_pitch = f[5];
        s.command = {f[6], f[7]};
        for (int i = 0; i < kRegionCount; ++i) s.regions.values[i] = f[8 + i];
        s.collision = f[8 + kRegionCount] != 0.0;
        steps.push_back(s);
    }
    return steps;
}

namespace {
void draw_line(RgbImage& img, int x0, int y0, int x1, int y1, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
    const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    for (;;) {
        img.set(x0, y0, r, g, b);
        if (x0 == x1 && y0 == y1) break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}
}  // namespace

RgbImage debug_frame(const GrayImage& left, const RegionGrid& grid, const SteerCommand& cmd) {
    RgbImage img(left.width(), left.height());
    for (int y = 0; y < left.height(); ++y)
        for (int x = 0; x < left.width(); ++x) {
            const auto v = left.at(x, y);
            img.set(x, y, v, v, v);
        }
    for (int x : {grid.x_lo, grid.x_hi - 1}) draw_line(img, x, 0, x, left.height() - 1, 0, 200, 0);
    for (int y : {grid.y_lo, grid.y_hi - 1}) draw_line(img, 0, y, left.width() - 1, y, 0, 200, 0);

    const int cx = left.width() / 2, cy = left.height() / 2;
    const double len = std::min(left.width(), left.height()) / 3.0;
    const double ex = cx + cmd.yaw * len, ey = cy - cmd.pitch * len;
    const int x1 = static_cast<int>(std::lround(ex)), y1 = static_cast<int>(std::lround(ey));
    draw_line(img, cx, cy, x1, y1, 255, 0, 0);
    const double ang = std::atan2(ey - cy, ex - cx);
    if (cmd.magnitude() > 1e-6) {
        for (double side : {-0.5, 0.5}) {
            const double a = ang + std::numbers::pi + side;
            draw_line(img, x1, y1, static_cast<int>(std::lround(ex + 10 * std::cos(a))),
                      static_cast<int>(std::lround(ey + 10 * std::sin(a))), 255, 0, 0);
        }
    }
    return img;
}

}  // namespace stereo_avoid::sim
