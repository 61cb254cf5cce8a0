#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "stereo_avoid/sim.hpp"

namespace stereo_avoid::sim {

void Box::validate() const {
    if (!(max.x > min.x && max.y > min.y && max.z > min.z))
        throw std::invalid_argument("box must have positive extent on every axis");
}

Box Box::at(double time_s) const noexcept {
    if (velocity == Vec3{}) return *this;
    Box b = *this;
    const Vec3 shift = time_s * velocity;
    b.min = min + shift;
    b.max = max + shift;
    return b;
}

void Scene::validate() const {
    for (const auto& b : boxes) b.validate();
    if (!(bounds_max.x > bounds_min.x && bounds_max.y > bounds_min.y && bounds_max.z > bounds_min.z))
        throw std::invalid_argument("scene bounds must have positive extent");
}

bool Scene::inside_bounds(Vec3 p) const noexcept {
    return p.x >= bounds_min.x && p.x <= bounds_max.x && p.y >= bounds_min.y && p.y <= bounds_max.y &&
           p.z >= bounds_min.z && p.z <= bounds_max.z;
}

void VehicleState::validate() const {
    if (!(speed >= 0.0)) throw std::invalid_argument("vehicle speed must be >= 0");
    if (!(std::abs(heading_pitch) < std::numbers::pi / 2))
        throw std::invalid_argument("vehicle heading pitch must be within (-pi/2, pi/2)");
}

CameraPose camera_pose(const VehicleState& s) noexcept {
    const double cy = std::cos(s.heading_yaw), sy = std::sin(s.heading_yaw);
    const double cp = std::cos(s.heading_pitch), sp = std::sin(s.heading_pitch);
    CameraPose pose;
    pose.origin = s.position;
    pose.forward = {cp * sy, sp, cp * cy};
    pose.right = {cy, 0.0, -sy};
    pose.up = {-sp * sy, cp, -sp * cy};
    return pose;
}

CameraPose right_camera(const CameraPose& left, const CameraRig& rig) noexcept {
    CameraPose r = left;
    r.origin = left.origin + rig.baseline_m * left.right;
    return r;
}

std::optional<PixelHomog> project(const CameraPose& pose, const CameraRig& rig, Vec3 point) noexcept {
    const Vec3 rel = point - pose.origin;
    const double z = rel.dot(pose.forward);
    if (!(z > 0.0)) return std::nullopt;
    const double u = rig.principal_x_px + rig.focal_px * rel.dot(pose.right) / z;
    const double v = rig.principal_y_px - rig.focal_px * rel.dot(pose.up) / z;
    return PixelHomog{u, v, 1.0};
}

namespace {

// Slab test against boxes already positioned for the frame.
std::optional<RayHit> nearest_hit(const std::vector<Box>& boxes, Vec3 origin, Vec3 dir) noexcept {
    constexpr double kEps = 1e-9;
    const double o[3] = {origin.x, origin.y, origin.z};
    const double d[3] = {dir.x, dir.y, dir.z};
    double inv[3];
    for (int a = 0; a < 3; ++a) inv[a] = d[a] != 0.0 ? 1.0 / d[a] : 0.0;
    RayHit best{std::numeric_limits<double>::infinity(), -1, -1};
    for (int bi = 0; bi < static_cast<int>(boxes.size()); ++bi) {
        const Box& box = boxes[bi];
        const double lo[3] = {box.min.x, box.min.y, box.min.z};
        const double hi[3] = {box.max.x, box.max.y, box.max.z};
        double t_enter = -std::numeric_limits<double>::infinity();
        double t_exit = std::numeric_limits<double>::infinity();
        int axis = -1;
        bool miss = false;
        for (int a = 0; a < 3; ++a) {
            if (d[a] == 0.0) {
                if (o[a] < lo[a] || o[a] > hi[a]) {
                    miss = true;
                    break;
                }
                continue;
            }
            double t0 = (lo[a] - o[a]) * inv[a];
            double t1 = (hi[a] - o[a]) * inv[a];
            if (t0 > t1) std::swap(t0, t1);
            if (t0 > t_enter) {
                t_enter = t0;
                axis = a;
            }
            t_exit = std::min(t_exit, t1);
            if (t_enter > t_exit || t_enter >= best.t) {
                miss = true;
                break;
            }
        }
        if (miss || axis < 0 || t_enter <= kEps) continue;
        best = RayHit{t_enter, bi, axis};
    }
    if (best.box < 0) return std::nullopt;
    return best;
}

std::vector<Box> positioned(const Scene& scene, double time_s) {
    std::vector<Box> boxes = scene.boxes;
    for (auto& b : boxes) b = b.at(time_s);
    return boxes;
}

}  // namespace

std::optional<RayHit> cast_ray(const Scene& scene, Vec3 origin, Vec3 dir, double time_s) noexcept {
    if (time_s == 0.0) return nearest_hit(scene.boxes, origin, dir);
    std::vector<Box> boxes;
    try {
        boxes = positioned(scene, time_s);
    } catch (...) {
        return std::nullopt;
    }
    return nearest_hit(boxes, origin, dir);
}

namespace {

std::uint64_t splitmix(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

double lattice(std::int64_t ix, std::int64_t iy, std::uint64_t salt) noexcept {
    std::uint64_t h = salt ^ (static_cast<std::uint64_t>(ix) * 0x9E3779B97F4A7C15ull) ^
                      (static_cast<std::uint64_t>(iy) * 0xC2B2AE3D27D4EB4Full);
    h = (h ^ (h >> 33)) * 0xFF51AFD7ED558CCDull;
    h = (h ^ (h >> 33)) * 0xC4CEB9FE1A85EC53ull;
    h ^= h >> 33;
    return static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);
}

double value_noise(double u, double v, double cell, std::uint64_t salt) noexcept {
    const double gu = u / cell, gv = v / cell;
    const double fu = std::floor(gu), fv = std::floor(gv);
    const auto iu = static_cast<std::int64_t>(fu), iv = static_cast<std::int64_t>(fv);
    double tu = gu - fu, tv = gv - fv;
    tu = tu * tu * (3.0 - 2.0 * tu);
    tv = tv * tv * (3.0 - 2.0 * tv);
    const double a = lattice(iu, iv, salt), b = lattice(iu + 1, iv, salt);
    const double c = lattice(iu, iv + 1, salt), d = lattice(iu + 1, iv + 1, salt);
    const double top = a + (b - a) * tu;
    return top + ((c + (d - c) * tu) - top) * tv;
}

struct Octave {
    double cell_m;
    double weight;
};
constexpr Octave kOctaves[] = {{0.4, 0.20}, {0.12, 0.25}, {0.04, 0.25}, {0.012, 0.20}, {0.004, 0.15}};

// Deterministic surface texture in [0, 255] for a point on a box face.
// Octaves finer than about a pixel footprint fade out to limit aliasing.
double surface_intensity(const Box& box, int axis, Vec3 hit, double footprint_m) noexcept {
    const Vec3 local = hit - box.min;
    const int ua = (axis + 1) % 3, va = (axis + 2) % 3;
    const double u = local[ua], v = local[va];
    const std::uint64_t salt = splitmix(box.seed * 3 + static_cast<std::uint64_t>(axis));
    double n = 0.0, w = 0.0;
    std::uint64_t k = 0;
    for (const auto& o : kOctaves) {
        const double fade = k == 0 ? 1.0 : std::clamp(o.cell_m / footprint_m - 0.5, 0.0, 1.0);
        if (fade > 0.0) n += fade * o.weight * (value_noise(u, v, o.cell_m, salt + k) - 0.5);
        w += o.weight;
        ++k;
    }
    const double face_offset = static_cast<double>(splitmix(salt + 7) % 41) - 20.0;
    return std::clamp(128.0 + 2.6 * 190.0 * n / w + face_offset, 0.0, 255.0);
}

// Sky at infinity: texture depends on view direction only, so both cameras
// see it at zero disparity.
double sky_intensity(Vec3 dir, double base) noexcept {
    const double az = std::atan2(dir.x, dir.z);
    const double el = std::atan2(dir.y, std::hypot(dir.x, dir.z));
    const double n = 0.6 * value_noise(az, el, 0.008, 0x5C1E5C1Eull) + 0.4 * value_noise(az, el, 0.003, 0x5C1E5C1Full);
    return std::clamp(base + 150.0 * (n - 0.5), 0.0, 255.0);
}

template <class RowFn>
void parallel_rows(int height, unsigned workers, RowFn&& fn) {
    const unsigned bands = std::max(1u, std::min<unsigned>(resolve_workers(workers), static_cast<unsigned>(height)));
    auto run = [&](unsigned b) {
        const int y0 = static_cast<int>(static_cast<long>(height) * b / bands);
        const int y1 = static_cast<int>(static_cast<long>(height) * (b + 1) / bands);
        for (int y = y0; y < y1; ++y) fn(y);
    };
    if (bands == 1) {
        run(0);
        return;
    }
    std::vector<std::jthread> threads;
    for (unsigned b = 0; b < bands; ++b) threads.emplace_back(run, b);
}

Vec3 pixel_ray(const CameraPose& pose, const CameraRig& rig, double u, double v) noexcept {
    const double a = (u - rig.principal_x_px) / rig.focal_px;
    const double b = (v - rig.principal_y_px) / rig.focal_px;
    return pose.forward + a * pose.right - b * pose.up;
}

GrayImage render_view(const Scene& scene, const CameraPose& pose, const CameraRig& rig, const RenderOptions& opt,
                      std::uint64_t camera_salt) {
    GrayImage img(rig.width_px, rig.height_px);
    const int ss = std::max(1, opt.supersample);
    const std::vector<Box> boxes = positioned(scene, opt.time_s);
    parallel_rows(rig.height_px, opt.workers, [&](int y) {
        std::mt19937_64 rng(splitmix(opt.noise_seed ^ splitmix(camera_salt * 0x10000 + static_cast<std::uint64_t>(y))));
        std::normal_distribution<double> noise(0.0, opt.noise_stddev > 0 ? opt.noise_stddev : 1.0);
        auto row = img.row(y);
        for (int x = 0; x < rig.width_px; ++x) {
            double acc = 0.0;
            for (int sy = 0; sy < ss; ++sy) {
                for (int sx = 0; sx < ss; ++sx) {
                    const double u = x + (sx + 0.5) / ss - 0.5;
                    const double v = y + (sy + 0.5) / ss - 0.5;
                    const Vec3 dir = pixel_ray(pose, rig, u, v);
                    const auto hit = nearest_hit(boxes, pose.origin, dir);
                    if (!hit) {
                        acc += sky_intensity(dir, opt.sky_intensity);
                        continue;
                    }
                    const double slant = std::max(std::abs(dir[hit->axis]) / dir.norm(), 0.05);
                    const double footprint = hit->t * dir.norm() / (rig.focal_px * slant);
                    acc += surface_intensity(boxes[hit->box], hit->axis, pose.origin + hit->t * dir, footprint);
                }
            }
            double value = acc / (ss * ss);
            if (opt.noise_stddev > 0) value += noise(rng);
            row[x] = static_cast<std::uint8_t>(std::clamp(std::lround(value), 0l, 255l));
        }
    });
    return img;
}

}  // namespace

StereoPair render_stereo(const Scene& scene, const VehicleState& state, const CameraRig& rig,
                         const RenderOptions& options) {
    rig.validate();
    const CameraPose left = camera_pose(state);
    const CameraPose right = right_camera(left, rig);
    auto l = render_view(scene, left, rig, options, 1);
    auto r = render_view(scene, right, rig, options, 2);
    return {std::move(l), std::move(r), rig};
}

DepthMap ground_truth_depth(const Scene& scene, const VehicleState& state, const CameraRig& rig, double time_s) {
    rig.validate();
    const CameraPose pose = camera_pose(state);
    const std::vector<Box> boxes = positioned(scene, time_s);
    DepthMap depth(rig.width_px, rig.height_px);
    for (int y = 0; y < rig.height_px; ++y) {
        auto row = depth.row(y);
        for (int x = 0; x < rig.width_px; ++x) {
            const auto hit = nearest_hit(boxes, pose.origin, pixel_ray(pose, rig, x, y));
            row[x] = hit ? static_cast<float>(hit->t) : kInvalid;
        }
    }
    return depth;
}

}  // namespace stereo_avoid::sim
