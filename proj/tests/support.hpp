#pragma once

// Reference implementations written straight from the definitions. They share
// no code with the library beyond its data types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "stereo_avoid/camera.hpp"
#include "stereo_avoid/disparity.hpp"
#include "stereo_avoid/fuzzy.hpp"
#include "stereo_avoid/maps.hpp"
#include "stereo_avoid/regions.hpp"
#include "stereo_avoid/sim.hpp"

namespace testsupport {

using namespace stereo_avoid;

inline GrayImage random_image(int w, int h, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> u(0, 255);
    GrayImage img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) img.at(x, y) = static_cast<std::uint8_t>(u(rng));
    return img;
}

/// Right view = left view shifted `shift` px to the left; the uncovered strip is fresh noise.
inline StereoPair shifted_pair(int w, int h, int shift, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const GrayImage left = random_image(w, h, rng);
    GrayImage right = random_image(w, h, rng);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x + shift < w; ++x) right.at(x, y) = left.at(x + shift, y);
    CameraRig rig;
    rig.width_px = w;
    rig.height_px = h;
    rig.principal_x_px = w / 2.0;
    rig.principal_y_px = h / 2.0;
    return {left, right, rig};
}

inline CameraRig small_rig(int w, int h) {
    CameraRig rig;
    rig.width_px = w;
    rig.height_px = h;
    rig.principal_x_px = w / 2.0;
    rig.principal_y_px = h / 2.0;
    return rig;
}

inline long naive_sad(const GrayImage& l, const GrayImage& r, int x, int y, int d, int rad) {
    long s = 0;
    for (int j = -rad; j <= rad; ++j)
        for (int i = -rad; i <= rad; ++i) s += std::labs(long{l.at(x + i, y + j)} - long{r.at(x - d + i, y + j)});
    return s;
}

/// Exhaustive winner-take-all with the uniqueness and left-right rules.
inline DisparityMap naive_block_match(const StereoPair& pair, const MatchParams& p) {
    const GrayImage& L = pair.left();
    const GrayImage& R = pair.right();
    const int w = L.width(), h = L.height(), rad = p.window_radius_px, dmax = p.max_disparity_px;
    DisparityMap out(w, h);
    for (int y = rad; y < h - rad; ++y) {
        std::vector<int> right_d(static_cast<std::size_t>(w), -1);
        if (p.lr_consistency_px) {
            for (int xr = rad; xr < w - rad - dmax; ++xr) {
                long best = std::numeric_limits<long>::max();
                for (int d = 0; d <= dmax; ++d) {
                    const long c = naive_sad(L, R, xr + d, y, d, rad);
                    if (c < best) {
                        best = c;
                        right_d[xr] = d;
                    }
                }
            }
        }
        for (int x = rad + dmax; x < w - rad; ++x) {
            std::vector<long> cost(static_cast<std::size_t>(dmax) + 1);
            for (int d = 0; d <= dmax; ++d) cost[d] = naive_sad(L, R, x, y, d, rad);
            int bd = 0;
            for (int d = 1; d <= dmax; ++d)
                if (cost[d] < cost[bd]) bd = d;
            long second = -1;
            for (int d = 0; d <= dmax; ++d)
                if (std::abs(d - bd) > 1 && (second < 0 || cost[d] < second)) second = cost[d];
            if (second >= 0 && static_cast<double>(cost[bd]) >= (1.0 - p.uniqueness_ratio) * static_cast<double>(second))
                continue;
            if (p.lr_consistency_px) {
                const int xr = x - bd;
                if (right_d[xr] < 0 || std::abs(bd - right_d[xr]) > *p.lr_consistency_px) continue;
            }
            out.at(x, y) = static_cast<float>(bd);
        }
    }
    return out;
}

/// Per-pixel scan; every pixel asks which rectangle holds it.
inline RegionDepths brute_region_mins(const DepthMap& depth, const RegionGrid& g) {
    RegionDepths out = RegionDepths::filled(kFarSentinelM);
    std::array<bool, kRegionCount> seen{};
    for (int y = 0; y < depth.height(); ++y) {
        for (int x = 0; x < depth.width(); ++x) {
            const float v = depth.at(x, y);
            if (std::isnan(v)) continue;
            for (Region r : kAllRegions) {
                if (!g.rect(r).contains(x, y)) continue;
                const auto i = static_cast<std::size_t>(r);
                out.values[i] = seen[i] ? std::min(out.values[i], static_cast<double>(v)) : static_cast<double>(v);
                seen[i] = true;
            }
        }
    }
    return out;
}

inline double trap(double a, double b, double c, double d, double x) {
    if (x < a || x > d) return 0.0;
    if (x < b) return (x - a) / (b - a);
    if (x <= c) return 1.0;
    return (d - x) / (d - c);
}

/// Clipped mixture: max_k min(strength_k, mf_k(x)).
struct Activation {
    std::vector<std::array<double, 4>> mfs;
    std::vector<double> strengths;

    double operator()(double x) const {
        double m = 0.0;
        for (std::size_t k = 0; k < mfs.size(); ++k)
            m = std::max(m, std::min(strengths[k], trap(mfs[k][0], mfs[k][1], mfs[k][2], mfs[k][3], x)));
        return m;
    }
};

/// Trapezoid-rule centroid on n evenly spaced points.
template <class F>
double dense_centroid(const F& f, double lo, double hi, int n) {
    const double h = (hi - lo) / (n - 1);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = lo + h * i;
        const double wgt = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        num += wgt * x * f(x);
        den += wgt * f(x);
    }
    return num / den;
}

/// Mamdani inference with min AND, clipping and max aggregation, directly on
/// the q sampled positions. Returns the centroid per output (NaN when inactive).
struct MiniRule {
    std::vector<std::pair<std::string, std::array<double, 4>>> antecedent;  // input, mf
    std::vector<std::pair<std::string, std::array<double, 4>>> consequent;  // output, mf
};

inline std::map<std::string, double> mini_mamdani(const std::vector<MiniRule>& rules,
                                                  const std::map<std::string, double>& in, int q) {
    std::map<std::string, std::vector<double>> agg;
    for (const auto& rule : rules) {
        double s = 1.0;
        for (const auto& [var, mf] : rule.antecedent) s = std::min(s, trap(mf[0], mf[1], mf[2], mf[3], in.at(var)));
        for (const auto& [var, mf] : rule.consequent) {
            auto& v = agg[var];
            v.resize(static_cast<std::size_t>(q), 0.0);
            for (int j = 0; j < q; ++j) {
                const double x = -1.0 + 2.0 * j / (q - 1);
                v[j] = std::max(v[j], std::min(s, trap(mf[0], mf[1], mf[2], mf[3], x)));
            }
        }
    }
    std::map<std::string, double> out;
    for (const auto& [var, v] : agg) {
        double num = 0.0, den = 0.0;
        for (int j = 0; j < q; ++j) {
            const double x = -1.0 + 2.0 * j / (q - 1);
            num += x * v[j];
            den += v[j];
        }
        out[var] = den > 0.0 ? num / den : std::nan("");
    }
    return out;
}

/// Primary rule base restated with explicit shapes, corrected variant.
inline std::vector<MiniRule> corrected_rules_reference() {
    const std::array<double, 4> near{0.0, 0.0, 0.25, 0.5}, far{0.5, 0.75, 1.0, 1.0};
    const std::array<double, 4> neg{-1.0, -1.0, -0.5, 0.0}, zero{-0.5, 0.0, 0.0, 0.5}, pos{0.0, 0.5, 1.0, 1.0};
    return {
        {{{"center", far}}, {{"pitch", zero}, {"yaw", zero}}},
        {{{"center", near}, {"up", near}, {"down", far}}, {{"pitch", neg}}},
        {{{"center", near}, {"down", near}, {"up", far}}, {{"pitch", pos}}},
        {{{"center", near}, {"right", near}, {"left", far}}, {{"yaw", neg}}},
        {{{"center", near}, {"left", near}, {"right", far}}, {{"yaw", pos}}},
        {{{"center", near}, {"left", near}}, {{"yaw", pos}}},
        {{{"center", near}, {"down", near}}, {{"pitch", pos}}},
        {{{"center", near}, {"left", far}, {"right", far}}, {{"yaw", pos}}},
        {{{"center", near}, {"up", far}, {"down", far}}, {{"pitch", pos}}},
    };
}

inline RegionDepths depths_of(double c, double u, double d, double l, double r, double ul = 9, double ur = 9,
                              double dl = 9, double dr = 9) {
    RegionDepths out;
    out[Region::center] = c;
    out[Region::up] = u;
    out[Region::down] = d;
    out[Region::left] = l;
    out[Region::right] = r;
    out[Region::up_left] = ul;
    out[Region::up_right] = ur;
    out[Region::down_left] = dl;
    out[Region::down_right] = dr;
    return out;
}

/// Scene with a single frontal wall filling the view at depth z.
inline sim::Scene wall_scene(double z, std::uint64_t seed = 3) {
    sim::Scene s;
    s.boxes.push_back({{-8.0, -8.0, z}, {8.0, 8.0, z + 0.2}, seed, {}});
    return s;
}

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Median refined depth over the valid pixels of a rectangle.
inline double median_depth(const DepthMap& depth, const PixelRect& r) {
    std::vector<double> v;
    for (int y = r.y_lo; y < r.y_hi; ++y)
        for (int x = r.x_lo; x < r.x_hi; ++x)
            if (!std::isnan(depth.at(x, y))) v.push_back(depth.at(x, y));
    return v.empty() ? std::nan("") : median(v);
}

/// First step whose ground-truth view puts box `box` inside the center band.
inline int gt_center_entry(const sim::Scene& scene, const sim::TrajectoryLog& log, const CameraRig& rig,
                           const RegionGrid& grid, int box) {
    for (std::size_t k = 0; k < log.steps.size(); ++k) {
        const auto& st = log.steps[k];
        const auto pose = sim::camera_pose(st.state);
        for (int y = grid.y_lo; y < grid.y_hi; ++y) {
            for (int x = grid.x_lo; x < grid.x_hi; ++x) {
                const double u = (x - rig.principal_x_px) / rig.focal_px;
                const double v = (y - rig.principal_y_px) / rig.focal_px;
                const sim::Vec3 dir = pose.forward + u * pose.right - v * pose.up;
                const auto hit = sim::cast_ray(scene, pose.origin, dir, st.time_s);
                if (hit && hit->box == box) return static_cast<int>(k);
            }
        }
    }
    return -1;
}

}  // namespace testsupport
