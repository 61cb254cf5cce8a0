#include "stereo_avoid/disparity.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace stereo_avoid {

void MatchParams::validate() const {
    if (window_radius_px < 1) throw std::invalid_argument("match params: window_radius_px must be >= 1");
    if (max_disparity_px < 1) throw std::invalid_argument("match params: max_disparity_px must be >= 1");
    if (!(uniqueness_ratio >= 0.0 && uniqueness_ratio < 1.0))
        throw std::invalid_argument("match params: uniqueness_ratio must be in [0, 1)");
    if (lr_consistency_px && *lr_consistency_px < 0)
        throw std::invalid_argument("match params: lr_consistency_px must be >= 0");
}

std::uint32_t sad_cost(const GrayImage& left, const GrayImage& right, int x, int y, int d, int radius) {
    if (radius < 0 || y - radius < 0 || y + radius >= left.height() || y + radius >= right.height() ||
        x - radius < 0 || x + radius >= left.width() || x - d - radius < 0 || x - d + radius >= right.width())
        throw std::out_of_range("sad_cost: window at (" + std::to_string(x) + "," + std::to_string(y) +
                                ") with disparity " + std::to_string(d) + " leaves the image");
    std::uint32_t sum = 0;
    for (int j = -radius; j <= radius; ++j) {
        auto l = left.row(y + j);
        auto r = right.row(y + j);
        for (int i = -radius; i <= radius; ++i)
            sum += static_cast<std::uint32_t>(std::abs(int{l[x + i]} - int{r[x - d + i]}));
    }
    return sum;
}

PixelRect matchable_area(int width, int height, const MatchParams& p) noexcept {
    PixelRect r;
    r.x_lo = p.window_radius_px + p.max_disparity_px;
    r.x_hi = std::max(r.x_lo, width - p.window_radius_px);
    r.y_lo = p.window_radius_px;
    r.y_hi = std::max(r.y_lo, height - p.window_radius_px);
    return r;
}

unsigned resolve_workers(unsigned requested) noexcept {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

namespace {

constexpr std::uint32_t kNoCost = std::numeric_limits<std::uint32_t>::max();

// Incremental SAD cost volume for one scanline at a time. Column sums over the
// vertical window are slid down one row per advance(); horizontal sums come
// from per-disparity prefix sums. All arithmetic is exact integer, so the costs
// equal sad_cost() for every in-bounds (x, y, d).
class ScanlineMatcher {
public:
    ScanlineMatcher(const GrayImage& left, const GrayImage& right, const MatchParams& params)
        : left_(left),
          right_(right),
          params_(params),
          width_(left.width()),
          levels_(params.max_disparity_px + 1),
          colsum_(static_cast<std::size_t>(levels_) * width_, 0),
          prefix_(static_cast<std::size_t>(width_) + 1, 0),
          cost_(static_cast<std::size_t>(levels_) * width_, kNoCost),
          best_(width_),
          best_d_(width_),
          right_d_(width_) {}

    void start(int y) {
        std::fill(colsum_.begin(), colsum_.end(), 0u);
        const int r = params_.window_radius_px;
        for (int yy = y - r; yy <= y + r; ++yy) accumulate_row(yy, +1);
        y_ = y;
    }

    void advance() {
        const int r = params_.window_radius_px;
        accumulate_row(y_ + r + 1, +1);
        accumulate_row(y_ - r, -1);
        ++y_;
    }

    // Disparities for the current row into `out` (width entries).
    void match_row(std::span<float> out) {
        compute_costs();
        const int r = params_.window_radius_px;
        const int dmax = params_.max_disparity_px;
        const int x_lo = r + dmax;
        const int x_hi = width_ - r;
        std::fill(out.begin(), out.end(), kInvalid);
        if (x_lo >= x_hi) return;

        // Winner-take-all, smallest disparity on ties.
        std::fill(best_.begin(), best_.end(), kNoCost);
        std::fill(best_d_.begin(), best_d_.end(), 0);
        for (int d = 0; d <= dmax; ++d) {
            const std::uint32_t* c = cost_.data() + static_cast<std::size_t>(d) * width_;
            for (int x = x_lo; x < x_hi; ++x) {
                if (c[x] < best_[x]) {
                    best_[x] = c[x];
                    best_d_[x] = d;
                }
            }
        }

        std::vector<std::uint32_t>& second = scratch_;
        second.assign(width_, kNoCost);
        bool any_second = false;
        for (int d = 0; d <= dmax; ++d) {
            const std::uint32_t* c = cost_.data() + static_cast<std::size_t>(d) * width_;
            for (int x = x_lo; x < x_hi; ++x) {
                if (std::abs(d - best_d_[x]) > 1 && c[x] < second[x]) {
                    second[x] = c[x];
                    any_second = true;
                }
            }
        }

        const double keep = 1.0 - params_.uniqueness_ratio;
        for (int x = x_lo; x < x_hi; ++x) {
            if (any_second && second[x] != kNoCost &&
                static_cast<double>(best_[x]) >= keep * static_cast<double>(second[x]))
                continue;
            out[x] = static_cast<float>(best_d_[x]);
        }

        if (params_.lr_consistency_px) apply_lr_check(out);
    }

private:
    void accumulate_row(int yy, int sign) {
        auto l = left_.row(yy);
        auto rr = right_.row(yy);
        for (int d = 0; d < levels_; ++d) {
            std::uint32_t* cs = colsum_.data() + static_cast<std::size_t>(d) * width_;
            if (sign > 0) {
                for (int x = d; x < width_; ++x)
                    cs[x] += static_cast<std::uint32_t>(std::abs(int{l[x]} - int{rr[x - d]}));
            } else {
                for (int x = d; x < width_; ++x)
                    cs[x] -= static_cast<std::uint32_t>(std::abs(int{l[x]} - int{rr[x - d]}));
            }
        }
    }

    void compute_costs() {
        const int r = params_.window_radius_px;
        for (int d = 0; d < levels_; ++d) {
            const std::uint32_t* cs = colsum_.data() + static_cast<std::size_t>(d) * width_;
            std::uint32_t* c = cost_.data() + static_cast<std::size_t>(d) * width_;
            prefix_[0] = 0;
            for (int x = 0; x < width_; ++x) prefix_[x + 1] = prefix_[x] + (x >= d ? cs[x] : 0u);
            const int lo = d + r;
            const int hi = width_ - r;
            std::fill(c, c + std::min(lo, width_), kNoCost);
            for (int x = lo; x < hi; ++x) c[x] = prefix_[x + r + 1] - prefix_[x - r];
            for (int x = std::max(hi, lo); x < width_; ++x) c[x] = kNoCost;
        }
    }

    // Right-referenced WTA: cost_R(xr, d) = cost_L(xr + d, d).
    void apply_lr_check(std::span<float> out) {
        const int r = params_.window_radius_px;
        const int dmax = params_.max_disparity_px;
        const int xr_lo = r;
        const int xr_hi = width_ - r - dmax;
        std::fill(right_d_.begin(), right_d_.end(), -1);
        if (xr_lo < xr_hi) {
            std::vector<std::uint32_t>& best = scratch_;
            best.assign(width_, kNoCost);
            for (int d = 0; d <= dmax; ++d) {
                const std::uint32_t* c = cost_.data() + static_cast<std::size_t>(d) * width_;
                for (int xr = xr_lo; xr < xr_hi; ++xr) {
                    if (c[xr + d] < best[xr]) {
                        best[xr] = c[xr + d];
                        right_d_[xr] = d;
                    }
                }
            }
        }
        const int tol = *params_.lr_consistency_px;
        for (int x = 0; x < width_; ++x) {
            if (!is_valid(out[x])) continue;
            const int dl = static_cast<int>(out[x]);
            const int xr = x - dl;
            if (xr < 0 || right_d_[xr] < 0 || std::abs(dl - right_d_[xr]) > tol) out[x] = kInvalid;
        }
    }

    const GrayImage& left_;
    const GrayImage& right_;
    const MatchParams& params_;
    int width_;
    int levels_;
    int y_ = 0;
    std::vector<std::uint32_t> colsum_;
    std::vector<std::uint32_t> prefix_;
    std::vector<std::uint32_t> cost_;
    std::vector<std::uint32_t> best_;
    std::vector<int> best_d_;
    std::vector<int> right_d_;
    std::vector<std::uint32_t> scratch_;
};

void check_pair(const StereoPair& pair, const MatchParams& params) {
    params.validate();
    const int win = 2 * params.window_radius_px + 1;
    if (pair.width() < win || pair.height() < win)
        throw std::invalid_argument("block_match: image smaller than the matching window");
    if (params.max_disparity_px >= pair.width())
        throw std::invalid_argument("block_match: max_disparity_px must be < image width");
}

using RowSink = std::function<void(int y, std::span<const float> disparity_row, unsigned band)>;

// Splits rows into contiguous bands, one per worker, and streams each row's
// disparities to `sink`. Rows outside the vertical window range are all invalid.
void for_each_disparity_row(const StereoPair& pair, const MatchParams& params, unsigned bands,
                            const RowSink& sink) {
    const int h = pair.height();
    const int w = pair.width();
    const int r = params.window_radius_px;
    bands = std::max(1u, std::min<unsigned>(bands, static_cast<unsigned>(h)));

    auto run_band = [&](unsigned band) {
        const int y0 = static_cast<int>(static_cast<long>(h) * band / bands);
        const int y1 = static_cast<int>(static_cast<long>(h) * (band + 1) / bands);
        std::vector<float> row(static_cast<std::size_t>(w), kInvalid);
        ScanlineMatcher matcher(pair.left(), pair.right(), params);
        bool started = false;
        for (int y = y0; y < y1; ++y) {
            if (y < r || y >= h - r) {
                std::fill(row.begin(), row.end(), kInvalid);
            } else {
                if (!started) {
                    matcher.start(y);
                    started = true;
                } else {
                    matcher.advance();
                }
                matcher.match_row(row);
            }
            sink(y, row, band);
        }
    };

    if (bands == 1) {
        run_band(0);
        return;
    }
    std::vector<std::jthread> threads;
    threads.reserve(bands);
    for (unsigned b = 0; b < bands; ++b) threads.emplace_back(run_band, b);
}

}  // namespace

DisparityMap block_match(const StereoPair& pair, const MatchParams& params, unsigned workers) {
    check_pair(pair, params);
    DisparityMap out(pair.width(), pair.height());
    for_each_disparity_row(pair, params, resolve_workers(workers),
                           [&](int y, std::span<const float> row, unsigned) {
                               std::copy(row.begin(), row.end(), out.row(y).begin());
                           });
    return out;
}

DepthMap disparity_to_depth(const DisparityMap& disparity, const CameraRig& rig) {
    DepthMap out(disparity.width(), disparity.height());
    for (int y = 0; y < disparity.height(); ++y) {
        auto src = disparity.row(y);
        auto dst = out.row(y);
        for (int x = 0; x < disparity.width(); ++x) {
            const float d = src[x];
            dst[x] = (is_valid(d) && d > 0.0f) ? static_cast<float>(depth_from_disparity(d, rig)) : kInvalid;
        }
    }
    return out;
}

FusedResult fused_pipeline(const StereoPair& pair, const MatchParams& params, const RegionGrid& grid,
                           const DepthLUT& lut, unsigned workers) {
    check_pair(pair, params);
    grid.validate();
    if (grid.width_px != pair.width() || grid.height_px != pair.height())
        throw std::invalid_argument("fused_pipeline: grid does not match image dimensions");

    const unsigned bands = std::max(1u, std::min<unsigned>(resolve_workers(workers),
                                                           static_cast<unsigned>(pair.height())));
    const CameraRig& rig = pair.rig();
    FusedResult result{DepthMap(pair.width(), pair.height()), {}};

    std::vector<std::array<float, kRegionCount>> partial(bands);
    for (auto& p : partial) p.fill(std::numeric_limits<float>::infinity());

    std::vector<int> col_band(static_cast<std::size_t>(pair.width()));
    for (int x = 0; x < pair.width(); ++x) col_band[x] = x < grid.x_lo ? 0 : (x < grid.x_hi ? 1 : 2);

    for_each_disparity_row(pair, params, bands, [&](int y, std::span<const float> row, unsigned band) {
        const int row_band = y < grid.y_lo ? 0 : (y < grid.y_hi ? 1 : 2);
        auto& mins = partial[band];
        auto dst = result.depth.row(y);
        for (int x = 0; x < pair.width(); ++x) {
            const float d = row[x];
            if (!is_valid(d) || !(d > 0.0f)) {
                dst[x] = kInvalid;
                continue;
            }
            const float z = static_cast<float>(depth_from_disparity(d, rig));
            const float refined = static_cast<float>(lut.refine(z));
            dst[x] = refined;
            auto& m = mins[static_cast<int>(RegionGrid::region_of_bands(col_band[x], row_band))];
            m = std::min(m, refined);
        }
    });

    for (int i = 0; i < kRegionCount; ++i) {
        float m = std::numeric_limits<float>::infinity();
        for (const auto& p : partial) m = std::min(m, p[i]);
        result.regions.values[i] = std::isinf(m) ? kFarSentinelM : static_cast<double>(m);
    }
    return result;
}

FusedResult unfused_pipeline(const StereoPair& pair, const MatchParams& params, const RegionGrid& grid,
                             const DepthLUT& lut, unsigned workers) {
    const auto disparity = block_match(pair, params, workers);
    auto depth = refine_depth_map(disparity_to_depth(disparity, pair.rig()), lut);
    auto regions = region_min_depths(depth, grid);
    return {std::move(depth), regions};
}

}  // namespace stereo_avoid
