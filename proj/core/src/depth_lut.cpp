#include "stereo_avoid/depth_lut.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "stereo_avoid/errors.hpp"
#include "stereo_avoid/image_io.hpp"

namespace stereo_avoid {

DepthLUT DepthLUT::build(std::vector<LutEntry> samples) {
    if (samples.size() < 2) throw std::invalid_argument("depth LUT needs at least two samples");
    for (const auto& s : samples) {
        if (!(s.computed_m > 0.0) || !(s.true_m > 0.0) || !std::isfinite(s.computed_m) || !std::isfinite(s.true_m))
            throw std::invalid_argument("depth LUT samples must be finite and > 0");
    }
    std::sort(samples.begin(), samples.end(),
              [](const LutEntry& a, const LutEntry& b) { return a.computed_m < b.computed_m; });
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (samples[i].computed_m == samples[i - 1].computed_m)
            throw std::invalid_argument("depth LUT has duplicate computed depth " +
                                        std::to_string(samples[i].computed_m));
        if (!(samples[i].true_m > samples[i - 1].true_m))
            throw std::invalid_argument("depth LUT true depth is not increasing at computed depth " +
                                        std::to_string(samples[i].computed_m));
    }
    DepthLUT lut;
    lut.entries_ = std::move(samples);
    return lut;
}

double DepthLUT::refine(double computed_m) const {
    if (!(computed_m > 0.0)) throw InvalidDepthError("refine: computed depth must be > 0");
    if (entries_.empty()) return computed_m;
    if (computed_m <= entries_.front().computed_m) return entries_.front().true_m;
    if (computed_m >= entries_.back().computed_m) return entries_.back().true_m;
    const auto hi = std::upper_bound(entries_.begin(), entries_.end(), computed_m,
                                     [](double v, const LutEntry& e) { return v < e.computed_m; });
    const auto lo = hi - 1;
    const double t = (computed_m - lo->computed_m) / (hi->computed_m - lo->computed_m);
    return lo->true_m + t * (hi->true_m - lo->true_m);
}

DepthMap refine_depth_map(const DepthMap& depth, const DepthLUT& lut) {
    DepthMap out(depth.width(), depth.height());
    for (int y = 0; y < depth.height(); ++y) {
        auto src = depth.row(y);
        auto dst = out.row(y);
        for (int x = 0; x < depth.width(); ++x)
            dst[x] = is_valid(src[x]) ? static_cast<float>(lut.refine(src[x])) : kInvalid;
    }
    return out;
}

namespace {

double parse_double(std::string_view field, int line_no) {
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
        field.remove_suffix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError("LUT CSV line " + std::to_string(line_no) + ": not a number: '" + std::string(field) + "'");
    return v;
}

}  // namespace

DepthLUT parse_lut_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    std::vector<LutEntry> samples;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != "computed_m,true_m") throw ParseError("LUT CSV: expected header 'computed_m,true_m'");
            header_seen = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw ParseError("LUT CSV line " + std::to_string(line_no) + ": expected two fields");
        const std::string_view sv(line);
        samples.push_back({parse_double(sv.substr(0, comma), line_no), parse_double(sv.substr(comma + 1), line_no)});
    }
    if (!header_seen) throw ParseError("LUT CSV: empty file");
    return DepthLUT::build(std::move(samples));
}

std::string encode_lut_csv(const DepthLUT& lut) {
    // Shortest representation that parses back to the same double.
    std::string out = "computed_m,true_m\n";
    char buf[64];
    for (const auto& e : lut.entries()) {
        auto r = std::to_chars(buf, buf + sizeof buf, e.computed_m);
        *r.ptr++ = ',';
        r = std::to_chars(r.ptr, buf + sizeof buf, e.true_m);
        out.append(buf, r.ptr);
        out.push_back('\n');
    }
    return out;
}

DepthLUT load_lut_csv(const std::filesystem::path& path) { return parse_lut_csv(read_file(path)); }

}  // namespace stereo_avoid
