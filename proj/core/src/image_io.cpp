#include "stereo_avoid/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "stereo_avoid/errors.hpp"

namespace stereo_avoid {
namespace {

struct NetpbmHeader {
    int width = 0;
    int height = 0;
    std::size_t raster_offset = 0;
};

NetpbmHeader parse_header(const std::string& bytes, const char* magic) {
    if (bytes.size() < 2 || bytes[0] != magic[0] || bytes[1] != magic[1])
        throw ParseError(std::string("not a ") + magic + " file");
    std::size_t pos = 2;
    auto next_int = [&]() -> long {
        for (;;) {
            while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
            if (pos < bytes.size() && bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
                continue;
            }
            break;
        }
        if (pos >= bytes.size() || !std::isdigit(static_cast<unsigned char>(bytes[pos])))
            throw ParseError(std::string(magic) + ": malformed header");
        long value = 0;
        while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
            value = value * 10 + (bytes[pos] - '0');
            if (value > 1'000'000) throw ParseError(std::string(magic) + ": header value too large");
            ++pos;
        }
        return value;
    };
    NetpbmHeader h;
    h.width = static_cast<int>(next_int());
    h.height = static_cast<int>(next_int());
    const long maxval = next_int();
    if (maxval != 255) throw ParseError(std::string(magic) + ": only maxval 255 is supported");
    if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos])))
        throw ParseError(std::string(magic) + ": missing raster separator");
    h.raster_offset = pos + 1;
    return h;
}

}  // namespace

GrayImage parse_pgm(const std::string& bytes) {
    const auto h = parse_header(bytes, "P5");
    const auto count = static_cast<std::size_t>(h.width) * h.height;
    if (bytes.size() - h.raster_offset < count) throw ParseError("P5: truncated raster");
    std::vector<std::uint8_t> pixels(bytes.begin() + static_cast<std::ptrdiff_t>(h.raster_offset),
                                     bytes.begin() + static_cast<std::ptrdiff_t>(h.raster_offset + count));
    return {h.width, h.height, std::move(pixels)};
}

std::string encode_pgm(const GrayImage& image) {
    std::string out = "P5\n" + std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n255\n";
    out.append(reinterpret_cast<const char*>(image.pixels().data()), image.pixels().size());
    return out;
}

RgbImage parse_ppm(const std::string& bytes) {
    const auto h = parse_header(bytes, "P6");
    RgbImage img(h.width, h.height);
    if (bytes.size() - h.raster_offset < img.rgb.size()) throw ParseError("P6: truncated raster");
    std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(h.raster_offset), img.rgb.size(), img.rgb.begin());
    return img;
}

std::string encode_ppm(const RgbImage& image) {
    std::string out = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
    out.append(reinterpret_cast<const char*>(image.rgb.data()), image.rgb.size());
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

GrayImage read_pgm(const std::filesystem::path& path) { return parse_pgm(read_file(path)); }
void write_pgm(const std::filesystem::path& path, const GrayImage& image) { write_file(path, encode_pgm(image)); }
void write_ppm(const std::filesystem::path& path, const RgbImage& image) { write_file(path, encode_ppm(image)); }

std::pair<GrayImage, GrayImage> split_side_by_side(const GrayImage& combined) {
    if (combined.width() % 2 != 0) throw std::invalid_argument("side-by-side frame must have even width");
    const int half = combined.width() / 2;
    GrayImage left(half, combined.height());
    GrayImage right(half, combined.height());
    for (int y = 0; y < combined.height(); ++y) {
        auto src = combined.row(y);
        std::copy_n(src.begin(), half, left.row(y).begin());
        std::copy_n(src.begin() + half, half, right.row(y).begin());
    }
    return {std::move(left), std::move(right)};
}

}  // namespace stereo_avoid
