#include "cntex/image.hpp"

#include "cntex/error.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace cntex {

namespace {

constexpr std::array<char, 4> kRawMagic{'T', 'X', 'R', '1'};
constexpr std::array<unsigned char, 8> kPngSignature{0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

std::uint32_t read_u32_le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void write_u32_le(std::ostream& out, std::uint32_t v) {
    const char bytes[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                           static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    out.write(bytes, 4);
}

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::UnreadableFile, "cannot open " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw Error(ErrorCode::UnreadableFile, "read failed for " + path.string());
    return bytes;
}

ImageTensor decode_raw(const std::vector<unsigned char>& bytes, const std::filesystem::path& path) {
    if (bytes.size() < 16) throw Error(ErrorCode::UnreadableFile, "truncated TXR1 header in " + path.string());
    const std::size_t height = read_u32_le(bytes.data() + 4);
    const std::size_t width = read_u32_le(bytes.data() + 8);
    const std::size_t bands = read_u32_le(bytes.data() + 12);
    if (height == 0 || width == 0 || bands == 0)
        throw Error(ErrorCode::UnsupportedFormat, "zero dimension in TXR1 header of " + path.string());
    const std::size_t payload = height * width * bands;
    if (bytes.size() - 16 < payload)
        throw Error(ErrorCode::UnreadableFile, "truncated TXR1 payload in " + path.string());
    return ImageTensor(height, width, bands, std::vector<std::uint8_t>(bytes.begin() + 16, bytes.begin() + 16 + payload));
}

ImageTensor decode_png(const std::vector<unsigned char>& bytes, const std::filesystem::path& path) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
        std::string msg = image.message;
        png_image_free(&image);
        throw Error(ErrorCode::UnreadableFile, path.string() + ": " + msg);
    }
    if (image.format & PNG_FORMAT_FLAG_LINEAR) {
        png_image_free(&image);
        throw Error(ErrorCode::UnsupportedFormat, "16-bit PNG not supported: " + path.string());
    }
    if (image.format & PNG_FORMAT_FLAG_ALPHA) {
        png_image_free(&image);
        throw Error(ErrorCode::UnsupportedFormat, "PNG with alpha channel not supported: " + path.string());
    }
    const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
    image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    const std::size_t bands = color ? 3 : 1;
    std::vector<std::uint8_t> data(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, data.data(), 0, nullptr)) {
        std::string msg = image.message;
        png_image_free(&image);
        throw Error(ErrorCode::UnreadableFile, path.string() + ": " + msg);
    }
    return ImageTensor(image.height, image.width, bands, std::move(data));
}

}  // namespace

Band::Band(std::size_t h, std::size_t w, std::vector<std::uint8_t> values)
    : height(h), width(w), pixels(std::move(values)) {
    if (pixels.size() != h * w) throw Error(ErrorCode::DimensionMismatch, "band data length != height*width");
}

ScalarMap::ScalarMap(std::size_t h, std::size_t w, std::vector<double> v) : height(h), width(w), values(std::move(v)) {
    if (values.size() != h * w) throw Error(ErrorCode::DimensionMismatch, "map data length != height*width");
}

ImageTensor::ImageTensor(std::size_t height, std::size_t width, std::size_t bands)
    : height_(height), width_(width), bands_(bands), data_(height * width * bands, 0) {}

ImageTensor::ImageTensor(std::size_t height, std::size_t width, std::size_t bands, std::vector<std::uint8_t> data)
    : height_(height), width_(width), bands_(bands), data_(std::move(data)) {
    if (data_.size() != height * width * bands)
        throw Error(ErrorCode::DimensionMismatch, "image data length != M*N*B");
}

ImageTensor ImageTensor::from_bands(std::span<const Band> bands) {
    if (bands.empty()) throw Error(ErrorCode::EmptyImage, "no bands given");
    const auto h = bands.front().height;
    const auto w = bands.front().width;
    ImageTensor out(h, w, bands.size());
    for (std::size_t b = 0; b < bands.size(); ++b) {
        if (bands[b].height != h || bands[b].width != w)
            throw Error(ErrorCode::BandMismatch, "bands differ in size");
        for (std::size_t i = 0; i < h * w; ++i) out.data_[i * bands.size() + b] = bands[b].pixels[i];
    }
    return out;
}

Band ImageTensor::band(std::size_t b) const {
    Band out(height_, width_);
    for (std::size_t i = 0; i < height_ * width_; ++i) out.pixels[i] = data_[i * bands_ + b];
    return out;
}

ImageTensor load_image(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    if (bytes.size() >= 4 && std::equal(kRawMagic.begin(), kRawMagic.end(), bytes.begin()))
        return decode_raw(bytes, path);
    if (bytes.size() >= kPngSignature.size() && std::equal(kPngSignature.begin(), kPngSignature.end(), bytes.begin()))
        return decode_png(bytes, path);
    if (bytes.size() < kPngSignature.size())
        throw Error(ErrorCode::UnreadableFile, "file too short to identify: " + path.string());
    throw Error(ErrorCode::UnsupportedFormat, "unknown image signature: " + path.string());
}

void save_png(const std::filesystem::path& path, const ImageTensor& img) {
    if (img.bands() != 1 && img.bands() != 3)
        throw Error(ErrorCode::UnsupportedFormat, "PNG output needs 1 or 3 bands");
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width());
    image.height = static_cast<png_uint_32>(img.height());
    image.format = img.bands() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&image, path.c_str(), 0, img.data().data(), 0, nullptr)) {
        std::string msg = image.message;
        png_image_free(&image);
        throw Error(ErrorCode::UnreadableFile, "cannot write " + path.string() + ": " + msg);
    }
}

void save_raw(const std::filesystem::path& path, const ImageTensor& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::UnreadableFile, "cannot open " + path.string() + " for writing");
    out.write(kRawMagic.data(), kRawMagic.size());
    write_u32_le(out, static_cast<std::uint32_t>(img.height()));
    write_u32_le(out, static_cast<std::uint32_t>(img.width()));
    write_u32_le(out, static_cast<std::uint32_t>(img.bands()));
    out.write(reinterpret_cast<const char*>(img.data().data()), static_cast<std::streamsize>(img.data().size()));
    if (!out) throw Error(ErrorCode::UnreadableFile, "write failed for " + path.string());
}

ImageTensor resize_bilinear(const ImageTensor& img, std::size_t target_height, std::size_t target_width) {
    if (target_height < 2 || target_width < 2)
        throw Error(ErrorCode::DegenerateTarget, "resize target must be at least 2x2");
    if (img.height() == 0 || img.width() == 0) throw Error(ErrorCode::EmptyImage, "cannot resize an empty image");

    struct Tap {
        std::size_t lo, hi;
        double frac;
    };
    auto taps = [](std::size_t src, std::size_t dst) {
        std::vector<Tap> out(dst);
        const double scale = static_cast<double>(src) / static_cast<double>(dst);
        const double max_coord = static_cast<double>(src - 1);
        for (std::size_t i = 0; i < dst; ++i) {
            double c = (static_cast<double>(i) + 0.5) * scale - 0.5;
            c = std::clamp(c, 0.0, max_coord);
            const auto lo = static_cast<std::size_t>(std::floor(c));
            out[i] = {lo, std::min(lo + 1, src - 1), c - static_cast<double>(lo)};
        }
        return out;
    };
    const auto ys = taps(img.height(), target_height);
    const auto xs = taps(img.width(), target_width);

    ImageTensor out(target_height, target_width, img.bands());
    for (std::size_t y = 0; y < target_height; ++y) {
        const auto& ty = ys[y];
        for (std::size_t x = 0; x < target_width; ++x) {
            const auto& tx = xs[x];
            for (std::size_t b = 0; b < img.bands(); ++b) {
                const double top = img.at(ty.lo, tx.lo, b) * (1.0 - tx.frac) + img.at(ty.lo, tx.hi, b) * tx.frac;
                const double bottom = img.at(ty.hi, tx.lo, b) * (1.0 - tx.frac) + img.at(ty.hi, tx.hi, b) * tx.frac;
                const double v = top * (1.0 - ty.frac) + bottom * ty.frac;
                out.at(y, x, b) = static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
            }
        }
    }
    return out;
}

Band quantize_map(const ScalarMap& map) {
    if (!std::all_of(map.values.begin(), map.values.end(), [](double v) { return std::isfinite(v); }))
        throw Error(ErrorCode::NonFiniteValue, "feature map contains NaN or Inf");
    Band out(map.height, map.width);
    if (map.values.empty()) return out;
    const auto [lo_it, hi_it] = std::minmax_element(map.values.begin(), map.values.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    if (hi == lo) return out;
    const double range = hi - lo;
    for (std::size_t i = 0; i < map.values.size(); ++i) {
        const double q = std::floor(255.0 * (map.values[i] - lo) / range + 0.5);
        out.pixels[i] = static_cast<std::uint8_t>(std::clamp(q, 0.0, 255.0));
    }
    return out;
}

}  // namespace cntex
