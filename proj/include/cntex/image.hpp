#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace cntex {

/// One 8-bit channel, row-major, M rows by N columns.
struct Band {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<std::uint8_t> pixels;

    Band() = default;
    Band(std::size_t h, std::size_t w, std::uint8_t fill = 0) : height(h), width(w), pixels(h * w, fill) {}
    Band(std::size_t h, std::size_t w, std::vector<std::uint8_t> values);

    std::size_t size() const noexcept { return pixels.size(); }
    std::uint8_t at(std::size_t y, std::size_t x) const noexcept { return pixels[y * width + x]; }
    std::uint8_t& at(std::size_t y, std::size_t x) noexcept { return pixels[y * width + x]; }

    bool operator==(const Band&) const = default;
};

/// Real-valued per-pixel measurements prior to quantization.
struct ScalarMap {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<double> values;

    ScalarMap() = default;
    ScalarMap(std::size_t h, std::size_t w, std::vector<double> v);

    std::size_t size() const noexcept { return values.size(); }
    double at(std::size_t y, std::size_t x) const noexcept { return values[y * width + x]; }
};

/// M x N x B image with band-interleaved storage: data[(y * N + x) * B + b].
class ImageTensor {
public:
    ImageTensor() = default;
    ImageTensor(std::size_t height, std::size_t width, std::size_t bands);
    ImageTensor(std::size_t height, std::size_t width, std::size_t bands, std::vector<std::uint8_t> data);

    static ImageTensor from_bands(std::span<const Band> bands);

    std::size_t height() const noexcept { return height_; }
    std::size_t width() const noexcept { return width_; }
    std::size_t bands() const noexcept { return bands_; }
    std::span<const std::uint8_t> data() const noexcept { return data_; }
    std::span<std::uint8_t> data() noexcept { return data_; }

    std::uint8_t at(std::size_t y, std::size_t x, std::size_t b) const noexcept {
        return data_[(y * width_ + x) * bands_ + b];
    }
    std::uint8_t& at(std::size_t y, std::size_t x, std::size_t b) noexcept {
        return data_[(y * width_ + x) * bands_ + b];
    }

    Band band(std::size_t b) const;

    bool operator==(const ImageTensor&) const = default;

private:
    std::size_t height_ = 0;
    std::size_t width_ = 0;
    std::size_t bands_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Reads an 8-bit PNG (grayscale or RGB) or a TXR1 raw file. The codec is
/// chosen from the file signature, not the extension.
ImageTensor load_image(const std::filesystem::path& path);

void save_png(const std::filesystem::path& path, const ImageTensor& img);
void save_raw(const std::filesystem::path& path, const ImageTensor& img);

/// Per-band bilinear resampling with half-pixel-centred source coordinates,
/// clamped at the borders and rounded half-up.
ImageTensor resize_bilinear(const ImageTensor& img, std::size_t target_height, std::size_t target_width);

/// Min-max scaling onto 0..255 with round-half-up; constant maps give zeros.
Band quantize_map(const ScalarMap& map);

}  // namespace cntex
