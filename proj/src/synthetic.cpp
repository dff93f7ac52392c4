#include "cntex/synthetic.hpp"

#include "cntex/error.hpp"
#include "cntex/text_format.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace cntex {

ImageTensor synthetic_grating(std::size_t class_id, const SyntheticCorpusOptions& options, Xoshiro256& rng) {
    const double deg = 180.0 * static_cast<double>(class_id) / static_cast<double>(options.classes) +
                       options.jitter_degrees * (2.0 * rng.uniform() - 1.0);
    const double theta = deg * std::numbers::pi / 180.0;
    const double period = options.base_period + options.period_step * static_cast<double>(class_id);
    const double phase = 2.0 * std::numbers::pi * rng.uniform();
    const double amplitude = 60.0 + 40.0 * rng.uniform();
    const double kx = std::cos(theta) * 2.0 * std::numbers::pi / period;
    const double ky = std::sin(theta) * 2.0 * std::numbers::pi / period;

    ImageTensor img(options.size, options.size, 1);
    for (std::size_t y = 0; y < options.size; ++y) {
        for (std::size_t x = 0; x < options.size; ++x) {
            const double v = 128.0 + amplitude * std::sin(kx * static_cast<double>(x) + ky * static_cast<double>(y) + phase) +
                             options.noise_sigma * rng.normal();
            img.at(y, x, 0) = static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
        }
    }
    return img;
}

std::filesystem::path write_synthetic_corpus(const std::filesystem::path& dir, const SyntheticCorpusOptions& options) {
    if (options.classes < 2 || options.per_class < 2 || options.size < 3)
        throw Error(ErrorCode::InvalidArgument, "synthetic corpus needs >= 2 classes, >= 2 images per class, size >= 3");
    std::filesystem::create_directories(dir);
    Xoshiro256 rng(options.seed);
    std::string manifest = "# synthetic gratings, seed " + std::to_string(options.seed) + "\n";
    for (std::size_t c = 0; c < options.classes; ++c) {
        const auto class_dir = "class" + std::to_string(c);
        std::filesystem::create_directories(dir / class_dir);
        for (std::size_t i = 0; i < options.per_class; ++i) {
            const auto rel = class_dir + "/img" + std::to_string(i) + ".png";
            save_png(dir / rel, synthetic_grating(c, options, rng));
            manifest += rel + "," + std::to_string(c) + "\n";
        }
    }
    const auto path = dir / "manifest.csv";
    write_text_file(path.string(), manifest);
    return path;
}

}  // namespace cntex
