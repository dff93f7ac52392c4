#pragma once

#include "cntex/image.hpp"
#include "cntex/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>

namespace cntex {

/// Grayscale sinusoidal gratings: class c has orientation c * 180 / classes
/// degrees and period base_period + c * period_step pixels; each image gets
/// a random phase, contrast, small orientation jitter and Gaussian noise.
struct SyntheticCorpusOptions {
    std::size_t classes = 4;
    std::size_t per_class = 40;
    std::size_t size = 128;
    std::uint64_t seed = 42;
    double base_period = 6.0;
    double period_step = 4.0;
    double noise_sigma = 20.0;
    double jitter_degrees = 3.0;
};

ImageTensor synthetic_grating(std::size_t class_id, const SyntheticCorpusOptions& options, Xoshiro256& rng);

/// Writes class<c>/img<i>.png files and a manifest.csv under `dir`;
/// returns the manifest path.
std::filesystem::path write_synthetic_corpus(const std::filesystem::path& dir, const SyntheticCorpusOptions& options);

}  // namespace cntex
