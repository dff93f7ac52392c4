#include "cntex/error.hpp"
#include "cntex/image.hpp"
#include "cntex/rng.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace cntex;

namespace {

std::filesystem::path temp_dir() {
    auto dir = std::filesystem::temp_directory_path() / "cntex_test_image";
    std::filesystem::create_directories(dir);
    return dir;
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("png round trip keeps dimensions and band count") {
    Xoshiro256 rng(7);
    for (std::size_t bands : {1u, 3u}) {
        ImageTensor img(bands == 3 ? 200 : 128, bands == 3 ? 200 : 128, bands);
        for (std::size_t y = 0; y < img.height(); ++y)
            for (std::size_t x = 0; x < img.width(); ++x)
                for (std::size_t b = 0; b < bands; ++b) img.at(y, x, b) = static_cast<std::uint8_t>(rng.below(256));
        const auto path = temp_dir() / ("rt" + std::to_string(bands) + ".png");
        save_png(path, img);
        const auto back = load_image(path);
        CHECK(back.height() == img.height());
        CHECK(back.width() == img.width());
        CHECK(back.bands() == bands);
        CHECK(back == img);
    }
}

TEST_CASE("raw TXR1 files load with header dimensions") {
    ImageTensor img(5, 7, 2);
    for (std::size_t i = 0; i < 5; ++i) img.at(i, i, 1) = static_cast<std::uint8_t>(40 * i);
    const auto path = temp_dir() / "img.txr";
    save_raw(path, img);
    CHECK(std::filesystem::file_size(path) == 16 + 5 * 7 * 2);
    const auto back = load_image(path);
    CHECK(back == img);
}

TEST_CASE("truncated and unknown files are rejected") {
    ImageTensor img(64, 64, 3);
    const auto good = temp_dir() / "full.png";
    save_png(good, img);
    const auto size = std::filesystem::file_size(good);

    const auto cut = temp_dir() / "cut.png";
    std::filesystem::copy_file(good, cut, std::filesystem::copy_options::overwrite_existing);
    std::filesystem::resize_file(cut, size / 2);
    CHECK(code_of([&] { load_image(cut); }) == ErrorCode::UnreadableFile);

    const auto raw = temp_dir() / "cut.txr";
    save_raw(raw, img);
    std::filesystem::resize_file(raw, 100);
    CHECK(code_of([&] { load_image(raw); }) == ErrorCode::UnreadableFile);

    const auto junk = temp_dir() / "junk.bin";
    std::ofstream(junk) << "GIF89a-not-supported-here";
    CHECK(code_of([&] { load_image(junk); }) == ErrorCode::UnsupportedFormat);

    CHECK(code_of([&] { load_image(temp_dir() / "missing.png"); }) == ErrorCode::UnreadableFile);
}

TEST_CASE("resize of a constant image is constant") {
    ImageTensor img(480, 640, 1, std::vector<std::uint8_t>(480 * 640, 173));
    const auto out = resize_bilinear(img, 128, 128);
    CHECK(out.height() == 128);
    CHECK(out.width() == 128);
    for (auto v : out.data()) REQUIRE(v == 173);
}

TEST_CASE("resize to the same size is byte-identical") {
    Xoshiro256 rng(3);
    ImageTensor img(128, 128, 3);
    for (std::size_t y = 0; y < 128; ++y)
        for (std::size_t x = 0; x < 128; ++x)
            for (std::size_t b = 0; b < 3; ++b) img.at(y, x, b) = static_cast<std::uint8_t>(rng.below(256));
    CHECK(resize_bilinear(img, 128, 128) == img);
}

TEST_CASE("2x2 checkerboard upsampled to 4x4") {
    ImageTensor img(2, 2, 1, {0, 255, 255, 0});
    const auto out = resize_bilinear(img, 4, 4);
    // half-pixel centres: output coordinate 0 -> -0.25 (clamped), 1 -> 0.25,
    // 2 -> 0.75, 3 -> 1.25 (clamped)
    CHECK(out.at(0, 0, 0) == 0);
    CHECK(out.at(0, 3, 0) == 255);
    CHECK(out.at(3, 0, 0) == 255);
    CHECK(out.at(3, 3, 0) == 0);
    // (0.25, 0.25): 255 * (0.75 * 0.25 + 0.25 * 0.75) = 95.625 -> 96
    CHECK(out.at(1, 1, 0) == 96);
    // (0.75, 0.25): 255 * (0.25 * 0.25 + 0.75 * 0.75) = 159.375 -> 159
    CHECK(out.at(1, 2, 0) == 159);
    for (std::size_t y = 1; y < 3; ++y)
        for (std::size_t x = 1; x < 3; ++x) {
            CHECK(out.at(y, x, 0) > 0);
            CHECK(out.at(y, x, 0) < 255);
        }
}

TEST_CASE("resize rejects degenerate targets") {
    ImageTensor img(4, 4, 1);
    CHECK(code_of([&] { resize_bilinear(img, 1, 8); }) == ErrorCode::DegenerateTarget);
    CHECK(code_of([&] { resize_bilinear(img, 8, 0); }) == ErrorCode::DegenerateTarget);
}

TEST_CASE("quantize_map examples") {
    CHECK(quantize_map(ScalarMap(1, 3, {0.0, 0.5, 1.0})).pixels == std::vector<std::uint8_t>{0, 128, 255});
    CHECK(quantize_map(ScalarMap(1, 2, {-1.0, 1.0})).pixels == std::vector<std::uint8_t>{0, 255});
    const auto flat = quantize_map(ScalarMap(2, 2, {0.37, 0.37, 0.37, 0.37}));
    CHECK(flat.pixels == std::vector<std::uint8_t>(4, 0));
    CHECK(code_of([] { quantize_map(ScalarMap(1, 2, {0.0, std::nan("")})); }) == ErrorCode::NonFiniteValue);
    CHECK(code_of([] { quantize_map(ScalarMap(1, 2, {0.0, HUGE_VAL})); }) == ErrorCode::NonFiniteValue);
}

TEST_CASE("quantize_map is invariant under positive affine maps and spans 0..255") {
    Xoshiro256 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> v(30);
        for (auto& x : v) x = rng.uniform() * 10.0 - 5.0;
        const double a = 0.1 + rng.uniform() * 4.0;
        const double b = rng.uniform() * 100.0 - 50.0;
        std::vector<double> w(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) w[i] = a * v[i] + b;
        const auto q = quantize_map(ScalarMap(5, 6, v));
        const auto qa = quantize_map(ScalarMap(5, 6, w));
        // affine images can disagree by one level at exact rounding boundaries
        for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(int(q.pixels[i]) - int(qa.pixels[i])) <= 1);
        CHECK(*std::min_element(q.pixels.begin(), q.pixels.end()) == 0);
        CHECK(*std::max_element(q.pixels.begin(), q.pixels.end()) == 255);
    }
}

TEST_CASE("quantize_map exact invariance under power-of-two scaling") {
    Xoshiro256 rng(12);
    std::vector<double> v(40), w(40);
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = rng.uniform();
        w[i] = 8.0 * v[i];
    }
    CHECK(quantize_map(ScalarMap(4, 10, v)) == quantize_map(ScalarMap(4, 10, w)));
}
