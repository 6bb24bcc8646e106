#include <doctest.h>

#include <bit>
#include <cstdlib>

#include "oracles.hpp"
#include "spadwm/feature_extract.hpp"

using namespace spadwm;

namespace {

std::vector<int> planes_at(const FeatureStack& s, std::size_t r = 0, std::size_t c = 0) {
    std::vector<int> out;
    for (const auto& p : s.planes) out.push_back(p(r, c));
    return out;
}

std::vector<int> planes_for(int intensity, FeatureConfig cfg) {
    return planes_at(feature_images(GrayImage(1, 1, static_cast<std::uint8_t>(intensity)), cfg));
}

std::vector<int> one_hot(int band) {
    std::vector<int> v(8, 0);
    v[band - 1] = 1;
    return v;
}

FeatureConfig raw_single() {
    FeatureConfig cfg;
    cfg.lsb_mask = false;
    return cfg;
}

FeatureConfig dual(int w, bool mask = false) {
    FeatureConfig cfg;
    cfg.mode = ThresholdMode::dual;
    cfg.overlap = w;
    cfg.lsb_mask = mask;
    return cfg;
}

int changed_planes(const std::vector<int>& a, const std::vector<int>& b) {
    int n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) n += a[i] != b[i];
    return n;
}

}  // namespace

TEST_CASE("literal sign recurrence matches the band oracle for every intensity") {
    for (int i = 0; i < 256; ++i) {
        const auto literal = oracle::literal_feature_bits(i);
        REQUIRE(literal == one_hot(oracle::band_index(i)));
        REQUIRE(planes_for(i, raw_single()) == literal);
    }
}

TEST_CASE("single threshold band examples") {
    CHECK(planes_for(0, raw_single()) == one_hot(1));
    CHECK(planes_for(32, raw_single()) == one_hot(1));
    CHECK(planes_for(33, raw_single()) == one_hot(2));
    CHECK(planes_for(255, raw_single()) == one_hot(8));
}

TEST_CASE("LSB masking quantizes the even neighbor") {
    FeatureConfig cfg;  // mask on
    CHECK(planes_for(33, cfg) == one_hot(1));
    for (int i = 0; i < 256; ++i) REQUIRE(planes_for(i, cfg) == one_hot(oracle::band_index(i & 0xFE)));
}

TEST_CASE("dual threshold sets both neighbors inside the overlap") {
    auto expect = std::vector<int>{1, 1, 0, 0, 0, 0, 0, 0};
    CHECK(planes_for(30, dual(6)) == expect);
    CHECK(planes_for(35, dual(6)) == expect);
    CHECK(planes_for(36, dual(6)) == one_hot(2));
    CHECK(planes_for(28, dual(6)) == one_hot(1));
    CHECK(planes_for(26, dual(12)) == expect);
}

TEST_CASE("dual threshold with zero overlap equals single threshold") {
    const auto img = oracle::random_image(32, 16, 3);
    FeatureConfig single;
    const auto a = feature_images(img, single);
    const auto b = feature_images(img, dual(0, true));
    CHECK(a.planes == b.planes);
}

TEST_CASE("per-pixel popcount is 1 for single and 1 or 2 for dual") {
    const auto img = oracle::random_image(64, 64, 11);
    const auto s = feature_images(img, FeatureConfig{});
    const auto d = feature_images(img, dual(12, true));
    for (std::size_t r = 0; r < 64; ++r) {
        for (std::size_t c = 0; c < 64; ++c) {
            int ps = 0, pd = 0;
            for (int i = 0; i < 8; ++i) {
                ps += s.planes[i](r, c);
                pd += d.planes[i](r, c);
            }
            REQUIRE(ps == 1);
            REQUIRE((pd == 1 || pd == 2));
        }
    }
}

TEST_CASE("a sub-band change touches at most two planes") {
    for (int w : {0, 6, 12}) {
        const auto cfg = dual(w);
        for (int x = 0; x < 256; ++x) {
            for (int y = std::max(0, x - (32 - w) + 1); y < std::min(256, x + 32 - w); ++y) {
                REQUIRE(changed_planes(planes_for(x, cfg), planes_for(y, cfg)) <= 2);
            }
        }
    }
}

TEST_CASE("a change no larger than the overlap touches at most one plane") {
    for (int w : {6, 12}) {
        const auto cfg = dual(w);
        for (int x = 0; x < 256; ++x) {
            for (int y = std::max(0, x - w); y <= std::min(255, x + w); ++y) {
                REQUIRE(changed_planes(planes_for(x, cfg), planes_for(y, cfg)) <= 1);
            }
        }
    }
}

TEST_CASE("features ignore the LSB plane when masking") {
    const auto img = oracle::random_image(40, 24, 5);
    GrayImage flipped = img;
    const auto noise = oracle::random_bits(img.pixel_count(), 6);
    for (std::size_t i = 0; i < noise.size(); ++i) flipped.data()[i] = static_cast<std::uint8_t>((img.data()[i] & 0xFE) | noise[i]);
    for (const auto& cfg : {FeatureConfig{}, dual(6, true)}) {
        CHECK(feature_images(img, cfg).planes == feature_images(flipped, cfg).planes);
    }
}

TEST_CASE("invalid feature configurations are rejected") {
    const GrayImage img(4, 4);
    FeatureConfig cfg;
    cfg.levels = 3;
    CHECK_THROWS_AS(feature_images(img, cfg), ParameterError);
    cfg.levels = 6;  // 256 is not a multiple of 6
    CHECK_THROWS_AS(feature_images(img, cfg), ParameterError);
    cfg = dual(32);
    CHECK_THROWS_AS(feature_images(img, cfg), ParameterError);
    cfg = dual(-2);
    CHECK_THROWS_AS(feature_images(img, cfg), ParameterError);
}

TEST_CASE("downsample takes truncated block means") {
    CHECK(downsample(GrayImage(16, 8, 77), 4) == GrayImage(4, 4, 77));

    GrayImage tile(2, 2, 0);
    tile(1, 1) = 4;
    CHECK(downsample(tile, 1)(0, 0) == 1);

    GrayImage odd(2, 2, 0);
    odd(0, 0) = 3;
    CHECK(downsample(odd, 1)(0, 0) == 0);

    const auto img = oracle::random_image(8, 8, 1);
    CHECK(downsample(img, 8) == img);
    CHECK_THROWS_AS(downsample(GrayImage(10, 8), 4), ShapeError);
    CHECK_THROWS_AS(downsample(GrayImage(8, 8), 0), ShapeError);
}

TEST_CASE("challenge addresses are the plane nibbles") {
    const auto addr_of = [](int intensity, FeatureConfig cfg) {
        return challenge_matrix(feature_images(GrayImage(1, 1, static_cast<std::uint8_t>(intensity)), cfg)).addrs(0, 0);
    };
    CHECK(addr_of(10, FeatureConfig{}) == Address{8, 0});
    CHECK(addr_of(250, FeatureConfig{}) == Address{0, 1});
    CHECK(addr_of(140, FeatureConfig{}) == Address{0, 8});
    CHECK(addr_of(128, dual(6, true)) == Address{1, 8});
}

TEST_CASE("challenge addresses stay inside the 16x16 window") {
    const auto img = oracle::random_image(64, 64, 8);
    const auto ch = challenge_matrix(feature_images(img, dual(12, true)));
    for (const auto a : ch.addrs.data()) {
        REQUIRE(a.row < 16);
        REQUIRE(a.col < 16);
        REQUIRE(std::popcount(static_cast<unsigned>(a.row << 4 | a.col)) <= 2);
    }
}

TEST_CASE("challenge_matrix requires eight feature images") {
    FeatureConfig cfg;
    cfg.levels = 4;
    CHECK_THROWS_AS(challenge_matrix(feature_images(GrayImage(2, 2), cfg)), UnsupportedConfigError);
}

TEST_CASE("challenge_from_image masks before downsampling") {
    auto img = oracle::random_image(128, 128, 21);
    auto other = img;
    const auto bits = oracle::random_bits(img.pixel_count(), 22);
    for (std::size_t i = 0; i < bits.size(); ++i) other.data()[i] = static_cast<std::uint8_t>((img.data()[i] & 0xFE) | bits[i]);
    CHECK(challenge_from_image(img, 64, FeatureConfig{}) == challenge_from_image(other, 64, FeatureConfig{}));
    CHECK(challenge_from_image(img, 64, FeatureConfig{}).grid_dim() == 64);
}
