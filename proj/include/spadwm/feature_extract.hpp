#pragma once

// Intensity-band feature images and the PUF challenge matrix built from them.

#include <cstdint>
#include <vector>

#include "spadwm/image.hpp"
#include "spadwm/matrix.hpp"

namespace spadwm {

inline constexpr int kIntensityRange = 256;
/// Feature-image count for which challenge addresses are defined.
inline constexpr int kAddressLevels = 8;

enum class ThresholdMode { single, dual };

struct FeatureConfig {
    int levels = 8;  // number of feature images
    ThresholdMode mode = ThresholdMode::single;
    int overlap = 0;  // total width of each desensitized band, intensity units
    bool lsb_mask = true;

    int band_width() const noexcept { return kIntensityRange / levels; }
    void validate() const;

    friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

struct FeatureStack {
    std::vector<BitMatrix> planes;  // planes[i] is feature image i + 1
    FeatureConfig config;
};

/// One PUF pixel address.
struct Address {
    std::uint8_t row = 0;
    std::uint8_t col = 0;

    friend bool operator==(const Address&, const Address&) = default;
};

struct ChallengeMatrix {
    Matrix<Address> addrs;

    std::size_t grid_dim() const noexcept { return addrs.rows(); }
    friend bool operator==(const ChallengeMatrix&, const ChallengeMatrix&) = default;
};

/// Clears bit 0 of every pixel.
GrayImage mask_lsb(const GrayImage& img);

/// One binary plane per intensity band. Band i covers ((i-1)*M/L, i*M/L],
/// band 1 also takes 0. In dual mode pixels within overlap/2 of an internal
/// threshold set both neighboring planes.
FeatureStack feature_images(const GrayImage& img, const FeatureConfig& cfg);

/// Block mean over (height/D) x (width/D) tiles, truncated.
GrayImage downsample(const GrayImage& img, std::size_t grid_dim);

/// Row nibble from planes 1..4, column nibble from planes 5..8, MSB first.
ChallengeMatrix challenge_matrix(const FeatureStack& stack);

/// Full challenge path for a host image: LSB mask (if configured), block-mean
/// downsample to grid_dim, feature images, challenge matrix.
ChallengeMatrix challenge_from_image(const GrayImage& img, std::size_t grid_dim, const FeatureConfig& cfg);

}  // namespace spadwm
