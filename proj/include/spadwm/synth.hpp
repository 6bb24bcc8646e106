#pragma once

#include <cstdint>

#include "spadwm/image.hpp"

namespace spadwm {

/// Deterministic scene-like grayscale test image: a smooth illumination
/// gradient, a few soft-edged discs and mild texture. Different seeds give
/// visibly different scenes that span the full intensity range.
GrayImage synthetic_scene(std::size_t width, std::size_t height, std::uint64_t seed);

}  // namespace spadwm
