#pragma once

#include <cstdint>

#include "spadwm/matrix.hpp"

namespace spadwm {

/// 8-bit grayscale image; rows = height, cols = width.
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(std::size_t width, std::size_t height, std::uint8_t fill = 0)
        : pixels_(height, width, fill) {
        if (width == 0 || height == 0) throw ShapeError("image must have at least one pixel");
    }
    explicit GrayImage(Matrix<std::uint8_t> pixels) : pixels_(std::move(pixels)) {
        if (pixels_.empty()) throw ShapeError("image must have at least one pixel");
    }

    std::size_t width() const noexcept { return pixels_.cols(); }
    std::size_t height() const noexcept { return pixels_.rows(); }
    std::size_t pixel_count() const noexcept { return pixels_.size(); }

    std::uint8_t& operator()(std::size_t row, std::size_t col) noexcept { return pixels_(row, col); }
    std::uint8_t operator()(std::size_t row, std::size_t col) const noexcept { return pixels_(row, col); }

    std::span<std::uint8_t> data() noexcept { return pixels_.data(); }
    std::span<const std::uint8_t> data() const noexcept { return pixels_.data(); }

    const Matrix<std::uint8_t>& pixels() const noexcept { return pixels_; }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    Matrix<std::uint8_t> pixels_;
};

}  // namespace spadwm
