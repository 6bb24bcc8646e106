#include "spadwm/feature_extract.hpp"

#include <cstdlib>

namespace spadwm {

void FeatureConfig::validate() const {
    if (levels < 2 || levels % 2 != 0) throw ParameterError("feature image count must be even and >= 2");
    if (kIntensityRange % levels != 0) throw ParameterError("feature image count must divide 256");
    if (overlap < 0) throw ParameterError("overlap must be >= 0");
    if (overlap >= band_width()) throw ParameterError("overlap must be smaller than the band width");
}

GrayImage mask_lsb(const GrayImage& img) {
    GrayImage out = img;
    for (auto& p : out.data()) p = static_cast<std::uint8_t>(p & 0xFEu);
    return out;
}

FeatureStack feature_images(const GrayImage& img, const FeatureConfig& cfg) {
    cfg.validate();
    const int L = cfg.levels;
    const int step = cfg.band_width();
    FeatureStack stack{std::vector<BitMatrix>(L, BitMatrix(img.height(), img.width(), 0)), cfg};

    for (std::size_t r = 0; r < img.height(); ++r) {
        for (std::size_t c = 0; c < img.width(); ++c) {
            const int value = cfg.lsb_mask ? (img(r, c) & 0xFE) : img(r, c);
            // First threshold at or above the value wins; later planes see a
            // nonzero accumulator and stay clear.
            for (int i = 1; i <= L; ++i) {
                if (value <= i * step || i == L) {
                    stack.planes[i - 1](r, c) = 1;
                    break;
                }
            }
            // A zero overlap is an empty band, not the thresholds themselves.
            if (cfg.mode == ThresholdMode::dual && cfg.overlap > 0) {
                for (int i = 1; i < L; ++i) {
                    if (2 * std::abs(value - i * step) <= cfg.overlap) {
                        stack.planes[i - 1](r, c) = 1;
                        stack.planes[i](r, c) = 1;
                    }
                }
            }
        }
    }
    return stack;
}

GrayImage downsample(const GrayImage& img, std::size_t grid_dim) {
    if (grid_dim == 0 || img.width() % grid_dim != 0 || img.height() % grid_dim != 0) {
        throw ShapeError("image dimensions must be divisible by the grid size " + std::to_string(grid_dim));
    }
    const std::size_t bh = img.height() / grid_dim;
    const std::size_t bw = img.width() / grid_dim;
    const std::uint64_t area = bh * bw;
    GrayImage out(grid_dim, grid_dim);
    for (std::size_t gr = 0; gr < grid_dim; ++gr) {
        for (std::size_t gc = 0; gc < grid_dim; ++gc) {
            std::uint64_t sum = 0;
            for (std::size_t r = gr * bh; r < (gr + 1) * bh; ++r)
                for (std::size_t c = gc * bw; c < (gc + 1) * bw; ++c) sum += img(r, c);
            out(gr, gc) = static_cast<std::uint8_t>(sum / area);
        }
    }
    return out;
}

ChallengeMatrix challenge_matrix(const FeatureStack& stack) {
    if (stack.config.levels != kAddressLevels || stack.planes.size() != kAddressLevels) {
        throw UnsupportedConfigError("challenge addresses are defined only for 8 feature images");
    }
    const auto& first = stack.planes.front();
    ChallengeMatrix ch{Matrix<Address>(first.rows(), first.cols())};
    for (std::size_t r = 0; r < first.rows(); ++r) {
        for (std::size_t c = 0; c < first.cols(); ++c) {
            unsigned row = 0;
            unsigned col = 0;
            for (int b = 0; b < 4; ++b) {
                row = (row << 1) | stack.planes[b](r, c);
                col = (col << 1) | stack.planes[4 + b](r, c);
            }
            ch.addrs(r, c) = Address{static_cast<std::uint8_t>(row), static_cast<std::uint8_t>(col)};
        }
    }
    return ch;
}

ChallengeMatrix challenge_from_image(const GrayImage& img, std::size_t grid_dim, const FeatureConfig& cfg) {
    const GrayImage source = cfg.lsb_mask ? mask_lsb(img) : img;
    return challenge_matrix(feature_images(downsample(source, grid_dim), cfg));
}

}  // namespace spadwm
