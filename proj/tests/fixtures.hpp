#pragma once

#include <string>
#include <vector>

#include "spadwm/imager_sim.hpp"
#include "spadwm/puf_core.hpp"
#include "spadwm/synth.hpp"

namespace fixture {

/// Golden enrollments of `count` chips seeded 1..count, ids chip1..chipN.
inline const std::vector<spadwm::EnrollmentRecord>& enrolled_chips(std::size_t count = 3) {
    static std::vector<spadwm::EnrollmentRecord> cache;
    while (cache.size() < count) {
        const auto seed = cache.size() + 1;
        cache.push_back(spadwm::enroll(spadwm::new_chip("chip" + std::to_string(seed), seed),
                                       spadwm::AcquisitionConfig::golden(25.0, 1000 + seed)));
    }
    return cache;
}

inline const spadwm::GrayImage& scene(std::size_t index) {
    static std::vector<spadwm::GrayImage> cache;
    while (cache.size() <= index) cache.push_back(spadwm::synthetic_scene(512, 512, 7 + cache.size()));
    return cache[index];
}

/// Replaces every pixel of the grid cells in [row0, row0+n) x [col0, col0+n)
/// (8x8-pixel cells of a 512x512 image) with a constant from a distant band.
/// Returns the edited image; all covered cells change band.
inline spadwm::GrayImage band_shift_patch(const spadwm::GrayImage& img, std::size_t row0, std::size_t col0,
                                          std::size_t n, std::size_t cell = 8) {
    spadwm::GrayImage out = img;
    for (std::size_t gr = row0; gr < row0 + n; ++gr) {
        for (std::size_t gc = col0; gc < col0 + n; ++gc) {
            unsigned sum = 0;
            for (std::size_t r = gr * cell; r < (gr + 1) * cell; ++r)
                for (std::size_t c = gc * cell; c < (gc + 1) * cell; ++c) sum += img(r, c) & 0xFEu;
            const unsigned mean = sum / static_cast<unsigned>(cell * cell);
            const std::uint8_t fill = mean <= 128 ? 220 : 20;
            for (std::size_t r = gr * cell; r < (gr + 1) * cell; ++r)
                for (std::size_t c = gc * cell; c < (gc + 1) * cell; ++c) out(r, c) = fill;
        }
    }
    return out;
}

}  // namespace fixture
