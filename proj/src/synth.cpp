#include "spadwm/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace spadwm {

namespace {

struct Disc {
    double cx, cy, radius, level;
};

}  // namespace

GrayImage synthetic_scene(std::size_t width, std::size_t height, std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x7363656eu};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const double w = static_cast<double>(width);
    const double h = static_cast<double>(height);
    const double angle = 2.0 * std::numbers::pi * unit(rng);
    const double gx = std::cos(angle), gy = std::sin(angle);
    const double base = 40.0 + 60.0 * unit(rng);
    const double span = 80.0 + 60.0 * unit(rng);
    const double fx = 2.0 + 6.0 * unit(rng), fy = 2.0 + 6.0 * unit(rng);
    const double texture = 10.0 + 15.0 * unit(rng);

    std::vector<Disc> discs(5);
    for (auto& d : discs) {
        d = Disc{w * unit(rng), h * unit(rng), std::min(w, h) * (0.06 + 0.18 * unit(rng)), 255.0 * unit(rng)};
    }

    std::normal_distribution<double> grain(0.0, 3.0);
    GrayImage img(width, height);
    for (std::size_t r = 0; r < height; ++r) {
        for (std::size_t c = 0; c < width; ++c) {
            const double x = static_cast<double>(c) / w;
            const double y = static_cast<double>(r) / h;
            double v = base + span * (0.5 + 0.5 * ((x - 0.5) * gx + (y - 0.5) * gy));
            v += texture * std::sin(2.0 * std::numbers::pi * fx * x) * std::cos(2.0 * std::numbers::pi * fy * y);
            for (const auto& d : discs) {
                const double dist = std::hypot(static_cast<double>(c) - d.cx, static_cast<double>(r) - d.cy);
                const double edge = std::clamp((d.radius - dist) / 4.0, 0.0, 1.0);
                v = v * (1.0 - edge) + d.level * edge;
            }
            v += grain(rng);
            img(r, c) = static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
        }
    }
    return img;
}

}  // namespace spadwm
